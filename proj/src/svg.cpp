#include "wvgeom/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "wvgeom/errors.hpp"

namespace wvgeom::svg {

namespace {

constexpr double kCentre = 500.0;
constexpr double kRadius = 400.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

struct Projector {
  Eigen::Vector3d toward;
  Eigen::Vector3d up;
  Eigen::Vector3d right;

  explicit Projector(const Eigen::Vector3d& axis) {
    if (!(axis.norm() > 0.0)) throw Error(ErrorCode::kInvalidArgument, "view axis must be nonzero");
    toward = axis.normalized();
    up = Eigen::Vector3d::UnitZ() - toward.z() * toward;
    if (up.norm() < 1e-9) up = Eigen::Vector3d::UnitY() - toward.y() * toward;
    up.normalize();
    right = up.cross(toward);
  }

  std::pair<double, double> screen(const Eigen::Vector3d& p) const {
    return {kCentre + kRadius * p.dot(right), kCentre - kRadius * p.dot(up)};
  }
  bool visible(const Eigen::Vector3d& p) const { return p.dot(toward) >= 0.0; }
};

void polyline(std::ostringstream& out, const std::vector<std::pair<double, double>>& pts,
              bool hidden) {
  if (pts.size() < 2) return;
  out << "<polyline fill=\"none\" stroke=\"#1f4e99\" stroke-width=\"2\"";
  if (hidden) out << " stroke-dasharray=\"8 6\" stroke-opacity=\"0.6\"";
  out << " points=\"";
  for (size_t k = 0; k < pts.size(); ++k) {
    out << (k ? " " : "") << num(pts[k].first) << ',' << num(pts[k].second);
  }
  out << "\"/>\n";
}

// Blue-white-red ramp on t in [0, 1].
std::string colour(double t) {
  t = std::clamp(t, 0.0, 1.0);
  double r, g, b;
  if (t < 0.5) {
    const double s = t / 0.5;
    r = 0.23 + 0.77 * s, g = 0.30 + 0.70 * s, b = 0.75 + 0.25 * s;
  } else {
    const double s = (t - 0.5) / 0.5;
    r = 1.0 - 0.29 * s, g = 1.0 - 0.98 * s, b = 1.0 - 0.85 * s;
  }
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(std::lround(r * 255)),
                static_cast<int>(std::lround(g * 255)), static_cast<int>(std::lround(b * 255)));
  return buf;
}

}  // namespace

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string render_scene(const blochgeo::SceneGraph& scene, const Eigen::Vector3d& view_axis) {
  const Projector proj(view_axis);
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1000 1000\" width=\"1000\" "
         "height=\"1000\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"1000\" height=\"1000\" fill=\"white\"/>\n"
      << "<circle cx=\"500\" cy=\"500\" r=\"400\" fill=\"none\" stroke=\"black\" "
         "stroke-width=\"1.5\"/>\n";

  for (const auto& arc : scene.arcs) {
    // Split each arc into runs on the near and far hemisphere.
    std::vector<std::pair<double, double>> run;
    bool run_visible = arc.samples.empty() || proj.visible(arc.samples.front());
    for (const auto& p : arc.samples) {
      const bool vis = proj.visible(p);
      if (vis != run_visible) {
        run.push_back(proj.screen(p));
        polyline(out, run, !run_visible);
        run.clear();
        run_visible = vis;
      }
      run.push_back(proj.screen(p));
    }
    polyline(out, run, !run_visible);
  }

  for (const auto& tri : scene.triangles) {
    Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
    for (const auto& v : tri.verts) centroid += scene.find(v)->xyz;
    centroid /= 3.0;
    const auto [x, y] = proj.screen(centroid);
    const std::string omega = std::isfinite(tri.omega) ? num(tri.omega) : "undefined";
    out << "<text x=\"" << num(x) << "\" y=\"" << num(y)
        << "\" font-size=\"18\" fill=\"#7a1f1f\" text-anchor=\"middle\">"
        << xml_escape("Ω(" + tri.verts[0] + "," + tri.verts[1] + "," + tri.verts[2] +
                      ") = " + omega)
        << "</text>\n";
  }

  for (const auto& p : scene.points) {
    const auto [x, y] = proj.screen(p.xyz);
    const bool vis = proj.visible(p.xyz);
    out << "<circle cx=\"" << num(x) << "\" cy=\"" << num(y) << "\" r=\"7\" fill=\""
        << (vis ? "black" : "white") << "\" stroke=\"black\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << num(x + 10) << "\" y=\"" << num(y - 10)
        << "\" font-size=\"22\">" << xml_escape(p.label) << "</text>\n";
  }

  out << "<text x=\"500\" y=\"970\" font-size=\"20\" text-anchor=\"middle\">"
      << xml_escape(scene.caption) << "</text>\n"
      << "</svg>\n";
  return out.str();
}

std::string render_heatmap(const std::vector<double>& x_grid, const std::vector<double>& y_grid,
                           const std::vector<std::vector<double>>& values,
                           const std::vector<Curve>& curves, const std::string& title) {
  if (x_grid.empty() || y_grid.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "heatmap needs nonempty grids");
  }
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& row : values) {
    for (double v : row) {
      if (std::isfinite(v)) lo = std::min(lo, v), hi = std::max(hi, v);
    }
  }
  if (!(hi > lo)) hi = lo + 1.0;

  constexpr double left = 100, top = 80, width = 850, height = 800;
  const double x0 = x_grid.front(), x1 = x_grid.size() > 1 ? x_grid.back() : x0 + 1.0;
  const double y0 = y_grid.front(), y1 = y_grid.size() > 1 ? y_grid.back() : y0 + 1.0;
  auto sx = [&](double x) { return left + width * (x - x0) / (x1 - x0); };
  auto sy = [&](double y) { return top + height * (1.0 - (y - y0) / (y1 - y0)); };
  const double cw = width / static_cast<double>(x_grid.size());
  const double ch = height / static_cast<double>(y_grid.size());

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1000 1000\" width=\"1000\" "
         "height=\"1000\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"1000\" height=\"1000\" fill=\"white\"/>\n"
      << "<text x=\"500\" y=\"45\" font-size=\"24\" text-anchor=\"middle\">" << xml_escape(title)
      << "</text>\n<g shape-rendering=\"crispEdges\">\n";
  for (size_t r = 0; r < y_grid.size(); ++r) {
    for (size_t c = 0; c < x_grid.size(); ++c) {
      const double v = values[r][c];
      if (!std::isfinite(v)) continue;
      out << "<rect x=\"" << num(left + cw * c) << "\" y=\"" << num(top + height - ch * (r + 1))
          << "\" width=\"" << num(cw) << "\" height=\"" << num(ch) << "\" fill=\""
          << colour((v - lo) / (hi - lo)) << "\"/>\n";
    }
  }
  out << "</g>\n";

  const char* strokes[] = {"black", "#2ca02c", "#9467bd", "#ff7f0e"};
  for (size_t k = 0; k < curves.size(); ++k) {
    out << "<polyline fill=\"none\" stroke=\"" << strokes[k % 4]
        << "\" stroke-width=\"2\" points=\"";
    bool first = true;
    for (size_t i = 0; i < curves[k].x.size(); ++i) {
      if (!std::isfinite(curves[k].x[i]) || !std::isfinite(curves[k].y[i])) continue;
      out << (first ? "" : " ") << num(sx(curves[k].x[i])) << ',' << num(sy(curves[k].y[i]));
      first = false;
    }
    out << "\"/>\n<text x=\"" << num(left + 10) << "\" y=\"" << num(top + height + 40 + 25 * k)
        << "\" font-size=\"18\" fill=\"" << strokes[k % 4] << "\">" << xml_escape(curves[k].label)
        << "</text>\n";
  }
  out << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(width)
      << "\" height=\"" << num(height) << "\" fill=\"none\" stroke=\"black\"/>\n"
      << "<text x=\"" << num(left + width) << "\" y=\"" << num(top + height + 40)
      << "\" font-size=\"18\" text-anchor=\"end\">" << xml_escape("range " + num(lo) + " .. " + num(hi))
      << "</text>\n</svg>\n";
  return out.str();
}

}  // namespace wvgeom::svg
