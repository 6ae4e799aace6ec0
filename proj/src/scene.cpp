#include "wvgeom/scene.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "wvgeom/weakval.hpp"

namespace wvgeom::scene {

namespace {

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void add_arc(blochgeo::SceneGraph& g, const std::string& from, const std::string& to,
             int samples) {
  for (const auto& a : g.arcs) {
    if ((a.from == from && a.to == to) || (a.from == to && a.to == from)) return;
  }
  g.arcs.push_back({from, to, blochgeo::ArcKind::kGreatCircle,
                    blochgeo::great_circle_arc(g.find(from)->xyz, g.find(to)->xyz, samples)});
}

}  // namespace

blochgeo::SceneGraph build_scene(const majorana::ArgumentDecomposition& decomp, int arc_samples) {
  blochgeo::SceneGraph g;
  g.points.push_back({"i", decomp.mapping.phi_i.bloch().vec()});
  g.points.push_back({"i'", decomp.mapping.phi_iprime.bloch().vec()});
  std::vector<Eigen::Vector3d> vectors{g.points[0].xyz, g.points[1].xyz};
  for (size_t j = 0; j < decomp.post_stars.stars.size(); ++j) {
    const std::string label = "f" + std::to_string(j + 1);
    g.points.push_back({label, decomp.post_stars.stars[j].bloch().vec()});
    vectors.push_back(g.points.back().xyz);
  }

  for (size_t j = 0; j < decomp.post_stars.stars.size(); ++j) {
    const std::string f = "f" + std::to_string(j + 1);
    add_arc(g, "i", "i'", arc_samples);
    add_arc(g, "i'", f, arc_samples);
    add_arc(g, f, "i", arc_samples);
    const double omega = j < decomp.solid_angles.size() ? decomp.solid_angles[j]
                                                        : std::numeric_limits<double>::quiet_NaN();
    g.triangles.push_back({{"i", "i'", f}, omega});
  }

  const int n = static_cast<int>(decomp.post_stars.stars.size()) + 1;
  g.caption = "N=" + std::to_string(n) + ": " + std::to_string(g.triangles.size()) +
              " triangles; total arg " + fixed(decomp.total_arg) + ", direct arg " +
              fixed(decomp.direct_arg);
  if (blochgeo::coplanarity(vectors) < kNearCoplanar) g.caption += "; near-coplanar vectors";
  return g;
}

blochgeo::SceneGraph build_cp2_scene(const PureState& pre, const PureState& eff,
                                     const PureState& post, int arc_samples) {
  const std::array<std::string, 3> labels{"i", "i'", "f"};
  const std::array<const PureState*, 3> states{&pre, &eff, &post};

  blochgeo::SceneGraph g;
  for (int k = 0; k < 3; ++k) {
    g.points.push_back({labels[k], blochgeo::octant_projection(*states[k])});
  }
  for (int k = 0; k < 3; ++k) {
    const int next = (k + 1) % 3;
    blochgeo::SceneArc arc{labels[k], labels[next], blochgeo::ArcKind::kCp2GeodesicProjection, {}};
    for (const auto& s : blochgeo::fs_geodesic(*states[k], *states[next], arc_samples)) {
      arc.samples.push_back(blochgeo::octant_projection(s));
    }
    g.arcs.push_back(std::move(arc));
  }
  // Same vertex order and sign as the Bloch-sphere triangles (i, i', f).
  const double omega = -2.0 * arg(weakval::bargmann3(pre, post, eff).value);
  g.triangles.push_back({{"i", "i'", "f"}, omega});
  g.caption = "octant projection of the geodesic triangle; symplectic area " + fixed(omega);
  return g;
}

}  // namespace wvgeom::scene
