#include "wvgeom/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "wvgeom/io.hpp"
#include "wvgeom/scene.hpp"
#include "wvgeom/svg.hpp"

namespace wvgeom::experiments {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInvPhi = 0.61803398874989484820;  // 1/golden ratio

// The three post-state amplitudes, written out to keep the θ scans
// allocation-free.
std::array<Complex, 3> post_amps(double theta, double xi) {
  const double s = std::sin(theta) / std::sqrt(2.0);
  return {Complex(std::cos(theta), 0.0), std::polar(s, xi), Complex(s, 0.0)};
}

Complex bra_ket(const std::array<Complex, 3>& bra, const CVector& ket) {
  return std::conj(bra[0]) * ket(0) + std::conj(bra[1]) * ket(1) + std::conj(bra[2]) * ket(2);
}

double wrap_pi(double t) {
  double r = std::fmod(t, kPi);
  if (r < 0.0) r += kPi;
  return r >= kPi ? 0.0 : r;
}

// Golden-section search for the maximum of f on [lo, hi].
template <typename F>
double golden_max(F f, double lo, double hi, double tol) {
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a), d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d, d = c, fd = fc;
      c = b - kInvPhi * (b - a), fc = f(c);
    } else {
      a = c, c = d, fc = fd;
      d = a + kInvPhi * (b - a), fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

void check_grid(const std::vector<double>& grid, double hi, const char* name) {
  if (grid.empty()) throw Error(ErrorCode::kValidation, std::string(name) + " is empty");
  for (size_t k = 0; k < grid.size(); ++k) {
    if (!std::isfinite(grid[k]) || grid[k] < 0.0 || grid[k] > hi) {
      throw Error(ErrorCode::kValidation, std::string(name) + " value out of range");
    }
    if (k > 0 && !(grid[k] > grid[k - 1])) {
      throw Error(ErrorCode::kValidation, std::string(name) + " must be strictly increasing");
    }
  }
}

void reorder(Spin1Family::Point& p, const std::vector<int>& perm) {
  const std::array<double, 2> omega{p.row.omega1, p.row.omega2};
  const majorana::StarSet old = p.stars;
  for (size_t k = 0; k < perm.size(); ++k) {
    p.stars.stars[k] = old.stars[perm[k]];
    p.stars.multiplicity[k] = old.multiplicity[perm[k]];
  }
  p.row.omega1 = omega[perm[0]];
  p.row.omega2 = omega[perm[1]];
  p.row.star1_theta = p.stars.stars[0].theta;
  p.row.star1_phi = p.stars.stars[0].phi;
  p.row.star2_theta = p.stars.stars[1].theta;
  p.row.star2_phi = p.stars.stars[1].phi;
}

}  // namespace

PureState spin1_pre() {
  CVector v(3);
  v << 2.0, 1.0, Complex(0.0, 1.0);
  return PureState::normalized(v);
}

Observable spin1_sz() {
  return Observable(CMatrix(Eigen::Vector3cd(1.0, 0.0, -1.0).asDiagonal()));
}

PureState spin1_post(double theta, double xi) {
  const auto a = post_amps(theta, xi);
  CVector v(3);
  v << a[0], a[1], a[2];
  return PureState::normalized(v);
}

const std::vector<std::string>& sweep_columns() {
  static const std::vector<std::string> cols{
      "theta",          "xi",          "wv_re",          "wv_im",
      "wv_mod",         "wv_arg",      "wv_arg_unwrapped", "omega1",
      "omega2",         "star1_theta", "star1_phi",      "star2_theta",
      "star2_phi",      "star_angle_deg", "overlap_pre_post_mod", "divergent",
      "pi_jump_adjacent", "degenerate_triangle"};
  return cols;
}

bool is_flag_column(std::string_view name) {
  return name == "divergent" || name == "pi_jump_adjacent" || name == "degenerate_triangle";
}

double sweep_column(const SweepRow& r, std::string_view name) {
  if (name == "theta") return r.theta;
  if (name == "xi") return r.xi;
  if (name == "wv_re") return r.wv_re;
  if (name == "wv_im") return r.wv_im;
  if (name == "wv_mod") return r.wv_mod;
  if (name == "wv_arg") return r.wv_arg;
  if (name == "wv_arg_unwrapped") return r.wv_arg_unwrapped;
  if (name == "omega1") return r.omega1;
  if (name == "omega2") return r.omega2;
  if (name == "star1_theta") return r.star1_theta;
  if (name == "star1_phi") return r.star1_phi;
  if (name == "star2_theta") return r.star2_theta;
  if (name == "star2_phi") return r.star2_phi;
  if (name == "star_angle_deg") return r.star_angle_deg;
  if (name == "overlap_pre_post_mod") return r.overlap_pre_post_mod;
  if (name == "divergent") return r.flags.divergent;
  if (name == "pi_jump_adjacent") return r.flags.pi_jump_adjacent;
  if (name == "degenerate_triangle") return r.flags.degenerate_triangle;
  throw Error(ErrorCode::kValidation, "unknown sweep column '" + std::string(name) + "'");
}

std::string sweep_csv(const std::vector<SweepRow>& rows, const std::vector<std::string>& columns) {
  const auto& cols = columns.empty() ? sweep_columns() : columns;
  std::ostringstream out;
  for (size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << cols[c];
  out << '\n';
  for (const auto& r : rows) {
    for (size_t c = 0; c < cols.size(); ++c) {
      const double v = sweep_column(r, cols[c]);
      out << (c ? "," : "");
      if (is_flag_column(cols[c])) {
        out << (v != 0.0 ? 1 : 0);
      } else {
        out << io::format_g17(v);
      }
    }
    out << '\n';
  }
  return out.str();
}

Spin1Family::Spin1Family(const Tolerances& tol)
    : tol_(tol),
      sz_(spin1_sz()),
      pre_(spin1_pre()),
      eff_(weakval::effective_state(sz_, pre_, tol)),
      mapping_(majorana::coherent_mapping(pre_, eff_)) {
  if (std::abs(expectation(sz_, pre_) - 0.5) > 1e-12 ||
      std::abs(second_moment(sz_, pre_) - 5.0 / 6.0) > 1e-12) {
    throw Error(ErrorCode::kInvalidArgument, "spin-1 pre-selected state constants are off");
  }
}

Complex Spin1Family::weak_value(double theta, double xi) const {
  const auto post = post_amps(theta, xi);
  return bra_ket(post, sz_.apply(pre_)) / bra_ket(post, pre_.amps());
}

double Spin1Family::modulus(double theta, double xi) const {
  const auto post = post_amps(theta, xi);
  const double den = std::abs(bra_ket(post, pre_.amps()));
  const double num = std::abs(bra_ket(post, sz_.apply(pre_)));
  return den == 0.0 ? std::numeric_limits<double>::infinity() : num / den;
}

double Spin1Family::star_angle(double theta, double xi) const {
  const auto s = majorana::stars(mapping_.total().apply(spin1_post(theta, xi)));
  return blochgeo::star_angle(s.stars[0].bloch(), s.stars[1].bloch());
}

double Spin1Family::min_overlap(double xi) const {
  // ⟨post|pre⟩ = a cos θ + b sin θ, so |⟨post|pre⟩|² is a real quadratic form
  // in (cos θ, sin θ); its minimum is the smaller eigenvalue.
  const Complex a = bra_ket(post_amps(0.0, xi), pre_.amps());
  const Complex b = bra_ket(post_amps(kPi / 2.0, xi), pre_.amps()) -
                    std::cos(kPi / 2.0) * a;
  Eigen::Matrix2d g;
  g << std::norm(a), (std::conj(a) * b).real(), (std::conj(a) * b).real(), std::norm(b);
  const double lo = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(g).eigenvalues()(0);
  return std::sqrt(std::max(0.0, lo));
}

majorana::ArgumentDecomposition Spin1Family::decompose(double theta, double xi) const {
  return majorana::decompose_argument(sz_, pre_, spin1_post(theta, xi), mapping_, tol_);
}

Spin1Family::Point Spin1Family::evaluate(double theta, double xi) const {
  const PureState post = spin1_post(theta, xi);
  Point p{SweepRow{}, majorana::stars(mapping_.total().apply(post))};
  SweepRow& r = p.row;
  r.theta = theta;
  r.xi = xi;
  r.overlap_pre_post_mod = std::abs(overlap(post, pre_));
  r.star1_theta = p.stars.stars[0].theta;
  r.star1_phi = p.stars.stars[0].phi;
  r.star2_theta = p.stars.stars[1].theta;
  r.star2_phi = p.stars.stars[1].phi;
  r.star_angle_deg = blochgeo::star_angle(p.stars.stars[0].bloch(), p.stars.stars[1].bloch());

  if (r.overlap_pre_post_mod < tol_.divergence_flag) {
    r.flags.divergent = true;
    r.wv_re = r.wv_im = r.wv_mod = r.wv_arg = r.wv_arg_unwrapped = kNaN;
    r.omega1 = r.omega2 = kNaN;
    return p;
  }

  const Complex wv = weak_value(theta, xi);
  r.wv_re = wv.real();
  r.wv_im = wv.imag();
  r.wv_mod = std::abs(wv);
  r.wv_arg = arg(wv);
  r.wv_arg_unwrapped = r.wv_arg;
  try {
    const auto d = majorana::decompose_argument(sz_, pre_, post, mapping_, tol_);
    r.omega1 = d.solid_angles[0];
    r.omega2 = d.solid_angles[1];
  } catch (const majorana::DegenerateStarTriangle& e) {
    r.flags.degenerate_triangle = true;
    r.omega1 = e.partial().solid_angles[0];
    r.omega2 = e.partial().solid_angles[1];
  }
  return p;
}

SweepRow spin1_point(double theta, double xi) { return Spin1Family().row(theta, xi); }

void validate(const SweepConfig& config) {
  check_grid(config.theta_grid, kPi, "theta grid");
  check_grid(config.xi_grid, 2.0 * kPi, "xi grid");
  for (const auto& c : config.outputs) {
    if (std::find(sweep_columns().begin(), sweep_columns().end(), c) == sweep_columns().end()) {
      throw Error(ErrorCode::kValidation, "unknown output column '" + c + "'");
    }
  }
}

std::vector<SweepRow> sweep(const SweepConfig& config, const Tolerances& tol) {
  validate(config);
  const Spin1Family family(tol);
  std::vector<SweepRow> rows;
  rows.reserve(config.theta_grid.size() * config.xi_grid.size());

  for (double theta : config.theta_grid) {
    std::vector<Spin1Family::Point> line;
    line.reserve(config.xi_grid.size());
    for (double xi : config.xi_grid) line.push_back(family.evaluate(theta, xi));

    if (config.track_stars) {
      for (size_t k = 1; k < line.size(); ++k) {
        reorder(line[k], majorana::tracking_permutation(line[k - 1].stars, line[k].stars));
      }
    }

    SweepRow* prev = nullptr;
    for (auto& p : line) {
      SweepRow& r = p.row;
      if (r.flags.divergent) continue;
      if (prev != nullptr) {
        const double step = wrap_angle(r.wv_arg - prev->wv_arg);
        if (std::abs(step) > kPi - kPiJumpWindow) {
          r.flags.pi_jump_adjacent = prev->flags.pi_jump_adjacent = true;
        }
        if (config.unwrap) r.wv_arg_unwrapped = prev->wv_arg_unwrapped + step;
      }
      prev = &r;
    }
    for (auto& p : line) rows.push_back(p.row);
  }
  return rows;
}

ExtremaLocus extrema_locus(const std::vector<double>& xi_grid, double theta_step,
                           const Tolerances& tol) {
  if (!(theta_step > 0.0)) throw Error(ErrorCode::kInvalidArgument, "theta step must be positive");
  const Spin1Family family(tol);
  const int n = static_cast<int>(std::ceil(kPi / theta_step));
  const double h = kPi / n;

  ExtremaLocus out;
  for (double xi : xi_grid) {
    auto mod = [&](double t) { return family.modulus(t, xi); };
    int kmax = 0, kmin = 0;
    double vmax = -1.0, vmin = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) {
      const double v = mod(k * h);
      if (v > vmax) vmax = v, kmax = k;
      if (v < vmin) vmin = v, kmin = k;
    }
    // |A_w|(θ) has period π, so the bracket may straddle 0 or π.
    const double tmax = wrap_pi(golden_max(mod, (kmax - 1) * h, (kmax + 1) * h, 1e-8));
    const double tmin =
        wrap_pi(golden_max([&](double t) { return -mod(t); }, (kmin - 1) * h, (kmin + 1) * h, 1e-8));
    const bool divergent = family.min_overlap(xi) < tol.divergence_flag;

    out.xi.push_back(xi);
    out.theta_max.push_back(tmax);
    out.theta_min.push_back(tmin);
    out.max_modulus.push_back(divergent ? kNaN : mod(tmax));
    out.min_modulus.push_back(mod(tmin));
    out.divergent.push_back(divergent);
  }
  return out;
}

StarAngleMap star_angle_map(const std::vector<double>& theta_grid,
                            const std::vector<double>& xi_grid, double locus_theta_step,
                            const Tolerances& tol) {
  check_grid(theta_grid, kPi, "theta grid");
  check_grid(xi_grid, 2.0 * kPi, "xi grid");
  const Spin1Family family(tol);

  StarAngleMap m;
  m.theta_grid = theta_grid;
  m.xi_grid = xi_grid;
  m.degrees.assign(theta_grid.size(), std::vector<double>(xi_grid.size()));
  for (size_t i = 0; i < theta_grid.size(); ++i) {
    for (size_t j = 0; j < xi_grid.size(); ++j) {
      m.degrees[i][j] = family.star_angle(theta_grid[i], xi_grid[j]);
    }
  }
  for (size_t j = 0; j < xi_grid.size(); ++j) {
    size_t best = 0;
    for (size_t i = 1; i < theta_grid.size(); ++i) {
      if (m.degrees[i][j] < m.degrees[best][j]) best = i;
    }
    m.column_min.push_back(m.degrees[best][j]);
    m.column_argmin.push_back(theta_grid[best]);
  }
  m.locus = extrema_locus(xi_grid, locus_theta_step, tol);
  for (size_t j = 0; j < xi_grid.size(); ++j) {
    m.angle_at_theta_max.push_back(family.star_angle(m.locus.theta_max[j], xi_grid[j]));
  }
  return m;
}

std::string star_angle_csv(const StarAngleMap& map) {
  std::ostringstream out;
  out << "theta,xi,star_angle_deg\n";
  for (size_t i = 0; i < map.theta_grid.size(); ++i) {
    for (size_t j = 0; j < map.xi_grid.size(); ++j) {
      out << io::format_g17(map.theta_grid[i]) << ',' << io::format_g17(map.xi_grid[j]) << ','
          << io::format_g17(map.degrees[i][j]) << '\n';
    }
  }
  return out.str();
}

std::string locus_csv(const ExtremaLocus& l) {
  std::ostringstream out;
  out << "xi,theta_max,theta_min,max_modulus,min_modulus,divergent\n";
  for (size_t k = 0; k < l.xi.size(); ++k) {
    out << io::format_g17(l.xi[k]) << ',' << io::format_g17(l.theta_max[k]) << ','
        << io::format_g17(l.theta_min[k]) << ',' << io::format_g17(l.max_modulus[k]) << ','
        << io::format_g17(l.min_modulus[k]) << ',' << (l.divergent[k] ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string star_angle_svg(const StarAngleMap& map) {
  std::vector<svg::Curve> curves{{"theta_max(xi)", map.locus.xi, map.locus.theta_max},
                                 {"theta_min(xi)", map.locus.xi, map.locus.theta_min}};
  return svg::render_heatmap(map.xi_grid, map.theta_grid, map.degrees, curves,
                             "star angle (deg) over xi (x) and theta (y)");
}

Observable cnot() {
  CMatrix m = CMatrix::Zero(4, 4);
  m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
  return Observable(m);
}

PureState cnot_pre() {
  CVector v(4);
  v << 1.0, Complex(0.0, -1.0), 1.0, Complex(0.0, -1.0);
  return PureState::normalized(v);
}

PureState cnot_post() {
  CVector v(4);
  v << 1.0, 0.0, -2.0, 0.0;
  return PureState::normalized(v);
}

CnotReport cnot_case(const Tolerances& tol) {
  const Observable a = cnot();
  const PureState pre = cnot_pre();
  const PureState post = cnot_post();
  weakval::WeakValueResult wv = weakval::weak_value(a, pre, post, tol);
  majorana::ArgumentDecomposition full = majorana::decompose_argument(
      a, pre, post, majorana::MappingGauge::kAuto, tol);
  majorana::QutritReduction red = majorana::qutrit_reduction(pre, *wv.effective_state, post);
  majorana::ArgumentDecomposition reduced = majorana::decompose_argument(
      red.reduce(a), red.pre, red.post, majorana::MappingGauge::kAuto, tol);
  return CnotReport{
      .weak_value = wv,
      .full = full,
      .reduction = red,
      .reduced = reduced,
      .full_scene = scene::build_scene(full),
      .reduced_scene = scene::build_scene(reduced),
      .cp2_scene = scene::build_cp2_scene(red.pre, red.eff, red.post),
  };
}

}  // namespace wvgeom::experiments
