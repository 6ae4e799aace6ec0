#include "wvgeom/majorana.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "wvgeom/weakval.hpp"

namespace wvgeom::majorana {

namespace {

constexpr double kLeadingZero = 1e-13;
constexpr double kStarOrthogonal = 1e-12;
constexpr double kIllConditioned = 1e-10;
constexpr double kNudge = 1e-7;
constexpr double kPoleSine = 1e-12;  // closed-form angles below this are treated as exact zeros

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

Complex horner(std::span<const Complex> p, Complex z) {
  Complex acc = 0.0;
  for (const Complex& c : p) acc = acc * z + c;
  return acc;
}

Complex horner_derivative(std::span<const Complex> p, Complex z) {
  const int deg = static_cast<int>(p.size()) - 1;
  Complex acc = 0.0;
  for (int k = 0; k < deg; ++k) acc = acc * z + p[k] * static_cast<double>(deg - k);
  return acc;
}

// Coefficients (highest power first) of lead · Π (z − r).
std::vector<Complex> expand(Complex lead, std::span<const Complex> rts) {
  std::vector<Complex> c{lead};
  for (const Complex& r : rts) {
    c.push_back(0.0);
    for (size_t k = c.size() - 1; k > 0; --k) c[k] -= r * c[k - 1];
  }
  return c;
}

double coefficient_error(std::span<const Complex> p, std::span<const Complex> rts) {
  const auto q = expand(p[0], rts);
  double err = 0.0;
  for (size_t k = 0; k < p.size(); ++k) err = std::max(err, std::abs(p[k] - q[k]));
  return err;
}

// Coefficients of the m-th derivative, highest power first.
std::vector<Complex> derivative(std::span<const Complex> p, int m) {
  std::vector<Complex> d(p.begin(), p.end());
  for (int r = 0; r < m; ++r) {
    const int deg = static_cast<int>(d.size()) - 1;
    for (int k = 0; k < deg; ++k) d[k] *= static_cast<double>(deg - k);
    d.pop_back();
  }
  return d;
}

Complex newton_polish(std::span<const Complex> p, Complex z) {
  double res = std::abs(horner(p, z));
  for (int it = 0; it < 12 && res > 0.0; ++it) {
    const Complex d = horner_derivative(p, z);
    if (d == Complex(0.0, 0.0)) break;
    const Complex next = z - horner(p, z) / d;
    const double next_res = std::abs(horner(p, next));
    if (!(next_res < res)) break;
    z = next;
    res = next_res;
  }
  return z;
}

// Merges single-linkage clusters of nearby roots into one repeated root at
// their centroid when that reproduces the coefficients. Repeated roots come
// out of the eigensolver split by O(eps^{1/m}); the centroid is accurate.
void merge_repeated(std::span<const Complex> p, std::vector<Complex>& rts,
                    std::vector<int>& mult) {
  double scale = 0.0;
  for (const Complex& c : p) scale = std::max(scale, std::abs(c));
  const double accept = 1e-12 * scale;

  for (double tau : {1e-8, 1e-6, 1e-4, 1e-2}) {
    const size_t n = rts.size();
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int i) {
      while (parent[i] != i) i = parent[i] = parent[parent[i]];
      return i;
    };
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = i + 1; j < n; ++j) {
        const double reach = tau * std::max(1.0, std::max(std::abs(rts[i]), std::abs(rts[j])));
        if (std::abs(rts[i] - rts[j]) <= reach) parent[find(j)] = find(i);
      }
    }
    for (size_t root = 0; root < n; ++root) {
      if (find(static_cast<int>(root)) != static_cast<int>(root)) continue;
      std::vector<size_t> members;
      for (size_t i = 0; i < n; ++i) {
        if (find(static_cast<int>(i)) == static_cast<int>(root)) members.push_back(i);
      }
      if (members.size() < 2) continue;
      bool already = true;
      for (size_t i : members) already = already && rts[i] == rts[members[0]];
      if (already) continue;

      Complex centroid = 0.0;
      for (size_t i : members) centroid += rts[i];
      centroid /= static_cast<double>(members.size());
      std::vector<Complex> trial = rts;
      for (size_t i : members) trial[i] = centroid;
      if (coefficient_error(p, trial) <= std::max(accept, coefficient_error(p, rts))) {
        rts = std::move(trial);
      }
    }
  }
  mult.assign(rts.size(), 1);
  for (size_t i = 0; i < rts.size(); ++i) {
    mult[i] = static_cast<int>(std::count(rts.begin(), rts.end(), rts[i]));
  }
}

bool star_order(const MajoranaStar& a, const MajoranaStar& b) {
  if (a.theta != b.theta) return a.theta > b.theta;
  return a.phi < b.phi;
}

UnitaryOp direct_sum_identity(const CMatrix& tail) {
  const auto n = tail.rows() + 1;
  CMatrix u = CMatrix::Zero(n, n);
  u(0, 0) = 1.0;
  u.bottomRightCorner(n - 1, n - 1) = tail;
  return UnitaryOp(u);
}

// Closed-form matrix mapping the canonical qutrit (cos θ, e^{jχ1} cos ε sin θ,
// e^{jχ2} sin ε sin θ) to e0.
CMatrix qutrit_first_unitary(const SphericalParam& p) {
  const Complex e1 = std::polar(1.0, -p.chi1);
  const Complex e2 = std::polar(1.0, -p.chi2);
  const double st = std::sin(p.theta), ct = std::cos(p.theta);
  const double se = std::sin(p.epsilon), ce = std::cos(p.epsilon);
  CMatrix u(3, 3);
  u << ct, e1 * ce * st, e2 * se * st,
       st, -e1 * ce * ct, -e2 * se * ct,
       0.0, -e1 * se, e2 * ce;
  return u;
}

// Closed-form companion: identity on e0, a real rotation by α after removing
// the phases χ1, χ2 of the tail.
CMatrix qutrit_second_unitary(const SphericalParam& p, double alpha) {
  const Complex e1 = std::polar(1.0, -p.chi1);
  const Complex e2 = std::polar(1.0, -p.chi2);
  const double ca = std::cos(alpha), sa = std::sin(alpha);
  CMatrix u(3, 3);
  u << 1.0, 0.0, 0.0,
       0.0, e1 * ca, -e2 * sa,
       0.0, e1 * sa, e2 * ca;
  return u;
}

// M = (N−1)! · perm(G) with G_jk = ⟨φ_j|φ_k⟩.
double symmetrized_norm(const std::vector<PureState>& qubits) {
  const int m = static_cast<int>(qubits.size());
  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  Complex permanent = 0.0;
  double factorial = 1.0;
  for (int k = 2; k <= m; ++k) factorial *= k;
  do {
    Complex term = 1.0;
    for (int j = 0; j < m; ++j) term *= overlap(qubits[j], qubits[perm[j]]);
    permanent += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return factorial * permanent.real();
}

}  // namespace

MajoranaStar MajoranaStar::from_angles(double theta, double phi) {
  double p = std::fmod(phi, 2.0 * kPi);
  if (p < 0.0) p += 2.0 * kPi;
  if (p >= 2.0 * kPi) p = 0.0;
  return {std::clamp(theta, 0.0, kPi), p};
}

blochgeo::BlochVector MajoranaStar::bloch() const {
  return blochgeo::BlochVector::from_angles(theta, phi);
}

PureState MajoranaStar::qubit() const {
  CVector q(2);
  q(0) = std::cos(theta / 2.0);
  q(1) = std::polar(std::sin(theta / 2.0), phi);
  return PureState::normalized(q);
}

std::vector<Complex> majorana_polynomial(const PureState& s) {
  const int n = s.dim();
  std::vector<Complex> c(n);
  for (int k = 0; k < n; ++k) {
    c[k] = (k % 2 == 0 ? 1.0 : -1.0) * std::sqrt(binomial(n - 1, k)) * s[k];
  }
  return c;
}

PolynomialRoots roots(std::span<const Complex> coeffs) {
  double scale = 0.0;
  for (const Complex& c : coeffs) scale = std::max(scale, std::abs(c));
  if (!(scale > 0.0)) throw Error(ErrorCode::kInvalidArgument, "zero polynomial has no roots");

  size_t lead = 0;
  while (std::abs(coeffs[lead]) <= kLeadingZero * scale) ++lead;

  PolynomialRoots out;
  out.infinity_count = static_cast<int>(lead);
  const std::span<const Complex> p = coeffs.subspan(lead);
  const int deg = static_cast<int>(p.size()) - 1;
  if (deg <= 0) return out;

  CMatrix companion = CMatrix::Zero(deg, deg);
  for (int k = 0; k < deg; ++k) companion(0, k) = -p[k + 1] / p[0];
  for (int k = 1; k < deg; ++k) companion(k, k - 1) = 1.0;
  Eigen::ComplexEigenSolver<CMatrix> solver(companion, false);

  for (int k = 0; k < deg; ++k) out.finite.push_back(solver.eigenvalues()(k));
  merge_repeated(p, out.finite, out.multiplicity);
  // A root of multiplicity m is a simple root of the (m−1)-th derivative.
  std::vector<Complex> polished = out.finite;
  for (size_t k = 0; k < polished.size(); ++k) {
    const int m = out.multiplicity[k];
    polished[k] = m == 1 ? newton_polish(p, out.finite[k])
                         : newton_polish(derivative(p, m - 1), out.finite[k]);
  }
  if (coefficient_error(p, polished) <= coefficient_error(p, out.finite)) out.finite = std::move(polished);
  return out;
}

MajoranaStar root_to_star(Complex z) {
  return MajoranaStar::from_angles(2.0 * std::atan(std::abs(z)), arg(z));
}

MajoranaStar infinity_star() { return {kPi, 0.0}; }

StarSet stars(const PureState& s) {
  StarSet set;
  set.dim = s.dim();
  const auto poly = majorana_polynomial(s);
  const PolynomialRoots r = roots(poly);
  set.finite_roots = r.finite;
  set.infinity_count = r.infinity_count;

  std::vector<std::pair<MajoranaStar, int>> tagged;
  for (size_t k = 0; k < r.finite.size(); ++k) {
    tagged.emplace_back(root_to_star(r.finite[k]), r.multiplicity[k]);
  }
  for (int k = 0; k < r.infinity_count; ++k) tagged.emplace_back(infinity_star(), r.infinity_count);
  std::stable_sort(tagged.begin(), tagged.end(),
                   [](const auto& a, const auto& b) { return star_order(a.first, b.first); });
  for (const auto& [star, m] : tagged) {
    set.stars.push_back(star);
    set.multiplicity.push_back(m);
  }
  return set;
}

PureState stars_to_state(std::span<const MajoranaStar> star_list) {
  const int m = static_cast<int>(star_list.size());
  // Π_k (a_k + b_k t) = Σ_n e_n t^n, with e_n the symmetric sums of the
  // qubit amplitudes; the Dicke-basis amplitude is e_n / sqrt(C(m, n)).
  std::vector<Complex> e{1.0};
  for (const auto& star : star_list) {
    const PureState q = star.qubit();
    std::vector<Complex> next(e.size() + 1, 0.0);
    for (size_t n = 0; n < e.size(); ++n) {
      next[n] += e[n] * q[0];
      next[n + 1] += e[n] * q[1];
    }
    e = std::move(next);
  }
  CVector v(m + 1);
  for (int n = 0; n <= m; ++n) v(n) = e[n] / std::sqrt(binomial(m, n));
  return PureState::normalized(canonicalize(v));
}

PureState stars_to_state(const StarSet& set) { return stars_to_state(set.stars); }

PureState coherent_state(int dim, const MajoranaStar& star) {
  const PureState q = star.qubit();
  CVector v(dim);
  for (int n = 0; n < dim; ++n) {
    v(n) = std::sqrt(binomial(dim - 1, n)) * std::pow(q[0], dim - 1 - n) * std::pow(q[1], n);
  }
  return PureState::normalized(v);
}

std::vector<int> tracking_permutation(const StarSet& previous, const StarSet& current) {
  const size_t n = current.stars.size();
  if (previous.stars.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "track_stars needs star sets of equal size");
  }
  std::vector<std::vector<double>> dist(n, std::vector<double>(n));
  for (size_t i = 0; i < n; ++i) {
    const auto a = previous.stars[i].bloch().vec();
    for (size_t j = 0; j < n; ++j) {
      const auto b = current.stars[j].bloch().vec();
      dist[i][j] = std::atan2(a.cross(b).norm(), a.dot(b));
    }
  }
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best = perm;
  double best_cost = std::numeric_limits<double>::infinity();
  do {
    double cost = 0.0;
    for (size_t k = 0; k < n; ++k) cost += dist[k][perm[k]];
    if (cost < best_cost - 1e-15) {
      best_cost = cost;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

StarSet track_stars(const StarSet& previous, const StarSet& current) {
  const auto perm = tracking_permutation(previous, current);
  StarSet out = current;
  for (size_t k = 0; k < perm.size(); ++k) {
    out.stars[k] = current.stars[perm[k]];
    out.multiplicity[k] = current.multiplicity[perm[k]];
  }
  return out;
}

CoherentMapping coherent_mapping(const PureState& pre, const PureState& eff, MappingGauge gauge) {
  const int n = pre.dim();
  if (eff.dim() != n) throw Error(ErrorCode::kDimensionMismatch, "coherent_mapping: dimension mismatch");
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "coherent_mapping needs dimension >= 2");
  if (gauge == MappingGauge::kAuto) {
    gauge = n == 3 ? MappingGauge::kQutritClosedForm : MappingGauge::kReflection;
  }
  if (gauge == MappingGauge::kQutritClosedForm && n != 3) {
    throw Error(ErrorCode::kInvalidArgument, "closed-form mapping exists only for qutrits");
  }

  const bool ill = std::abs(overlap(eff, pre)) < kIllConditioned;
  const PureState target_eff = ill ? PureState::normalized(eff.amps() + kNudge * pre.amps()) : eff;
  const PureState e0 = PureState::basis(n, 0);

  std::optional<UnitaryOp> u1;
  if (gauge == MappingGauge::kQutritClosedForm) {
    const SphericalParam p = to_spherical(pre);
    // Near e0 the angles ε, χ1, χ2 are rounding noise, and they would pick the
    // phase of the direction orthogonal to pre and eff at random.
    CMatrix m = std::sin(p.theta) < kPoleSine ? CMatrix::Identity(3, 3) : qutrit_first_unitary(p);
    // Fix the global phase so that u1·pre is e0 exactly, not just its ray.
    const Complex lead = (m * pre.amps())(0);
    m *= std::polar(1.0, -arg(lead));
    u1.emplace(m);
  } else {
    u1.emplace(mapping_unitary(pre, e0));
  }

  const CVector w = canonicalize(u1->apply(target_eff.amps()));
  const double cos_half = std::pow(std::min(1.0, std::abs(w(0))), 1.0 / (n - 1));
  const MajoranaStar phi_iprime = MajoranaStar::from_angles(2.0 * std::acos(cos_half), 0.0);
  const PureState target = coherent_state(n, phi_iprime);

  std::optional<UnitaryOp> u2;
  std::optional<double> alpha;
  if (gauge == MappingGauge::kQutritClosedForm) {
    SphericalParam q = to_spherical(PureState::normalized(w));
    if (std::abs(w(1)) < kPoleSine) q.chi1 = 0.0;
    if (std::abs(w(2)) < kPoleSine) q.chi2 = 0.0;
    alpha = -q.epsilon + std::asin(std::min(1.0, std::tan(q.theta / 2.0)));
    u2.emplace(qutrit_second_unitary(q, *alpha));
  } else {
    const CVector src_tail = w.tail(n - 1);
    const CVector dst_tail = target.amps().tail(n - 1);
    if (src_tail.norm() < 1e-14 || dst_tail.norm() < 1e-14) {
      u2.emplace(UnitaryOp::identity(n));
    } else {
      const UnitaryOp v = mapping_unitary(PureState::normalized(src_tail),
                                          PureState::normalized(dst_tail));
      u2.emplace(direct_sum_identity(v.mat()));
    }
  }

  const UnitaryOp total = u1->then(*u2);
  return CoherentMapping{
      .u1 = *u1,
      .u2 = *u2,
      .phi_i = MajoranaStar{0.0, 0.0},
      .phi_iprime = phi_iprime,
      .mapped_pre = total.apply(pre),
      .mapped_eff = canonicalize(total.apply(target_eff)),
      .mapped_post = std::nullopt,
      .gauge = gauge,
      .ill_conditioned = ill,
      .alpha = alpha,
  };
}

ArgumentDecomposition decompose_argument(const Observable& a, const PureState& pre,
                                         const PureState& post, MappingGauge gauge,
                                         const Tolerances& tol) {
  const PureState eff = weakval::effective_state(a, pre, tol);
  return decompose_argument(a, pre, post, coherent_mapping(pre, eff, gauge), tol);
}

ArgumentDecomposition decompose_argument(const Observable& a, const PureState& pre,
                                         const PureState& post, const CoherentMapping& base,
                                         const Tolerances& tol) {
  const weakval::WeakValueResult wv = weakval::weak_value(a, pre, post, tol);
  if (!wv.effective_state) {
    throw Error(ErrorCode::kNilImage, "observable annihilates the pre-selected state");
  }
  if (!wv.prop_const) {
    throw Error(ErrorCode::kVanishingExpectation,
                "<A> vanishes on the pre-selected state; use the epsilon limit");
  }
  if (base.u1.dim() != pre.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "mapping dimension differs from the states");
  }

  CoherentMapping mapping = base;
  const PureState mapped_post = mapping.total().apply(post);
  mapping.mapped_post = mapped_post;

  ArgumentDecomposition d{
      .weak_value = wv.value,
      .exp_a = wv.exp_a,
      .exp_a2 = wv.exp_a2,
      .prop_const = *wv.prop_const,
      .qubit_wvs = {},
      .solid_angles = {},
      .arg_exp_a = wv.exp_a < 0.0 ? kPi : 0.0,
      .total_arg = 0.0,
      .direct_arg = wv.argument,
      .difference = 0.0,
      .modulus_product = 0.0,
      .normalization_m = 0.0,
      .post_stars = stars(mapped_post),
      .mapping = mapping,
  };

  const PureState phi_i = mapping.phi_i.qubit();
  const PureState phi_ip = mapping.phi_iprime.qubit();
  const Complex ip_i = overlap(phi_ip, phi_i);

  std::vector<PureState> post_qubits;
  std::string degenerate;
  double arg_sum = 0.0;
  double modulus = std::abs(d.prop_const);
  for (size_t j = 0; j < d.post_stars.stars.size(); ++j) {
    const PureState f = d.post_stars.stars[j].qubit();
    post_qubits.push_back(f);
    const Complex f_i = overlap(f, phi_i);
    const Complex f_ip = overlap(f, phi_ip);
    if (std::abs(f_i) <= kStarOrthogonal || std::abs(f_ip) <= kStarOrthogonal) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      d.qubit_wvs.emplace_back(nan, nan);
      d.solid_angles.push_back(nan);
      degenerate += (degenerate.empty() ? "" : ", ") + std::to_string(j + 1);
      continue;
    }
    const Complex pi_w = f_ip * ip_i / f_i;
    d.qubit_wvs.push_back(pi_w);
    d.solid_angles.push_back(blochgeo::solid_angle_bargmann(phi_i, phi_ip, f));
    arg_sum += arg(pi_w);
    modulus *= std::abs(pi_w);
  }
  d.normalization_m = symmetrized_norm(post_qubits);

  if (!degenerate.empty()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    d.total_arg = d.difference = d.modulus_product = nan;
    throw DegenerateStarTriangle("post-state star(s) " + degenerate +
                                     " orthogonal to the pre or effective star",
                                 std::move(d));
  }
  d.total_arg = arg_sum - d.arg_exp_a;
  d.difference = wrap_angle(d.total_arg - d.direct_arg);
  d.modulus_product = modulus;
  return d;
}

Observable QutritReduction::reduce(const Observable& a) const {
  if (a.dim() != coords.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "reduce: observable dimension mismatch");
  }
  return Observable(coords * a.mat() * coords.adjoint());
}

QutritReduction qutrit_reduction(const PureState& pre, const PureState& eff, const PureState& post) {
  const int n = pre.dim();
  if (eff.dim() != n || post.dim() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "qutrit_reduction: dimension mismatch");
  }
  CMatrix coords;
  int rank = 0;
  if (n <= 3) {
    coords = CMatrix::Identity(3, n);
    rank = n;
  } else {
    std::vector<CVector> frame;
    auto add = [&](const CVector& v, double tol) {
      CVector r = v;
      for (const auto& b : frame) r -= b.dot(r) * b;
      for (const auto& b : frame) r -= b.dot(r) * b;
      if (r.norm() > tol) {
        frame.push_back(r / r.norm());
        return true;
      }
      return false;
    };
    for (const PureState* s : {&pre, &eff, &post}) {
      if (frame.size() < 3 && add(s->amps(), 1e-10)) ++rank;
    }
    for (int k = 0; k < n && frame.size() < 3; ++k) add(PureState::basis(n, k).amps(), 1e-6);
    coords.resize(3, n);
    for (int r = 0; r < 3; ++r) coords.row(r) = frame[r].adjoint();
  }
  return QutritReduction{
      .pre = PureState::normalized(coords * pre.amps()),
      .eff = PureState::normalized(coords * eff.amps()),
      .post = PureState::normalized(coords * post.amps()),
      .coords = coords,
      .rank = rank,
  };
}

ArgumentDecomposition decompose_reduced(const Observable& a, const PureState& pre,
                                        const PureState& post, const Tolerances& tol) {
  const PureState eff = weakval::effective_state(a, pre, tol);
  const QutritReduction red = qutrit_reduction(pre, eff, post);
  return decompose_argument(red.reduce(a), red.pre, red.post, MappingGauge::kAuto, tol);
}

}  // namespace wvgeom::majorana
