#include "wvgeom/weakval.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace wvgeom::weakval {

namespace {

void require_dims(const Observable& a, const PureState& pre, const PureState& post) {
  if (a.dim() != pre.dim() || pre.dim() != post.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "observable and states must share one dimension");
  }
}

Complex pre_post_overlap(const PureState& pre, const PureState& post, const Tolerances& tol) {
  Complex ov = overlap(post, pre);
  if (std::abs(ov) <= tol.orthogonal_pre_post) {
    throw Error(ErrorCode::kOrthogonalPrePost,
                "pre- and post-selected states are orthogonal (|<post|pre>| = " +
                    std::to_string(std::abs(ov)) + ")");
  }
  return ov;
}

// The representative of `a` closest to `ref` modulo 2π.
double near(double a, double ref) { return ref + wrap_angle(a - ref); }

}  // namespace

WeakValueResult weak_value(const Observable& a, const PureState& pre,
                           const PureState& post, const Tolerances& tol) {
  require_dims(a, pre, post);
  const Complex ov = pre_post_overlap(pre, post, tol);
  const CVector a_pre = a.apply(pre);

  WeakValueResult r;
  r.value = post.amps().dot(a_pre) / ov;
  r.modulus = std::abs(r.value);
  r.argument = arg(r.value);
  r.exp_a = expectation(a, pre);
  r.exp_a2 = a_pre.squaredNorm();
  if (r.exp_a2 > tol.nil_image) {
    r.effective_state = PureState::normalized(canonicalize(a_pre));
    if (std::abs(r.exp_a) > tol.vanishing_expectation) r.prop_const = r.exp_a2 / r.exp_a;
  }
  return r;
}

PureState effective_state(const Observable& a, const PureState& pre, const Tolerances& tol) {
  if (a.dim() != pre.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "effective_state: dimension mismatch");
  }
  const CVector a_pre = a.apply(pre);
  if (a_pre.squaredNorm() <= tol.nil_image) {
    throw Error(ErrorCode::kNilImage, "observable annihilates the pre-selected state");
  }
  return PureState::normalized(canonicalize(a_pre));
}

Complex projector_weak_value(const PureState& proj, const PureState& pre,
                             const PureState& post, const Tolerances& tol) {
  const Complex ov = pre_post_overlap(pre, post, tol);
  return overlap(post, proj) * overlap(proj, pre) / ov;
}

ProportionalDecomposition proportional_decomposition(const Observable& a,
                                                     const PureState& pre,
                                                     const PureState& post,
                                                     const Tolerances& tol) {
  require_dims(a, pre, post);
  const double exp_a = expectation(a, pre);
  if (std::abs(exp_a) <= tol.vanishing_expectation) {
    throw Error(ErrorCode::kVanishingExpectation,
                "<A> vanishes on the pre-selected state; use the epsilon limit");
  }
  const PureState eff = effective_state(a, pre, tol);
  ProportionalDecomposition d;
  d.prop_const = second_moment(a, pre) / exp_a;
  d.projector_wv = projector_weak_value(eff, pre, post, tol);
  return d;
}

EpsilonLimit epsilon_limit_argument(const Observable& a, const PureState& pre,
                                    const PureState& post,
                                    std::span<const double> eps_schedule,
                                    const Tolerances& tol) {
  require_dims(a, pre, post);
  if (eps_schedule.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "epsilon schedule needs at least two values");
  }
  for (size_t k = 0; k < eps_schedule.size(); ++k) {
    if (!(eps_schedule[k] > 0.0) || (k > 0 && !(eps_schedule[k] < eps_schedule[k - 1]))) {
      throw Error(ErrorCode::kInvalidArgument,
                  "epsilon schedule must be positive and strictly descending");
    }
  }
  const CVector a_pre = a.apply(pre);
  if (a_pre.squaredNorm() <= tol.nil_image) {
    throw Error(ErrorCode::kNilImage, "observable annihilates the pre-selected state");
  }
  const Complex ov = pre_post_overlap(pre, post, tol);

  EpsilonLimit out;
  out.direct_arg = wrap_angle(arg(post.amps().dot(a_pre)) - arg(ov));

  for (double eps : eps_schedule) {
    const PureState pre_eps = PureState::normalized(pre.amps() + eps * a_pre);
    const ProportionalDecomposition d = proportional_decomposition(a, pre_eps, post, tol);
    EpsilonSample s;
    s.epsilon = eps;
    s.exp_a = expectation(a, pre_eps);
    s.prop_const = d.prop_const;
    s.projector_wv = d.projector_wv;
    s.argument = near(arg(Complex(d.prop_const, 0.0)) + arg(d.projector_wv), out.direct_arg);
    out.table.push_back(s);
  }

  // The perturbed argument is smooth in ε, so a linear fit through the two
  // smallest ε cancels the leading error term.
  const EpsilonSample& s1 = out.table[out.table.size() - 2];
  const EpsilonSample& s2 = out.table.back();
  const double extrapolated =
      (s1.epsilon * s2.argument - s2.epsilon * s1.argument) / (s1.epsilon - s2.epsilon);
  out.limit_arg = wrap_angle(extrapolated);

  // The leftover O(ε²) term scales with the first-order deviation at the
  // smallest ε, so a genuine limit misses by a small fraction of it.
  const double miss = std::abs(wrap_angle(out.limit_arg - out.direct_arg));
  const double first_order = std::abs(wrap_angle(s2.argument - out.direct_arg));
  if (miss > std::max(1e-6, 1e-2 * first_order)) {
    throw Error(ErrorCode::kNonConvergent,
                "epsilon limit misses the direct argument by " + std::to_string(miss));
  }
  return out;
}

BargmannInvariant bargmann3(const PureState& s1, const PureState& s2, const PureState& s3) {
  return {3, overlap(s1, s2) * overlap(s2, s3) * overlap(s3, s1)};
}

BargmannInvariant bargmann(std::span<const PureState> states) {
  if (states.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "Bargmann invariant needs at least two states");
  }
  Complex v(1.0, 0.0);
  const size_t n = states.size();
  for (size_t k = 0; k < n; ++k) v *= overlap(states[k], states[(k + 1) % n]);
  return {static_cast<int>(n), v};
}

BargmannReduction bargmann_n_arg_reduction(std::span<const PureState> states,
                                           double overlap_tol) {
  const size_t n = states.size();
  if (n < 3) {
    throw Error(ErrorCode::kInvalidArgument, "argument reduction needs n >= 3 states");
  }
  auto check = [&](size_t i, size_t j) {
    if (std::abs(overlap(states[i], states[j])) <= overlap_tol) {
      throw Error(ErrorCode::kVanishingOverlap,
                  "vanishing overlap between states " + std::to_string(i + 1) + " and " +
                      std::to_string(j + 1));
    }
  };
  for (size_t k = 0; k < n; ++k) check(k, (k + 1) % n);
  for (size_t k = 2; k + 1 < n; ++k) check(0, k);

  BargmannReduction r;
  r.total_arg = arg(bargmann(states).value);
  double sum = 0.0;
  for (size_t k = 1; k + 1 < n; ++k) {
    double a = arg(bargmann3(states[0], states[k], states[k + 1]).value);
    r.third_order_args.push_back(a);
    sum += a;
  }
  r.sum_arg = wrap_angle(sum);
  return r;
}

}  // namespace wvgeom::weakval
