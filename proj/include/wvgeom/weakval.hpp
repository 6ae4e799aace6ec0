#pragma once

#include <optional>
#include <span>
#include <vector>

#include "wvgeom/qstate.hpp"

namespace wvgeom::weakval {

struct WeakValueResult {
  Complex value;
  double modulus = 0.0;
  double argument = 0.0;  // (−π, π]
  double exp_a = 0.0;     // ⟨Â⟩ on the pre-selected state
  double exp_a2 = 0.0;    // ⟨Â²⟩ on the pre-selected state
  std::optional<double> prop_const;          // ⟨Â²⟩/⟨Â⟩
  std::optional<PureState> effective_state;  // Â|pre⟩ normalized
};

/// ⟨post|Â|pre⟩ / ⟨post|pre⟩ together with the effective-projector data.
/// Throws OrthogonalPrePost when |⟨post|pre⟩| is at or below the tolerance.
WeakValueResult weak_value(const Observable& a, const PureState& pre,
                           const PureState& post, const Tolerances& tol = {});

/// Â|pre⟩ / sqrt(⟨Â²⟩), canonicalized. Throws NilImage when ⟨Â²⟩ vanishes.
PureState effective_state(const Observable& a, const PureState& pre,
                          const Tolerances& tol = {});

/// Weak value of the projector onto `proj`: ⟨post|proj⟩⟨proj|pre⟩/⟨post|pre⟩.
Complex projector_weak_value(const PureState& proj, const PureState& pre,
                             const PureState& post, const Tolerances& tol = {});

struct ProportionalDecomposition {
  double prop_const = 0.0;
  Complex projector_wv;
};

/// Factorizes A_w = (⟨Â²⟩/⟨Â⟩) · Π_{i',w}. Throws VanishingExpectation when
/// |⟨Â⟩| is too small for the constant to be meaningful.
ProportionalDecomposition proportional_decomposition(const Observable& a,
                                                     const PureState& pre,
                                                     const PureState& post,
                                                     const Tolerances& tol = {});

struct EpsilonSample {
  double epsilon = 0.0;
  double exp_a = 0.0;         // ⟨Â⟩ on the perturbed pre-selected state
  double prop_const = 0.0;
  Complex projector_wv;
  double argument = 0.0;      // arg(prop_const) + arg(projector_wv), unwrapped near the direct value
};

struct EpsilonLimit {
  double direct_arg = 0.0;  // arg⟨post|Â|pre⟩ − arg⟨post|pre⟩ in (−π, π]
  double limit_arg = 0.0;   // Richardson extrapolation of the table, (−π, π]
  std::vector<EpsilonSample> table;
};

inline const std::vector<double>& default_epsilon_schedule() {
  static const std::vector<double> s{1e-3, 1e-4, 1e-5};
  return s;
}

/// Argument of A_w when ⟨Â⟩ vanishes. The pre-selected state is perturbed to
/// normalize(pre + ε Â pre) for each ε in the (strictly descending) schedule
/// and the factorized argument is extrapolated to ε → 0. Throws NonConvergent
/// when the extrapolation misses the direct argument by more than 1e-6 and
/// more than 1% of the deviation at the smallest ε.
EpsilonLimit epsilon_limit_argument(const Observable& a, const PureState& pre,
                                    const PureState& post,
                                    std::span<const double> eps_schedule = default_epsilon_schedule(),
                                    const Tolerances& tol = {});

struct BargmannInvariant {
  int order = 3;
  Complex value;
};

/// ⟨s1|s2⟩⟨s2|s3⟩⟨s3|s1⟩ = Tr(Π1 Π2 Π3).
BargmannInvariant bargmann3(const PureState& s1, const PureState& s2,
                            const PureState& s3);

/// Tr(Π1 … Πn) as the cyclic product of overlaps.
BargmannInvariant bargmann(std::span<const PureState> states);

struct BargmannReduction {
  double total_arg = 0.0;                // arg Tr(Π1 … Πn)
  std::vector<double> third_order_args;  // arg Tr(Π1 Πk Πk+1), k = 2..n−1
  double sum_arg = 0.0;                  // Σ third_order_args wrapped to (−π, π]
};

/// Splits the order-n argument into n − 2 third-order arguments sharing the
/// first state. Throws VanishingOverlap naming the first pair whose overlap
/// vanishes.
BargmannReduction bargmann_n_arg_reduction(std::span<const PureState> states,
                                           double overlap_tol = 1e-12);

}  // namespace wvgeom::weakval
