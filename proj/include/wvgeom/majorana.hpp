#pragma once

#include <optional>
#include <span>
#include <vector>

#include "wvgeom/blochgeo.hpp"
#include "wvgeom/qstate.hpp"

namespace wvgeom::majorana {

/// A point on the Bloch sphere standing for one qubit factor of a symmetric
/// state. θ ∈ [0, π], φ ∈ [0, 2π).
struct MajoranaStar {
  double theta = 0.0;
  double phi = 0.0;

  static MajoranaStar from_angles(double theta, double phi);

  blochgeo::BlochVector bloch() const;
  /// (cos θ/2, e^{jφ} sin θ/2)
  PureState qubit() const;
};

struct PolynomialRoots {
  std::vector<Complex> finite;
  std::vector<int> multiplicity;  // parallel to `finite`; size of each root's cluster
  int infinity_count = 0;
};

struct StarSet {
  int dim = 0;
  std::vector<MajoranaStar> stars;  // dim − 1 entries, infinity stars included
  std::vector<int> multiplicity;    // parallel to `stars`
  std::vector<Complex> finite_roots;
  int infinity_count = 0;
};

/// Coefficients (−1)^k sqrt(C(N−1,k)) c_k, highest power z^{N−1} first.
std::vector<Complex> majorana_polynomial(const PureState& s);

/// Roots of a polynomial given highest power first. Leading coefficients
/// below 1e-13·max|c| count as roots at infinity. Finite roots come from the
/// companion matrix and are Newton-polished; nearby roots that reproduce the
/// coefficients as one repeated root are merged and reported with
/// multiplicity. Throws InvalidArgument for the zero polynomial.
PolynomialRoots roots(std::span<const Complex> coeffs);

MajoranaStar root_to_star(Complex z);
MajoranaStar infinity_star();

/// Stars of `s`, ordered by polar angle descending then azimuth ascending.
StarSet stars(const PureState& s);

/// The symmetric state Σ_P P[⊗ qubits] mapped onto the N-level basis,
/// canonicalized. N = stars.size() + 1.
PureState stars_to_state(std::span<const MajoranaStar> stars);
PureState stars_to_state(const StarSet& set);

/// |φ⟩^{⊗(N−1)} in the N-level basis: c_n = sqrt(C(N−1,n)) a^{N−1−n} b^n.
PureState coherent_state(int dim, const MajoranaStar& star);

/// Reorders `current` to minimize the total great-circle displacement from
/// `previous` (exhaustive over permutations).
StarSet track_stars(const StarSet& previous, const StarSet& current);

/// The permutation chosen by track_stars: result.stars[k] = current.stars[perm[k]].
std::vector<int> tracking_permutation(const StarSet& previous, const StarSet& current);

enum class MappingGauge {
  kAuto,              // closed form for qutrits, reflections otherwise
  kReflection,        // Householder u1, reflection on the complement for u2
  kQutritClosedForm,  // explicit 3×3 matrices parametrized by the qutrit angles
};

/// Two unitaries taking the pre-selected state to e0 and the effective state
/// to a coherent state |φ_i'⟩^{⊗(N−1)} with φ_i' in the xz half-plane.
struct CoherentMapping {
  UnitaryOp u1;
  UnitaryOp u2;
  MajoranaStar phi_i;       // north pole
  MajoranaStar phi_iprime;  // (β, 0)
  PureState mapped_pre;
  PureState mapped_eff;
  std::optional<PureState> mapped_post;
  MappingGauge gauge = MappingGauge::kReflection;
  bool ill_conditioned = false;  // |⟨eff|pre⟩| < 1e-10; eff was nudged toward pre
  std::optional<double> alpha;   // rotation angle of the closed-form u2

  UnitaryOp total() const { return u1.then(u2); }
};

CoherentMapping coherent_mapping(const PureState& pre, const PureState& eff,
                                 MappingGauge gauge = MappingGauge::kAuto);

struct ArgumentDecomposition {
  Complex weak_value;
  double exp_a = 0.0;
  double exp_a2 = 0.0;
  double prop_const = 0.0;
  std::vector<Complex> qubit_wvs;    // Π^{(j)}_{i',w}
  std::vector<double> solid_angles;  // Ω_j = −2 arg Π^{(j)}_{i',w}
  double arg_exp_a = 0.0;            // 0 or π
  double total_arg = 0.0;            // Σ arg Π^{(j)} − arg⟨Â⟩ (not wrapped)
  double direct_arg = 0.0;           // arg A_w
  double difference = 0.0;           // total − direct wrapped to (−π, π]
  double modulus_product = 0.0;      // |prop_const| Π |Π^{(j)}|
  double normalization_m = 0.0;      // squared norm of Σ_P P[⊗ φ_f^{(j)}]
  StarSet post_stars;
  CoherentMapping mapping;
};

/// Thrown when a post-state star is orthogonal to φ_i or φ_i'. Carries the
/// decomposition with NaN entries for the degenerate stars.
class DegenerateStarTriangle : public Error {
 public:
  DegenerateStarTriangle(const std::string& message, ArgumentDecomposition partial)
      : Error(ErrorCode::kDegenerateStarTriangle, message), partial_(std::move(partial)) {}

  const ArgumentDecomposition& partial() const { return partial_; }

 private:
  ArgumentDecomposition partial_;
};

/// Splits arg A_w into N − 1 qubit-projector arguments on the Bloch sphere.
ArgumentDecomposition decompose_argument(const Observable& a, const PureState& pre,
                                         const PureState& post,
                                         MappingGauge gauge = MappingGauge::kAuto,
                                         const Tolerances& tol = {});

/// Same, reusing a mapping built for (pre, effective state of `a`).
ArgumentDecomposition decompose_argument(const Observable& a, const PureState& pre,
                                         const PureState& post, const CoherentMapping& mapping,
                                         const Tolerances& tol = {});

/// Coordinates of three N-level states in an orthonormal frame of their span.
struct QutritReduction {
  PureState pre;
  PureState eff;
  PureState post;
  CMatrix coords;  // 3×N; reduced = coords · original
  int rank = 0;

  /// coords · Â · coords†. Preserves ⟨post|Â|pre⟩ whenever Â|pre⟩ lies in the span.
  Observable reduce(const Observable& a) const;
};

QutritReduction qutrit_reduction(const PureState& pre, const PureState& eff,
                                 const PureState& post);

/// qutrit_reduction followed by decompose_argument in three dimensions.
ArgumentDecomposition decompose_reduced(const Observable& a, const PureState& pre,
                                        const PureState& post, const Tolerances& tol = {});

}  // namespace wvgeom::majorana
