#pragma once

#include <array>
#include <complex>

#include <Eigen/Dense>

#include "wvgeom/errors.hpp"

namespace wvgeom {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;

/// Validation thresholds shared across modules. Defaults are the library's
/// contract; the CLI may override individual entries.
struct Tolerances {
  double unit_norm = 1e-12;           // |Σ|c_k|² − 1| for PureState
  double hermitian = 1e-10;           // max |A − A†| for Observable input
  double unitary = 1e-12;             // max |U†U − I| for UnitaryOp
  double orthogonal_pre_post = 1e-12; // |⟨post|pre⟩| below this is a divergence
  double vanishing_expectation = 1e-10;
  double nil_image = 1e-12;           // ⟨Â²⟩ below this means Â|pre⟩ = 0
  double divergence_flag = 1e-9;      // sweep rows flagged divergent
};

/// Argument in (−π, π]; the argument of 0 is defined as 0.
double arg(Complex z);

/// Wrap an angle into (−π, π].
double wrap_angle(double a);

/// A unit vector in C^N. Construction validates the norm.
class PureState {
 public:
  /// Validates Σ|c_k|² = 1 within `tol`, then renormalizes exactly.
  explicit PureState(CVector amps, double tol = Tolerances{}.unit_norm);

  /// Normalizes an arbitrary nonzero vector.
  static PureState normalized(const CVector& v);

  /// The computational basis vector e_k of C^N.
  static PureState basis(int dim, int k);

  int dim() const { return static_cast<int>(amps_.size()); }
  const CVector& amps() const { return amps_; }
  Complex operator[](int k) const { return amps_(k); }

 private:
  struct Unchecked {};
  PureState(CVector amps, Unchecked) : amps_(std::move(amps)) {}

  CVector amps_;
};

/// Parameters of a qutrit ray with its global phase removed:
/// (cos θ, e^{jχ1} cos ε sin θ, e^{jχ2} sin ε sin θ).
struct SphericalParam {
  double theta = 0.0;
  double epsilon = 0.0;
  double chi1 = 0.0;
  double chi2 = 0.0;
};

PureState from_spherical(const SphericalParam& p);

/// Inverse of from_spherical for the canonical representative of `s` (dim 3).
SphericalParam to_spherical(const PureState& s);

/// Removes the global phase: the first amplitude with modulus above 1e-14
/// becomes real and nonnegative.
PureState canonicalize(const PureState& s);

/// Same rule applied to a raw vector. Throws ZeroState for the zero vector.
CVector canonicalize(const CVector& v);

/// ⟨a|b⟩, conjugate-linear in `a`.
Complex overlap(const PureState& a, const PureState& b);

/// |⟨a|b⟩|².
double fidelity(const PureState& a, const PureState& b);

/// Hermitian N×N matrix. Input is validated against `tol` and then replaced
/// by its Hermitian part.
class Observable {
 public:
  explicit Observable(CMatrix mat, double tol = Tolerances{}.hermitian);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const CMatrix& mat() const { return mat_; }

  CVector apply(const PureState& s) const { return mat_ * s.amps(); }

 private:
  CMatrix mat_;
};

/// ⟨s|A|s⟩. Throws NotHermitianEffect if the imaginary residue exceeds 1e-12.
double expectation(const Observable& a, const PureState& s);

/// ⟨s|A²|s⟩ = ‖A s‖².
double second_moment(const Observable& a, const PureState& s);

class UnitaryOp {
 public:
  explicit UnitaryOp(CMatrix mat, double tol = Tolerances{}.unitary);

  static UnitaryOp identity(int dim);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const CMatrix& mat() const { return mat_; }

  PureState apply(const PureState& s) const;
  CVector apply(const CVector& v) const { return mat_ * v; }
  Observable conjugate(const Observable& a) const;  // U A U†
  UnitaryOp then(const UnitaryOp& next) const;      // next · this

 private:
  CMatrix mat_;
};

/// e^{−i arg⟨dst|src⟩}(I − 2|Δ⟩⟨Δ|) with
/// |Δ⟩ ∝ e^{−i arg⟨dst|src⟩}|src⟩ − |dst⟩. Satisfies U·src = dst.
/// Ray-equal inputs yield the phase-corrected identity.
UnitaryOp mapping_unitary(const PureState& src, const PureState& dst);

/// The eight Gell-Mann matrices λ1..λ8 (stored 0-based).
const std::array<CMatrix, 8>& gell_mann();

struct GellMannExpansion {
  double identity_coeff = 0.0;   // Tr(A)/3
  std::array<double, 8> coeffs{}; // Tr(A λ_a)/2
};

GellMannExpansion gell_mann_expand(const Observable& a);
CMatrix gell_mann_reconstruct(const GellMannExpansion& e);

/// n_x S_x + n_y S_y + n_z S_z for spin 1 (ħ = 1), built from Gell-Mann
/// matrices. `axis` must be a unit vector.
Observable spin1(const Eigen::Vector3d& axis);

}  // namespace wvgeom
