#include "wvgeom/qstate.hpp"

#include <cmath>
#include <string>

namespace wvgeom {

namespace {

constexpr double kCanonicalZero = 1e-14;
constexpr double kExpectationResidue = 1e-12;

void require_same_dim(int a, int b, const char* what) {
  if (a != b) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::string(what) + ": dimension " + std::to_string(a) +
                    " vs " + std::to_string(b));
  }
}

void require_square(const CMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + " must be a nonempty square matrix");
  }
}

}  // namespace

double arg(Complex z) {
  if (z == Complex(0.0, 0.0)) return 0.0;
  double a = std::arg(z);
  return a == -kPi ? kPi : a;
}

double wrap_angle(double a) {
  double w = std::remainder(a, 2.0 * kPi);
  return w <= -kPi ? w + 2.0 * kPi : w;
}

PureState::PureState(CVector amps, double tol) : amps_(std::move(amps)) {
  if (amps_.size() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "state must have dimension >= 1");
  }
  for (Eigen::Index k = 0; k < amps_.size(); ++k) {
    if (!std::isfinite(amps_(k).real()) || !std::isfinite(amps_(k).imag())) {
      throw Error(ErrorCode::kInvalidArgument, "state has non-finite amplitude");
    }
  }
  double n2 = amps_.squaredNorm();
  if (std::abs(n2 - 1.0) > tol) {
    throw Error(ErrorCode::kNotUnit,
                "state norm^2 = " + std::to_string(n2) + " is not 1");
  }
  amps_ /= std::sqrt(n2);
}

PureState PureState::normalized(const CVector& v) {
  double n = v.norm();
  if (!(n > 0.0)) throw Error(ErrorCode::kZeroState, "cannot normalize the zero vector");
  return PureState(CVector(v / n), Unchecked{});
}

PureState PureState::basis(int dim, int k) {
  CVector v = CVector::Zero(dim);
  v(k) = 1.0;
  return PureState(std::move(v), Unchecked{});
}

PureState from_spherical(const SphericalParam& p) {
  CVector v(3);
  const Complex j(0.0, 1.0);
  v(0) = std::cos(p.theta);
  v(1) = std::exp(j * p.chi1) * std::cos(p.epsilon) * std::sin(p.theta);
  v(2) = std::exp(j * p.chi2) * std::sin(p.epsilon) * std::sin(p.theta);
  return PureState::normalized(v);
}

SphericalParam to_spherical(const PureState& s) {
  if (s.dim() != 3) {
    throw Error(ErrorCode::kDimensionMismatch, "to_spherical needs a 3-level state");
  }
  CVector c = canonicalize(s.amps());
  SphericalParam p;
  p.theta = std::acos(std::min(1.0, std::abs(c(0))));
  p.epsilon = std::atan2(std::abs(c(2)), std::abs(c(1)));
  p.chi1 = arg(c(1));
  p.chi2 = arg(c(2));
  return p;
}

CVector canonicalize(const CVector& v) {
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    double m = std::abs(v(k));
    if (m > kCanonicalZero) return v * (std::conj(v(k)) / m);
  }
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    double m = std::abs(v(k));
    if (m > 0.0) return v * (std::conj(v(k)) / m);
  }
  throw Error(ErrorCode::kZeroState, "cannot canonicalize the zero vector");
}

PureState canonicalize(const PureState& s) {
  return PureState::normalized(canonicalize(s.amps()));
}

Complex overlap(const PureState& a, const PureState& b) {
  require_same_dim(a.dim(), b.dim(), "overlap");
  return a.amps().dot(b.amps());
}

double fidelity(const PureState& a, const PureState& b) {
  return std::norm(overlap(a, b));
}

Observable::Observable(CMatrix mat, double tol) : mat_(std::move(mat)) {
  require_square(mat_, "observable");
  double dev = (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff();
  if (!(dev <= tol)) {
    throw Error(ErrorCode::kNotHermitian,
                "observable deviates from Hermitian by " + std::to_string(dev));
  }
  mat_ = (0.5 * (mat_ + mat_.adjoint())).eval();
}

double expectation(const Observable& a, const PureState& s) {
  require_same_dim(a.dim(), s.dim(), "expectation");
  Complex e = s.amps().dot(a.apply(s));
  if (std::abs(e.imag()) > kExpectationResidue) {
    throw Error(ErrorCode::kNotHermitianEffect,
                "expectation has imaginary residue " + std::to_string(e.imag()));
  }
  return e.real();
}

double second_moment(const Observable& a, const PureState& s) {
  require_same_dim(a.dim(), s.dim(), "second_moment");
  return a.apply(s).squaredNorm();
}

UnitaryOp::UnitaryOp(CMatrix mat, double tol) : mat_(std::move(mat)) {
  require_square(mat_, "unitary");
  const auto n = mat_.rows();
  double dev = (mat_.adjoint() * mat_ - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (!(dev <= tol)) {
    throw Error(ErrorCode::kNotUnitary,
                "matrix deviates from unitary by " + std::to_string(dev));
  }
}

UnitaryOp UnitaryOp::identity(int dim) {
  return UnitaryOp(CMatrix::Identity(dim, dim));
}

PureState UnitaryOp::apply(const PureState& s) const {
  require_same_dim(dim(), s.dim(), "unitary apply");
  return PureState::normalized(mat_ * s.amps());
}

Observable UnitaryOp::conjugate(const Observable& a) const {
  require_same_dim(dim(), a.dim(), "unitary conjugate");
  return Observable(mat_ * a.mat() * mat_.adjoint());
}

UnitaryOp UnitaryOp::then(const UnitaryOp& next) const {
  require_same_dim(dim(), next.dim(), "unitary product");
  return UnitaryOp(next.mat_ * mat_);
}

UnitaryOp mapping_unitary(const PureState& src, const PureState& dst) {
  require_same_dim(src.dim(), dst.dim(), "mapping_unitary");
  const int n = src.dim();
  const Complex phase = std::polar(1.0, -arg(overlap(dst, src)));
  // Normalizing Δ by its computed length rather than sqrt(2(1 − r)) keeps the
  // reflection accurate when src and dst are nearly the same ray.
  CVector delta = phase * src.amps() - dst.amps();
  double len = delta.norm();
  CMatrix u = CMatrix::Identity(n, n);
  if (len > 1e-14) {
    delta /= len;
    u -= 2.0 * delta * delta.adjoint();
  }
  return UnitaryOp(phase * u);
}

const std::array<CMatrix, 8>& gell_mann() {
  static const std::array<CMatrix, 8> basis = [] {
    const Complex i(0.0, 1.0);
    std::array<CMatrix, 8> l;
    for (auto& m : l) m = CMatrix::Zero(3, 3);
    l[0](0, 1) = 1.0; l[0](1, 0) = 1.0;
    l[1](0, 1) = -i;  l[1](1, 0) = i;
    l[2](0, 0) = 1.0; l[2](1, 1) = -1.0;
    l[3](0, 2) = 1.0; l[3](2, 0) = 1.0;
    l[4](0, 2) = -i;  l[4](2, 0) = i;
    l[5](1, 2) = 1.0; l[5](2, 1) = 1.0;
    l[6](1, 2) = -i;  l[6](2, 1) = i;
    const double r3 = 1.0 / std::sqrt(3.0);
    l[7](0, 0) = r3; l[7](1, 1) = r3; l[7](2, 2) = -2.0 * r3;
    return l;
  }();
  return basis;
}

GellMannExpansion gell_mann_expand(const Observable& a) {
  if (a.dim() != 3) {
    throw Error(ErrorCode::kDimensionMismatch, "Gell-Mann expansion needs a 3x3 observable");
  }
  GellMannExpansion e;
  e.identity_coeff = a.mat().trace().real() / 3.0;
  const auto& l = gell_mann();
  for (int k = 0; k < 8; ++k) e.coeffs[k] = (a.mat() * l[k]).trace().real() / 2.0;
  return e;
}

CMatrix gell_mann_reconstruct(const GellMannExpansion& e) {
  CMatrix m = e.identity_coeff * CMatrix::Identity(3, 3);
  const auto& l = gell_mann();
  for (int k = 0; k < 8; ++k) m += e.coeffs[k] * l[k];
  return m;
}

Observable spin1(const Eigen::Vector3d& axis) {
  if (!std::isfinite(axis.norm()) || std::abs(axis.norm() - 1.0) > 1e-12) {
    throw Error(ErrorCode::kInvalidArgument, "spin axis must be a unit vector");
  }
  const auto& l = gell_mann();
  const double r2 = 1.0 / std::sqrt(2.0);
  CMatrix sx = r2 * (l[0] + l[5]);
  CMatrix sy = r2 * (l[1] + l[6]);
  CMatrix sz = 0.5 * (l[2] + std::sqrt(3.0) * l[7]);
  return Observable(axis.x() * sx + axis.y() * sy + axis.z() * sz);
}

}  // namespace wvgeom
