#pragma once

#include <cmath>
#include <random>

#include "wvgeom/qstate.hpp"

namespace testsupport {

using wvgeom::CMatrix;
using wvgeom::Complex;
using wvgeom::CVector;

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240917);
  return gen;
}

inline Complex gaussian_complex(std::mt19937_64& g) {
  std::normal_distribution<double> n(0.0, 1.0);
  return {n(g), n(g)};
}

inline CVector random_vector(int dim, std::mt19937_64& g = rng()) {
  CVector v(dim);
  for (int k = 0; k < dim; ++k) v(k) = gaussian_complex(g);
  return v;
}

inline wvgeom::PureState random_state(int dim, std::mt19937_64& g = rng()) {
  return wvgeom::PureState::normalized(random_vector(dim, g));
}

inline CMatrix random_hermitian(int dim, std::mt19937_64& g = rng()) {
  CMatrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) m(r, c) = gaussian_complex(g);
  }
  return 0.5 * (m + m.adjoint());
}

// Haar-like unitary: QR of a Ginibre matrix with the R-diagonal phases removed.
inline CMatrix random_unitary(int dim, std::mt19937_64& g = rng()) {
  CMatrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) m(r, c) = gaussian_complex(g);
  }
  Eigen::HouseholderQR<CMatrix> qr(m);
  CMatrix q = qr.householderQ();
  const CMatrix rr = qr.matrixQR();
  for (int k = 0; k < dim; ++k) q.col(k) *= std::polar(1.0, std::arg(rr(k, k)));
  return q;
}

inline Eigen::Vector3d random_unit3(std::mt19937_64& g = rng()) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Vector3d v(n(g), n(g), n(g));
  return v.normalized();
}

// Independent evaluation of ⟨post|A|pre⟩/⟨post|pre⟩ with raw Eigen products.
inline Complex direct_weak_value(const CMatrix& a, const CVector& pre, const CVector& post) {
  return (post.adjoint() * a * pre)(0, 0) / (post.adjoint() * pre)(0, 0);
}

inline double angle_distance(double a, double b) {
  return std::abs(std::remainder(a - b, 2.0 * 3.14159265358979323846));
}

inline CVector ket(std::initializer_list<Complex> amps) {
  CVector v(static_cast<Eigen::Index>(amps.size()));
  Eigen::Index k = 0;
  for (const auto& a : amps) v(k++) = a;
  return v;
}

}  // namespace testsupport
