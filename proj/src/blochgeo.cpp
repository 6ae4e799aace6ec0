#include "wvgeom/blochgeo.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace wvgeom::blochgeo {

namespace {

constexpr double kOrthogonal = 1e-12;

Eigen::Vector3d any_perpendicular(const Eigen::Vector3d& a) {
  Eigen::Vector3d trial = std::abs(a.z()) < 0.9 ? Eigen::Vector3d::UnitZ() : Eigen::Vector3d::UnitX();
  return (trial - trial.dot(a) * a).normalized();
}

}  // namespace

BlochVector::BlochVector(const Eigen::Vector3d& v, double tol) {
  const double n = v.norm();
  if (!std::isfinite(n) || std::abs(n - 1.0) > tol) {
    throw Error(ErrorCode::kNotUnit, "Bloch vector must have unit length");
  }
  v_ = v / n;
}

BlochVector BlochVector::from_angles(double theta, double phi) {
  return BlochVector(Eigen::Vector3d(std::sin(theta) * std::cos(phi),
                                     std::sin(theta) * std::sin(phi), std::cos(theta)));
}

BlochVector BlochVector::from_qubit(const PureState& q) {
  if (q.dim() != 2) throw Error(ErrorCode::kDimensionMismatch, "qubit must have dimension 2");
  const Complex c = std::conj(q[0]) * q[1];
  return BlochVector(Eigen::Vector3d(2.0 * c.real(), 2.0 * c.imag(),
                                     std::norm(q[0]) - std::norm(q[1])),
                     1e-9);
}

PureState BlochVector::qubit() const {
  const double theta = std::acos(std::clamp(v_.z(), -1.0, 1.0));
  const double phi = std::atan2(v_.y(), v_.x());
  CVector q(2);
  q(0) = std::cos(theta / 2.0);
  q(1) = std::polar(std::sin(theta / 2.0), phi);
  return PureState::normalized(q);
}

double solid_angle_bargmann(const PureState& a, const PureState& m, const PureState& b) {
  if (a.dim() != 2 || m.dim() != 2 || b.dim() != 2) {
    throw Error(ErrorCode::kDimensionMismatch, "solid angles need qubit states");
  }
  const Complex ab = overlap(a, b);
  const Complex bm = overlap(b, m);
  const Complex ma = overlap(m, a);
  const char* bad = std::abs(ab) <= kOrthogonal   ? "a,b"
                    : std::abs(bm) <= kOrthogonal ? "b,m"
                    : std::abs(ma) <= kOrthogonal ? "m,a"
                                                  : nullptr;
  if (bad != nullptr) {
    throw Error(ErrorCode::kDegenerateTriangle,
                std::string("orthogonal vertex pair (") + bad + ") in qubit triangle");
  }
  return -2.0 * arg(ab * bm * ma);
}

double solid_angle_oosterom(const BlochVector& a, const BlochVector& b, const BlochVector& c) {
  const double num = a.vec().dot(b.vec().cross(c.vec()));
  const double den = 1.0 + a.vec().dot(b.vec()) + b.vec().dot(c.vec()) + c.vec().dot(a.vec());
  if (std::abs(num) < 1e-15 && std::abs(den) < 1e-15) {
    throw Error(ErrorCode::kAntipodalDegenerate,
                "solid angle undefined for an antipodal degenerate triangle");
  }
  return 2.0 * std::atan2(num, den);
}

double star_angle(const BlochVector& f1, const BlochVector& f2) {
  const double s = f1.vec().cross(f2.vec()).norm();
  const double c = f1.vec().dot(f2.vec());
  return std::atan2(s, c) * 180.0 / kPi;
}

Eigen::Vector3d octant_projection(const PureState& s) {
  if (s.dim() != 3) throw Error(ErrorCode::kDimensionMismatch, "octant projection needs a qutrit");
  return Eigen::Vector3d(std::abs(s[1]), std::abs(s[2]), std::abs(s[0]));
}

std::vector<PureState> fs_geodesic(const PureState& s1, const PureState& s2, int samples) {
  if (samples < 2) throw Error(ErrorCode::kInvalidArgument, "geodesic needs at least 2 samples");
  const Complex ov = overlap(s1, s2);
  if (std::abs(ov) <= kOrthogonal) {
    throw Error(ErrorCode::kOrthogonalEndpoints, "geodesic between orthogonal states is not unique");
  }
  const double c = std::min(1.0, std::abs(ov));
  const CVector aligned = s2.amps() * std::polar(1.0, -arg(ov));
  CVector perp = aligned - c * s1.amps();
  const double perp_norm = perp.norm();
  const double span = std::atan2(perp_norm, c);

  std::vector<PureState> out;
  out.reserve(samples);
  for (int k = 0; k < samples; ++k) {
    const double t = static_cast<double>(k) / (samples - 1);
    CVector v = s1.amps();
    if (perp_norm > 1e-15) {
      v = std::cos(t * span) * s1.amps() + std::sin(t * span) * (perp / perp_norm);
    }
    out.push_back(PureState::normalized(canonicalize(v)));
  }
  return out;
}

std::vector<Eigen::Vector3d> great_circle_arc(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                                              int samples) {
  if (samples < 2) throw Error(ErrorCode::kInvalidArgument, "arc needs at least 2 samples");
  const Eigen::Vector3d ua = a.normalized();
  const Eigen::Vector3d ub = b.normalized();
  const double angle = std::atan2(ua.cross(ub).norm(), ua.dot(ub));
  Eigen::Vector3d perp = ub - ua.dot(ub) * ua;
  if (perp.norm() < 1e-12) perp = any_perpendicular(ua);
  perp.normalize();

  std::vector<Eigen::Vector3d> out;
  out.reserve(samples);
  for (int k = 0; k < samples; ++k) {
    const double t = angle * k / (samples - 1);
    out.push_back((std::cos(t) * ua + std::sin(t) * perp).normalized());
  }
  return out;
}

std::string arc_kind_name(ArcKind kind) {
  return kind == ArcKind::kGreatCircle ? "great-circle" : "cp2-geodesic-projection";
}

const ScenePoint* SceneGraph::find(const std::string& label) const {
  for (const auto& p : points) {
    if (p.label == label) return &p;
  }
  return nullptr;
}

bool SceneGraph::valid() const {
  for (const auto& a : arcs) {
    if (!find(a.from) || !find(a.to)) return false;
    for (const auto& s : a.samples) {
      if (std::abs(s.norm() - 1.0) > 1e-9) return false;
    }
  }
  for (const auto& t : triangles) {
    for (const auto& v : t.verts) {
      if (!find(v)) return false;
    }
  }
  return true;
}

double coplanarity(std::span<const Eigen::Vector3d> points) {
  if (points.size() < 3) return 0.0;
  Eigen::MatrixXd m(points.size(), 3);
  for (size_t k = 0; k < points.size(); ++k) m.row(k) = points[k].transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(2) / std::sqrt(static_cast<double>(points.size()));
}

}  // namespace wvgeom::blochgeo
