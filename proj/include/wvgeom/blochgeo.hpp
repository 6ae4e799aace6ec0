#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wvgeom/qstate.hpp"

namespace wvgeom::blochgeo {

/// Unit vector on the Bloch sphere.
class BlochVector {
 public:
  /// Validates |v| = 1 within `tol` and renormalizes.
  explicit BlochVector(const Eigen::Vector3d& v, double tol = 1e-12);

  static BlochVector from_angles(double theta, double phi);
  /// Bloch vector of a qubit state (dimension 2).
  static BlochVector from_qubit(const PureState& q);

  const Eigen::Vector3d& vec() const { return v_; }
  double x() const { return v_.x(); }
  double y() const { return v_.y(); }
  double z() const { return v_.z(); }

  /// The qubit (cos θ/2, e^{jφ} sin θ/2) pointing along this vector.
  PureState qubit() const;

 private:
  Eigen::Vector3d v_;
};

/// Ω = −2 arg(⟨a|b⟩⟨b|m⟩⟨m|a⟩) in [−2π, 2π). Equals the oriented solid angle
/// of the spherical triangle (a, m, b) in that vertex order. Throws
/// DegenerateTriangle naming the orthogonal pair.
double solid_angle_bargmann(const PureState& a, const PureState& m, const PureState& b);

/// Oriented solid angle of the triangle (a, b, c) from
/// tan(Ω/2) = a·(b×c) / (1 + a·b + b·c + c·a).
double solid_angle_oosterom(const BlochVector& a, const BlochVector& b, const BlochVector& c);

/// Great-circle angle between two Bloch vectors in degrees, in [0, 180].
double star_angle(const BlochVector& f1, const BlochVector& f2);

/// Real point (|ψ1|, |ψ2|, |ψ0|) of a qutrit ray on the positive octant.
Eigen::Vector3d octant_projection(const PureState& s);

/// `samples` points (at least 2) on the Fubini–Study geodesic from s1 to s2,
/// canonicalized. Throws OrthogonalEndpoints when the geodesic is not unique.
std::vector<PureState> fs_geodesic(const PureState& s1, const PureState& s2, int samples);

/// `samples` points along the shorter great circle from a to b. Antipodal
/// endpoints pick a deterministic perpendicular.
std::vector<Eigen::Vector3d> great_circle_arc(const Eigen::Vector3d& a,
                                              const Eigen::Vector3d& b, int samples);

enum class ArcKind { kGreatCircle, kCp2GeodesicProjection };

std::string arc_kind_name(ArcKind kind);

struct ScenePoint {
  std::string label;
  Eigen::Vector3d xyz;
};

struct SceneArc {
  std::string from;
  std::string to;
  ArcKind kind = ArcKind::kGreatCircle;
  std::vector<Eigen::Vector3d> samples;
};

struct SceneTriangle {
  std::array<std::string, 3> verts;
  double omega = 0.0;
};

struct SceneGraph {
  std::vector<ScenePoint> points;
  std::vector<SceneArc> arcs;
  std::vector<SceneTriangle> triangles;
  std::string caption;

  const ScenePoint* find(const std::string& label) const;
  /// Every arc/triangle label resolves and every arc sample is unit length
  /// within 1e-9.
  bool valid() const;
};

/// Smallest singular value of the stacked unit point vectors divided by
/// sqrt(count): the RMS distance from the best plane through the origin.
double coplanarity(std::span<const Eigen::Vector3d> points);

}  // namespace wvgeom::blochgeo
