#include "doctest.h"
#include "support.hpp"
#include "wvgeom/blochgeo.hpp"
#include "wvgeom/experiments.hpp"
#include "wvgeom/scene.hpp"
#include "wvgeom/svg.hpp"

using namespace wvgeom;
using namespace wvgeom::blochgeo;

namespace {

BlochVector random_bloch() { return BlochVector(testsupport::random_unit3()); }

// Girard: spherical excess from the three vertex angles, signed by the
// orientation of the vertex triple.
double solid_angle_girard(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c) {
  auto vertex_angle = [](const Eigen::Vector3d& v, const Eigen::Vector3d& p, const Eigen::Vector3d& q) {
    const Eigen::Vector3d tp = (p - v.dot(p) * v).normalized();
    const Eigen::Vector3d tq = (q - v.dot(q) * v).normalized();
    return std::acos(std::clamp(tp.dot(tq), -1.0, 1.0));
  };
  const double excess = vertex_angle(a, b, c) + vertex_angle(b, c, a) + vertex_angle(c, a, b) - kPi;
  return a.dot(b.cross(c)) >= 0.0 ? excess : -excess;
}

}  // namespace

TEST_SUITE("blochgeo") {

TEST_CASE("Bloch vectors") {
  CHECK_THROWS_AS(BlochVector(Eigen::Vector3d(1.0, 1.0, 0.0)), Error);
  const auto v = BlochVector::from_angles(0.7, 2.2);
  const auto back = BlochVector::from_qubit(v.qubit());
  CHECK((back.vec() - v.vec()).norm() < 1e-14);
  CHECK(BlochVector::from_qubit(PureState::basis(2, 0)).z() == doctest::Approx(1.0));
  CHECK(BlochVector::from_qubit(PureState::basis(2, 1)).z() == doctest::Approx(-1.0));
}

TEST_CASE("solid angle of the positive octant") {
  const BlochVector x(Eigen::Vector3d::UnitX()), y(Eigen::Vector3d::UnitY()), z(Eigen::Vector3d::UnitZ());
  CHECK(solid_angle_oosterom(x, y, z) == doctest::Approx(kPi / 2.0));
  CHECK(solid_angle_oosterom(x, z, y) == doctest::Approx(-kPi / 2.0));
  CHECK(solid_angle_bargmann(x.qubit(), y.qubit(), z.qubit()) == doctest::Approx(kPi / 2.0));
  CHECK(solid_angle_bargmann(x.qubit(), z.qubit(), y.qubit()) == doctest::Approx(-kPi / 2.0));
}

TEST_CASE("Bargmann phase and vector formula agree") {
  int compared = 0;
  for (int k = 0; k < 10000; ++k) {
    const auto a = random_bloch(), m = random_bloch(), b = random_bloch();
    const double geo = solid_angle_oosterom(a, m, b);
    if (std::abs(std::abs(geo) - 2.0 * kPi) < 1e-6) continue;
    const double ph = solid_angle_bargmann(a.qubit(), m.qubit(), b.qubit());
    CHECK(std::abs(ph - geo) < 1e-10);
    ++compared;
  }
  CHECK(compared > 9900);
}

TEST_CASE("vector formula against the spherical excess") {
  for (int k = 0; k < 1000; ++k) {
    const auto a = random_bloch(), b = random_bloch(), c = random_bloch();
    CHECK(std::abs(solid_angle_oosterom(a, b, c) - solid_angle_girard(a.vec(), b.vec(), c.vec())) < 1e-9);
  }
}

TEST_CASE("solid angle orientation and degeneracy") {
  for (int k = 0; k < 100; ++k) {
    const auto a = random_bloch(), m = random_bloch(), b = random_bloch();
    CHECK(solid_angle_oosterom(a, m, b) == doctest::Approx(-solid_angle_oosterom(a, b, m)).epsilon(1e-9));
    CHECK(solid_angle_oosterom(a, m, b) == doctest::Approx(solid_angle_oosterom(m, b, a)).epsilon(1e-9));
  }
  const BlochVector n(Eigen::Vector3d::UnitZ()), s(-Eigen::Vector3d::UnitZ());
  CHECK_THROWS_AS(solid_angle_bargmann(n.qubit(), s.qubit(), random_bloch().qubit()), Error);
  // Vertices on one great circle enclose nothing.
  const auto e1 = BlochVector::from_angles(kPi / 2.0, 0.1), e2 = BlochVector::from_angles(kPi / 2.0, 1.3);
  CHECK(std::abs(solid_angle_oosterom(e1, e2, BlochVector::from_angles(kPi / 2.0, 2.0))) < 1e-12);
}

TEST_CASE("star angle") {
  const BlochVector x(Eigen::Vector3d::UnitX()), y(Eigen::Vector3d::UnitY());
  CHECK(star_angle(x, y) == doctest::Approx(90.0));
  CHECK(star_angle(x, x) == 0.0);
  CHECK(star_angle(x, BlochVector(-Eigen::Vector3d::UnitX())) == doctest::Approx(180.0));
  for (int k = 0; k < 200; ++k) {
    const auto a = random_bloch(), b = random_bloch();
    CHECK(star_angle(a, b) == doctest::Approx(star_angle(b, a)));
    const Eigen::Matrix3d r = Eigen::Quaterniond::UnitRandom().toRotationMatrix();
    CHECK(std::abs(star_angle(BlochVector(r * a.vec()), BlochVector(r * b.vec())) - star_angle(a, b)) < 1e-9);
    const double oracle = std::acos(std::clamp(a.vec().dot(b.vec()), -1.0, 1.0)) * 180.0 / kPi;
    CHECK(std::abs(star_angle(a, b) - oracle) < 1e-6);
  }
}

TEST_CASE("octant projection") {
  CHECK((octant_projection(PureState::basis(3, 0)) - Eigen::Vector3d(0, 0, 1)).norm() == 0.0);
  CHECK((octant_projection(PureState::basis(3, 1)) - Eigen::Vector3d(1, 0, 0)).norm() == 0.0);
  const auto s = testsupport::random_state(3);
  const auto p = octant_projection(s);
  CHECK(p.norm() == doctest::Approx(1.0));
  CHECK(p.minCoeff() >= 0.0);
  // Invariant under per-component phases.
  CVector phased = s.amps();
  phased(1) *= std::polar(1.0, 0.7);
  phased(2) *= std::polar(1.0, -2.1);
  CHECK((octant_projection(PureState(phased)) - p).norm() < 1e-15);
}

TEST_CASE("Fubini-Study geodesic") {
  for (int k = 0; k < 100; ++k) {
    const auto a = testsupport::random_state(3), b = testsupport::random_state(3);
    const auto path = fs_geodesic(a, b, 21);
    REQUIRE(path.size() == 21);
    CHECK(fidelity(path.front(), a) > 1.0 - 1e-14);
    CHECK(fidelity(path.back(), b) > 1.0 - 1e-14);
    const double dist = std::acos(std::min(1.0, std::abs(overlap(a, b))));
    CHECK(std::abs(std::abs(overlap(path[10], a)) - std::cos(dist / 2.0)) < 1e-12);
    // Equal steps along the path.
    for (size_t j = 1; j < path.size(); ++j) {
      const double step = std::acos(std::min(1.0, std::abs(overlap(path[j - 1], path[j]))));
      CHECK(std::abs(step - dist / 20.0) < 1e-7);
    }
  }
  try {
    fs_geodesic(PureState::basis(3, 0), PureState::basis(3, 2), 5);
    FAIL("expected OrthogonalEndpoints");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kOrthogonalEndpoints);
  }
}

TEST_CASE("great circle arcs") {
  const auto a = testsupport::random_unit3(), b = testsupport::random_unit3();
  const auto arc = great_circle_arc(a, b, 33);
  CHECK((arc.front() - a).norm() < 1e-14);
  CHECK((arc.back() - b).norm() < 1e-14);
  for (const auto& p : arc) CHECK(p.norm() == doctest::Approx(1.0));
  const auto anti = great_circle_arc(a, -a, 9);
  for (const auto& p : anti) CHECK(p.norm() == doctest::Approx(1.0));
  CHECK(std::abs(anti[4].dot(a)) < 1e-12);
}

TEST_CASE("coplanarity") {
  std::vector<Eigen::Vector3d> equator;
  for (int k = 0; k < 5; ++k) equator.emplace_back(std::cos(k), std::sin(k), 0.0);
  CHECK(coplanarity(equator) < 1e-14);
  const std::vector<Eigen::Vector3d> axes{Eigen::Vector3d::UnitX(), Eigen::Vector3d::UnitY(),
                                          Eigen::Vector3d::UnitZ()};
  CHECK(coplanarity(axes) == doctest::Approx(1.0 / std::sqrt(3.0)));
}

TEST_CASE("Bloch-sphere scenes") {
  const auto report = experiments::cnot_case();
  const auto& g = report.full_scene;
  CHECK(g.valid());
  CHECK(g.triangles.size() == 3);
  for (const char* label : {"i", "i'", "f1", "f2", "f3"}) CHECK(g.find(label) != nullptr);
  CHECK(g.find("f4") == nullptr);
  for (size_t j = 0; j < g.triangles.size(); ++j) {
    CHECK(g.triangles[j].omega == report.full.solid_angles[j]);
  }
  for (const auto& arc : g.arcs) {
    CHECK(arc.kind == ArcKind::kGreatCircle);
    CHECK((arc.samples.front() - g.find(arc.from)->xyz).norm() < 1e-12);
    CHECK((arc.samples.back() - g.find(arc.to)->xyz).norm() < 1e-12);
  }
  CHECK(report.reduced_scene.triangles.size() == 2);
  CHECK(report.cp2_scene.valid());
}

TEST_CASE("CP2 scene") {
  const auto report = experiments::cnot_case();
  const auto& g = report.cp2_scene;
  CHECK(g.triangles.size() == 1);
  for (const auto& arc : g.arcs) CHECK(arc.kind == ArcKind::kCp2GeodesicProjection);
  for (const auto& p : g.points) CHECK(p.xyz.minCoeff() >= 0.0);
  const auto& red = report.reduction;
  const double oracle = -2.0 * std::arg(weakval::bargmann3(red.pre, red.post, red.eff).value);
  CHECK(g.triangles[0].omega == doctest::Approx(oracle));
}

TEST_CASE("SVG rendering") {
  const auto g = experiments::cnot_case().full_scene;
  const std::string a = svg::render_scene(g);
  CHECK(a.rfind("<?xml", 0) == 0);
  CHECK(a.find("<svg") != std::string::npos);
  CHECK(a.find("</svg>") != std::string::npos);
  CHECK(a == svg::render_scene(g));
  CHECK(a != svg::render_scene(g, Eigen::Vector3d(0.0, 0.0, 1.0)));
  CHECK_THROWS_AS(svg::render_scene(g, Eigen::Vector3d::Zero()), Error);
  CHECK(svg::xml_escape("a<b & \"c\">") == "a&lt;b &amp; &quot;c&quot;&gt;");

  auto degenerate = g;
  degenerate.triangles[0].omega = std::nan("");
  CHECK(svg::render_scene(degenerate).find("undefined") != std::string::npos);
}

}  // TEST_SUITE
