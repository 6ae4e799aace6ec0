#include "doctest.h"
#include "support.hpp"
#include "wvgeom/weakval.hpp"

using namespace wvgeom;
using namespace wvgeom::weakval;
using testsupport::ket;

namespace {

const Complex J(0.0, 1.0);

CMatrix cnot_matrix() {
  CMatrix m = CMatrix::Zero(4, 4);
  m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
  return m;
}

CMatrix projector(const PureState& s) { return s.amps() * s.amps().adjoint(); }

}  // namespace

TEST_SUITE("weakval") {

TEST_CASE("weak value examples") {
  SUBCASE("post = pre collapses to the expectation") {
    const auto pre = testsupport::random_state(4);
    const Observable a(testsupport::random_hermitian(4));
    const auto r = weak_value(a, pre, pre);
    CHECK(std::abs(r.value - expectation(a, pre)) < 1e-12);
  }
  SUBCASE("CNOT") {
    const CVector pre = ket({1.0, -J, 1.0, -J}) / 2.0;
    const CVector post = ket({1.0, 0.0, -2.0, 0.0}) / std::sqrt(5.0);
    const Complex oracle = testsupport::direct_weak_value(cnot_matrix(), pre, post);
    CHECK(std::abs(oracle - Complex(-1.0, -2.0)) < 1e-12);
    const auto r = weak_value(Observable(cnot_matrix()), PureState(pre), PureState(post));
    CHECK(std::abs(r.value - oracle) < 1e-12);
    CHECK(r.modulus == doctest::Approx(std::abs(oracle)));
    CHECK(r.argument == doctest::Approx(std::arg(oracle)));
    CHECK(r.exp_a == doctest::Approx(0.5));
    CHECK(r.exp_a2 == doctest::Approx(1.0));
  }
  SUBCASE("observable annihilating the pre-selected state") {
    const auto r = weak_value(Observable(gell_mann()[5]), PureState::basis(3, 0),
                              PureState::normalized(ket({1.0, 1.0, 1.0})));
    CHECK(std::abs(r.value) == 0.0);
    CHECK_FALSE(r.effective_state.has_value());
    CHECK_FALSE(r.prop_const.has_value());
  }
  SUBCASE("orthogonal pre and post") {
    try {
      weak_value(Observable(CMatrix::Identity(2, 2)), PureState::basis(2, 0), PureState::basis(2, 1));
      FAIL("expected OrthogonalPrePost");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kOrthogonalPrePost);
      CHECK(e.name() == "orthogonal-pre-post");
    }
  }
}

TEST_CASE("effective state") {
  const Observable sz(CMatrix(Eigen::Vector3cd(1.0, 0.0, -1.0).asDiagonal()));
  const PureState eff = effective_state(sz, PureState::normalized(ket({2.0, 1.0, J})));
  CHECK((eff.amps() - ket({2.0, 0.0, -J}) / std::sqrt(5.0)).cwiseAbs().maxCoeff() < 1e-12);

  const PureState e0 = PureState::basis(3, 0);
  CHECK((effective_state(Observable(projector(e0)), e0).amps() - e0.amps()).norm() < 1e-15);

  const PureState cnot_eff = effective_state(Observable(cnot_matrix()),
                                             PureState::normalized(ket({1.0, -J, 1.0, -J})));
  CHECK((cnot_eff.amps() - ket({1.0, -J, -J, 1.0}) / 2.0).cwiseAbs().maxCoeff() < 1e-12);

  CHECK_THROWS_AS(effective_state(Observable(gell_mann()[5]), e0), Error);
}

TEST_CASE("proportional decomposition") {
  SUBCASE("S_z constant is 5/3 for any post-selection") {
    const Observable sz(CMatrix(Eigen::Vector3cd(1.0, 0.0, -1.0).asDiagonal()));
    const PureState pre = PureState::normalized(ket({2.0, 1.0, J}));
    for (int k = 0; k < 20; ++k) {
      const auto d = proportional_decomposition(sz, pre, testsupport::random_state(3));
      CHECK(d.prop_const == doctest::Approx(5.0 / 3.0).epsilon(1e-14));
    }
  }
  SUBCASE("projector onto pre and its negative") {
    const auto pre = testsupport::random_state(3);
    const auto post = testsupport::random_state(3);
    const auto d = proportional_decomposition(Observable(projector(pre)), pre, post);
    CHECK(d.prop_const == doctest::Approx(1.0));
    CHECK(std::abs(d.projector_wv - weak_value(Observable(projector(pre)), pre, post).value) < 1e-12);
    const auto neg = proportional_decomposition(Observable(-projector(pre)), pre, post);
    CHECK(neg.prop_const == doctest::Approx(-1.0));
    const double shift = arg(weak_value(Observable(-projector(pre)), pre, post).value) -
                         arg(neg.projector_wv);
    CHECK(testsupport::angle_distance(shift, kPi) < 1e-12);
  }
  SUBCASE("factorization on random instances") {
    for (int n = 2; n <= 6; ++n) {
      for (int k = 0; k < 100; ++k) {
        const Observable a(testsupport::random_hermitian(n));
        const auto pre = testsupport::random_state(n);
        const auto post = testsupport::random_state(n);
        const auto r = weak_value(a, pre, post);
        if (!r.prop_const) continue;
        const auto d = proportional_decomposition(a, pre, post);
        CHECK(std::abs(d.prop_const * d.projector_wv - r.value) < 1e-9 * std::max(1.0, r.modulus));
      }
    }
  }
  SUBCASE("vanishing expectation") {
    try {
      proportional_decomposition(Observable(gell_mann()[2]), PureState::normalized(ket({1.0, 1.0, 0.0})),
                                 PureState::normalized(ket({1.0, 0.0, 1.0})));
      FAIL("expected VanishingExpectation");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kVanishingExpectation);
    }
  }
}

TEST_CASE("epsilon limit of the argument") {
  const auto& schedule = default_epsilon_schedule();
  SUBCASE("lambda3 on a balanced state") {
    const Observable l3(gell_mann()[2]);
    const PureState pre = PureState::normalized(ket({1.0, 1.0, 0.0}));
    const PureState post = PureState::normalized(ket({1.0, 0.0, 1.0}));
    const auto lim = epsilon_limit_argument(l3, pre, post, schedule);
    const double oracle = std::arg(testsupport::direct_weak_value(l3.mat(), pre.amps(), post.amps()));
    CHECK(testsupport::angle_distance(lim.limit_arg, oracle) < 1e-6);
    CHECK(testsupport::angle_distance(lim.direct_arg, oracle) < 1e-12);
    CHECK(lim.table.size() == schedule.size());
  }
  SUBCASE("real positive and real negative weak values") {
    // ⟨λ3⟩ = 0 on (1,1,0)/√2; the post-state phases set the sign of A_w.
    const Observable l3(gell_mann()[2]);
    const PureState pre = PureState::normalized(ket({1.0, 1.0, 0.0}));
    const PureState pos = PureState::normalized(ket({2.0, 1.0, 0.0}));
    const PureState neg = PureState::normalized(ket({1.0, 2.0, 0.0}));
    CHECK(testsupport::angle_distance(epsilon_limit_argument(l3, pre, pos, schedule).limit_arg, 0.0) < 1e-6);
    CHECK(testsupport::angle_distance(epsilon_limit_argument(l3, pre, neg, schedule).limit_arg, kPi) < 1e-6);
  }
  SUBCASE("random zero-mean observables") {
    for (int k = 0; k < 50; ++k) {
      const auto pre = testsupport::random_state(4);
      CMatrix m = testsupport::random_hermitian(4);
      m -= expectation(Observable(m), pre) * CMatrix::Identity(4, 4);
      const auto post = testsupport::random_state(4);
      // Skip instances whose weak value nearly vanishes; its argument is ill-conditioned.
      if (std::abs(post.amps().dot(m * pre.amps())) < 0.05) continue;
      const auto lim = epsilon_limit_argument(Observable(m), pre, post, schedule);
      const double oracle = std::arg(testsupport::direct_weak_value(m, pre.amps(), post.amps()));
      // Extrapolation removes the first-order term: far closer than the raw estimate.
      const double miss = testsupport::angle_distance(lim.limit_arg, oracle);
      CHECK(miss < 1e-5);
      CHECK(miss < 0.02 * testsupport::angle_distance(lim.table.back().argument, oracle) + 1e-12);
    }
  }
  SUBCASE("schedule validation") {
    const Observable l3(gell_mann()[2]);
    const PureState pre = PureState::normalized(ket({1.0, 1.0, 0.0}));
    const PureState post = PureState::normalized(ket({1.0, 0.0, 1.0}));
    const std::vector<double> ascending{1e-5, 1e-3};
    const std::vector<double> single{1e-3};
    CHECK_THROWS_AS(epsilon_limit_argument(l3, pre, post, ascending), Error);
    CHECK_THROWS_AS(epsilon_limit_argument(l3, pre, post, single), Error);
  }
}

TEST_CASE("third-order Bargmann invariant") {
  const auto s = testsupport::random_state(3);
  CHECK(std::abs(bargmann3(s, s, s).value - 1.0) < 1e-14);

  // Qubits along x, y, z: ⟨a|b⟩⟨b|c⟩⟨c|a⟩ = (1 + i)/4 · ... with arg +π/4.
  const PureState x = PureState::normalized(ket({1.0, 1.0}));
  const PureState y = PureState::normalized(ket({1.0, J}));
  const PureState z = PureState::basis(2, 0);
  const auto b = bargmann3(x, y, z);
  CHECK(std::abs(b.value) == doctest::Approx(0.5 / std::sqrt(2.0)));
  CHECK(arg(b.value) == doctest::Approx(kPi / 4.0));
  CHECK(std::abs(bargmann3(z, PureState::basis(2, 1), x).value) == 0.0);

  for (int k = 0; k < 100; ++k) {
    const auto a1 = testsupport::random_state(4);
    const auto a2 = testsupport::random_state(4);
    const auto a3 = testsupport::random_state(4);
    const Complex v = bargmann3(a1, a2, a3).value;
    CHECK(std::abs(v - bargmann3(a2, a3, a1).value) < 1e-15);
    CHECK(std::abs(v) <= 1.0 + 1e-15);
    // Tr(Π1 Π2 Π3) as the oracle.
    const CMatrix t = (a1.amps() * a1.amps().adjoint()) * (a2.amps() * a2.amps().adjoint()) *
                      (a3.amps() * a3.amps().adjoint());
    CHECK(std::abs(v - t.trace()) < 1e-14);
  }
}

TEST_CASE("projector weak value as a Bargmann ratio") {
  for (int k = 0; k < 100; ++k) {
    const auto pre = testsupport::random_state(3);
    const auto mid = testsupport::random_state(3);
    const auto post = testsupport::random_state(3);
    const Complex pw = projector_weak_value(mid, pre, post);
    const Complex ratio = bargmann3(post, mid, pre).value / std::norm(overlap(post, pre));
    CHECK(std::abs(pw - ratio) < 1e-12 * std::max(1.0, std::abs(pw)));
  }
}

TEST_CASE("order-n Bargmann argument reduction") {
  for (int n = 3; n <= 5; ++n) {
    const int dim = n == 5 ? 4 : 3;
    for (int k = 0; k < 100; ++k) {
      std::vector<PureState> states;
      for (int s = 0; s < n; ++s) states.push_back(testsupport::random_state(dim));
      const auto r = bargmann_n_arg_reduction(states);
      CMatrix prod = CMatrix::Identity(dim, dim);
      for (const auto& s : states) prod = prod * (s.amps() * s.amps().adjoint());
      CHECK(testsupport::angle_distance(r.total_arg, std::arg(prod.trace())) < 1e-9);
      CHECK(testsupport::angle_distance(r.total_arg, r.sum_arg) < 1e-9);
      CHECK(r.third_order_args.size() == static_cast<size_t>(n - 2));
    }
  }
  std::vector<PureState> bad{PureState::basis(3, 0), PureState::basis(3, 1),
                             PureState::normalized(ket({1.0, 1.0, 1.0}))};
  try {
    bargmann_n_arg_reduction(bad);
    FAIL("expected VanishingOverlap");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kVanishingOverlap);
    CHECK(std::string(e.what()).find("1 and 2") != std::string::npos);
  }
}

TEST_CASE("unitary invariance of weak values") {
  for (int n = 2; n <= 6; ++n) {
    for (int k = 0; k < 50; ++k) {
      const Observable a(testsupport::random_hermitian(n));
      const auto pre = testsupport::random_state(n);
      const auto post = testsupport::random_state(n);
      const UnitaryOp u(testsupport::random_unitary(n));
      const Complex w = weak_value(a, pre, post).value;
      const Complex wu = weak_value(u.conjugate(a), u.apply(pre), u.apply(post)).value;
      CHECK(std::abs(w - wu) < 1e-10 * std::max(1.0, std::abs(w)));
    }
  }
}

}  // TEST_SUITE
