#include <doctest.h>

#include <cmath>

#include "fdtlab/markov_ops.hpp"
#include "fdtlab/semigroup.hpp"
#include "test_support.hpp"

using namespace fdtlab;
using namespace fdtlab::testing;

TEST_CASE("build_generator: empty rate list gives the frozen chain") {
  auto space = StateSpace::with_count(3);
  auto L = build_generator(space, {});
  CHECK(L.matrix().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("build_generator: two-state diagonal forced by row sums") {
  auto L = make_two_state(1.0, 2.0);
  CHECK(L.rate(0, 0) == -1.0);
  CHECK(L.rate(1, 1) == -2.0);
  CHECK(L.rate(0, 1) == 1.0);
  CHECK(L.rate(1, 0) == 2.0);
}

TEST_CASE("build_generator: clockwise ring of 4") {
  auto L = make_cycle(4);
  for (int i = 0; i < 4; ++i) {
    CHECK(L.rate(i, (i + 1) % 4) == 1.0);
    CHECK(L.rate(i, i) == -1.0);
  }
  CHECK(L.row_sum_residual() == 0.0);
}

TEST_CASE("build_generator: error paths") {
  auto space = StateSpace::with_count(3);
  CHECK_THROWS_AS(build_generator(space, {{0, 1, -0.5}}), NegativeRate);
  CHECK_THROWS_AS(build_generator(space, {{0, 0, 1.0}}), SelfLoop);
  CHECK_THROWS_AS(build_generator(space, {{0, 1, 1.0}, {0, 1, 2.0}}), DuplicateEntry);
  CHECK_THROWS_AS(build_generator(space, {{0, 5, 1.0}}), ValidationError);
}

TEST_CASE("generator matrix validation") {
  auto space = StateSpace::with_count(2);
  Matrix bad(2, 2);
  bad << -1.0, 1.0, 2.0, -1.0;  // second row sums to 1
  CHECK_THROWS_AS(Generator::from_matrix(space, bad), ValidationError);
  Matrix neg(2, 2);
  neg << 1.0, -1.0, 2.0, -2.0;
  CHECK_THROWS_AS(Generator::from_matrix(space, neg), NegativeRate);
}

TEST_CASE("semigroup_apply: t = 0 is the identity") {
  auto L = make_two_state(1.0, 2.0);
  Observable g = Observable::on(L.space(), (Vector(2) << 3.5, -1.25).finished());
  auto out = semigroup_apply(L, 0.0, g);
  CHECK(out.values == g.values);
}

TEST_CASE("semigroup_apply: conserves constants") {
  auto rng = make_rng(71);
  auto space = StateSpace::with_count(6);
  auto L = random_irreducible_chain(space, rng);
  auto ones = Observable::constant(space, 1.0);
  for (double t : {0.1, 1.0, 7.5}) {
    auto out = semigroup_apply(L, t, ones);
    CHECK(sup_norm(out.values - ones.values) <= 1e-13);
  }
}

TEST_CASE("semigroup_apply: two-state closed form") {
  // For rates a = c(1,2), b = c(2,1) and g = (1,0):
  //   P_t g(1) = b/(a+b) + (a/(a+b)) e^{-(a+b)t}
  //   P_t g(2) = b/(a+b) - (b/(a+b)) e^{-(a+b)t}
  auto L = make_two_state(1.0, 2.0);
  Observable g = Observable::on(L.space(), (Vector(2) << 1.0, 0.0).finished());

  struct Case {
    double t, v1, v2;
  };
  // Frozen values from the closed form above.
  const Case cases[] = {
      {0.7, 0.70748547608432732, 0.58502904783134535},
      {0.25, 0.82412218424700479, 0.35175563150599021},
      {1.3, 0.67341397048193474, 0.6531720590361304},
  };
  for (const auto& c : cases) {
    auto out = semigroup_apply(L, c.t, g);
    CHECK(std::abs(out.values(0) - c.v1) <= 1e-12);
    CHECK(std::abs(out.values(1) - c.v2) <= 1e-12);
  }
}

TEST_CASE("semigroup_apply: large uniformization rate stays accurate") {
  auto L = make_two_state(120.0, 250.0);
  Observable g = Observable::on(L.space(), (Vector(2) << 1.0, 0.0).finished());
  double t = 2.0;  // lambda * t = 500
  auto out = semigroup_apply(L, t, g);
  double ab = 370.0;
  double expect = 250.0 / ab + (120.0 / ab) * std::exp(-ab * t);
  CHECK(std::abs(out.values(0) - expect) <= 1e-12);
}

TEST_CASE("semigroup_apply: sup-norm contraction and semigroup law") {
  auto rng = make_rng(1234);
  for (int trial = 0; trial < 20; ++trial) {
    auto space = StateSpace::with_count(2 + static_cast<int>(rng() % 7));
    auto L = random_irreducible_chain(space, rng);
    auto g = random_observable(space, rng, -2.0, 2.0);
    std::uniform_real_distribution<double> ut(0.01, 2.0);
    double s = ut(rng), t = ut(rng);
    auto one_shot = semigroup_apply(L, s + t, g);
    auto two_step = semigroup_apply(L, s, semigroup_apply(L, t, g));
    CHECK(sup_norm(one_shot.values) <= sup_norm(g.values) * (1 + 1e-13));
    CHECK(sup_norm(one_shot.values - two_step.values) <= 1e-10 * sup_norm(g.values));
  }
}

TEST_CASE("semigroup_apply: negative time rejected") {
  auto L = make_two_state(1.0, 2.0);
  auto g = Observable::constant(L.space(), 1.0);
  CHECK_THROWS_AS(semigroup_apply(L, -0.5, g), NegativeTime);
}

TEST_CASE("invariant_measure: symmetric ring is uniform") {
  for (int n : {3, 5, 8}) {
    auto L = make_ring(n, 0.7);
    auto mu = invariant_measure(L);
    CHECK(sup_norm(mu.weights - Vector::Constant(n, 1.0 / n)) <= 1e-14);
  }
}

TEST_CASE("invariant_measure: two-state balance") {
  auto L = make_two_state(1.0, 2.0);
  auto mu = invariant_measure(L);
  CHECK(std::abs(mu.weights(0) - 2.0 / 3.0) <= 1e-15);
  CHECK(std::abs(mu.weights(1) - 1.0 / 3.0) <= 1e-15);
}

TEST_CASE("invariant_measure: residual bound and positivity on random chains") {
  auto rng = make_rng(99);
  for (int trial = 0; trial < 25; ++trial) {
    auto space = StateSpace::with_count(2 + static_cast<int>(rng() % 15));
    auto L = random_irreducible_chain(space, rng);
    auto mu = invariant_measure(L);
    CHECK(mu.weights.minCoeff() > 0.0);
    CHECK(std::abs(mu.total() - 1.0) <= 1e-12);
    CHECK(invariance_residual(L, mu.weights) <= 1e-12);
  }
}

TEST_CASE("invariant_measure: mean of Lg vanishes at stationarity") {
  auto rng = make_rng(2024);
  auto space = StateSpace::with_count(9);
  auto L = random_irreducible_chain(space, rng);
  auto mu = invariant_measure(L);
  for (int trial = 0; trial < 10; ++trial) {
    auto g = random_observable(space, rng, -3.0, 3.0);
    CHECK(std::abs(expectation(mu, L.apply(g))) <= 1e-12);
  }
}

TEST_CASE("invariant_measure: reducible chain rejected") {
  auto space = StateSpace::with_count(3);
  // 0 <-> 1 communicate, state 2 is absorbing.
  auto L = build_generator(space, {{0, 1, 1.0}, {1, 0, 1.0}, {0, 2, 0.5}});
  CHECK_THROWS_AS(invariant_measure(L), Reducible);
}

TEST_CASE("strong_component_count") {
  auto space = StateSpace::with_count(4);
  auto L = build_generator(space, {{0, 1, 1.0}, {1, 0, 1.0}, {2, 3, 1.0}, {3, 2, 1.0}});
  CHECK(strong_component_count(L.matrix()) == 2);
  CHECK_FALSE(is_irreducible(L));
  CHECK(is_irreducible(make_cycle(4)));
}

TEST_CASE("adjoint: reversible chain is self-adjoint") {
  auto rng = make_rng(5150);
  auto space = StateSpace::with_count(7);
  Measure mu;
  auto L = random_reversible_chain(space, rng, &mu);
  auto mu0 = invariant_measure(L);
  CHECK(sup_norm(mu0.weights - mu.weights) <= 1e-12);
  auto star = adjoint(L, mu0);
  CHECK((star.matrix() - L.matrix()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("adjoint: unidirectional cycle reverses") {
  auto L = make_cycle(3);
  auto mu0 = invariant_measure(L);  // uniform
  auto star = adjoint(L, mu0);
  CHECK(std::abs(star.rate(1, 0) - 1.0) <= 1e-14);
  CHECK(std::abs(star.rate(2, 1) - 1.0) <= 1e-14);
  CHECK(std::abs(star.rate(0, 2) - 1.0) <= 1e-14);
  CHECK(std::abs(star.rate(0, 1)) <= 1e-14);
}

TEST_CASE("adjoint: involution and L2(mu0) pairing") {
  auto rng = make_rng(31337);
  auto space = StateSpace::with_count(6);
  auto L = random_irreducible_chain(space, rng);
  auto mu0 = invariant_measure(L);
  auto star = adjoint(L, mu0);
  auto back = adjoint(star, mu0);
  CHECK((back.matrix() - L.matrix()).cwiseAbs().maxCoeff() <= 1e-12);
  // <h L*g>_mu = <g L h>_mu over the indicator basis.
  for (int i = 0; i < space.size(); ++i) {
    auto h = Observable::indicator(space, i);
    for (int j = 0; j < space.size(); ++j) {
      auto g = Observable::indicator(space, j);
      double lhs = expectation(mu0, pointwise(h, star.apply(g)));
      double rhs = expectation(mu0, pointwise(g, L.apply(h)));
      CHECK(std::abs(lhs - rhs) <= 1e-10);
    }
  }
  // mu0 stays invariant for the adjoint.
  CHECK(invariance_residual(star, mu0.weights) <= 1e-12);
}

TEST_CASE("adjoint: non-invariant measure rejected") {
  auto L = make_two_state(1.0, 2.0);
  auto wrong = Measure::uniform(L.space());
  CHECK_THROWS_AS(adjoint(L, wrong), NotInvariant);
}

TEST_CASE("symmetrize: reversible fixed point, cycle halving, idempotence") {
  auto rng = make_rng(404);
  auto space = StateSpace::with_count(7);
  Measure mu;
  auto R = random_reversible_chain(space, rng, &mu);
  auto muR = invariant_measure(R);
  auto Rs = symmetrize(R, muR);
  CHECK((Rs.matrix() - R.matrix()).cwiseAbs().maxCoeff() <= 1e-12);

  auto C = make_cycle(3);
  auto muC = invariant_measure(C);
  auto Cs = symmetrize(C, muC);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(Cs.rate(i, (i + 1) % 3) - 0.5) <= 1e-14);
    CHECK(std::abs(Cs.rate((i + 1) % 3, i) - 0.5) <= 1e-14);
  }
  CHECK(invariance_residual(Cs, muC.weights) <= 1e-12);
  CHECK(reversibility_residual(Cs, muC) <= 1e-14);

  auto L = random_irreducible_chain(space, rng);
  auto mu0 = invariant_measure(L);
  auto Ls = symmetrize(L, mu0);
  auto Lss = symmetrize(Ls, mu0);
  CHECK((Lss.matrix() - Ls.matrix()).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(invariance_residual(Ls, mu0.weights) <= 1e-12);
}

TEST_CASE("carre_du_champ: constants, two-state values, bilinearity") {
  auto rng = make_rng(808);
  auto L2 = make_two_state(1.0, 2.0);
  Observable f = Observable::on(L2.space(), (Vector(2) << 0.0, 1.0).finished());
  auto gamma = carre_du_champ(L2, f, f);
  CHECK(std::abs(gamma.values(0) - 1.0) <= 1e-14);
  CHECK(std::abs(gamma.values(1) - 2.0) <= 1e-14);

  auto space = StateSpace::with_count(6);
  auto L = random_irreducible_chain(space, rng);
  auto g = random_observable(space, rng);
  auto ones = Observable::constant(space, 1.0);
  CHECK(sup_norm(carre_du_champ(L, ones, g).values) <= 1e-13);

  auto f1 = random_observable(space, rng);
  auto f2 = random_observable(space, rng);
  auto lhs = carre_du_champ(L, f1 + f2, g);
  auto rhs = carre_du_champ(L, f1, g) + carre_du_champ(L, f2, g);
  CHECK(sup_norm(lhs.values - rhs.values) <= 1e-12);
}

TEST_CASE("carre_du_champ: positivity and jump-sum identity") {
  auto rng = make_rng(909);
  for (int trial = 0; trial < 15; ++trial) {
    auto space = StateSpace::with_count(2 + static_cast<int>(rng() % 9));
    auto L = random_irreducible_chain(space, rng);
    auto f = random_observable(space, rng, -2.0, 2.0);
    auto g = random_observable(space, rng, -2.0, 2.0);
    auto gamma_ff = carre_du_champ(L, f, f);
    CHECK(gamma_ff.values.minCoeff() >= -1e-14);

    // Pointwise sum over jumps: sum_y c(x,y)(f(y)-f(x))(g(y)-g(x)).
    auto gamma_fg = carre_du_champ(L, f, g);
    for (int x = 0; x < space.size(); ++x) {
      double acc = 0.0;
      for (int y = 0; y < space.size(); ++y) {
        if (y != x)
          acc += L.rate(x, y) * (f.values(y) - f.values(x)) * (g.values(y) - g.values(x));
      }
      CHECK(std::abs(gamma_fg.values(x) - acc) <= 1e-12);
    }
  }
}

TEST_CASE("spectral gap: two-state gap is a+b") {
  auto L = make_two_state(1.0, 2.0);
  auto info = spectral_gap_info(L);
  CHECK(std::abs(info.gap - 3.0) <= 1e-10);
  CHECK(info.real);
  CHECK(info.simple);
}

TEST_CASE("measures: validation and point masses") {
  auto space = StateSpace::with_count(3);
  CHECK_THROWS_AS(Measure::on(space, (Vector(3) << 0.5, -0.1, 0.6).finished()),
                  ValidationError);
  auto pt = Measure::point(space, 1);
  CHECK(pt.is_probability(1e-15));
  CHECK_FALSE(pt.strictly_positive());
  auto u = Measure::uniform(space);
  CHECK(u.strictly_positive());
  CHECK(std::abs(u.total() - 1.0) <= 1e-15);
}

TEST_CASE("state space labels") {
  CHECK_THROWS_AS(StateSpace::with_count(1), ValidationError);
  CHECK_THROWS_AS(StateSpace::with_labels({"a", "a"}), ValidationError);
  auto space = StateSpace::with_labels({"a", "b", "c"});
  CHECK(space.index_of("b") == 1);
  CHECK(space.index_of("z") == -1);
}
