#include <doctest.h>

#include <cmath>

#include "fdtlab/response.hpp"
#include "test_support.hpp"

using namespace fdtlab;
using namespace fdtlab::testing;

namespace {

PerturbationFamily two_state_time_change() {
  Generator L = make_two_state(1.0, 2.0);
  Observable f = Observable::on(L.space(), (Vector(2) << 1.0, 0.0).finished());
  return time_change_family(L, invariant_measure(L), f);
}

std::vector<double> dyadic_deltas(int lo_exp, int hi_exp) {
  std::vector<double> out;
  for (int k = lo_exp; k <= hi_exp; ++k) out.push_back(std::ldexp(1.0, -k));
  return out;
}

}  // namespace

TEST_CASE("response function: constants produce no response") {
  auto rng = make_rng(71);
  auto space = StateSpace::with_count(5);
  Generator L = random_irreducible_chain(space, rng);
  Measure mu = invariant_measure(L);
  Observable f = shift_to_nonnegative(random_observable(space, rng));
  Observable ones = Observable::constant(space, 1.0);

  for (const auto& fam : {time_change_family(L, mu, f), langevin_family(L, mu, f)}) {
    for (auto [s, t] : {std::pair{0.0, 0.5}, {0.3, 0.9}, {1.0, 1.0}}) {
      Observable r = response_function(L, fam, ones, s, t);
      CHECK(sup_norm(r.values) <= 1e-13);
    }
  }
}

TEST_CASE("response function: s = t applies the kernel first") {
  auto fam = two_state_time_change();
  const Generator& L = fam.base;
  Observable g = Observable::on(L.space(), (Vector(2) << 0.4, -1.2).finished());
  double t = 0.8;
  Observable direct = Observable::on(
      L.space(), semigroup_apply(L, t, fam.kernel.apply(g.values)));
  Observable via = response_function(L, fam, g, t, t);
  CHECK(sup_norm(via.values - direct.values) <= 1e-13);
}

TEST_CASE("response function: two-state closed form") {
  auto fam = two_state_time_change();
  const Generator& L = fam.base;
  Observable g = Observable::on(L.space(), (Vector(2) << 0.0, 1.0).finished());

  Observable r1 = response_function(L, fam, g, 0.3, 1.1);
  CHECK(r1.values(0) == doctest::Approx(-0.072773024660021668).epsilon(1e-10));
  CHECK(r1.values(1) == doctest::Approx(-0.035889857258781667).epsilon(1e-10));

  Observable r2 = response_function(L, fam, g, 0.5, 0.5);
  CHECK(r2.values(0) == doctest::Approx(-0.74104338671614323).epsilon(1e-10));
  CHECK(r2.values(1) == doctest::Approx(-0.51791322656771344).epsilon(1e-10));
}

TEST_CASE("response function: time ordering is validated") {
  auto fam = two_state_time_change();
  Observable g = Observable::constant(fam.base.space(), 1.0);
  CHECK_THROWS_AS(response_function(fam.base, fam, g, 0.6, 0.5), BadTimes);
  CHECK_THROWS_AS(response_function(fam.base, fam, g, -0.1, 0.5), BadTimes);
  CHECK_THROWS_AS(response_function(fam.base, fam, g, 0.0, -1.0), BadTimes);
}

TEST_CASE("response function: linear in the observable") {
  auto rng = make_rng(73);
  auto space = StateSpace::with_count(6);
  Generator L = random_irreducible_chain(space, rng);
  Measure mu = invariant_measure(L);
  auto fam = time_change_family(L, mu, random_observable(space, rng));
  Observable g1 = random_observable(space, rng);
  Observable g2 = random_observable(space, rng);
  Observable sum = g1 + g2;

  Vector r1 = response_function(L, fam, g1, 0.4, 1.0).values;
  Vector r2 = response_function(L, fam, g2, 0.4, 1.0).values;
  Vector rs = response_function(L, fam, sum, 0.4, 1.0).values;
  CHECK(sup_norm(rs - r1 - r2) <= 1e-12);
}

TEST_CASE("response function: positively homogeneous in the direction") {
  auto rng = make_rng(79);
  auto space = StateSpace::with_count(4);
  Generator L = random_irreducible_chain(space, rng);
  Measure mu = invariant_measure(L);
  Observable f = shift_to_nonnegative(random_observable(space, rng));
  Observable g = random_observable(space, rng);

  Vector base_r = response_function(L, time_change_family(L, mu, f), g, 0.2, 0.9).values;
  for (double r : {0.5, 2.0, 7.0}) {
    Observable rf = Observable::on(space, (r * f.values).eval());
    Vector scaled =
        response_function(L, time_change_family(L, mu, rf), g, 0.2, 0.9).values;
    CHECK(sup_norm(scaled - r * base_r) <= 1e-10);
  }
}

TEST_CASE("response integral: trivial cases vanish") {
  auto fam = two_state_time_change();
  const Generator& L = fam.base;
  Observable g = Observable::on(L.space(), (Vector(2) << 0.3, -0.9).finished());
  CHECK(sup_norm(response_integral(L, fam, g, 0.0).values) == 0.0);
  Observable ones = Observable::constant(L.space(), 1.0);
  CHECK(sup_norm(response_integral(L, fam, ones, 1.4).values) <= 1e-13);
  CHECK_THROWS_AS(response_integral(L, fam, g, -0.5), BadTimes);
}

TEST_CASE("response integral: block exponential matches Simpson quadrature") {
  auto rng = make_rng(83);

  SUBCASE("time change on a random 5-state chain") {
    auto space = StateSpace::with_count(5);
    Generator L = random_irreducible_chain(space, rng);
    Measure mu = invariant_measure(L);
    auto fam = time_change_family(L, mu, random_observable(space, rng));
    Observable g = random_observable(space, rng);
    Vector block = response_integral(L, fam, g, 1.2).values;
    Vector simpson = response_integral_simpson(L, fam, g, 1.2).values;
    CHECK(sup_norm(block - simpson) <= 1e-8 * std::max(1.0, sup_norm(block)));
  }

  SUBCASE("randomized families up to 16 states") {
    for (int n : {3, 8, 16}) {
      auto space = StateSpace::with_count(n);
      Measure mu;
      Generator L = random_reversible_chain(space, rng, &mu);
      // Normalize the time scale so 1024 Simpson panels resolve the
      // semigroup; the quadrature error grows like (||L|| t / panels)^4.
      L = Generator::from_offdiagonal(
          space, (8.0 / L.uniformization_rate() * L.matrix()).eval());
      Observable f = random_observable(space, rng);
      Observable g = random_observable(space, rng);
      for (double t : {0.3, 1.0}) {
        auto fam = langevin_family(L, mu, f);
        Vector block = response_integral(L, fam, g, t).values;
        Vector simpson = response_integral_simpson(L, fam, g, t).values;
        CHECK(sup_norm(block - simpson) <= 1e-8 * std::max(1.0, sup_norm(block)));
      }
    }
  }

  SUBCASE("glauber ring") {
    auto space = StateSpace::with_count(6);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < 6; ++i) edges.emplace_back(i, (i + 1) % 6);
    auto hg = HamiltonianGraph::make(space, edges,
                                     random_observable(space, rng, -1.0, 1.0));
    auto fam = glauber_family(hg, random_observable(space, rng));
    Observable g = random_observable(space, rng);
    Vector block = response_integral(fam.base, fam, g, 0.8).values;
    Vector simpson = response_integral_simpson(fam.base, fam, g, 0.8).values;
    CHECK(sup_norm(block - simpson) <= 1e-8 * std::max(1.0, sup_norm(block)));
  }
}

TEST_CASE("finite difference response: zero direction leaves no residual") {
  Generator L = make_two_state(1.0, 2.0);
  auto fam = time_change_family(L, invariant_measure(L),
                                Observable::constant(L.space(), 0.0));
  Observable g = Observable::on(L.space(), (Vector(2) << 1.0, -0.5).finished());
  auto fd = finite_difference_response(L, fam, g, 1.0, 0.01);
  CHECK(fd.eta <= 1e-11);
}

TEST_CASE("finite difference response: dyadic sweep converges with slope near one") {
  auto rng = make_rng(89);
  auto space = StateSpace::with_count(6);
  Generator L = random_irreducible_chain(space, rng);
  Measure mu = invariant_measure(L);
  Observable f = shift_to_nonnegative(random_observable(space, rng));
  Observable g = random_observable(space, rng);
  auto fam = time_change_family(L, mu, f);

  std::vector<double> deltas = dyadic_deltas(3, 10);
  std::vector<double> etas;
  for (double d : deltas) {
    etas.push_back(finite_difference_response(L, fam, g, 1.0, d).eta);
  }
  auto fit = fit_loglog(deltas, etas, 1e-13);
  CHECK(fit.slope >= 0.8);
  CHECK(fit.slope <= 1.2);

  // Monotone decrease along the sweep, with 5% jitter allowed at the end.
  for (size_t i = 0; i + 1 < etas.size(); ++i) {
    CHECK(etas[i + 1] <= etas[i] * 1.05);
  }
}

TEST_CASE("finite difference response: langevin on a non-reversible base") {
  Generator L = make_cycle(3);
  Measure mu = Measure::uniform(L.space());
  Observable f = Observable::on(L.space(), (Vector(3) << 1.0, 0.3, 0.0).finished());
  Observable g = Observable::on(L.space(), (Vector(3) << 0.2, -1.0, 0.7).finished());
  auto fam = langevin_family(L, mu, f);

  std::vector<double> deltas = dyadic_deltas(3, 10);
  std::vector<double> etas;
  for (double d : deltas) {
    etas.push_back(finite_difference_response(L, fam, g, 1.0, d).eta);
  }
  auto fit = fit_loglog(deltas, etas, 1e-13);
  CHECK(fit.slope >= 0.45);
}

TEST_CASE("finite difference response: glauber triangle at small strength") {
  auto space = StateSpace::with_count(3);
  std::vector<std::pair<int, int>> edges = {{0, 1}, {1, 2}, {2, 0}};
  auto rng = make_rng(97);
  auto hg = HamiltonianGraph::make(space, edges, random_observable(space, rng));
  auto fam = glauber_family(hg, random_observable(space, rng));
  Observable g = random_observable(space, rng);
  auto fd = finite_difference_response(fam.base, fam, g, 1.0, 1e-3);
  CHECK(fd.eta <= 1e-2);
  CHECK(fd.eta_sup >= fd.eta_l2);  // mu0 is a probability measure
}

TEST_CASE("finite difference response: input validation") {
  auto fam = two_state_time_change();
  Observable g = Observable::constant(fam.base.space(), 1.0);
  CHECK_THROWS_AS(finite_difference_response(fam.base, fam, g, 0.0, 0.1), BadTimes);
  CHECK_THROWS_AS(finite_difference_response(fam.base, fam, g, 1.0, 0.0),
                  ValidationError);
}

TEST_CASE("windowed response: zero window reduces to the plain check") {
  auto rng = make_rng(101);
  auto space = StateSpace::with_count(5);
  Generator L = random_irreducible_chain(space, rng);
  Measure mu = invariant_measure(L);
  auto fam = time_change_family(L, mu, random_observable(space, rng));
  Observable g = random_observable(space, rng);

  double direct = finite_difference_response(L, fam, g, 0.9, 0.01).eta;
  double windowed = windowed_response_check(L, fam, g, 0.0, 0.0, 0.9, 0.01);
  CHECK(windowed == doctest::Approx(direct).epsilon(1e-10));
  CHECK(windowed_response_check(L, fam, g, 0.5, 0.25, 0.0, 0.01) == 0.0);
}

TEST_CASE("windowed response: sweep on a random 6-state chain") {
  auto rng = make_rng(103);
  auto space = StateSpace::with_count(6);
  Generator L = random_irreducible_chain(space, rng);
  Measure mu = invariant_measure(L);
  auto fam = time_change_family(L, mu, random_observable(space, rng));
  Observable g = random_observable(space, rng);

  std::vector<double> deltas = dyadic_deltas(3, 10);
  std::vector<double> residuals;
  for (double d : deltas) {
    residuals.push_back(windowed_response_check(L, fam, g, 0.5, 0.25, 1.0, d));
  }
  auto fit = fit_loglog(deltas, residuals, 1e-13);
  CHECK(fit.slope >= 0.8);
  CHECK(fit.slope <= 1.2);
}

TEST_CASE("kernel convergence: constant-direction time change has a scalar residual") {
  Generator L = make_two_state(1.0, 2.0);
  auto fam = time_change_family(L, invariant_measure(L),
                                Observable::constant(L.space(), 0.7));
  // Residual factorizes: |(e^{-0.7 d} - 1)/d + 0.7| times the operator norm
  // of L (= 4 for this chain).
  auto report = kernel_norm_convergence(fam, {std::ldexp(1.0, -4), std::ldexp(1.0, -6)});
  CHECK(report.rows[0].residual / 4.0 ==
        doctest::Approx(0.015091613915493296).epsilon(1e-12));
  CHECK(report.rows[1].residual / 4.0 ==
        doctest::Approx(0.0038142063738078047).epsilon(1e-12));
}

TEST_CASE("kernel convergence: zero direction has zero residual") {
  Generator L = make_cycle(4);
  auto fam = time_change_family(L, Measure::uniform(L.space()),
                                Observable::constant(L.space(), 0.0));
  auto report = kernel_norm_convergence(fam, dyadic_deltas(3, 6));
  for (const auto& row : report.rows) CHECK(row.residual == 0.0);
}

TEST_CASE("kernel convergence: smooth families have slope one") {
  auto rng = make_rng(107);
  auto deltas = dyadic_deltas(3, 10);

  auto expect_slope_one = [&](const PerturbationFamily& fam) {
    CAPTURE(family_kind_name(fam.kind));
    auto report = kernel_norm_convergence(fam, deltas);
    CHECK(report.fit.slope >= 0.9);
    CHECK(report.fit.slope <= 1.1);
  };

  auto ring = make_ring(4);
  Measure uni = Measure::uniform(ring.space());
  expect_slope_one(langevin_family(ring, uni, random_observable(ring.space(), rng)));
  expect_slope_one(
      time_change_family(ring, uni, random_observable(ring.space(), rng)));

  Generator cyc = make_cycle(3);
  Measure uni3 = Measure::uniform(cyc.space());
  Matrix b = adjoint(cyc, uni3).matrix() - cyc.matrix();
  b.diagonal().setZero();
  expect_slope_one(general_b_family(cyc, uni3,
                                    random_observable(cyc.space(), rng, 0.0, 1.0), b));

  auto space4 = StateSpace::with_count(4);
  std::vector<CycleWeight> cycles = {{{0, 1, 2}, 1.0, -0.3}, {{1, 2, 3}, 1.5, 0.4}};
  expect_slope_one(cycle_family(space4, Measure::uniform(space4), cycles,
                                random_observable(space4, rng)));

  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < 4; ++i) edges.emplace_back(i, (i + 1) % 4);
  auto hg = HamiltonianGraph::make(space4, edges,
                                   random_observable(space4, rng, -1.0, 1.0));
  expect_slope_one(glauber_family(hg, random_observable(space4, rng)));
}
