#include <doctest.h>

#include <cmath>
#include <random>

#include "convtail/distribution.hpp"
#include "convtail/errors.hpp"
#include "convtail/logspace.hpp"
#include "oracles.hpp"

using namespace convtail;

TEST_CASE("parametric construction and closed-form tails") {
  const Distribution exp1 = make_parametric("exponential", {1.0});
  CHECK(exp1.log_tail(0.0) == doctest::Approx(0.0));
  CHECK(exp1.log_tail(3.0) == doctest::Approx(-3.0));

  const Distribution pareto2 = make_parametric("pareto", {2.0});
  CHECK(std::exp(pareto2.log_tail(9.0)) == doctest::Approx(0.01));

  const Distribution w = make_parametric("weibull", {1.0, 0.5});
  CHECK(w.log_tail(4.0) == doctest::Approx(-2.0));

  const Distribution wsq = make_parametric("weibull_sq", {0.5, 2.0});
  CHECK(wsq.log_tail(1.0) == doctest::Approx(std::log(0.5) - 2.0));
  CHECK(wsq.log_mass_at_zero() == doctest::Approx(std::log(0.5)));

  CHECK_THROWS_AS(make_parametric("exponential", {-1.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_parametric("slowvary_exp", {1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_parametric("nosuch", {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_parametric("pareto", {2.0, 3.0}), std::invalid_argument);
}

TEST_CASE("atomic construction, step tails, normalization") {
  const double l2 = std::log(0.5);
  const Distribution d = make_atomic({0.0, 1.0}, {l2, l2});
  CHECK(std::exp(d.log_tail(0.5)) == doctest::Approx(0.5));
  CHECK(std::exp(d.log_tail(0.0)) == doctest::Approx(0.5));
  CHECK(d.log_tail(1.0) == kNegInf);
  CHECK(d.lattice());

  // step semantics: tail just below an atom minus tail at it = atom mass
  const Distribution g = make_atomic({1.0, 3.0, 9.0, 27.0},
                                     {std::log(0.4), std::log(0.3), std::log(0.2),
                                      std::log(0.1)});
  for (size_t i = 0; i < g.points().size(); ++i) {
    const double below = std::exp(g.log_tail(g.points()[i] * (1.0 - 1e-12)));
    const double at = std::exp(g.log_tail(g.points()[i]));
    CHECK(below - at == doctest::Approx(std::exp(g.log_masses()[i])).epsilon(1e-12));
  }

  CHECK_THROWS_AS(make_atomic({1.0, 0.5}, {l2, l2}), std::invalid_argument);
  CHECK_THROWS_AS(make_atomic({0.0, 1.0}, {std::log(0.45), std::log(0.45)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_atomic({0.0}, {0.0}), std::invalid_argument);
}

TEST_CASE("grid construction, interpolation, range errors") {
  const Distribution g = make_grid(1.0, {0.0, -1.0, -2.0});
  CHECK(std::exp(g.log_tail(1.0)) == doctest::Approx(std::exp(-1.0)));
  CHECK(g.log_tail(0.5) == doctest::Approx(-0.5));  // log-linear between nodes
  CHECK_THROWS_AS(g.log_tail(2.5), OutOfRangeError);
  CHECK_THROWS_AS(g.log_tail(-0.1), std::domain_error);
  CHECK_THROWS_AS(make_grid(1.0, {0.0, -1.0, -0.5}), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(-1.0, {0.0, -1.0}), std::invalid_argument);

  // sampled Exp(1) reproduces the tail exactly (log-linear is exact there)
  std::vector<double> lt;
  for (int k = 0; k <= 20; ++k) lt.push_back(-0.5 * k);
  const Distribution e = make_grid(0.5, lt);
  CHECK(e.log_tail(2.0) == doctest::Approx(-2.0).epsilon(1e-13));
  CHECK(e.log_tail(1.23) == doctest::Approx(-1.23).epsilon(1e-13));
}

TEST_CASE("tail monotonicity across kinds (property)") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<Distribution> dists = {
      make_parametric("pareto", {1.5}),
      make_parametric("exponential", {2.0}),
      make_parametric("weibull", {0.7, 0.4}),
      make_parametric("weibull_sq", {0.9, 0.3}),
      make_parametric("slowvary_exp", {0.5, 2.5}),
      Distribution::counterexample(1, 1e-3, 8),
      make_grid(0.25, {0.0, -0.1, -0.5, -0.6, -2.0}),
  };
  for (const auto& d : dists) {
    const double hi = std::min(d.max_x(), 500.0);
    for (int i = 0; i < 200; ++i) {
      double a = u(rng) * hi, b = u(rng) * hi;
      if (a > b) std::swap(a, b);
      CHECK(d.log_tail(a) >= d.log_tail(b) - 1e-12);
    }
  }
}

TEST_CASE("mean: closed forms against the quadrature oracle") {
  CHECK(mean(make_parametric("pareto", {2.0})).value() ==
        doctest::Approx(oracle::romberg_to_inf(
            [](double x) { return std::pow(1.0 + x, -2.0); }, 0.0, 50.0)));
  CHECK(!mean(make_parametric("pareto", {1.0})).is_finite());
  CHECK(mean(make_parametric("exponential", {2.0})).value() ==
        doctest::Approx(oracle::romberg_to_inf([](double x) { return std::exp(-2.0 * x); },
                                               0.0)));
  const Distribution sv = make_parametric("slowvary_exp", {1.0, 2.0});
  CHECK(mean(sv).value() ==
        doctest::Approx(oracle::romberg_to_inf(
            [](double x) { return std::exp(-2.0 * std::log1p(x) - x); }, 0.0)));
  const Distribution wsq = make_parametric("weibull_sq", {0.5, 2.0});
  CHECK(mean(wsq).value() ==
        doctest::Approx(oracle::romberg_to_inf(
            [](double x) { return 0.5 * std::exp(-2.0 * x * x); }, 0.0, 4.0)));
}

TEST_CASE("counterexample generators") {
  for (int variant : {1, 2, 3}) {
    const Distribution d = Distribution::counterexample(variant, 1e-3, 8);
    CHECK(d.truncated());
    CHECK(d.points().size() == 8);
    CHECK(d.points()[3] == doctest::Approx(27.0));
    CHECK(std::abs(log_sum_exp(d.log_masses())) < 1e-12);  // masses sum to 1
    CHECK(d.lattice());
  }
  // variant 1 mass law: p_n ∝ exp(-gh 3^n) 3^-n, atoms from x_0 = 1
  const double gh = 1e-3;
  const Distribution c1 = Distribution::counterexample(1, gh, 8);
  const double r10 = c1.log_masses()[1] - c1.log_masses()[0];
  CHECK(r10 == doctest::Approx(-gh * (3.0 - 1.0) - std::log(3.0)).epsilon(1e-12));
  const Distribution c2 = Distribution::counterexample(2, gh, 8);
  CHECK(c2.log_masses()[1] - c2.log_masses()[0] ==
        doctest::Approx(-gh * (3.0 - 1.0)).epsilon(1e-12));
  const Distribution c3 = Distribution::counterexample(3, 0.0, 6);
  CHECK(c3.log_masses()[1] - c3.log_masses()[0] == doctest::Approx(-(9.0 - 1.0)));

  CHECK_THROWS_AS(Distribution::counterexample(1, 1e-3, 2), std::invalid_argument);
  CHECK_THROWS_AS(Distribution::counterexample(4, 1e-3, 8), std::invalid_argument);
}

TEST_CASE("shift mixture") {
  const Distribution e = make_parametric("exponential", {1.0});
  const Distribution g = shift_mixture(e);
  CHECK(g.log_tail(0.0) == doctest::Approx(0.0));  // both terms are 1 below x = 1
  CHECK(std::exp(g.log_tail(2.0)) ==
        doctest::Approx((std::exp(-1.0) + std::exp(-2.0)) / 2.0));
  // mean adds one to half the mass
  CHECK(g.mean().value() == doctest::Approx(e.mean().value() + 0.5));
  CHECK(g.mean().value() ==
        doctest::Approx(oracle::romberg_to_inf(
            [&](double x) { return std::exp(g.log_tail(x)); }, 0.0)));

  // pointwise between F̄(x) and F̄(x-1)
  for (double x : {0.3, 1.0, 2.5, 7.0}) {
    const double lo = e.log_tail(x);
    const double hi = x >= 1.0 ? e.log_tail(x - 1.0) : 0.0;
    CHECK(g.log_tail(x) >= lo - 1e-12);
    CHECK(g.log_tail(x) <= hi + 1e-12);
  }

  // atomic base materializes exactly
  const Distribution a = make_atomic({1.0, 2.0}, {std::log(0.5), std::log(0.5)});
  const Distribution ga = shift_mixture(a);
  REQUIRE(ga.kind() == Kind::Atomic);
  CHECK(ga.points() == std::vector<double>{1.0, 2.0, 3.0});
  CHECK(std::exp(ga.log_masses()[1]) == doctest::Approx(0.5));

  CHECK_THROWS_AS(shift_mixture(make_parametric("pareto", {1.0})), std::invalid_argument);
}

TEST_CASE("grid mean: certified when the end decays, infinite otherwise") {
  // exact exponential grid: mean = 1/alpha with the fitted-tail remainder
  std::vector<double> lt;
  for (int k = 0; k <= 200; ++k) lt.push_back(-0.5 * 0.25 * k);
  const Distribution g = make_grid(0.25, lt);
  CHECK(g.mean().value() == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(g.mean_error_bound() < 1e-5);

  // flat end: no decay evidence, finiteness cannot be certified
  const Distribution flat = make_grid(1.0, {0.0, -0.5, -0.5, -0.5, -0.5});
  CHECK(!flat.mean().is_finite());
}

TEST_CASE("counterexample truncation bound covers the omitted mass") {
  // recompute the ideal normalizer with many more atoms and compare
  const double gh = 1e-3;
  const Distribution d = Distribution::counterexample(1, gh, 8);
  double ideal = 0.0;
  for (int n = 0; n < 40; ++n) ideal += std::exp(-gh * std::pow(3.0, n) - n * std::log(3.0));
  double kept = 0.0;
  for (int n = 0; n < 8; ++n) kept += std::exp(-gh * std::pow(3.0, n) - n * std::log(3.0));
  const double true_neglected = (ideal - kept) / ideal;
  CHECK(std::exp(d.log_neglected_mass()) >= true_neglected * 0.999);
  CHECK(std::exp(d.log_neglected_mass()) <= true_neglected * 3.0);
}
