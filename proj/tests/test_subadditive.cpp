#include <doctest.h>

#include <cmath>

#include "convtail/distribution.hpp"
#include "convtail/errors.hpp"
#include "convtail/subadditive.hpp"
#include "convtail/transforms.hpp"

using namespace convtail;

TEST_CASE("piecewise evaluation: left-open right-closed segments through the origin") {
  SubadditiveFunction h;
  h.breakpoints = {2.0, 8.0};
  h.slopes = {0.3, 0.1};
  h.delta = 1.0;
  CHECK(h.eval(0.0) == 0.0);
  CHECK(h.eval(1.0) == doctest::Approx(0.3));
  CHECK(h.eval(2.0) == doctest::Approx(0.6));   // x = x_1 uses eps_1
  CHECK(h.eval(2.5) == doctest::Approx(0.25));  // just past the breakpoint
  CHECK(h.eval(8.0) == doctest::Approx(0.8));
  CHECK_THROWS_AS(h.eval(8.5), std::domain_error);
  CHECK_THROWS_AS(h.eval(-1.0), std::domain_error);
}

TEST_CASE("construction on Pareto(2): the induction invariants hold") {
  const Distribution p2 = make_parametric("pareto", {2.0});
  const double delta = 0.5;
  const SubadditiveFunction h = construct_subadditive(p2, delta, 6);
  REQUIRE(h.breakpoints.size() == 6);
  REQUIRE(h.slopes.size() == 6);

  for (size_t n = 0; n < 6; ++n) {
    // x_n >= 2^n and F̄(x_n) < delta / 2^n  (n counted from 1)
    CHECK(h.breakpoints[n] >= std::pow(2.0, n + 1.0));
    CHECK(std::exp(p2.log_tail(h.breakpoints[n])) < delta / std::pow(2.0, n + 1.0));
    if (n > 0) CHECK(h.slopes[n] < h.slopes[n - 1]);
    CHECK(h.slopes[n] > 0.0);
  }

  // the defining equations hold to bisection tolerance:
  // E{e^{eps_1 xi}; xi <= x_1} = 1 - min(delta/4, F̄(x_1)/2)
  const double t1 = 1.0 - std::min(delta / 4.0, std::exp(p2.log_tail(h.breakpoints[0])) / 2.0);
  CHECK(exp_moment_upto(p2, h.slopes[0], h.breakpoints[0]) ==
        doctest::Approx(t1).epsilon(1e-9));
  // E{e^{eps_{n+1} xi}; (x_n, x_{n+1}]} = delta / 2^n
  for (size_t n = 0; n + 1 < 6; ++n) {
    const double m = partial_exp_moment(p2, h.slopes[n + 1], h.breakpoints[n],
                                        h.breakpoints[n + 1]);
    CHECK(m == doctest::Approx(delta / std::pow(2.0, n + 1.0)).epsilon(1e-8));
  }

  const SubadditiveDiagnostics d = verify_subadditive(h, p2, 10000, 20240901);
  CHECK(d.subadd_violations == 0);
  CHECK(d.slopes_decreasing);
  CHECK(d.exp_moment <= 1.0 + delta + 1e-6);
  CHECK(d.exp_moment_ok);
  REQUIRE(d.growth.size() == 5);
  for (size_t i = 0; i < d.growth.size(); ++i)
    CHECK(d.growth[i] >= delta * static_cast<double>(i + 1) * (1.0 - 1e-9));
  CHECK(d.growth_ok);
  CHECK(d.pass());
}

TEST_CASE("construction succeeds on other heavy tails") {
  const Distribution w = make_parametric("weibull", {1.0, 0.5});
  const SubadditiveFunction h = construct_subadditive(w, 1.0, 4);
  const SubadditiveDiagnostics d = verify_subadditive(h, w, 4000, 7);
  CHECK(d.pass());

  // discrete heavy tail: truncated zeta-like atoms; scan points are the atoms
  std::vector<double> pts, lm;
  double total = 0.0;
  for (int n = 1; n <= 4000; ++n) total += std::pow(n, -2.5);
  for (int n = 1; n <= 4000; ++n) {
    pts.push_back(static_cast<double>(n));
    lm.push_back(std::log(std::pow(n, -2.5) / total));
  }
  const Distribution zeta = Distribution::atomic_truncated(std::move(pts), std::move(lm),
                                                           std::log(1e-6));
  const SubadditiveFunction hz = construct_subadditive(zeta, 0.5, 3);
  const SubadditiveDiagnostics dz = verify_subadditive(hz, zeta, 4000, 11);
  CHECK(dz.subadd_violations == 0);
  CHECK(dz.exp_moment_ok);
}

TEST_CASE("light tails fail with the outward-search error") {
  const Distribution e1 = make_parametric("exponential", {1.0});
  CHECK_THROWS_AS(construct_subadditive(e1, 0.5, 6), LightTailError);
  try {
    construct_subadditive(e1, 0.5, 6);
  } catch (const LightTailError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("light tail") != std::string::npos);
    CHECK(msg.find("x_2") != std::string::npos);
  }
  // delta and level validation
  CHECK_THROWS_AS(construct_subadditive(e1, 0.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(construct_subadditive(e1, 0.5, 1), std::invalid_argument);
}
