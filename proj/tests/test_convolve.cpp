#include <doctest.h>

#include <cmath>
#include <random>

#include "convtail/convolve.hpp"
#include "convtail/distribution.hpp"
#include "convtail/errors.hpp"
#include "convtail/logspace.hpp"
#include "oracles.hpp"

using namespace convtail;

namespace {

Distribution random_atomic(std::mt19937_64& rng, int max_atoms) {
  std::uniform_int_distribution<int> n_dist(2, max_atoms);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int n = n_dist(rng);
  std::vector<double> pts, w;
  double x = u(rng) * 0.5;
  for (int i = 0; i < n; ++i) {
    pts.push_back(x);
    w.push_back(u(rng) + 1e-3);
    x += u(rng) * 3.0 + 1e-3;
  }
  double total = 0.0;
  for (double v : w) total += v;
  std::vector<double> lm;
  for (double v : w) lm.push_back(std::log(v / total));
  return Distribution::atomic(std::move(pts), std::move(lm));
}

std::vector<oracle::Atom> to_oracle(const Distribution& d) {
  std::vector<oracle::Atom> a;
  for (size_t i = 0; i < d.points().size(); ++i)
    a.push_back({d.points()[i], std::exp(d.log_masses()[i])});
  return a;
}

}  // namespace

TEST_CASE("conv_atomic: two-atom square, identity element, mass conservation") {
  const double l2 = std::log(0.5);
  const Distribution d = make_atomic({0.0, 1.0}, {l2, l2});
  const Distribution dd = conv_atomic(d, d);
  REQUIRE(dd.points() == std::vector<double>{0.0, 1.0, 2.0});
  CHECK(std::exp(dd.log_masses()[0]) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(std::exp(dd.log_masses()[1]) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::exp(dd.log_masses()[2]) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(std::abs(log_sum_exp(dd.log_masses())) < 1e-12);

  // a delta at 0 alone is rejected at construction (tail identically zero);
  // an atom at 0 carrying all but a sliver of mass acts as the unit element
  const Distribution near_delta = make_atomic({0.0, 1e6}, {0.0, std::log(1e-18)});
  const Distribution f = make_atomic({1.0, 2.0}, {l2, l2});
  const Distribution shifted = conv_atomic(f, near_delta);
  for (double x : {0.5, 1.0, 1.7})
    CHECK(shifted.log_tail(x) == doctest::Approx(f.log_tail(x)).epsilon(1e-12));
  CHECK_THROWS_AS(make_atomic({0.0}, {0.0}), std::invalid_argument);
}

TEST_CASE("conv_atomic and conv_tail_at agree with brute-force enumeration") {
  std::mt19937_64 rng(42);
  for (int rep = 0; rep < 25; ++rep) {
    const Distribution f = random_atomic(rng, 14);
    const Distribution g = random_atomic(rng, 14);
    const Distribution fg = conv_atomic(f, g);
    CHECK(std::abs(log_sum_exp(fg.log_masses())) < 1e-12);
    const auto fa = to_oracle(f), ga = to_oracle(g);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 8; ++k) {
      const double x = u(rng) * (f.points().back() + g.points().back()) * 1.1;
      const double brute = oracle::conv_tail_brute(fa, ga, x);
      const double got = std::exp(fg.log_tail(x));
      CHECK(got == doctest::Approx(brute).epsilon(1e-12));
      const double via_tail = std::exp(conv_tail_at(f, g, x).est);
      CHECK(via_tail == doctest::Approx(brute).epsilon(1e-12));
    }
  }
}

TEST_CASE("conv_tail_at: Erlang-2 closed form and basic contracts") {
  const Distribution e1 = make_parametric("exponential", {1.0});
  // F*F̄(x) = e^-x (1+x); frozen: at x = 3 the tail is 4 e^-3
  const LogBracket b3 = conv_tail_at(e1, e1, 3.0);
  CHECK(b3.est == doctest::Approx(std::log(4.0) - 3.0).epsilon(1e-5));
  CHECK(b3.lo <= std::log(4.0) - 3.0);
  CHECK(b3.hi >= std::log(4.0) - 3.0);
  for (double x : {0.5, 2.0, 10.0, 20.0}) {
    const LogBracket b = conv_tail_at(e1, e1, x);
    CHECK(std::abs(std::expm1(b.est - oracle::erlang_log_tail(2, x))) < 1e-4);
  }

  // atomless distributions: convolution tail at 0 is 1
  CHECK(conv_tail_at(e1, e1, 0.0).est == 0.0);
  // atom at zero: 1 - F{0} G{0}
  const Distribution wsq = make_parametric("weibull_sq", {0.5, 1.0});
  CHECK(std::exp(conv_tail_at(wsq, wsq, 0.0).est) == doctest::Approx(0.75).epsilon(1e-12));

  // commutativity within the bracket
  const Distribution p2 = make_parametric("pareto", {2.0});
  const LogBracket ab = conv_tail_at(p2, e1, 5.0);
  const LogBracket ba = conv_tail_at(e1, p2, 5.0);
  CHECK(ab.est <= std::max(ab.hi, ba.hi) + 1e-12);
  CHECK(std::max(ab.lo, ba.lo) <= std::min(ab.hi, ba.hi));

  CHECK_THROWS_AS(conv_tail_at(e1, e1, -1.0), std::domain_error);
}

TEST_CASE("conv tails dominate each factor and the pair lower bound") {
  const Distribution e1 = make_parametric("exponential", {1.0});
  const Distribution p2 = make_parametric("pareto", {2.0});
  const Distribution w = make_parametric("weibull", {1.0, 0.5});
  for (const Distribution* g : {&p2, &w}) {
    for (double x : {0.5, 3.0, 17.0, 60.0}) {
      const LogBracket b = conv_tail_at(e1, *g, x);
      const double fbar = e1.log_tail(x), gbar = g->log_tail(x);
      CHECK(b.hi >= std::max(fbar, gbar) - 1e-12);
      // F̄(x)G(x) + F(x)Ḡ(x) lower bound
      const double bound =
          log_add_exp(fbar + log1m_exp(gbar), gbar + log1m_exp(fbar));
      CHECK(b.hi >= bound - 1e-9);
    }
  }
}

TEST_CASE("sparse-gap family: exact step relation at x_n - 1") {
  // with atoms at 3^n and gaps wider than the support below, the convolution
  // tail at x_n - 1 is exactly 2 F̄ - F̄^2, so the ratio is 2 - F̄ -> 2
  const Distribution c1 = Distribution::counterexample(1, 1e-3, 8);
  const Distribution cc = conv_atomic(c1, c1);
  for (int n = 3; n <= 7; ++n) {
    const double x = std::pow(3.0, n) - 1.0;
    const double t = std::exp(c1.log_tail(x));
    const double got = std::exp(cc.log_tail(x));
    CHECK(got == doctest::Approx(2.0 * t - t * t).epsilon(1e-12));
    CHECK(got / t == doctest::Approx(2.0 - t).epsilon(1e-12));
  }
}

TEST_CASE("self_conv_n: identities and the Erlang-3 oracle") {
  // deterministic shift: {1: 1.0} four-fold is {4: 1.0}
  const Distribution one = make_atomic({1.0}, {0.0});
  const Distribution four = self_conv_n(one, 4);
  CHECK(std::exp(four.log_tail(3.9)) == doctest::Approx(1.0));
  CHECK(four.log_tail(4.0) == kNegInf);

  const Distribution e1 = make_parametric("exponential", {1.0});
  CHECK(self_conv_n(e1, 1).kind() == Kind::Parametric);  // n = 1 is the identity

  SelfConvOptions o;
  o.range = 30.0;
  o.points = 1500;
  const Distribution er3 = self_conv_n(e1, 3, o);
  REQUIRE(er3.kind() == Kind::Grid);
  for (double x : {1.0, 5.0, 10.0, 20.0})
    CHECK(std::abs(std::expm1(er3.log_tail(x) - oracle::erlang_log_tail(3, x))) < 1e-6);

  CHECK_THROWS_AS(self_conv_n(e1, 1 << 21), BudgetError);
  SelfConvOptions tiny;
  tiny.range = 10.0;
  tiny.max_n = 4;
  CHECK_THROWS_AS(self_conv_n(e1, 5, tiny), BudgetError);
}

TEST_CASE("stopping time pmfs") {
  const StoppingTimePmf d2 = StoppingTimePmf::deterministic(2);
  CHECK(d2.mean() == 2.0);
  CHECK(d2.log_pmf(2) == 0.0);

  const StoppingTimePmf g = StoppingTimePmf::geometric(0.5);
  CHECK(g.mean() == doctest::Approx(2.0));
  CHECK(std::exp(g.log_pmf(3)) == doctest::Approx(0.125));
  CHECK(std::exp(g.log_neglected()) < 1e-12);
  CHECK(g.light_tail_margin().has_value());

  CHECK_THROWS_AS(StoppingTimePmf::geometric(1.5), std::invalid_argument);
  CHECK_THROWS_AS(StoppingTimePmf::from_log_pmf({std::log(0.5), std::log(0.4)}),
                  std::invalid_argument);
}

TEST_CASE("stopped sums: degenerate tau, compound geometric oracle") {
  const Distribution e1 = make_parametric("exponential", {1.0});
  SelfConvOptions o;
  o.range = 24.0;
  o.points = 1200;

  // tau = 2 coincides with the plain two-fold convolution
  const Distribution s2 = stopped_sum(e1, StoppingTimePmf::deterministic(2), o);
  const Distribution c2 = self_conv_n(e1, 2, o);
  for (double x : {0.5, 3.0, 11.0})
    CHECK(s2.log_tail(x) == doctest::Approx(c2.log_tail(x)).epsilon(1e-14));

  // geometric tau over Exp(1): compound geometric is Exp(alpha (1-q));
  // oracle: direct series summation of Erlang tails
  const Distribution sg = stopped_sum(e1, StoppingTimePmf::geometric(0.5), o);
  for (double x : {1.0, 5.0, 10.0, 20.0}) {
    const double want = oracle::compound_geo_exp_log_tail(1.0, 0.5, x);
    CHECK(std::abs(std::expm1(sg.log_tail(x) - want)) < 1e-6);
    CHECK(std::abs(std::expm1(sg.log_tail(x) + 0.5 * x)) < 1e-6);  // Exp(1/2)
  }

  // atomic path: mixture of exact convolutions
  const double l2 = std::log(0.5);
  const Distribution a = make_atomic({1.0, 2.0}, {l2, l2});
  const Distribution sa =
      stopped_sum(a, StoppingTimePmf::from_log_pmf({l2, l2}), SelfConvOptions{});
  REQUIRE(sa.kind() == Kind::Atomic);
  // P(S > 2.5) = 0.5 P(xi1 > 2.5) + 0.5 P(xi1 + xi2 > 2.5) = 0.5 * 0 + 0.5 * 0.75
  CHECK(std::exp(sa.log_tail(2.5)) == doctest::Approx(0.375).epsilon(1e-12));

  // tails of the stopped sum dominate sum_n pmf(n) F̄
  for (double x : {0.5, 2.0, 9.0})
    CHECK(sg.log_tail(x) >= e1.log_tail(x) - 1e-9);

  // a visibly truncated pmf folds its neglected mass into the result
  const StoppingTimePmf trunc =
      StoppingTimePmf::from_log_pmf({std::log(0.6), std::log(0.3)}, std::log(0.1));
  const Distribution st = stopped_sum(a, trunc, SelfConvOptions{});
  REQUIRE(st.kind() == Kind::Atomic);
  CHECK(st.truncated());
  CHECK(std::exp(st.log_neglected_mass()) == doctest::Approx(0.1));
  CHECK(std::abs(log_sum_exp(st.log_masses())) < 1e-12);
}

TEST_CASE("tail product integral") {
  const Distribution e1 = make_parametric("exponential", {1.0});
  // analytic: ∫_0^x e^{-(x-y)} e^{-y} dy = x e^{-x}
  for (double x : {0.5, 2.0, 8.0}) {
    const LogBracket b = tail_product_integral(e1, x);
    CHECK(std::abs(std::expm1(b.est - (std::log(x) - x))) < 2e-4);
    CHECK(b.lo <= std::log(x) - x + 1e-12);
    CHECK(b.hi >= std::log(x) - x - 1e-12);
  }
  CHECK(tail_product_integral(e1, 0.0).est == kNegInf);

  // atomic inputs integrate the step integrand exactly
  const double l2 = std::log(0.5);
  const Distribution a = make_atomic({1.0, 3.0}, {l2, l2});
  // F̄(y)F̄(4-y) on [0,2]: y<1: 1 * F̄(4-y)=0? F̄(4-y) for 4-y>3 is 0... piecewise:
  // y in [0,1): F̄(y)=1, 4-y in (3,4]: F̄=0 -> 0; y in [1,2]: F̄(y)=0.5, 4-y in [2,3): F̄=0.5
  // so ∫_0^4 = 2 * ∫_0^2 = 2 * (1 * 0.25) = 0.5
  const LogBracket ab = tail_product_integral(a, 4.0);
  CHECK(std::exp(ab.est) == doctest::Approx(0.5).epsilon(1e-12));

  // Pareto(2): J(x)/F̄(x) approaches 2a = 2 from below the horizon
  const Distribution p2 = make_parametric("pareto", {2.0});
  const LogBracket jp = tail_product_integral(p2, 200.0);
  const double ratio = std::exp(jp.est - p2.log_tail(200.0));
  CHECK(ratio > 1.5);
  CHECK(ratio < 2.2);
}

TEST_CASE("budget errors name the budget") {
  std::mt19937_64 rng(3);
  const Distribution f = random_atomic(rng, 60);
  ConvOptions tight;
  tight.pair_budget = 100.0;
  CHECK_THROWS_AS(conv_atomic(f, f, tight), BudgetError);
  try {
    conv_atomic(f, f, tight);
  } catch (const BudgetError& e) {
    CHECK(std::string(e.what()).find("budget") != std::string::npos);
  }
}
