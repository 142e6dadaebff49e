#pragma once

// Constructive build of a piecewise-linear subadditive function h with
// h(0) = 0, slopes decreasing segment by segment, a controlled truncated
// exponential moment E{e^{h(xi)}; xi <= x_N} <= 1 + delta, and a truncated
// first moment E{xi e^{h(xi)}; xi <= x_N} growing at least linearly in the
// segment count. The construction only terminates for heavy-tailed inputs;
// on light-tailed inputs the outward search exhausts its horizon and a
// LightTailError reports the evidence.

#include <cstdint>
#include <vector>

#include "convtail/distribution.hpp"

namespace convtail {

// h(x) = slopes[n] * x on (breakpoints[n-1], breakpoints[n]], with an
// implicit breakpoint x_0 = 0 and h(0) = 0. Slopes are strictly decreasing
// and positive; breakpoints[n] >= 2^(n+1).
struct SubadditiveFunction {
  std::vector<double> breakpoints;  // x_1 < x_2 < ... < x_N
  std::vector<double> slopes;       // eps_1 > eps_2 > ... > eps_N > 0
  double delta = 1.0;

  double eval(double x) const;  // throws for x < 0 or x > breakpoints.back()
};

struct SubadditiveOptions {
  double horizon_factor = 1e6;  // outward search budget: x <= horizon_factor * x_1
  double scan_step = 1.05;      // multiplicative scan step on continuous inputs
  double bisect_tol = 1e-10;    // relative tolerance of the slope bisections
};

// Runs the level-by-level induction:
//   x_1 >= 2 with F̄(x_1) < delta/2, eps_1 from a canonical bisection;
//   x_{n+1} >= 2^{n+1} is the first scan point with F̄(x_{n+1}) < delta/2^{n+1}
//   and E{e^{eps_n xi}; xi in (x_n, x_{n+1}]} >= delta;
//   eps_{n+1} in (0, eps_n) solves
//   E{e^{eps_{n+1} xi}; xi in (x_n, x_{n+1}]} = delta/2^n.
SubadditiveFunction construct_subadditive(const Distribution& f, double delta, int levels,
                                          const SubadditiveOptions& opts = {});

struct SubadditiveDiagnostics {
  std::int64_t subadd_violations = 0;  // over seeded pseudo-random pairs
  double exp_moment = 0.0;             // E{e^{h(xi)}; xi <= x_N}
  std::vector<double> growth;          // growth[i] = E{xi e^{h(xi)}; xi <= x_{i+2}}
  std::vector<double> slopes;
  bool exp_moment_ok = false;          // <= 1 + delta (+ quadrature slack)
  bool growth_ok = false;              // growth for level N' >= delta * (N'-1)
  bool slopes_decreasing = false;
  bool pass() const { return subadd_violations == 0 && exp_moment_ok && growth_ok && slopes_decreasing; }
};

SubadditiveDiagnostics verify_subadditive(const SubadditiveFunction& h, const Distribution& f,
                                          std::int64_t n_pairs, std::uint64_t seed);

}  // namespace convtail
