#include "convtail/subadditive.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "convtail/errors.hpp"
#include "convtail/logspace.hpp"
#include "convtail/quadrature.hpp"
#include "convtail/transforms.hpp"

namespace convtail {

double SubadditiveFunction::eval(double x) const {
  if (!(x >= 0.0)) throw std::domain_error("SubadditiveFunction: x must be >= 0");
  if (x == 0.0) return 0.0;
  if (x > breakpoints.back())
    throw std::domain_error("SubadditiveFunction: x beyond the last breakpoint");
  // segments are left-open right-closed: x = x_n evaluates with eps_n
  const auto it = std::lower_bound(breakpoints.begin(), breakpoints.end(), x);
  return slopes[it - breakpoints.begin()] * x;
}

namespace {

// Candidate scan points for the outward searches: atoms for atomic inputs,
// grid nodes for grids, a multiplicative sweep for continuous tails.
class ScanPoints {
 public:
  ScanPoints(const Distribution& f, double step) : f_(f), step_(step) {}

  // first candidate strictly above x (NaN when the representation is exhausted)
  double next(double x) const {
    switch (f_.kind()) {
      case Kind::Atomic: {
        const auto& pts = f_.points();
        const auto it = std::upper_bound(pts.begin(), pts.end(), x);
        return it == pts.end() ? std::nan("") : *it;
      }
      case Kind::Grid: {
        const double dx = f_.grid_dx();
        const double k = std::floor(x / dx + 1e-12) + 1.0;
        const double c = k * dx;
        return c > f_.max_x() * (1.0 + 1e-12) ? std::nan("") : std::min(c, f_.max_x());
      }
      default:
        return x < 1.0 ? 1.0 : x * step_;
    }
  }

 private:
  const Distribution& f_;
  double step_;
};

}  // namespace

SubadditiveFunction construct_subadditive(const Distribution& f, double delta, int levels,
                                          const SubadditiveOptions& opts) {
  if (!(delta > 0.0 && delta <= 1.0))
    throw std::invalid_argument("construct_subadditive: delta must be in (0, 1]");
  if (levels < 2 || levels > 24)
    throw std::invalid_argument("construct_subadditive: levels must be in [2, 24]");

  const ScanPoints scan(f, opts.scan_step);

  // x_1: first scan point >= 2 with F̄(x_1) < delta/2
  double x1 = 2.0;
  if (f.log_tail(x1) >= std::log(delta / 2.0)) {
    for (;;) {
      x1 = scan.next(x1);
      if (std::isnan(x1))
        throw LightTailError("construct_subadditive: representation exhausted before "
                             "F̄(x_1) < delta/2");
      if (f.log_tail(x1) < std::log(delta / 2.0)) break;
    }
  }

  // eps_1: canonical bisection of E{e^{eps xi}; xi <= x_1} against a target
  // strictly between the eps = 0 value and 1
  const double tail_x1 = std::exp(f.log_tail(x1));
  const double target1 = 1.0 - std::min(delta / 4.0, tail_x1 / 2.0);
  double hi = 1.0 / x1;
  while (exp_moment_upto(f, hi, x1) < target1) hi *= 2.0;
  const double eps1 = solve_monotone(
      [&](double e) { return exp_moment_upto(f, e, x1); }, target1, 0.0, hi, opts.bisect_tol);

  std::vector<double> xs{x1};
  std::vector<double> eps{eps1};
  const double horizon = opts.horizon_factor * x1;

  for (int n = 1; n < levels; ++n) {
    const double floor_x = std::max(std::pow(2.0, n + 1), xs.back());
    const double log_tail_bound = std::log(delta) - (n + 1) * 0.6931471805599453;
    double x = xs.back();
    double moment = 0.0;  // E{e^{eps_n xi}; xi in (x_n, x]}
    double prev = xs.back();
    bool found = false;
    while (!found) {
      x = scan.next(x);
      if (std::isnan(x) || x > horizon) {
        const char* why = std::isnan(x) ? "representation exhausted" : "horizon budget reached";
        throw LightTailError(
            "construct_subadditive: search for x_" + std::to_string(n + 1) + " failed (" + why +
            "): truncated moment reached " + std::to_string(moment) + " < delta = " +
            std::to_string(delta) + "; evidence of a light tail");
      }
      moment += partial_exp_moment(f, eps.back(), prev, x);
      prev = x;
      found = x >= floor_x && f.log_tail(x) < log_tail_bound && moment >= delta;
    }

    // eps_{n+1} in (0, eps_n): E{e^{eps xi}; (x_n, x_{n+1}]} = delta/2^n.
    // At eps_n the moment is >= delta > delta/2^n; at 0 it is
    // F(x_n, x_{n+1}] <= F̄(x_n) < delta/2^n, so the root is interior.
    const double target = delta * std::pow(0.5, n);
    const double a = xs.back(), b = x;
    const double eps_next = solve_monotone(
        [&](double e) { return partial_exp_moment(f, e, a, b); }, target, 0.0, eps.back(),
        opts.bisect_tol);
    xs.push_back(x);
    eps.push_back(eps_next);
  }

  SubadditiveFunction h;
  h.breakpoints = std::move(xs);
  h.slopes = std::move(eps);
  h.delta = delta;
  return h;
}

SubadditiveDiagnostics verify_subadditive(const SubadditiveFunction& h, const Distribution& f,
                                          std::int64_t n_pairs, std::uint64_t seed) {
  SubadditiveDiagnostics d;
  d.slopes = h.slopes;

  d.slopes_decreasing = true;
  for (size_t i = 0; i + 1 < h.slopes.size(); ++i)
    if (!(h.slopes[i + 1] < h.slopes[i]) || !(h.slopes[i + 1] > 0.0)) d.slopes_decreasing = false;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double xN = h.breakpoints.back();
  for (std::int64_t i = 0; i < n_pairs; ++i) {
    const double x = unit(rng) * xN;
    const double y = unit(rng) * x;
    const double lhs = h.eval(x);
    const double rhs = h.eval(y) + h.eval(x - y);
    if (lhs > rhs + 1e-12 * std::max(1.0, lhs)) ++d.subadd_violations;
  }

  // E{e^{h(xi)}; xi <= x_N}: segment-by-segment truncated moments, plus any
  // mass at 0 (h(0) = 0)
  const double atom0 = f.log_mass_at_zero();
  double expm = atom0 > kNegInf ? std::exp(atom0) : 0.0;
  double lo = 0.0;
  for (size_t n = 0; n < h.breakpoints.size(); ++n) {
    expm += partial_exp_moment(f, h.slopes[n], lo, h.breakpoints[n]);
    lo = h.breakpoints[n];
  }
  d.exp_moment = expm;
  d.exp_moment_ok = expm <= 1.0 + h.delta + 1e-6;

  // growth certificate: E{xi e^{h(xi)}; xi <= x_{N'}} >= delta * (N' - 1)
  d.growth_ok = true;
  double g = partial_exp_x_moment(f, h.slopes[0], 0.0, h.breakpoints[0]);
  for (size_t n = 1; n < h.breakpoints.size(); ++n) {
    g += partial_exp_x_moment(f, h.slopes[n], h.breakpoints[n - 1], h.breakpoints[n]);
    d.growth.push_back(g);
    if (g < h.delta * static_cast<double>(n) * (1.0 - 1e-9)) d.growth_ok = false;
  }
  return d;
}

}  // namespace convtail
