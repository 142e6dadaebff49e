#pragma once

// Convolution tails: exact for atomic inputs, bracketed Riemann–Stieltjes
// sums otherwise. The bracketed path evaluates
//
//   F*G(x, inf) = Ḡ(x)·... = F̄(x) + F{0}Ḡ(x) + ∫_(0,x] Ḡ(x-y) F(dy)
//
// over a uniform partition of [0, x]: the lower sum takes Ḡ at the left cell
// endpoint in y, the upper sum at the right endpoint, and the reported
// estimate uses the per-cell geometric mean of the two (always inside the
// bracket, second-order accurate). Note the whole computation needs tails
// only on [0, x]. Summation order is ascending and compensated, so results
// are bit-reproducible.

#include <cstddef>
#include <optional>
#include <vector>

#include "convtail/distribution.hpp"
#include "convtail/logspace.hpp"

namespace convtail {

struct ConvOptions {
  double tol = 0.02;         // max log-space bracket width before giving up
  double step_scale = 1e-3;  // initial cell size = step_scale * (1 + x)
  int max_refine = 12;
  double pair_budget = 4e6;  // atom-pair budget for exact convolutions
};

struct LogBracket {
  double lo = kNegInf;
  double hi = kNegInf;
  double est = kNegInf;  // per-cell geometric-mean estimate, lo <= est <= hi
  double width() const { return hi - lo; }
};

// log of the convolution tail F*G(x, inf). Exact (zero-width bracket) when
// either input is atomic. Throws ToleranceError if the bracket cannot be
// brought under opts.tol within opts.max_refine halvings.
LogBracket conv_tail_at(const Distribution& f, const Distribution& g, double x,
                        const ConvOptions& opts = {});

// Exact convolution of two atomic distributions: atoms at all pairwise sums,
// masses combined in log space, exactly-equal sums merged. Throws BudgetError
// when the atom-pair product exceeds opts.pair_budget.
Distribution conv_atomic(const Distribution& f, const Distribution& g,
                         const ConvOptions& opts = {});

struct SelfConvOptions {
  double range = 0.0;        // grid range; 0 = input's own range (grid kinds)
  std::size_t points = 2048; // lattice resolution of materialized results
  bool richardson = true;    // one step-halving extrapolation (non-atomic path)
  long max_n = 1 << 20;
  double pair_budget = 4e6;
};

// n-fold self-convolution. Atomic inputs stay atomic (exact); other kinds are
// materialized on a uniform lattice over [0, range] and carry an accumulated
// error bound (grid_err_bound).
Distribution self_conv_n(const Distribution& f, long n, const SelfConvOptions& opts = {});

// Distribution of an independent stopping time tau on {1, 2, ...}, stored as
// truncated log-pmf. kappa (light_tail_margin) is the declared margin with
// E e^{kappa tau} finite.
class StoppingTimePmf {
 public:
  static StoppingTimePmf deterministic(long n);
  // P{tau = n} = (1-q) q^(n-1), truncated once the neglected mass q^N
  // drops below tail_tol.
  static StoppingTimePmf geometric(double q, double tail_tol = 1e-13);
  static StoppingTimePmf from_log_pmf(std::vector<double> log_pmf_from_1,
                                      double log_neglected = kNegInf,
                                      std::optional<double> light_tail_margin = {});

  std::size_t max_n() const { return log_pmf_.size(); }
  double log_pmf(std::size_t n) const { return log_pmf_[n - 1]; }  // n in [1, max_n]
  double mean() const { return mean_; }
  double log_neglected() const { return log_neglected_; }
  std::optional<double> light_tail_margin() const { return light_tail_margin_; }

 private:
  StoppingTimePmf() = default;
  std::vector<double> log_pmf_;
  double mean_ = 0.0;
  double log_neglected_ = kNegInf;
  std::optional<double> light_tail_margin_;
};

// Randomly stopped sum S_tau: the mixture sum_n pmf(n) F^{*n}, tails mixed in
// log space. The neglected pmf mass is folded into the result's error bound.
Distribution stopped_sum(const Distribution& f, const StoppingTimePmf& tau,
                         const SelfConvOptions& opts = {});

// log of ∫_0^x F̄(x-y) F̄(y) dy, by symmetric bracketed quadrature over
// [0, x/2] (exact for atomic F). x = 0 gives the empty integral (-inf).
LogBracket tail_product_integral(const Distribution& f, double x,
                                 const ConvOptions& opts = {});

}  // namespace convtail
