#pragma once

// Log-space probability arithmetic. Tails and masses are kept as log values
// throughout, so atoms of size exp(-gamma*3^8) survive where linear doubles
// underflow. Reductions run in ascending index order with compensated
// summation, making results reproducible across runs and thread counts.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace convtail {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// log(e^a + e^b)
inline double log_add_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

// log(e^a - e^b), requires a >= b; equal arguments give -inf.
inline double log_sub_exp(double a, double b) {
  if (b == kNegInf) return a;
  if (b >= a) return kNegInf;
  return a + std::log(-std::expm1(b - a));
}

// log(1 - e^a) for a <= 0.
inline double log1m_exp(double a) {
  if (a >= 0.0) return kNegInf;
  // switch point per the usual log1p/expm1 stability split
  return a > -0.6931471805599453 ? std::log(-std::expm1(a)) : std::log1p(-std::exp(a));
}

// Deterministic log-sum-exp over a span, ascending index order.
inline double log_sum_exp(std::span<const double> xs) {
  double m = kNegInf;
  for (double x : xs) m = std::max(m, x);
  if (m == kNegInf || std::isinf(m)) return m;
  double s = 0.0, c = 0.0;
  for (double x : xs) {
    const double t = std::exp(x - m);
    const double y = t - c;
    const double u = s + y;
    c = (u - s) - y;
    s = u;
  }
  return m + std::log(s);
}

// Streaming log-sum-exp; add() order defines the reduction order.
class LogSumAccumulator {
 public:
  void add(double x) {
    if (x == kNegInf) return;
    if (x <= max_) {
      sum_ += std::exp(x - max_);
    } else {
      sum_ = (max_ == kNegInf) ? 1.0 : sum_ * std::exp(max_ - x) + 1.0;
      max_ = x;
    }
  }
  double log_total() const {
    if (max_ == kNegInf) return kNegInf;
    return max_ + std::log(sum_);
  }

 private:
  double max_ = kNegInf;
  double sum_ = 0.0;
};

}  // namespace convtail
