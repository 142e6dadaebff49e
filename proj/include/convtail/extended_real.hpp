#pragma once

// Nonnegative reals extended with +infinity, for means, Laplace transform
// values, and limit constants. Arithmetic follows the measure-theoretic
// conventions x + inf = inf, x * inf = inf for x > 0, and 0 * inf = 0.

#include <cmath>
#include <limits>
#include <stdexcept>

namespace convtail {

class ExtendedReal {
 public:
  ExtendedReal() = default;
  ExtendedReal(double v) : v_(v) {
    if (std::isnan(v) || v < 0.0)
      throw std::invalid_argument("ExtendedReal: value must be a nonnegative real");
  }

  static ExtendedReal infinity() {
    ExtendedReal r;
    r.v_ = std::numeric_limits<double>::infinity();
    return r;
  }

  bool is_finite() const { return std::isfinite(v_); }
  double value() const { return v_; }

  friend ExtendedReal operator+(ExtendedReal a, ExtendedReal b) {
    ExtendedReal r;
    r.v_ = a.v_ + b.v_;
    return r;
  }
  friend ExtendedReal operator*(ExtendedReal a, ExtendedReal b) {
    ExtendedReal r;
    if ((a.v_ == 0.0 && !b.is_finite()) || (b.v_ == 0.0 && !a.is_finite()))
      r.v_ = 0.0;
    else
      r.v_ = a.v_ * b.v_;
    return r;
  }
  friend bool operator==(ExtendedReal a, ExtendedReal b) { return a.v_ == b.v_; }
  friend bool operator<(ExtendedReal a, ExtendedReal b) { return a.v_ < b.v_; }
  friend bool operator<=(ExtendedReal a, ExtendedReal b) { return a.v_ <= b.v_; }
  friend bool operator>(ExtendedReal a, ExtendedReal b) { return a.v_ > b.v_; }
  friend bool operator>=(ExtendedReal a, ExtendedReal b) { return a.v_ >= b.v_; }

 private:
  double v_ = 0.0;
};

}  // namespace convtail
