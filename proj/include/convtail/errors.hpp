#pragma once

#include <stdexcept>
#include <string>

namespace convtail {

// Work-budget exceeded (atom-pair product, refinement horizon, power count).
class BudgetError : public std::runtime_error {
 public:
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

// A bracketed quadrature could not reach the requested tolerance.
class ToleranceError : public std::runtime_error {
 public:
  explicit ToleranceError(const std::string& what) : std::runtime_error(what) {}
};

// The subadditive construction's outward search exhausted its horizon: the
// truncated exponential moment stayed below delta, which is evidence the
// input tail is light.
class LightTailError : public std::runtime_error {
 public:
  explicit LightTailError(const std::string& what) : std::runtime_error(what) {}
};

// Evaluation requested outside a grid-backed distribution's range.
class OutOfRangeError : public std::out_of_range {
 public:
  explicit OutOfRangeError(const std::string& what) : std::out_of_range(what) {}
};

}  // namespace convtail
