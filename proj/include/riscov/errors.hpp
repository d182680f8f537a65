#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace riscov {

/// Argument outside the documented domain of an operation.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Iterative kernel exhausted its budget. Carries the best estimate
/// reached so far when one is meaningful (NaN otherwise).
class NumericFailure : public std::runtime_error {
 public:
  explicit NumericFailure(const std::string& what,
                          double best = std::numeric_limits<double>::quiet_NaN())
      : std::runtime_error(what), best_(best) {}

  double best_estimate() const { return best_; }

 private:
  double best_;
};

}  // namespace riscov
