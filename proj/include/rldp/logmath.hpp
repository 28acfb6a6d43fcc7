#pragma once

#include <cmath>
#include <limits>
#include <span>

namespace rldp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// ln(e^a + e^b) with -inf treated as zero mass.
inline double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  if (a < b) return b + std::log1p(std::exp(a - b));
  return a + std::log1p(std::exp(b - a));
}

/// Streaming log-sum-exp. The running sum is kept relative to the largest
/// term seen so far, so a single pass suffices.
class LogAccumulator {
 public:
  void add(double x) {
    if (x == kNegInf) return;
    if (x == kInf) {
      max_ = kInf;
      return;
    }
    if (max_ == kNegInf) {
      max_ = x;
      sum_ = 1.0;
    } else if (x > max_) {
      sum_ = sum_ * std::exp(max_ - x) + 1.0;
      max_ = x;
    } else {
      sum_ += std::exp(x - max_);
    }
  }

  double value() const {
    if (max_ == kNegInf || max_ == kInf) return max_;
    return max_ + std::log(sum_);
  }

 private:
  double max_ = kNegInf;
  double sum_ = 0.0;
};

inline double log_sum_exp(std::span<const double> xs) {
  LogAccumulator acc;
  for (double x : xs) acc.add(x);
  return acc.value();
}

/// ln(1 - e^x) for x < 0.
inline double log1m_exp(double x) {
  return x > -0.6931471805599453 ? std::log(-std::expm1(x)) : std::log1p(-std::exp(x));
}

}  // namespace rldp
