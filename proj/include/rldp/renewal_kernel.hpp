#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rldp/model.hpp"

namespace rldp {

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// ln a_s = intercept + slope * s for every s beyond the head.
struct LogAffineTail {
  double intercept = 0.0;
  double slope = 0.0;
};

/// Nonnegative weights a_s, s >= 1, stored as logarithms (-inf is zero).
struct LogWeightSequence {
  std::vector<double> head;  // head[s - 1] = ln a_s for s = 1..s0
  std::optional<LogAffineTail> tail;

  long head_length() const { return static_cast<long>(head.size()); }
  double log_weight(long s) const;
  bool all_zero() const;

  /// ln A(zeta) with A(zeta) = sum_s a_s e^{-zeta s}; +inf at or below the
  /// convergence abscissa of the tail.
  double log_transform(double zeta) const;

  /// Smallest zeta at which the tail series converges (-inf without a tail).
  double convergence_abscissa() const;

  /// sup_s ln(a_s) / s, so that a_s <= e^{witness * s} for every s.
  double growth_witness() const;

  /// gcd of {s : a_s > 0} is 1.
  bool has_coprime_support() const;
};

/// ln Psi_t for t = 0..T.
struct LogSequence {
  std::vector<double> values;

  double operator[](std::size_t t) const { return values[t]; }
  std::size_t size() const { return values.size(); }
  long horizon() const { return static_cast<long>(values.size()) - 1; }
};

/// Solves Psi_t = sum_{s=1}^t a_s Psi_{t-s}, Psi_0 = 1, in log domain.
/// A geometric-type tail is folded in through a running accumulator so the
/// cost stays O(T * s0).
LogSequence solve_renewal(const LogWeightSequence& weights, long horizon);

/// Result of bracketing the root of ln A(zeta) = 0.
struct GrowthRoot {
  double value = 0.0;
  double lo = 0.0;   // ln A(lo) > 0
  double hi = 0.0;   // ln A(hi) <= 0
  int iterations = 0;
};

inline constexpr double kRootTolerance = 1e-12;
inline constexpr int kRootIterationBudget = 200;

/// psi = inf{zeta : A(zeta) <= 1} by bisection, with both bracket ends
/// certified. Throws NumericalError if the budget is exhausted and
/// std::domain_error when the support of a is empty or not coprime.
GrowthRoot psi_bracket(const LogWeightSequence& weights);
double psi_rate(const LogWeightSequence& weights);

/// a_s = e^{v(s)} p(s).
LogWeightSequence pinning_weights(const RenewalModel& model);

/// ln Z_t^c, t = 0..T.
LogSequence partition_constrained(const RenewalModel& model, long horizon);

/// ln Z_t, t = 0..T, via Z_t = P[S1>t] + sum_tau Z_tau^c P[S1>t-tau].
LogSequence partition_free(const RenewalModel& model, long horizon);

/// Diagnostic check that (1/t) ln Z_t lies in
/// [max{z(0), ell_inf} - tol, max{z(0), ell_sup} + tol].
struct SandwichReport {
  long t = 0;
  double growth = 0.0;  // (1/t) ln Z_t
  double lower = 0.0;
  double upper = 0.0;
  double tolerance = 0.0;
  bool holds = false;
};

SandwichReport partition_sandwich(const RenewalModel& model, const LogSequence& log_free,
                                  long t, double tolerance);

}  // namespace rldp
