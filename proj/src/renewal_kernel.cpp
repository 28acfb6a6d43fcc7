#include "rldp/renewal_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "rldp/logmath.hpp"

namespace rldp {

double LogWeightSequence::log_weight(long s) const {
  if (s < 1) return kNegInf;
  if (s <= head_length()) return head[s - 1];
  if (!tail) return kNegInf;
  return tail->intercept + tail->slope * static_cast<double>(s);
}

bool LogWeightSequence::all_zero() const {
  return !tail && std::all_of(head.begin(), head.end(), [](double x) { return x == kNegInf; });
}

double LogWeightSequence::log_transform(double zeta) const {
  LogAccumulator acc;
  for (long s = 1; s <= head_length(); ++s) acc.add(head[s - 1] - zeta * static_cast<double>(s));
  if (tail) {
    const double ratio = tail->slope - zeta;
    if (ratio >= 0.0) return kInf;
    const double first = tail->intercept + ratio * static_cast<double>(head_length() + 1);
    acc.add(first - log1m_exp(ratio));
  }
  return acc.value();
}

double LogWeightSequence::convergence_abscissa() const {
  return tail ? tail->slope : kNegInf;
}

double LogWeightSequence::growth_witness() const {
  double best = kNegInf;
  for (long s = 1; s <= head_length(); ++s)
    if (head[s - 1] != kNegInf) best = std::max(best, head[s - 1] / static_cast<double>(s));
  if (tail) {
    const double first = static_cast<double>(head_length() + 1);
    best = std::max(best, std::max(tail->intercept / first, 0.0) + tail->slope);
  }
  return best;
}

bool LogWeightSequence::has_coprime_support() const {
  if (tail) return true;
  long g = 0;
  for (long s = 1; s <= head_length(); ++s)
    if (head[s - 1] != kNegInf) g = std::gcd(g, s);
  return g == 1;
}

LogSequence solve_renewal(const LogWeightSequence& weights, long horizon) {
  if (horizon < 0) throw std::invalid_argument("renewal horizon must be nonnegative");
  if (horizon > 500'000'000) throw NumericalError("renewal horizon exceeds the memory budget");

  // Largest single-step log weight magnitude; log values grow at most
  // linearly in t, so t * bound must stay well inside the double range.
  double bound = 0.0;
  for (double x : weights.head)
    if (std::isfinite(x)) bound = std::max(bound, std::abs(x));
  if (weights.tail)
    bound = std::max(bound, std::abs(weights.tail->intercept) +
                                std::abs(weights.tail->slope) * static_cast<double>(horizon));
  if (!(static_cast<double>(horizon) * bound < 1e300))
    throw NumericalError(fmt::format("horizon {} overflows the exponent budget", horizon));

  const long s0 = weights.head_length();
  LogSequence out;
  out.values.assign(static_cast<std::size_t>(horizon) + 1, kNegInf);
  out.values[0] = 0.0;

  // tail_acc = ln sum_{s=s0+1}^{t} a_s Psi_{t-s}
  double tail_acc = kNegInf;
  for (long t = 1; t <= horizon; ++t) {
    LogAccumulator acc;
    const long reach = std::min(t, s0);
    for (long s = 1; s <= reach; ++s) acc.add(weights.head[s - 1] + out.values[t - s]);
    if (weights.tail && t > s0) {
      const double entering = weights.tail->intercept +
                              weights.tail->slope * static_cast<double>(s0 + 1) +
                              out.values[t - s0 - 1];
      tail_acc = log_add(weights.tail->slope + tail_acc, entering);
      acc.add(tail_acc);
    }
    out.values[t] = acc.value();
  }
  return out;
}

GrowthRoot psi_bracket(const LogWeightSequence& weights) {
  if (weights.all_zero()) throw std::domain_error("weight sequence has no positive entry");
  if (!weights.has_coprime_support())
    throw std::domain_error("support of the weight sequence is not coprime");

  // A(zeta) <= sum_s 2^{-s} <= 1 at witness + ln 2.
  GrowthRoot root;
  root.hi = weights.growth_witness() + std::log(2.0);
  double step = 1.0;
  root.lo = root.hi - step;
  while (!(weights.log_transform(root.lo) > 0.0)) {
    step *= 2.0;
    root.lo = root.hi - step;
    if (++root.iterations > kRootIterationBudget)
      throw NumericalError("could not find a lower bracket for psi");
  }
  root.iterations = 0;
  while (root.hi - root.lo > kRootTolerance) {
    const double mid = 0.5 * (root.lo + root.hi);
    if (mid <= root.lo || mid >= root.hi) break;  // bracket at machine resolution
    if (weights.log_transform(mid) > 0.0)
      root.lo = mid;
    else
      root.hi = mid;
    if (++root.iterations > kRootIterationBudget)
      throw NumericalError("bisection budget exhausted for psi");
  }
  root.value = 0.5 * (root.lo + root.hi);
  return root;
}

double psi_rate(const LogWeightSequence& weights) { return psi_bracket(weights).value; }

LogWeightSequence pinning_weights(const RenewalModel& model) {
  LogWeightSequence w;
  const long s0 = model.head_length();
  w.head.resize(static_cast<std::size_t>(s0));
  for (long s = 1; s <= s0; ++s) {
    const double lp = model.log_prob(s);
    w.head[s - 1] = lp == kNegInf ? kNegInf : model.potential(s) + lp;
  }
  if (const auto& g = model.spec().waiting.tail) {
    const auto [gamma, delta] = *model.spec().potential.tail_affine;
    w.tail = LogAffineTail{gamma + std::log(g->c), delta + std::log(g->rho)};
  }
  return w;
}

LogSequence partition_constrained(const RenewalModel& model, long horizon) {
  return solve_renewal(pinning_weights(model), horizon);
}

LogSequence partition_free(const RenewalModel& model, long horizon) {
  const auto constrained = partition_constrained(model, horizon);
  std::vector<double> survival(static_cast<std::size_t>(horizon) + 1);
  for (long k = 0; k <= horizon; ++k) survival[k] = model.log_survival(k);

  LogSequence out;
  out.values.resize(static_cast<std::size_t>(horizon) + 1);
  for (long t = 0; t <= horizon; ++t) {
    LogAccumulator acc;
    // tau = 0 is the no-renewal term P[S1 > t] (Z_0^c = 1).
    for (long tau = 0; tau <= t; ++tau) {
      const double s = survival[t - tau];
      if (s != kNegInf) acc.add(constrained[tau] + s);
    }
    out.values[t] = acc.value();
  }
  return out;
}

SandwichReport partition_sandwich(const RenewalModel& model, const LogSequence& log_free, long t,
                                  double tolerance) {
  if (t < 1 || t > log_free.horizon())
    throw std::out_of_range("sandwich time outside the partition sequence");
  const double z0 = psi_rate(pinning_weights(model));
  const auto ell = tail_exponents(model);
  SandwichReport r;
  r.t = t;
  r.growth = log_free[t] / static_cast<double>(t);
  r.lower = std::max(z0, ell.ell_inf);
  r.upper = std::max(z0, ell.ell_sup);
  r.tolerance = tolerance;
  r.holds = r.growth >= r.lower - tolerance && r.growth <= r.upper + tolerance;
  return r;
}

}  // namespace rldp
