#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "rldp/box.hpp"
#include "rldp/model.hpp"
#include "rldp/rate.hpp"

namespace rldp {

class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reward lattice h * Z^d. Every deterministic reward must sit on it.
struct LatticeSpec {
  int dim = 1;
  std::vector<double> step{1.0};

  /// Smallest step of the form base/k (k <= 64) that puts every reward on
  /// the lattice, base being the smallest nonzero |f_j(s)|.
  static LatticeSpec infer(const RenewalModel& model);

  /// Integer lattice coordinates of a reward; throws ModelError off-lattice.
  std::array<long, 2> cell(const std::vector<double>& reward) const;
};

/// Default budget for sum over t of lattice cells.
inline constexpr double kDefaultCellBudget = 1e8;

enum class MeasureKind { constrained_mu, free_nu };

const char* to_string(MeasureKind k);

/// Exact log masses of mu_t (constrained) or nu_t (free) at fixed t, stored
/// in absolute lattice coordinates W_t / h on a dense box.
struct LatticeMeasure {
  long t = 0;
  MeasureKind kind = MeasureKind::constrained_mu;
  int dim = 1;
  std::vector<double> step;
  std::array<long, 2> lo{0, 0};
  std::array<long, 2> extent{1, 1};
  std::vector<double> log_mass;  // row-major over the box
  double log_normalizer = 0.0;   // log-sum-exp of log_mass

  double at(long k0, long k1 = 0) const;
  std::array<long, 2> cell_of(std::size_t flat) const;
  std::vector<double> point(std::size_t flat) const;  // absolute reward coordinates
};

/// ln of the unnormalized mass of {W_t in box} (scaled=false) or
/// {W_t / t in box} (scaled=true).
double log_measure_box(const LatticeMeasure& m, const Box& box, bool scaled);

/// log_measure_box minus the log normalizer.
double prob_box(const LatticeMeasure& m, const Box& box, bool scaled);

/// mu_t for t = 0..T. Needs a finite-head model without noise, d <= 2.
std::vector<LatticeMeasure> mu_exact(const RenewalModel& model, const LatticeSpec& spec,
                                     long horizon, double cell_budget = kDefaultCellBudget);

/// nu_t for t = 0..T.
std::vector<LatticeMeasure> nu_exact(const RenewalModel& model, const LatticeSpec& spec,
                                     long horizon, double cell_budget = kDefaultCellBudget);

/// Materializes only the requested times; the DP keeps a rolling window.
std::vector<LatticeMeasure> measures_at(const RenewalModel& model, const LatticeSpec& spec,
                                        std::vector<long> times, MeasureKind kind,
                                        double cell_budget = kDefaultCellBudget);

struct EmpiricalRateRow {
  long t = 0;
  double constrained = 0.0;  // -(1/t) ln P_t^c[W_t/t in box]
  double free = 0.0;         // -(1/t) ln P_t[W_t/t in box]
};

std::vector<EmpiricalRateRow> empirical_rate(const RenewalModel& model, const LatticeSpec& spec,
                                             const Box& box, std::vector<long> times,
                                             double cell_budget = kDefaultCellBudget);

struct SupermultViolation {
  long tau = 0;
  long t = 0;
  double lhs = 0.0;  // ln mu_{tau+t}(C)
  double rhs = 0.0;  // ln mu_tau(C) + ln mu_t(C)
};

struct SupermultReport {
  std::size_t pairs_checked = 0;
  std::vector<SupermultViolation> violations;
  std::vector<double> log_mass;  // ln mu_t(C), t = 0..tau_max + t_max

  bool ok() const { return violations.empty(); }
};

/// Checks ln mu_{tau+t}(C) >= ln mu_tau(C) + ln mu_t(C) - 1e-9 for the scaled
/// event C and all 1 <= tau <= tau_max, 1 <= t <= t_max.
SupermultReport supermult_check(const RenewalModel& model, const LatticeSpec& spec, const Box& box,
                                long tau_max, long t_max,
                                double cell_budget = kDefaultCellBudget);

/// Random walk X = S with p uniform on {2,3}, v = 0.
RenewalModel open_convex_model();

struct OpenConvexReport {
  long t = 0;
  double free_rate = 0.0;        // -(1/t) ln P_t[W_t/t < 1]
  double log_prob = 0.0;         // ln P_t[W_t/t < 1]
  double log_lower_bound = 0.0;  // ln E[U_{t-1} e^{H_{t-1}}]
  RateValue rate_inf;            // inf over (-inf, 1) of I
  bool ok = false;               // free_rate <= 0.01, bound holds, rate infinite
};

OpenConvexReport open_convex_counterexample(long t);

}  // namespace rldp
