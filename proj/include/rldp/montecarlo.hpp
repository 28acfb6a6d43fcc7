#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "rldp/box.hpp"
#include "rldp/model.hpp"
#include "rldp/rate.hpp"

namespace rldp {

/// Philox4x32-10 counter-based generator.
using PhiloxBlock = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxBlock philox4x32(PhiloxBlock counter, PhiloxKey key);

/// Uniform doubles for path `path` under `seed`. The stream is a pure
/// function of (seed, path).
class PathStream {
 public:
  PathStream(std::uint64_t seed, std::uint64_t path);

  /// Uniform on the open interval (0, 1), 53 random bits.
  double uniform();

 private:
  PhiloxKey key_;
  std::uint64_t path_;
  std::uint64_t block_ = 0;
  PhiloxBlock buffer_{};
  int used_ = 4;
};

inline constexpr long kInfiniteWait = -1;

struct PathSample {
  long t_horizon = 0;
  std::vector<long> waits;                  // kInfiniteWait marks S = inf
  std::vector<std::vector<double>> rewards;  // one per finite wait
  std::vector<double> w;                     // W_t
  double h = 0.0;                            // H_t
  bool u = false;                            // U_t

  /// Recomputes W_t, H_t, U_t from waits and rewards.
  bool consistent(const RenewalModel& model) const;
};

/// Draws pairs (S_i, X_i) until T_i > t or a wait is infinite. The wait that
/// crosses the horizon is recorded; its reward is not.
PathSample sample_path(const RenewalModel& model, long t, std::uint64_t seed, std::uint64_t path);

std::vector<PathSample> sample_paths(const RenewalModel& model, long t, std::size_t n,
                                     std::uint64_t seed, unsigned workers = 1);

enum class Law { constrained, free };

const char* to_string(Law law);
Law parse_law(std::string_view text);

/// Self-normalized estimate of P_t[event]:
///   mean(1{event} (U_t) e^{H_t}) / mean((U_t) e^{H_t}).
struct WeightedEstimate {
  double log_numerator_mean = 0.0;
  double log_normalizer_mean = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;  // delta method on the ratio
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double ess = 0.0;        // (sum w)^2 / sum w^2
  double event_ess = 0.0;  // same, restricted to paths in the event
  bool degenerate = false;  // every weight vanished
};

inline constexpr std::size_t kMonteCarloBlock = 4096;

/// The event receives W_t / t.
using ScaledEvent = std::function<bool(const std::vector<double>&)>;

WeightedEstimate estimate_event(const RenewalModel& model, long t, const ScaledEvent& event,
                                Law law, std::size_t n, std::uint64_t seed,
                                unsigned workers = 1);

WeightedEstimate estimate_prob(const RenewalModel& model, long t, const Box& box, Law law,
                               std::size_t n, std::uint64_t seed, unsigned workers = 1);

/// p uniform on {2,3}, v = 0, X = (S, Y) with standard Cauchy Y.
RenewalModel cauchy_model();

/// C = {w : w_S < 1, w_Y >= 1 / (1 - w_S)}.
bool in_cauchy_event(const std::vector<double>& w);

struct CauchyRow {
  long t = 0;
  double log_tail = 0.0;   // ln P[Y1 >= t^2]
  double log_zc = 0.0;     // ln Z_{t-1}^c
  double log_bound = 0.0;  // sum of the two
  double bound_rate = 0.0;  // -(1/t) ln bound
  WeightedEstimate mc;
  bool bound_holds = false;  // mc.estimate >= bound - 3 se
  bool low_ess = false;
};

struct CauchyReport {
  std::vector<CauchyRow> rows;
  bool rate_decreasing = false;
  bool rate_at_100_ok = true;  // bound_rate <= 0.12 when t = 100 is listed
  RateValue marginal_rate_inf;  // inf of I over w_S < 1 on the S marginal
  bool ok() const;
};

CauchyReport cauchy_counterexample(std::vector<long> t_list, std::size_t n, std::uint64_t seed,
                                   unsigned workers = 1);

}  // namespace rldp
