#include "rldp/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "rldp/lattice_dist.hpp"
#include "rldp/logmath.hpp"
#include "rldp/parallel.hpp"
#include "rldp/renewal_kernel.hpp"

namespace rldp {
namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

// Draws S from the head / geometric tail / infinity mixture.
class WaitSampler {
 public:
  explicit WaitSampler(const RenewalModel& model) : model_(model) {
    double cum = 0.0;
    for (long s : model.head_support()) {
      cum += model.prob(s);
      cumulative_.push_back(cum);
    }
    if (const auto& tail = model.spec().waiting.tail) {
      log_rho_ = std::log(tail->rho);
      tail_mass_ = tail->c * std::pow(tail->rho, static_cast<double>(model.head_length() + 1)) /
                   (1.0 - tail->rho);
    }
  }

  long draw(PathStream& rng) const {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it != cumulative_.end()) return model_.head_support()[it - cumulative_.begin()];
    const double head_mass = cumulative_.empty() ? 0.0 : cumulative_.back();
    if (tail_mass_ > 0.0 && u < head_mass + tail_mass_) {
      const double offset = std::floor(std::log(rng.uniform()) / log_rho_);
      return model_.head_length() + 1 + static_cast<long>(offset);
    }
    if (model_.p_infinity() > 0.0) return kInfiniteWait;
    // u beyond the rounded total mass: the last finite atom.
    return model_.head_support().back();
  }

 private:
  const RenewalModel& model_;
  std::vector<double> cumulative_;
  double tail_mass_ = 0.0;
  double log_rho_ = 0.0;
};

double standard_cauchy(PathStream& rng) {
  return std::tan(std::numbers::pi * (rng.uniform() - 0.5));
}

PathSample simulate(const RenewalModel& model, const WaitSampler& waits, long t,
                    std::uint64_t seed, std::uint64_t path) {
  PathStream rng(seed, path);
  PathSample p;
  p.t_horizon = t;
  p.w.assign(model.dim(), 0.0);
  p.u = t == 0;
  long time = 0;
  while (time < t) {
    const long s = waits.draw(rng);
    p.waits.push_back(s);
    if (s == kInfiniteWait || time + s > t) break;
    time += s;
    auto x = model.reward(s);
    if (const auto& noise = model.spec().reward.noise) x[noise->coordinate] += standard_cauchy(rng);
    for (int j = 0; j < model.dim(); ++j) p.w[j] += x[j];
    p.h += model.potential(s);
    p.rewards.push_back(std::move(x));
    p.u = time == t;
  }
  return p;
}

struct BlockSums {
  LogAccumulator a, b, a2, b2;
};

}  // namespace

PhiloxBlock philox4x32(PhiloxBlock c, PhiloxKey k) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k[0] += kW0;
      k[1] += kW1;
    }
    const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
  return c;
}

PathStream::PathStream(std::uint64_t seed, std::uint64_t path)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}, path_(path) {}

double PathStream::uniform() {
  if (used_ >= 4) {
    buffer_ = philox4x32({static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                          static_cast<std::uint32_t>(path_), static_cast<std::uint32_t>(path_ >> 32)},
                         key_);
    ++block_;
    used_ = 0;
  }
  const std::uint32_t a = buffer_[used_] >> 5;
  const std::uint32_t b = buffer_[used_ + 1] >> 6;
  used_ += 2;
  return (a * 67108864.0 + b + 0.5) / 9007199254740992.0;
}

bool PathSample::consistent(const RenewalModel& model) const {
  std::vector<double> w2(model.dim(), 0.0);
  double h2 = 0.0;
  long time = 0;
  std::size_t k = 0;
  bool u2 = t_horizon == 0;
  for (long s : waits) {
    if (s == kInfiniteWait || time + s > t_horizon) break;
    time += s;
    if (k >= rewards.size()) return false;
    for (int j = 0; j < model.dim(); ++j) w2[j] += rewards[k][j];
    h2 += model.potential(s);
    ++k;
    u2 = time == t_horizon;
  }
  if (k != rewards.size() || u2 != u) return false;
  for (int j = 0; j < model.dim(); ++j)
    if (std::abs(w2[j] - w[j]) > 1e-9 * std::max(1.0, std::abs(w[j]))) return false;
  return std::abs(h2 - h) <= 1e-9 * std::max(1.0, std::abs(h));
}

PathSample sample_path(const RenewalModel& model, long t, std::uint64_t seed, std::uint64_t path) {
  if (t < 0) throw std::invalid_argument("negative horizon");
  return simulate(model, WaitSampler(model), t, seed, path);
}

std::vector<PathSample> sample_paths(const RenewalModel& model, long t, std::size_t n,
                                     std::uint64_t seed, unsigned workers) {
  if (t < 0) throw std::invalid_argument("negative horizon");
  const WaitSampler waits(model);
  std::vector<PathSample> out(n);
  parallel_for(n, workers, [&](std::size_t i) { out[i] = simulate(model, waits, t, seed, i); });
  return out;
}

const char* to_string(Law law) { return law == Law::constrained ? "constrained" : "free"; }

Law parse_law(std::string_view text) {
  if (text == "constrained") return Law::constrained;
  if (text == "free") return Law::free;
  throw std::invalid_argument(fmt::format("unknown law '{}'", text));
}

WeightedEstimate estimate_event(const RenewalModel& model, long t, const ScaledEvent& event,
                                Law law, std::size_t n, std::uint64_t seed, unsigned workers) {
  if (t < 1) throw std::invalid_argument("estimates need t >= 1");
  if (n < 2) throw std::invalid_argument("estimates need n >= 2");
  const WaitSampler waits(model);
  const std::size_t blocks = (n + kMonteCarloBlock - 1) / kMonteCarloBlock;
  std::vector<BlockSums> sums(blocks);
  parallel_for(blocks, workers, [&](std::size_t blk) {
    BlockSums& acc = sums[blk];
    std::vector<double> scaled(model.dim());
    const std::size_t end = std::min(n, (blk + 1) * kMonteCarloBlock);
    for (std::size_t i = blk * kMonteCarloBlock; i < end; ++i) {
      const PathSample p = simulate(model, waits, t, seed, i);
      if (law == Law::constrained && !p.u) continue;
      acc.b.add(p.h);
      acc.b2.add(2.0 * p.h);
      for (int j = 0; j < model.dim(); ++j) scaled[j] = p.w[j] / static_cast<double>(t);
      if (event(scaled)) {
        acc.a.add(p.h);
        acc.a2.add(2.0 * p.h);
      }
    }
  });

  LogAccumulator a, b, a2, b2;
  for (const auto& s : sums) {
    a.add(s.a.value());
    b.add(s.b.value());
    a2.add(s.a2.value());
    b2.add(s.b2.value());
  }
  const double lsa = a.value(), lsb = b.value(), lsa2 = a2.value(), lsb2 = b2.value();
  const double log_n = std::log(static_cast<double>(n));

  WeightedEstimate e;
  e.n = n;
  e.seed = seed;
  e.log_numerator_mean = lsa - log_n;
  e.log_normalizer_mean = lsb - log_n;
  if (lsb == kNegInf) {
    e.degenerate = true;
    e.estimate = std::nan("");
    e.std_error = std::nan("");
    return e;
  }
  const double r = std::exp(lsa - lsb);
  const double var = std::exp(lsa2 - 2.0 * lsb) * (1.0 - 2.0 * r) + r * r * std::exp(lsb2 - 2.0 * lsb);
  const double nn = static_cast<double>(n);
  e.estimate = r;
  e.std_error = std::sqrt(nn / (nn - 1.0) * std::max(0.0, var));
  e.ess = std::exp(2.0 * lsb - lsb2);
  e.event_ess = lsa == kNegInf ? 0.0 : std::exp(2.0 * lsa - lsa2);
  return e;
}

WeightedEstimate estimate_prob(const RenewalModel& model, long t, const Box& box, Law law,
                               std::size_t n, std::uint64_t seed, unsigned workers) {
  if (static_cast<int>(box.size()) != model.dim())
    throw std::invalid_argument("box dimension does not match the model");
  return estimate_event(
      model, t, [&box](const std::vector<double>& w) { return box_contains(box, w); }, law, n,
      seed, workers);
}

RenewalModel cauchy_model() {
  ModelSpec spec;
  spec.name = "cauchy";
  spec.waiting.head = {{2, 0.5}, {3, 0.5}};
  spec.reward.dim = 2;
  spec.reward.head = {{2, {2.0, 0.0}}, {3, {3.0, 0.0}}};
  spec.reward.noise = CauchyNoise{1};
  return RenewalModel(std::move(spec));
}

bool in_cauchy_event(const std::vector<double>& w) {
  return w[0] < 1.0 && w[1] >= 1.0 / (1.0 - w[0]);
}

bool CauchyReport::ok() const {
  const bool bounds = std::all_of(rows.begin(), rows.end(), [](const CauchyRow& r) {
    return r.mc.n == 0 || r.bound_holds;
  });
  return bounds && rate_decreasing && rate_at_100_ok &&
         marginal_rate_inf.status == RateStatus::infinite;
}

CauchyReport cauchy_counterexample(std::vector<long> t_list, std::size_t n, std::uint64_t seed,
                                   unsigned workers) {
  std::sort(t_list.begin(), t_list.end());
  t_list.erase(std::unique(t_list.begin(), t_list.end()), t_list.end());
  if (t_list.empty() || t_list.front() < 2)
    throw std::invalid_argument("closed-convex counterexample needs t >= 2");
  const auto model = cauchy_model();
  const auto log_zc = partition_constrained(model, t_list.back() - 1);

  CauchyReport report;
  for (long t : t_list) {
    CauchyRow row;
    row.t = t;
    const double t2 = static_cast<double>(t) * static_cast<double>(t);
    // P[Y >= x] = 1/2 - atan(x)/pi = atan(1/x)/pi for x > 0.
    row.log_tail = std::log(std::atan(1.0 / t2) / std::numbers::pi);
    row.log_zc = log_zc[static_cast<std::size_t>(t - 1)];
    row.log_bound = row.log_tail + row.log_zc;
    row.bound_rate = -row.log_bound / static_cast<double>(t);
    if (n > 0) {
      row.mc = estimate_event(model, t, in_cauchy_event, Law::free, n, seed, workers);
      row.bound_holds = !row.mc.degenerate &&
                        row.mc.estimate >= std::exp(row.log_bound) - 3.0 * row.mc.std_error;
      row.low_ess = row.mc.degenerate || std::min(row.mc.ess, row.mc.event_ess) < 100.0;
    }
    report.rows.push_back(row);
  }
  report.rate_decreasing = true;
  for (std::size_t i = 1; i < report.rows.size(); ++i)
    if (!(report.rows[i].bound_rate < report.rows[i - 1].bound_rate)) report.rate_decreasing = false;
  for (const auto& r : report.rows)
    if (r.t == 100 && !(r.bound_rate <= 0.12)) report.rate_at_100_ok = false;
  report.marginal_rate_inf = rate_inf_over_interval(open_convex_model(), RateKind::constrained,
                                                    Interval{kNegInf, 1.0, false, true});
  return report;
}

}  // namespace rldp
