#include "rldp/lattice_dist.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "rldp/logmath.hpp"
#include "rldp/renewal_kernel.hpp"

namespace rldp {
namespace {

long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

long ceil_div(long a, long b) { return -floor_div(-a, b); }

struct Slice {
  std::array<long, 2> lo{0, 0};
  std::array<long, 2> extent{1, 1};
  std::vector<double> v;

  std::size_t size() const { return static_cast<std::size_t>(extent[0] * extent[1]); }

  double get(long k0, long k1) const {
    const long i0 = k0 - lo[0], i1 = k1 - lo[1];
    if (i0 < 0 || i0 >= extent[0] || i1 < 0 || i1 >= extent[1]) return kNegInf;
    return v[static_cast<std::size_t>(i0 * extent[1] + i1)];
  }
};

struct Bounds {
  std::array<long, 2> lo{0, 0};
  std::array<long, 2> hi{0, 0};

  double cells() const {
    return static_cast<double>(hi[0] - lo[0] + 1) * static_cast<double>(hi[1] - lo[1] + 1);
  }
};

Slice make_slice(const Bounds& b) {
  Slice s;
  s.lo = b.lo;
  s.extent = {b.hi[0] - b.lo[0] + 1, b.hi[1] - b.lo[1] + 1};
  s.v.assign(s.size(), kNegInf);
  return s;
}

void require_exact_eligible(const RenewalModel& model, const LatticeSpec& spec) {
  if (model.has_tail()) throw ModelError("exact lattice DP needs a finite waiting-time head");
  if (model.has_noise()) throw ModelError("exact lattice DP needs deterministic rewards");
  if (model.dim() > 2) throw ModelError("exact lattice DP supports d <= 2");
  if (spec.dim != model.dim()) throw ModelError("lattice dimension does not match the rewards");
}

// Rolling-window DP for mu_t, with an optional cumulative slice for the free
// measure when P[S1 = inf] > 0.
class LatticeEngine {
 public:
  LatticeEngine(const RenewalModel& model, const LatticeSpec& spec, long horizon,
                double budget, bool track_free)
      : dim_(model.dim()), step_(spec.step), s0_(model.head_length()), track_free_(track_free) {
    require_exact_eligible(model, spec);
    for (long s : model.head_support())
      jumps_.push_back({s, model.potential(s) + model.log_prob(s), spec.cell(model.reward(s))});

    log_p_inf_ = model.p_infinity() > 0.0 ? std::log(model.p_infinity()) : kNegInf;
    for (long k = 0; k < s0_; ++k) log_survival_.push_back(model.log_survival(k));

    double cells = 0.0;
    for (long t = 0; t <= horizon; ++t) {
      cells += bounds_at(t).cells();
      if (track_free_) cells += free_bounds_at(t).cells();
    }
    if (cells > budget)
      throw BudgetError(fmt::format("lattice DP needs {:.3g} cell-times, budget is {:.3g}", cells,
                                    budget));

    ring_.resize(static_cast<std::size_t>(s0_) + 1);
    ring_[0] = make_slice(bounds_at(0));
    ring_[0].v[0] = 0.0;
    if (track_free_ && log_p_inf_ > kNegInf) cumulative_ = make_slice(free_bounds_at(horizon));
  }

  long time() const { return t_; }
  const Slice& mu() const { return slot(t_); }

  void advance() {
    ++t_;
    Slice out = make_slice(bounds_at(t_));
    std::vector<LogAccumulator> acc(out.size());
    for (const auto& jump : jumps_) {
      if (jump.s > t_) continue;
      const Slice& src = slot(t_ - jump.s);
      for (long i0 = 0; i0 < src.extent[0]; ++i0) {
        for (long i1 = 0; i1 < src.extent[1]; ++i1) {
          const double x = src.v[static_cast<std::size_t>(i0 * src.extent[1] + i1)];
          if (x == kNegInf) continue;
          const long d0 = src.lo[0] + i0 + jump.k[0] - out.lo[0];
          const long d1 = src.lo[1] + i1 + jump.k[1] - out.lo[1];
          acc[static_cast<std::size_t>(d0 * out.extent[1] + d1)].add(jump.log_weight + x);
        }
      }
    }
    for (std::size_t i = 0; i < out.size(); ++i) out.v[i] = acc[i].value();
    slot(t_) = std::move(out);

    // Sum_{tau <= t - s0} mu_tau, needed by nu_t once those slices leave the window.
    if (!cumulative_.v.empty() && t_ - s0_ >= 0) {
      const Slice& leaving = slot(t_ - s0_);
      for (long i0 = 0; i0 < leaving.extent[0]; ++i0)
        for (long i1 = 0; i1 < leaving.extent[1]; ++i1) {
          const double x = leaving.v[static_cast<std::size_t>(i0 * leaving.extent[1] + i1)];
          if (x == kNegInf) continue;
          const long c0 = leaving.lo[0] + i0 - cumulative_.lo[0];
          const long c1 = leaving.lo[1] + i1 - cumulative_.lo[1];
          auto& cell = cumulative_.v[static_cast<std::size_t>(c0 * cumulative_.extent[1] + c1)];
          cell = log_add(cell, x);
        }
    }
  }

  // nu_t = sum_{tau=0}^t mu_tau P[S1 > t - tau]; P[S1 > k] = p_inf for k >= s0.
  Slice nu() const {
    Slice out = make_slice(free_bounds_at(t_));
    std::vector<LogAccumulator> acc(out.size());
    auto scatter = [&](const Slice& src, double shift) {
      for (long i0 = 0; i0 < src.extent[0]; ++i0)
        for (long i1 = 0; i1 < src.extent[1]; ++i1) {
          const double x = src.v[static_cast<std::size_t>(i0 * src.extent[1] + i1)];
          if (x == kNegInf) continue;
          const long d0 = src.lo[0] + i0 - out.lo[0];
          const long d1 = src.lo[1] + i1 - out.lo[1];
          acc[static_cast<std::size_t>(d0 * out.extent[1] + d1)].add(x + shift);
        }
    };
    if (!cumulative_.v.empty() && t_ - s0_ >= 0) scatter(cumulative_, log_p_inf_);
    for (long tau = std::max(0L, t_ - s0_ + 1); tau <= t_; ++tau) {
      const long gap = t_ - tau;
      const double ls = gap < s0_ ? log_survival_[gap] : log_p_inf_;
      if (ls != kNegInf) scatter(slot(tau), ls);
    }
    for (std::size_t i = 0; i < out.size(); ++i) out.v[i] = acc[i].value();
    return out;
  }

  LatticeMeasure materialize(const Slice& s, MeasureKind kind) const {
    LatticeMeasure m;
    m.t = t_;
    m.kind = kind;
    m.dim = dim_;
    m.step = step_;
    m.lo = s.lo;
    m.extent = s.extent;
    m.log_mass = s.v;
    LogAccumulator acc;
    for (double x : m.log_mass) acc.add(x);
    m.log_normalizer = acc.value();
    return m;
  }

 private:
  struct Jump {
    long s;
    double log_weight;
    std::array<long, 2> k;
  };

  Bounds bounds_at(long t) const {
    Bounds b;
    for (int j = 0; j < dim_; ++j) {
      long lo = 0, hi = 0;
      bool first = true;
      for (const auto& jump : jumps_) {
        const long l = floor_div(t * jump.k[j], jump.s), h = ceil_div(t * jump.k[j], jump.s);
        lo = first ? l : std::min(lo, l);
        hi = first ? h : std::max(hi, h);
        first = false;
      }
      b.lo[j] = lo;
      b.hi[j] = hi;
    }
    return b;
  }

  Bounds free_bounds_at(long t) const {
    Bounds b = bounds_at(t);
    for (int j = 0; j < dim_; ++j) {
      b.lo[j] = std::min(b.lo[j], 0L);
      b.hi[j] = std::max(b.hi[j], 0L);
    }
    return b;
  }

  Slice& slot(long t) { return ring_[static_cast<std::size_t>(t % (s0_ + 1))]; }
  const Slice& slot(long t) const { return ring_[static_cast<std::size_t>(t % (s0_ + 1))]; }

  int dim_;
  std::vector<double> step_;
  long s0_;
  bool track_free_;
  std::vector<Jump> jumps_;
  double log_p_inf_ = kNegInf;
  std::vector<double> log_survival_;  // ln P[S1 > k], k < s0
  std::vector<Slice> ring_;
  Slice cumulative_;
  long t_ = 0;
};

}  // namespace

const char* to_string(MeasureKind k) {
  return k == MeasureKind::constrained_mu ? "constrained" : "free";
}

LatticeSpec LatticeSpec::infer(const RenewalModel& model) {
  LatticeSpec spec;
  spec.dim = model.dim();
  spec.step.assign(spec.dim, 1.0);
  for (int j = 0; j < spec.dim; ++j) {
    std::vector<double> values;
    for (long s : model.head_support()) values.push_back(model.reward(s)[j]);
    double base = kInf;
    for (double x : values)
      if (x != 0.0) base = std::min(base, std::abs(x));
    if (base == kInf) continue;
    bool found = false;
    for (int k = 1; k <= 64 && !found; ++k) {
      const double h = base / k;
      found = std::all_of(values.begin(), values.end(), [h](double x) {
        const double q = x / h;
        return std::abs(q - std::round(q)) <= 1e-9;
      });
      if (found) spec.step[j] = h;
    }
    if (!found)
      throw ModelError(fmt::format("cannot infer a lattice step for reward coordinate {}", j));
  }
  return spec;
}

std::array<long, 2> LatticeSpec::cell(const std::vector<double>& reward) const {
  std::array<long, 2> k{0, 0};
  for (int j = 0; j < dim; ++j) {
    const double q = reward[j] / step[j];
    const double r = std::round(q);
    if (std::abs(q - r) > 1e-9)
      throw ModelError(fmt::format("reward {} is off the lattice of step {}", reward[j], step[j]));
    k[j] = static_cast<long>(r);
  }
  return k;
}

double LatticeMeasure::at(long k0, long k1) const {
  const long i0 = k0 - lo[0], i1 = k1 - lo[1];
  if (i0 < 0 || i0 >= extent[0] || i1 < 0 || i1 >= extent[1]) return kNegInf;
  return log_mass[static_cast<std::size_t>(i0 * extent[1] + i1)];
}

std::array<long, 2> LatticeMeasure::cell_of(std::size_t flat) const {
  const long i = static_cast<long>(flat);
  return {lo[0] + i / extent[1], lo[1] + i % extent[1]};
}

std::vector<double> LatticeMeasure::point(std::size_t flat) const {
  const auto k = cell_of(flat);
  std::vector<double> w(dim);
  for (int j = 0; j < dim; ++j) w[j] = static_cast<double>(k[j]) * step[j];
  return w;
}

double log_measure_box(const LatticeMeasure& m, const Box& box, bool scaled) {
  if (static_cast<int>(box.size()) != m.dim)
    throw std::invalid_argument("box dimension does not match the measure");
  if (scaled && m.t == 0) throw std::invalid_argument("scaled event undefined at t = 0");
  LogAccumulator acc;
  std::vector<double> w(m.dim);
  for (std::size_t i = 0; i < m.log_mass.size(); ++i) {
    const auto k = m.cell_of(i);
    for (int j = 0; j < m.dim; ++j) {
      w[j] = static_cast<double>(k[j]) * m.step[j];
      if (scaled) w[j] /= static_cast<double>(m.t);
    }
    if (box_contains(box, w)) acc.add(m.log_mass[i]);
  }
  return acc.value();
}

double prob_box(const LatticeMeasure& m, const Box& box, bool scaled) {
  return log_measure_box(m, box, scaled) - m.log_normalizer;
}

std::vector<LatticeMeasure> mu_exact(const RenewalModel& model, const LatticeSpec& spec,
                                     long horizon, double cell_budget) {
  LatticeEngine engine(model, spec, horizon, cell_budget, false);
  std::vector<LatticeMeasure> out;
  out.push_back(engine.materialize(engine.mu(), MeasureKind::constrained_mu));
  while (engine.time() < horizon) {
    engine.advance();
    out.push_back(engine.materialize(engine.mu(), MeasureKind::constrained_mu));
  }
  return out;
}

std::vector<LatticeMeasure> nu_exact(const RenewalModel& model, const LatticeSpec& spec,
                                     long horizon, double cell_budget) {
  LatticeEngine engine(model, spec, horizon, cell_budget, true);
  std::vector<LatticeMeasure> out;
  out.push_back(engine.materialize(engine.nu(), MeasureKind::free_nu));
  while (engine.time() < horizon) {
    engine.advance();
    out.push_back(engine.materialize(engine.nu(), MeasureKind::free_nu));
  }
  return out;
}

std::vector<LatticeMeasure> measures_at(const RenewalModel& model, const LatticeSpec& spec,
                                        std::vector<long> times, MeasureKind kind,
                                        double cell_budget) {
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  if (times.empty()) return {};
  if (times.front() < 0) throw std::invalid_argument("negative time");
  const bool free = kind == MeasureKind::free_nu;
  LatticeEngine engine(model, spec, times.back(), cell_budget, free);
  std::vector<LatticeMeasure> out;
  for (long t : times) {
    while (engine.time() < t) engine.advance();
    out.push_back(engine.materialize(free ? engine.nu() : engine.mu(), kind));
  }
  return out;
}

std::vector<EmpiricalRateRow> empirical_rate(const RenewalModel& model, const LatticeSpec& spec,
                                             const Box& box, std::vector<long> times,
                                             double cell_budget) {
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  if (times.empty()) return {};
  if (times.front() < 1) throw std::invalid_argument("empirical rates need t >= 1");
  LatticeEngine engine(model, spec, times.back(), cell_budget, true);
  std::vector<EmpiricalRateRow> rows;
  for (long t : times) {
    while (engine.time() < t) engine.advance();
    const auto mu = engine.materialize(engine.mu(), MeasureKind::constrained_mu);
    const auto nu = engine.materialize(engine.nu(), MeasureKind::free_nu);
    const double inv = 1.0 / static_cast<double>(t);
    rows.push_back({t, -inv * prob_box(mu, box, true), -inv * prob_box(nu, box, true)});
  }
  return rows;
}

SupermultReport supermult_check(const RenewalModel& model, const LatticeSpec& spec, const Box& box,
                                long tau_max, long t_max, double cell_budget) {
  SupermultReport report;
  const long horizon = tau_max + t_max;
  LatticeEngine engine(model, spec, horizon, cell_budget, false);
  report.log_mass.assign(static_cast<std::size_t>(horizon) + 1, kNegInf);
  while (engine.time() < horizon) {
    engine.advance();
    const auto mu = engine.materialize(engine.mu(), MeasureKind::constrained_mu);
    report.log_mass[engine.time()] = log_measure_box(mu, box, true);
  }
  const auto& lm = report.log_mass;
  for (long tau = 1; tau <= tau_max; ++tau)
    for (long t = 1; t <= t_max; ++t) {
      ++report.pairs_checked;
      const double rhs = lm[tau] + lm[t];
      if (rhs == kNegInf) continue;
      if (!(lm[tau + t] >= rhs - 1e-9)) report.violations.push_back({tau, t, lm[tau + t], rhs});
    }
  return report;
}

RenewalModel open_convex_model() {
  ModelSpec spec;
  spec.name = "open-convex";
  spec.waiting.head = {{2, 0.5}, {3, 0.5}};
  spec.reward.dim = 1;
  spec.reward.head = {{2, {2.0}}, {3, {3.0}}};
  return RenewalModel(std::move(spec));
}

OpenConvexReport open_convex_counterexample(long t) {
  if (t < 2) throw std::invalid_argument("open-convex counterexample needs t >= 2");
  const auto model = open_convex_model();
  const auto spec = LatticeSpec::infer(model);
  const auto nu = measures_at(model, spec, {t}, MeasureKind::free_nu).front();
  const Box below_one{Interval{kNegInf, 1.0, false, true}};

  OpenConvexReport r;
  r.t = t;
  r.log_prob = prob_box(nu, below_one, true);
  r.free_rate = -r.log_prob / static_cast<double>(t);
  r.log_lower_bound = partition_constrained(model, t - 1)[static_cast<std::size_t>(t - 1)];
  r.rate_inf = rate_inf_over_interval(model, RateKind::constrained, below_one[0]);
  r.ok = r.free_rate <= 0.01 && r.log_prob >= r.log_lower_bound - 1e-9 &&
         r.rate_inf.status == RateStatus::infinite;
  return r;
}

}  // namespace rldp
