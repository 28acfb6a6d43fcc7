#include "rldp/rate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rldp/logmath.hpp"
#include "rldp/parallel.hpp"
#include "rldp/renewal_kernel.hpp"
#include "rldp/tilt.hpp"

namespace rldp {
namespace {

constexpr double kInvGolden = 0.6180339887498949;
constexpr double kGoldenTolerance = 1e-10;
constexpr int kGoldenBudget = 300;

struct Point1 {
  double x;
  double f;
};

// Golden-section search for the maximum of a unimodal h on [a, b]; `best`
// seeds the incumbent so that the returned point is never worse than it.
template <typename F>
Point1 golden_max(F& h, double a, double b, Point1 best) {
  double c = b - kInvGolden * (b - a);
  double d = a + kInvGolden * (b - a);
  double fc = h(c), fd = h(d);
  auto keep = [&](double x, double f) {
    if (f > best.f) best = {x, f};
  };
  keep(c, fc);
  keep(d, fd);
  for (int it = 0; it < kGoldenBudget; ++it) {
    if (b - a <= kGoldenTolerance * std::max({1.0, std::abs(a), std::abs(b)})) break;
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvGolden * (b - a);
      fc = h(c);
      keep(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvGolden * (b - a);
      fd = h(d);
      keep(d, fd);
    }
  }
  return best;
}

struct LineMax {
  double alpha;
  double value;
  int boundary;  // -1 / +1 when the maximum sits on that end of the range
};

// Maximizes a concave h over [amin, amax] (amin <= 0 <= amax) starting from
// alpha = 0: doubles the step while h increases, then golden-sections the
// last bracket.
template <typename F>
LineMax line_maximize(F& h, double amin, double amax, double step) {
  const double f0 = h(0.0);
  const double ap = std::min(step, amax), am = std::max(-step, amin);
  const double fp = amax > 0.0 ? h(ap) : kNegInf;
  const double fm = amin < 0.0 ? h(am) : kNegInf;
  if (fp <= f0 && fm <= f0) {
    if (am == ap) return {0.0, f0, 0};
    const auto best = golden_max(h, am, ap, {0.0, f0});
    return {best.x, best.f, 0};
  }
  const int dir = fp >= fm ? 1 : -1;
  const double bound = dir > 0 ? amax : amin;
  double prev = 0.0, cur = dir > 0 ? ap : am, fcur = dir > 0 ? fp : fm;
  while (true) {
    if (cur == bound) return {cur, fcur, dir};
    double next = 2.0 * cur;
    if (std::abs(next) > std::abs(bound)) next = bound;
    const double fnext = h(next);
    if (fnext > fcur) {
      prev = cur;
      cur = next;
      fcur = fnext;
      continue;
    }
    const auto best = golden_max(h, std::min(prev, next), std::max(prev, next), {cur, fcur});
    return {best.x, best.f, 0};
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double out = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) out += a[j] * b[j];
  return out;
}

RateStatus classify(const RateObjective& g, std::vector<double>& phi, double value,
                    bool converged, const RateOptions& opt) {
  if (!(value <= opt.divergence_threshold)) return RateStatus::infinite;
  bool steep = false, certified = converged;
  for (std::size_t j = 0; j < phi.size(); ++j) {
    const double h = opt.fd_relative_step * std::max(1.0, std::abs(phi[j]));
    const double saved = phi[j];
    phi[j] = saved + h;
    const double forward = (g(phi) - value) / h;
    phi[j] = saved - h;
    const double backward = (value - g(phi)) / h;
    phi[j] = saved;
    const bool at_hi = saved >= opt.box * (1.0 - 1e-12);
    const bool at_lo = saved <= -opt.box * (1.0 - 1e-12);
    if (at_hi && forward >= opt.slope_min) steep = true;
    if (at_lo && -backward >= opt.slope_min) steep = true;
    if (!(forward <= opt.stationarity_tol && backward >= -opt.stationarity_tol)) certified = false;
  }
  if (steep) return RateStatus::infinite;
  return certified ? RateStatus::finite : RateStatus::lower_bound_only;
}

void snap_to_box(std::vector<double>& phi, double box) {
  for (double& x : phi) {
    if (x > box * (1.0 - 1e-12)) x = box;
    if (x < -box * (1.0 - 1e-12)) x = -box;
  }
}

}  // namespace

const char* to_string(RateKind k) {
  switch (k) {
    case RateKind::constrained: return "constrained";
    case RateKind::free_lower: return "free-lower";
    case RateKind::free_upper: return "free-upper";
  }
  return "?";
}

const char* to_string(RateStatus s) {
  switch (s) {
    case RateStatus::finite: return "finite";
    case RateStatus::infinite: return "infinite";
    case RateStatus::lower_bound_only: return "lower_bound_only";
  }
  return "?";
}

RateKind parse_rate_kind(std::string_view text) {
  if (text == "constrained") return RateKind::constrained;
  if (text == "free-lower") return RateKind::free_lower;
  if (text == "free-upper") return RateKind::free_upper;
  throw std::invalid_argument("unknown rate kind '" + std::string(text) + "'");
}

RateObjective::RateObjective(const RenewalModel& model, RateKind kind, std::vector<double> w)
    : model_(model), w_(std::move(w)) {
  if (model.has_noise())
    throw std::domain_error("rate functions need exponential moments; model has Cauchy noise");
  if (static_cast<int>(w_.size()) != model.dim())
    throw std::invalid_argument("w dimension does not match the reward dimension");
  const std::vector<double> origin(w_.size(), 0.0);
  const double z0 = z_of(model, origin).value;
  const auto ell = tail_exponents(model);
  switch (kind) {
    case RateKind::constrained:
      floor_ = kNegInf;
      constant_ = z0;
      break;
    case RateKind::free_lower:
      floor_ = ell.ell_inf;
      constant_ = std::max(z0, ell.ell_sup);
      break;
    case RateKind::free_upper:
      floor_ = ell.ell_sup;
      constant_ = std::max(z0, ell.ell_inf);
      break;
  }
}

double RateObjective::tilt(std::span<const double> phi) const {
  return std::max(z_of(model_, phi).value, floor_);
}

double RateObjective::operator()(std::span<const double> phi) const {
  return dot(phi, w_) - tilt(phi) + constant_;
}

RateValue rate(const RenewalModel& model, RateKind kind, std::span<const double> w,
               const RateOptions& opt) {
  const RateObjective g(model, kind, std::vector<double>(w.begin(), w.end()));
  const std::size_t d = w.size();
  std::vector<double> phi(d, 0.0);
  double value = g(phi);
  bool converged = false;
  const int sweeps = d == 1 ? 1 : opt.max_sweeps;

  for (int sweep = 0; sweep < sweeps; ++sweep) {
    const auto start = phi;
    const double start_value = value;
    for (std::size_t j = 0; j < d; ++j) {
      auto trial = phi;
      auto along = [&](double a) {
        trial[j] = phi[j] + a;
        return g(trial);
      };
      const auto m = line_maximize(along, -opt.box - phi[j], opt.box - phi[j], 1.0);
      if (m.value > value) {
        phi[j] += m.alpha;
        value = m.value;
      }
    }
    snap_to_box(phi, opt.box);

    if (d > 1) {
      std::vector<double> dir(d);
      double norm = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        dir[j] = phi[j] - start[j];
        norm = std::max(norm, std::abs(dir[j]));
      }
      if (norm > 0.0) {
        double amin = kNegInf, amax = kInf;
        for (std::size_t j = 0; j < d; ++j) {
          if (dir[j] == 0.0) continue;
          const double a1 = (-opt.box - phi[j]) / dir[j], a2 = (opt.box - phi[j]) / dir[j];
          amin = std::max(amin, std::min(a1, a2));
          amax = std::min(amax, std::max(a1, a2));
        }
        amin = std::min(amin, 0.0);
        amax = std::max(amax, 0.0);
        auto trial = phi;
        auto along = [&](double a) {
          for (std::size_t j = 0; j < d; ++j) trial[j] = phi[j] + a * dir[j];
          return g(trial);
        };
        const auto m = line_maximize(along, amin, amax, 1.0);
        if (m.value > value) {
          for (std::size_t j = 0; j < d; ++j) phi[j] += m.alpha * dir[j];
          value = m.value;
          snap_to_box(phi, opt.box);
        }
      }
    }
    if (!(value <= opt.divergence_threshold)) break;
    if (value - start_value <= 1e-13 * std::max(1.0, std::abs(value))) {
      converged = true;
      break;
    }
  }
  if (d == 1) converged = true;

  RateValue out;
  out.arg_phi = phi;
  out.certificate = value;
  out.status = classify(g, phi, value, converged, opt);
  out.value = out.status == RateStatus::infinite ? kInf : value;
  return out;
}

RateCurve rate_curve(const RenewalModel& model, RateKind kind,
                     const std::vector<std::vector<double>>& grid, unsigned workers,
                     const RateOptions& options) {
  RateCurve c;
  c.w = grid;
  c.values.resize(grid.size());
  parallel_for(grid.size(), workers,
               [&](std::size_t i) { c.values[i] = rate(model, kind, grid[i], options); });
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    v[i] = c.values[i].status == RateStatus::finite ? c.values[i].value : kInf;
  c.convexity = check_convexity(grid, v, 1e-9);
  return c;
}

RewardHull reward_ratio_hull(const RenewalModel& model, RateKind kind) {
  const int d = model.dim();
  RewardHull hull{std::vector<double>(d, kInf), std::vector<double>(d, kNegInf)};
  auto include = [&](const std::vector<double>& ratio) {
    for (int j = 0; j < d; ++j) {
      hull.lo[j] = std::min(hull.lo[j], ratio[j]);
      hull.hi[j] = std::max(hull.hi[j], ratio[j]);
    }
  };
  for (long s : model.head_support()) {
    auto f = model.reward(s);
    for (double& x : f) x /= static_cast<double>(s);
    include(f);
  }
  if (model.has_tail()) {
    const long first = model.head_length() + 1;
    auto f = model.reward(first);
    for (double& x : f) x /= static_cast<double>(first);
    include(f);
    std::vector<double> slope(d);
    for (int j = 0; j < d; ++j) slope[j] = (*model.spec().reward.tail_affine)[j].second;
    include(slope);
  }
  const auto ell = tail_exponents(model);
  const double floor = kind == RateKind::free_lower   ? ell.ell_inf
                       : kind == RateKind::free_upper ? ell.ell_sup
                                                      : kNegInf;
  if (floor > kNegInf) include(std::vector<double>(d, 0.0));
  return hull;
}

std::vector<std::vector<double>> make_grid(const std::vector<GridAxis>& axes) {
  std::vector<std::vector<double>> grid{{}};
  for (const auto& ax : axes) {
    std::vector<std::vector<double>> next;
    for (const auto& prefix : grid) {
      for (long i = 0; i < ax.n; ++i) {
        auto p = prefix;
        p.push_back(ax.n == 1 ? ax.lo
                              : ax.lo + (ax.hi - ax.lo) * static_cast<double>(i) /
                                            static_cast<double>(ax.n - 1));
        next.push_back(std::move(p));
      }
    }
    grid = std::move(next);
  }
  return grid;
}

RateMinimum rate_minimum(const RenewalModel& model, RateKind kind, unsigned workers) {
  const int d = model.dim();
  if (d > 2) throw std::invalid_argument("rate_minimum supports d <= 2");
  const auto hull = reward_ratio_hull(model, kind);

  std::vector<GridAxis> axes;
  for (int j = 0; j < d; ++j) {
    const bool degenerate = hull.hi[j] - hull.lo[j] < 1e-12;
    axes.push_back({hull.lo[j], hull.hi[j], degenerate ? 1 : (d == 1 ? 41 : 21)});
  }
  const auto curve = rate_curve(model, kind, make_grid(axes), workers);

  std::size_t best = 0;
  for (std::size_t i = 1; i < curve.values.size(); ++i)
    if (curve.values[i].value < curve.values[best].value) best = i;

  RateMinimum out;
  out.w = curve.w[best];
  out.value = curve.values[best].value;

  // Coordinate golden refinement inside the neighbouring grid cells.
  auto objective = [&](const std::vector<double>& w) {
    const auto r = rate(model, kind, w);
    return r.status == RateStatus::infinite ? kInf : r.value;
  };
  for (int round = 0; round < (d == 1 ? 1 : 3); ++round) {
    for (int j = 0; j < d; ++j) {
      if (axes[j].n == 1) continue;
      const double cell = (axes[j].hi - axes[j].lo) / static_cast<double>(axes[j].n - 1);
      const double a = std::max(hull.lo[j], out.w[j] - cell);
      const double b = std::min(hull.hi[j], out.w[j] + cell);
      auto trial = out.w;
      auto neg = [&](double x) {
        trial[j] = x;
        return -objective(trial);
      };
      auto p = golden_max(neg, a, b, {out.w[j], -out.value});
      for (double edge : {a, b}) {
        const double f = neg(edge);
        if (f > p.f) p = {edge, f};
      }
      out.w[j] = p.x;
      out.value = -p.f;
    }
  }
  out.certified = out.value <= 1e-6;
  return out;
}

RateValue rate_inf_over_interval(const RenewalModel& model, RateKind kind, const Interval& box,
                                 const RateOptions& options) {
  if (model.dim() != 1) throw std::invalid_argument("rate_inf_over_interval needs d = 1");
  const auto hull = reward_ratio_hull(model, kind);
  Interval cut{hull.lo[0], hull.hi[0]};
  if (box.lo > cut.lo || (box.lo == cut.lo && box.lo_open)) {
    cut.lo = box.lo;
    cut.lo_open = box.lo_open;
  }
  if (box.hi < cut.hi || (box.hi == cut.hi && box.hi_open)) {
    cut.hi = box.hi;
    cut.hi_open = box.hi_open;
  }
  if (cut.empty()) return {kInf, RateStatus::infinite, {}, kInf};

  RateValue best = rate(model, kind, cut.lo, options);
  auto consider = [&](double w) {
    auto r = rate(model, kind, w, options);
    if (r.value < best.value) best = r;
    return -(r.status == RateStatus::infinite ? kInf : r.value);
  };
  consider(cut.hi);
  if (cut.hi > cut.lo) golden_max(consider, cut.lo, cut.hi, {cut.lo, -best.value});
  return best;
}

BiconjugateReport biconjugate_check(const RenewalModel& model, const std::vector<GridAxis>& w_axes,
                                    const std::vector<std::vector<double>>& phi_grid,
                                    unsigned workers) {
  if (model.dim() > 2) throw std::invalid_argument("biconjugate_check supports d <= 2");
  BiconjugateReport report;
  report.phi = phi_grid;
  report.z.resize(phi_grid.size());
  for (std::size_t i = 0; i < phi_grid.size(); ++i) report.z[i] = z_of(model, phi_grid[i]).value;
  const double z0 = z_of(model, std::vector<double>(model.dim(), 0.0)).value;

  auto level = [&](const std::vector<GridAxis>& axes) {
    BiconjugateLevel lv;
    const auto curve = rate_curve(model, RateKind::constrained, make_grid(axes), workers);
    lv.grid_points = curve.w.size();
    for (const auto& v : curve.values) {
      if (v.status == RateStatus::finite) ++lv.finite_points;
      if (v.status == RateStatus::lower_bound_only) ++lv.skipped_points;
    }
    lv.conjugate.assign(phi_grid.size(), kNegInf);
    for (std::size_t i = 0; i < phi_grid.size(); ++i) {
      for (std::size_t k = 0; k < curve.w.size(); ++k) {
        if (curve.values[k].status != RateStatus::finite) continue;
        lv.conjugate[i] = std::max(lv.conjugate[i],
                                   dot(phi_grid[i], curve.w[k]) - curve.values[k].value + z0);
      }
      const double gap = report.z[i] - lv.conjugate[i];
      lv.max_gap = std::max(lv.max_gap, std::abs(gap));
      lv.max_violation = std::max(lv.max_violation, -gap);
    }
    return lv;
  };

  report.coarse = level(w_axes);
  auto fine_axes = w_axes;
  for (auto& ax : fine_axes)
    if (ax.n > 1) ax.n = 2 * ax.n - 1;
  report.fine = level(fine_axes);
  return report;
}

}  // namespace rldp
