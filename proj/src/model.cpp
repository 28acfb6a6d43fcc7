#include "rldp/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <fmt/format.h>

#include "rldp/logmath.hpp"

namespace rldp {
namespace {

constexpr double kMassTolerance = 1e-12;
constexpr double kSmallestProbability = 1e-300;

long declared_head_length(const ModelSpec& spec) {
  const auto& w = spec.waiting;
  if (w.tail) return w.head.empty() ? 0 : w.head.rbegin()->first;
  long s0 = 0;
  for (const auto& [s, p] : w.head)
    if (p > 0.0) s0 = std::max(s0, s);
  return s0;
}

std::vector<long> positive_support(const WaitingDistribution& w) {
  std::vector<long> out;
  for (const auto& [s, p] : w.head)
    if (p > 0.0) out.push_back(s);
  return out;
}

double geometric_tail_mass(const GeometricTail& g, long s0) {
  return g.c * std::pow(g.rho, static_cast<double>(s0 + 1)) / (1.0 - g.rho);
}

double potential_at(const ModelSpec& spec, long s, long s0) {
  if (s <= s0) {
    auto it = spec.potential.head.find(s);
    return it == spec.potential.head.end() ? 0.0 : it->second;
  }
  const auto& [gamma, delta] = *spec.potential.tail_affine;
  return gamma + delta * static_cast<double>(s);
}

void add(ValidationReport& r, std::string check, bool pass, std::string detail) {
  r.findings.push_back({std::move(check), pass, std::move(detail)});
}

}  // namespace

bool ValidationReport::ok() const {
  return std::all_of(findings.begin(), findings.end(), [](const Finding& f) { return f.pass; });
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const auto& f : findings)
    os << (f.pass ? "PASS " : "FAIL ") << f.check << ": " << f.detail << '\n';
  return os.str();
}

ValidationReport validate(const ModelSpec& spec) {
  ValidationReport report;
  const auto& w = spec.waiting;

  // Probabilities.
  {
    bool pass = true;
    std::string detail = "all masses in [0,1]";
    for (const auto& [s, p] : w.head) {
      if (s < 1) {
        pass = false;
        detail = fmt::format("waiting time {} is not a positive integer", s);
      } else if (!(p >= 0.0 && p <= 1.0)) {
        pass = false;
        detail = fmt::format("p({}) = {} outside [0,1]", s, p);
      } else if (p > 0.0 && p < kSmallestProbability) {
        pass = false;
        detail = fmt::format("p({}) = {} below 1e-300", s, p);
      }
    }
    if (!(w.p_infinity >= 0.0 && w.p_infinity <= 1.0)) {
      pass = false;
      detail = fmt::format("p_infinity = {} outside [0,1]", w.p_infinity);
    } else if (w.p_infinity > 0.0 && w.p_infinity < kSmallestProbability) {
      pass = false;
      detail = "p_infinity below 1e-300";
    }
    if (w.tail) {
      if (!(w.tail->rho > 0.0 && w.tail->rho < 1.0)) {
        pass = false;
        detail = fmt::format("geometric rho = {} outside (0,1)", w.tail->rho);
      } else if (!(w.tail->c > 0.0) || !std::isfinite(w.tail->c)) {
        pass = false;
        detail = fmt::format("geometric c = {} must be positive", w.tail->c);
      }
    }
    add(report, "probabilities", pass, detail);
    if (!pass) return report;
  }

  const long s0 = declared_head_length(spec);
  const auto support = positive_support(w);

  // Normalization.
  {
    double total = w.p_infinity;
    for (const auto& [s, p] : w.head) total += p;
    if (w.tail) total += geometric_tail_mass(*w.tail, s0);
    report.total_mass = total;
    add(report, "normalization", std::abs(total - 1.0) <= kMassTolerance,
        fmt::format("total mass {:.17g}", total));
  }

  // Aperiodicity.
  {
    if (support.empty() && !w.tail) {
      add(report, "aperiodicity", false, "empty finite support");
    } else if (w.tail) {
      add(report, "aperiodicity", true, "geometric tail covers consecutive times (gcd 1)");
    } else {
      long g = 0;
      for (long s : support) g = std::gcd(g, s);
      if (g != 1) report.period = g;
      add(report, "aperiodicity", g == 1,
          g == 1 ? "gcd of support is 1" : fmt::format("support has period {}", g));
    }
  }

  // Potential.
  {
    bool pass = true;
    std::string detail = "finite on the support";
    for (const auto& [s, v] : spec.potential.head) {
      if (!std::isfinite(v)) {
        pass = false;
        detail = fmt::format("v({}) is not finite", s);
      }
    }
    if (w.tail) {
      if (!spec.potential.tail_affine) {
        pass = false;
        detail = "geometric tail requires potential tail_affine";
      } else if (!std::isfinite(spec.potential.tail_affine->first) ||
                 !std::isfinite(spec.potential.tail_affine->second)) {
        pass = false;
        detail = "potential tail_affine not finite";
      }
    }
    add(report, "potential", pass, detail);
    if (!pass) return report;
  }

  // Extensivity: exhibit z_o with e^{v(s)} p(s) <= e^{z_o s}.
  {
    double z_o = kNegInf;
    for (long s : support) {
      const double v = potential_at(spec, s, s0);
      z_o = std::max(z_o, (v + std::log(w.head.at(s))) / static_cast<double>(s));
    }
    if (w.tail) {
      const auto [gamma, delta] = *spec.potential.tail_affine;
      const double intercept = gamma + std::log(w.tail->c);
      const double slope = delta + std::log(w.tail->rho);
      z_o = std::max(z_o, std::max(intercept / static_cast<double>(s0 + 1), 0.0) + slope);
    }
    report.extensivity_witness = z_o;
    add(report, "extensivity", std::isfinite(z_o), fmt::format("z_o = {:.17g}", z_o));
  }

  // Rewards.
  {
    const auto& r = spec.reward;
    bool pass = true;
    std::string detail = fmt::format("dimension {}", r.dim);
    if (r.dim < 1) {
      pass = false;
      detail = "reward dimension must be >= 1";
    }
    for (long s : support) {
      if (!pass) break;
      auto it = r.head.find(s);
      if (it == r.head.end()) {
        pass = false;
        detail = fmt::format("no reward for waiting time {}", s);
      } else if (static_cast<int>(it->second.size()) != r.dim) {
        pass = false;
        detail = fmt::format("reward for waiting time {} has {} components, expected {}", s,
                             it->second.size(), r.dim);
      } else if (!std::all_of(it->second.begin(), it->second.end(),
                              [](double x) { return std::isfinite(x); })) {
        pass = false;
        detail = fmt::format("reward for waiting time {} not finite", s);
      }
    }
    if (pass && w.tail) {
      if (!r.tail_affine || static_cast<int>(r.tail_affine->size()) != r.dim) {
        pass = false;
        detail = "geometric tail requires one reward tail_affine pair per coordinate";
      }
    }
    if (pass && r.noise && (r.noise->coordinate < 0 || r.noise->coordinate >= r.dim)) {
      pass = false;
      detail = fmt::format("noise coordinate {} out of range", r.noise->coordinate);
    }
    add(report, "reward", pass, detail);
  }
  return report;
}

RenewalModel::RenewalModel(ModelSpec spec) : spec_(std::move(spec)) {
  const auto report = validate(spec_);
  if (!report.ok()) throw ModelError("invalid model '" + spec_.name + "':\n" + report.summary());
  s0_ = declared_head_length(spec_);
  support_ = positive_support(spec_.waiting);
  z_o_ = report.extensivity_witness;
}

double RenewalModel::prob(long s) const {
  if (s < 1) return 0.0;
  if (s <= s0_) {
    auto it = spec_.waiting.head.find(s);
    return it == spec_.waiting.head.end() ? 0.0 : it->second;
  }
  if (!spec_.waiting.tail) return 0.0;
  return spec_.waiting.tail->c * std::pow(spec_.waiting.tail->rho, static_cast<double>(s));
}

double RenewalModel::log_prob(long s) const {
  if (s > s0_ && spec_.waiting.tail)
    return std::log(spec_.waiting.tail->c) +
           static_cast<double>(s) * std::log(spec_.waiting.tail->rho);
  const double p = prob(s);
  return p > 0.0 ? std::log(p) : kNegInf;
}

double RenewalModel::potential(long s) const { return potential_at(spec_, s, s0_); }

std::vector<double> RenewalModel::reward(long s) const {
  if (s <= s0_) {
    auto it = spec_.reward.head.find(s);
    if (it == spec_.reward.head.end()) return std::vector<double>(spec_.reward.dim, 0.0);
    return it->second;
  }
  std::vector<double> out(spec_.reward.dim);
  const auto& affine = *spec_.reward.tail_affine;
  for (int j = 0; j < spec_.reward.dim; ++j)
    out[j] = affine[j].first + affine[j].second * static_cast<double>(s);
  return out;
}

double RenewalModel::log_survival(long t) const {
  LogAccumulator acc;
  if (spec_.waiting.p_infinity > 0.0) acc.add(std::log(spec_.waiting.p_infinity));
  for (long s : support_)
    if (s > t) acc.add(std::log(spec_.waiting.head.at(s)));
  if (const auto& g = spec_.waiting.tail) {
    const long first = std::max(t, s0_) + 1;
    acc.add(std::log(g->c) + static_cast<double>(first) * std::log(g->rho) - std::log1p(-g->rho));
  }
  return acc.value();
}

long frobenius_horizon(const WaitingDistribution& waiting) {
  std::vector<long> support;
  for (const auto& [s, p] : waiting.head)
    if (p > 0.0 && s >= 1) support.push_back(s);

  long limit = 0;
  if (waiting.tail) {
    // Every s beyond the head is itself in the support.
    limit = waiting.head.empty() ? 0 : waiting.head.rbegin()->first;
  } else {
    if (support.empty()) throw ModelError("empty support has no Frobenius horizon");
    long g = 0;
    for (long s : support) g = std::gcd(g, s);
    if (g != 1) throw ModelError(fmt::format("support is periodic with period {}", g));
    limit = support.front() * support.back();
  }

  std::vector<char> reachable(static_cast<std::size_t>(limit) + 1, 0);
  reachable[0] = 1;
  long horizon = 0;
  for (long t = 1; t <= limit; ++t) {
    for (long s : support) {
      if (s > t) break;
      if (reachable[t - s]) {
        reachable[t] = 1;
        break;
      }
    }
    if (!reachable[t]) horizon = t;
  }
  return horizon;
}

long frobenius_horizon(const RenewalModel& model) {
  return frobenius_horizon(model.spec().waiting);
}

TailExponents tail_exponents(const RenewalModel& model) {
  if (model.p_infinity() > 0.0) return {0.0, 0.0};
  if (const auto& g = model.spec().waiting.tail) {
    const double ell = std::log(g->rho);
    return {ell, ell};
  }
  return {kNegInf, kNegInf};
}

}  // namespace rldp
