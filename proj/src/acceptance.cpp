#include "rldp/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>

#include <fmt/format.h>

#include "rldp/config.hpp"
#include "rldp/lattice_dist.hpp"
#include "rldp/logmath.hpp"
#include "rldp/montecarlo.hpp"
#include "rldp/rate.hpp"
#include "rldp/renewal_kernel.hpp"
#include "rldp/tilt.hpp"

#ifndef RLDP_MODELS_DIR
#define RLDP_MODELS_DIR "models"
#endif

namespace rldp {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Check = std::function<Outcome(const AcceptanceOptions&)>;

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  Check check;
};

RenewalModel model(const AcceptanceOptions& o, const char* name) {
  return load_model(o.models_dir / (std::string(name) + ".json"));
}

Outcome fibonacci(const AcceptanceOptions&) {
  LogWeightSequence a;
  a.head = {0.0, 0.0};
  const auto psi = solve_renewal(a, 80);
  std::uint64_t f0 = 1, f1 = 1;  // F_1, F_2
  double worst = 0.0;
  for (long t = 0; t <= 80; ++t) {
    worst = std::max(worst, std::abs(psi[t] - std::log(static_cast<double>(f0))));
    const std::uint64_t next = f0 + f1;
    f0 = f1;
    f1 = next;
  }
  const double golden = std::log((1.0 + std::sqrt(5.0)) / 2.0);
  const double psi_err = std::abs(psi_rate(a) - golden);
  return {worst <= 1e-9 && psi_err <= 1e-10,
          fmt::format("max |ln Psi_t - ln F_(t+1)| = {:.2e}, |psi - ln phi| = {:.2e}", worst,
                      psi_err)};
}

Outcome closed_form_z(const AcceptanceOptions& o) {
  const auto m = model(o, "uniform12");
  double worst = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double k = -5.0 + 0.1 * i;
    worst = std::max(worst, std::abs(z_of(m, k).value - k));
  }
  return {worst <= 1e-10, fmt::format("max |z(k) - k| = {:.2e} over 101 points", worst)};
}

Outcome chernoff(const AcceptanceOptions& o) {
  double worst = kNegInf;
  long checked = 0;
  for (const char* name : {"count", "pinned"}) {
    const auto m = model(o, name);
    for (int i = 0; i <= 20; ++i) {
      const double phi = -2.0 + 0.2 * i;
      const auto psi = solve_renewal(tilted_weights(m, std::span<const double>(&phi, 1)), 500);
      const double z = z_of(m, phi).value;
      for (long t = 0; t <= 500; ++t, ++checked)
        worst = std::max(worst, psi[t] - static_cast<double>(t) * z);
    }
  }
  return {worst <= 1e-9,
          fmt::format("max ln E[U e^(phi W + H)] - t z(phi) = {:.2e} over {} (t, phi) pairs", worst,
                      checked)};
}

Outcome supermultiplicativity(const AcceptanceOptions& o) {
  const auto m = model(o, "count");
  const auto spec = LatticeSpec::infer(m);
  std::size_t pairs = 0, violations = 0;
  for (const auto& box : {parse_box("0.5,0.8"), parse_box("0.6,0.7"), parse_box("0.55,0.95")}) {
    const auto r = supermult_check(m, spec, box, 100, 100);
    pairs += r.pairs_checked;
    violations += r.violations.size();
  }
  return {violations == 0, fmt::format("{} violations over {} pairs", violations, pairs)};
}

// Enumerates every renewal sequence with T_n <= t and returns log masses by
// lattice cell: constrained (T_n = t) and free (weighted by P[S > t - T_n]).
void enumerate(const RenewalModel& m, const LatticeSpec& spec, long t,
               std::map<std::array<long, 2>, LogAccumulator>& mu,
               std::map<std::array<long, 2>, LogAccumulator>& nu) {
  std::vector<double> survival(static_cast<std::size_t>(t) + 1);
  for (long k = 0; k <= t; ++k) {
    double tail = m.p_infinity();
    for (long s : m.head_support())
      if (s > k) tail += m.prob(s);
    survival[k] = tail > 0.0 ? std::log(tail) : kNegInf;
  }
  std::function<void(long, std::array<long, 2>, double)> walk = [&](long time,
                                                                     std::array<long, 2> cell,
                                                                     double lw) {
    if (time == t) mu[cell].add(lw);
    nu[cell].add(lw + survival[t - time]);
    for (long s : m.head_support()) {
      if (time + s > t) continue;
      const auto k = spec.cell(m.reward(s));
      walk(time + s, {cell[0] + k[0], cell[1] + k[1]},
           lw + m.potential(s) + std::log(m.prob(s)));
    }
  };
  walk(0, {0, 0}, 0.0);
}

double compare(const LatticeMeasure& m, std::map<std::array<long, 2>, LogAccumulator>& oracle,
               bool& support_ok) {
  double worst = 0.0;
  std::size_t nonzero = 0;
  for (std::size_t i = 0; i < m.log_mass.size(); ++i) {
    if (m.log_mass[i] == kNegInf) continue;
    ++nonzero;
    const auto it = oracle.find(m.cell_of(i));
    if (it == oracle.end() || it->second.value() == kNegInf) {
      support_ok = false;
      continue;
    }
    worst = std::max(worst, std::abs(m.log_mass[i] - it->second.value()));
  }
  std::size_t oracle_nonzero = 0;
  for (const auto& [cell, acc] : oracle)
    if (acc.value() > kNegInf) ++oracle_nonzero;
  if (oracle_nonzero != nonzero) support_ok = false;
  return worst;
}

Outcome brute_force(const AcceptanceOptions& o) {
  double worst = 0.0;
  bool support_ok = true;
  std::vector<std::string> used, skipped;
  for (const auto& entry : std::filesystem::directory_iterator(o.models_dir)) {
    if (entry.path().extension() != ".json") continue;
    const auto m = load_model(entry.path());
    const auto stem = entry.path().stem().string();
    if (m.has_tail() || m.has_noise() || m.dim() > 2) {
      skipped.push_back(stem);
      continue;
    }
    used.push_back(stem);
    const auto spec = LatticeSpec::infer(m);
    const auto mus = mu_exact(m, spec, 12);
    const auto nus = nu_exact(m, spec, 12);
    for (long t = 0; t <= 12; ++t) {
      std::map<std::array<long, 2>, LogAccumulator> mu, nu;
      enumerate(m, spec, t, mu, nu);
      worst = std::max(worst, compare(mus[t], mu, support_ok));
      worst = std::max(worst, compare(nus[t], nu, support_ok));
    }
  }
  std::sort(used.begin(), used.end());
  std::sort(skipped.begin(), skipped.end());
  return {!used.empty() && support_ok && worst <= 1e-10,
          fmt::format("max log-mass error {:.2e}, support {}, models [{}], not DP-eligible [{}]",
                      worst, support_ok ? "exact" : "MISMATCH", fmt::join(used, " "),
                      fmt::join(skipped, " "))};
}

Outcome ldp_convergence(const AcceptanceOptions& o) {
  const auto m = model(o, "count");
  const auto box = parse_box("0.45,0.55");
  const auto inf_rate = rate_inf_over_interval(m, RateKind::constrained, box[0]);
  const auto rows = empirical_rate(m, LatticeSpec::infer(m), box, {500, 1000, 2000, 4000, 8000});
  bool monotone = true;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (!(rows[i].constrained < rows[i - 1].constrained)) monotone = false;
  const double e2000 = std::abs(rows[2].constrained - inf_rate.value);
  const double e8000 = std::abs(rows[4].constrained - inf_rate.value);
  std::string seq;
  for (const auto& r : rows) seq += fmt::format(" {:.5f}", r.constrained);
  return {inf_rate.status == RateStatus::finite && e2000 <= 0.02 && e8000 <= 0.005 && monotone,
          fmt::format("inf_B I = {:.6f}; rates{}; err(2000) = {:.2e}, err(8000) = {:.2e}, {}",
                      inf_rate.value, seq, e2000, e8000, monotone ? "monotone" : "NOT monotone")};
}

Outcome sandwich(const AcceptanceOptions& o) {
  constexpr long t = 5000;
  bool pass = true;
  std::string detail;
  for (const char* name : {"transient", "geometric"}) {
    const auto m = model(o, name);
    const auto lz = partition_free(m, t);
    const double growth = lz[t] / static_cast<double>(t);
    const double target = std::max(z_of(m, 0.0).value, tail_exponents(m).ell_sup);
    const double err = std::abs(growth - target);
    pass = pass && err <= 5.0 / t;
    detail += fmt::format("{}: (1/t) ln Z_t = {:.6f}, max(z0, ell) = {:.6f}, err {:.2e}; ", name,
                          growth, target, err);
  }
  detail += fmt::format("tolerance {:.1e}", 5.0 / t);
  return {pass, detail};
}

Outcome open_convex(const AcceptanceOptions&) {
  const auto r = open_convex_counterexample(1000);
  return {r.ok, fmt::format("-(1/t) ln P_t[W_t/t < 1] = {:.3e} at t = 1000, inf I over box = {}",
                            r.free_rate,
                            r.rate_inf.status == RateStatus::infinite ? "inf"
                                                                      : fmt::format("{}", r.rate_inf.value))};
}

Outcome closed_convex(const AcceptanceOptions& o) {
  const auto bounds = cauchy_counterexample({10, 20, 50, 100}, 0, 7, o.workers);
  const auto mc = cauchy_counterexample({20}, 1'000'000, 7, o.workers);
  const auto& row = mc.rows.front();
  const double rate100 = bounds.rows.back().bound_rate;
  const bool pass = bounds.rate_decreasing && bounds.rate_at_100_ok && row.bound_holds &&
                    bounds.marginal_rate_inf.status == RateStatus::infinite;
  return {pass, fmt::format("bound rate at t=100 = {:.4f} ({}), MC(t=20) = {:.4e} +- {:.1e} vs "
                            "bound {:.4e}{}",
                            rate100, bounds.rate_decreasing ? "decreasing" : "NOT decreasing",
                            row.mc.estimate, row.mc.std_error, std::exp(row.log_bound),
                            row.low_ess ? ", low ESS" : "")};
}

Outcome duality(const AcceptanceOptions& o) {
  const auto phi_grid = make_grid({{-3.0, 3.0, 201}});
  const auto count = biconjugate_check(model(o, "count"), {{0.5, 1.0, 201}}, phi_grid, o.workers);
  const auto squared =
      biconjugate_check(model(o, "squared"), {{1.0 / 3.0, 1.0, 201}}, phi_grid, o.workers);
  const bool pass = count.shrinks() && squared.shrinks() && count.coarse.max_gap <= 0.02 &&
                    count.fine.max_gap <= 0.005;
  return {pass, fmt::format("count gap {:.2e} -> {:.2e}, squared gap {:.2e} -> {:.2e}",
                            count.coarse.max_gap, count.fine.max_gap, squared.coarse.max_gap,
                            squared.fine.max_gap)};
}

Outcome transient_rates(const AcceptanceOptions& o) {
  const auto m = model(o, "transient");
  double worst = 0.0;
  bool finite = true;
  for (int i = 0; i <= 10; ++i) {
    const double w = 0.1 * i;
    const auto r = rate(m, RateKind::free_lower, w);
    finite = finite && r.status == RateStatus::finite;
    worst = std::max(worst, std::abs(r.value - w * std::numbers::ln2));
  }
  return {finite && worst <= 1e-6,
          fmt::format("max |I_inf(w) - w ln 2| = {:.2e} on 11 points{}", worst,
                      finite ? "" : ", non-finite status")};
}

Outcome mc_calibration(const AcceptanceOptions& o) {
  constexpr long t = 50;
  constexpr std::size_t n = 20'000;
  const auto m = model(o, "pinned");
  const auto box = parse_box("0.3,0.6");
  const auto nu = measures_at(m, LatticeSpec::infer(m), {t}, MeasureKind::free_nu).front();
  const double exact = std::exp(prob_box(nu, box, true));
  double sum = 0.0, worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const auto e = estimate_prob(m, t, box, Law::free, n, seed, o.workers);
    const double z = (e.estimate - exact) / e.std_error;
    sum += z;
    worst = std::max(worst, std::abs(z));
  }
  const double mean = sum / 50.0;
  return {std::abs(mean) <= 0.5 && worst <= 3.0,
          fmt::format("exact {:.6f}, mean z = {:+.3f}, max |z| = {:.3f} over 50 seeds", exact,
                      mean, worst)};
}

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list = {
      {1, "fibonacci-oracle", 1.0, fibonacci},
      {2, "closed-form-z", 1.0, closed_form_z},
      {3, "chernoff-bound", 10.0, chernoff},
      {4, "super-multiplicativity", 30.0, supermultiplicativity},
      {5, "brute-force-equivalence", 30.0, brute_force},
      {6, "ldp-convergence", 120.0, ldp_convergence},
      {7, "partition-sandwich", 5.0, sandwich},
      {8, "open-convex-counterexample", 10.0, open_convex},
      {9, "closed-convex-counterexample", 120.0, closed_convex},
      {10, "duality", 60.0, duality},
      {11, "transient-free-rates", 5.0, transient_rates},
      {12, "mc-calibration", 180.0, mc_calibration},
  };
  return list;
}

}  // namespace

std::filesystem::path default_models_dir() { return RLDP_MODELS_DIR; }

std::string format_result(const CriterionResult& r) {
  return fmt::format("{} {:>2} {:<30} {:7.2f}s / {:.0f}s  {}", r.pass ? "PASS" : "FAIL", r.id,
                     r.name, r.seconds, r.limit_seconds, r.detail);
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options, std::ostream& out) {
  AcceptanceOptions o = options;
  if (o.models_dir.empty()) o.models_dir = default_models_dir();
  std::vector<CriterionResult> results;
  for (const auto& c : criteria()) {
    if (!o.only.empty() && std::find(o.only.begin(), o.only.end(), c.id) == o.only.end()) continue;
    CriterionResult r;
    r.id = c.id;
    r.name = c.name;
    r.limit_seconds = c.limit_seconds;
    const auto start = std::chrono::steady_clock::now();
    try {
      const Outcome outcome = c.check(o);
      r.pass = outcome.pass;
      r.detail = outcome.detail;
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = fmt::format("error: {}", e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (r.seconds > r.limit_seconds) {
      r.pass = false;
      r.detail += " (over time limit)";
    }
    out << format_result(r) << std::endl;
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace rldp
