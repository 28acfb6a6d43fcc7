#include "rldp/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "rldp/acceptance.hpp"
#include "rldp/config.hpp"
#include "rldp/lattice_dist.hpp"
#include "rldp/logmath.hpp"
#include "rldp/montecarlo.hpp"
#include "rldp/parallel.hpp"
#include "rldp/rate.hpp"
#include "rldp/renewal_kernel.hpp"
#include "rldp/tilt.hpp"

#ifndef RLDP_VERSION
#define RLDP_VERSION "0.0.0"
#endif

namespace rldp {
namespace {

// Thrown by handlers for usage errors detected after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double x) { return fmt::format("{:.17g}", x); }

std::string join_nums(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ',';
    s += num(xs[i]);
  }
  return s;
}

std::vector<std::string> axis_names(const char* prefix, int dim) {
  if (dim == 1) return {prefix};
  std::vector<std::string> names;
  for (int j = 0; j < dim; ++j) names.push_back(fmt::format("{}{}", prefix, j));
  return names;
}

std::string join_names(const std::vector<std::string>& names) {
  std::string s;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) s += ',';
    s += names[i];
  }
  return s;
}

struct Options {
  std::string model_path;
  std::string csv_path;
  unsigned threads = 0;
  // Parameters entering the manifest, in insertion order.
  std::vector<std::pair<std::string, std::string>> params;
};

// CSV sink: a manifest comment line followed by the body. The manifest hash
// covers the command, model content, parameters and version, never output
// paths or worker counts.
class CsvWriter {
 public:
  CsvWriter(std::ostream& fallback, const Options& o, const std::string& command) {
    std::string model_hash = "-";
    if (!o.model_path.empty())
      model_hash = fmt::format("{:016x}", fnv1a(read_file(o.model_path)));
    std::string params;
    for (const auto& [k, v] : o.params) params += fmt::format(" {}={}", k, v);
    const std::string manifest =
        fmt::format("command={} model={} model_hash={} version={}{}", command,
                    o.model_path.empty() ? "-" : o.model_path, model_hash, RLDP_VERSION, params);
    if (!o.csv_path.empty()) {
      file_ = std::make_unique<std::ofstream>(o.csv_path);
      if (!*file_) throw UsageError("cannot write " + o.csv_path);
    }
    std::ostream& s = stream(fallback);
    s << "# manifest " << fmt::format("{:016x}", fnv1a(manifest)) << '\n';
    s << "# " << manifest << '\n';
    out_ = &s;
  }

  void row(const std::string& line) { *out_ << line << '\n'; }
  bool to_file() const { return file_ != nullptr; }

 private:
  std::ostream& stream(std::ostream& fallback) { return file_ ? *file_ : fallback; }

  std::unique_ptr<std::ofstream> file_;
  std::ostream* out_ = nullptr;
};

Box parse_box_for(const RenewalModel& m, const std::string& text) {
  const Box box = parse_box(text);
  if (static_cast<int>(box.size()) != m.dim())
    throw UsageError(fmt::format("box has {} dimensions, the model has {}", box.size(), m.dim()));
  return box;
}

int cmd_validate(const Options& o, std::ostream& out) {
  const auto spec = load_model_spec(o.model_path);
  const auto report = validate(spec);
  out << report.summary();
  if (report.ok()) {
    const RenewalModel m(spec);
    const auto ell = tail_exponents(m);
    out << fmt::format("frobenius horizon t_c = {}\n", frobenius_horizon(m));
    out << fmt::format("z(0) = {}\n", num(z_of(m, std::vector<double>(m.dim(), 0.0)).value));
    out << fmt::format("ell_inf = {}, ell_sup = {}\n", num(ell.ell_inf), num(ell.ell_sup));
  }
  out << (report.ok() ? "PASS" : "FAIL") << '\n';
  return report.ok() ? kExitOk : kExitCheckFailed;
}

int cmd_partition(const Options& o, long horizon, std::ostream& out) {
  const auto m = load_model(o.model_path);
  const auto zc = partition_constrained(m, horizon);
  const auto zf = partition_free(m, horizon);
  CsvWriter csv(out, o, "partition");
  csv.row("t,log_zc,log_z");
  for (long t = 0; t <= horizon; ++t) csv.row(fmt::format("{},{},{}", t, num(zc[t]), num(zf[t])));
  if (csv.to_file()) out << fmt::format("wrote {} rows to {}\n", horizon + 1, o.csv_path);
  return kExitOk;
}

int cmd_zfun(const Options& o, const std::string& grid, std::ostream& out) {
  const auto m = load_model(o.model_path);
  const auto axes = parse_grid(grid);
  if (static_cast<int>(axes.size()) != m.dim()) throw UsageError("grid dimension mismatch");
  const auto g = z_graph(m, make_grid(axes), o.threads);
  CsvWriter csv(out, o, "zfun");
  csv.row(join_names(axis_names("phi", m.dim())) + ",z,status,lo,hi");
  for (std::size_t i = 0; i < g.phi.size(); ++i)
    csv.row(fmt::format("{},{},{},{},{}", join_nums(g.phi[i]), num(g.z[i].value),
                        to_string(g.z[i].status), num(g.z[i].lo), num(g.z[i].hi)));
  if (csv.to_file())
    out << fmt::format("convexity: {} triples, {} violations, worst excess {}\n",
                       g.convexity.triples_checked, g.convexity.violations,
                       num(g.convexity.worst_excess));
  return g.convexity.ok() ? kExitOk : kExitCheckFailed;
}

int cmd_rate(const Options& o, const std::string& grid, const std::string& kind,
             std::ostream& out) {
  const auto m = load_model(o.model_path);
  const auto axes = parse_grid(grid);
  if (static_cast<int>(axes.size()) != m.dim()) throw UsageError("grid dimension mismatch");
  const auto curve = rate_curve(m, parse_rate_kind(kind), make_grid(axes), o.threads);
  CsvWriter csv(out, o, "rate");
  csv.row(join_names(axis_names("w", m.dim())) + ",rate,status," +
          join_names(axis_names("arg_phi", m.dim())));
  for (std::size_t i = 0; i < curve.w.size(); ++i) {
    const auto& v = curve.values[i];
    auto phi = v.arg_phi;
    phi.resize(m.dim(), std::nan(""));
    csv.row(fmt::format("{},{},{},{}", join_nums(curve.w[i]), num(v.value), to_string(v.status),
                        join_nums(phi)));
  }
  if (csv.to_file())
    out << fmt::format("convexity: {} triples, {} violations\n", curve.convexity.triples_checked,
                       curve.convexity.violations);
  return curve.convexity.ok() ? kExitOk : kExitCheckFailed;
}

MeasureKind measure_kind(const std::string& law) {
  return parse_law(law) == Law::constrained ? MeasureKind::constrained_mu : MeasureKind::free_nu;
}

int cmd_dist(const Options& o, long t, const std::string& law, const std::string& box_text,
             std::ostream& out) {
  const auto m = load_model(o.model_path);
  const auto spec = LatticeSpec::infer(m);
  const auto measure = measures_at(m, spec, {t}, measure_kind(law)).front();
  std::string summary;
  if (!box_text.empty()) {
    const auto box = parse_box_for(m, box_text);
    summary = fmt::format("ln P_t[W_t/t in {}] = {}\n", to_string(box),
                          num(t > 0 ? prob_box(measure, box, true) : prob_box(measure, box, false)));
  }
  if (!o.csv_path.empty()) {
    CsvWriter csv(out, o, "dist");
    csv.row(join_names(axis_names("w", m.dim())) + ",log_prob");
    for (std::size_t i = 0; i < measure.log_mass.size(); ++i) {
      if (measure.log_mass[i] == kNegInf) continue;
      csv.row(fmt::format("{},{}", join_nums(measure.point(i)),
                          num(measure.log_mass[i] - measure.log_normalizer)));
    }
  }
  out << fmt::format("t = {}, law = {}, log normalizer = {}\n", t, law,
                     num(measure.log_normalizer));
  out << summary;
  return kExitOk;
}

int cmd_empirical(const Options& o, const std::string& box_text, const std::string& tlist,
                  std::ostream& out) {
  const auto m = load_model(o.model_path);
  const auto box = parse_box_for(m, box_text);
  const auto rows = empirical_rate(m, LatticeSpec::infer(m), box, parse_long_list(tlist));
  std::string inf_c = "nan", inf_lo = "nan", inf_hi = "nan";
  if (m.dim() == 1) {
    inf_c = num(rate_inf_over_interval(m, RateKind::constrained, box[0]).value);
    inf_lo = num(rate_inf_over_interval(m, RateKind::free_lower, box[0]).value);
    inf_hi = num(rate_inf_over_interval(m, RateKind::free_upper, box[0]).value);
  }
  CsvWriter csv(out, o, "empirical-rate");
  csv.row("t,constrained,free,inf_rate,inf_rate_free_lower,inf_rate_free_upper");
  for (const auto& r : rows)
    csv.row(fmt::format("{},{},{},{},{},{}", r.t, num(r.constrained), num(r.free), inf_c, inf_lo,
                        inf_hi));
  return kExitOk;
}

int cmd_mc(const Options& o, long t, const std::string& box_text, const std::string& law,
           double n, std::uint64_t seed, std::ostream& out) {
  const auto m = load_model(o.model_path);
  const auto box = parse_box_for(m, box_text);
  if (n < 1e3) throw UsageError("--n must be at least 1000");
  const auto e = estimate_prob(m, t, box, parse_law(law), static_cast<std::size_t>(n), seed,
                               o.threads);
  CsvWriter csv(out, o, "mc");
  csv.row("t,law,n,seed,estimate,std_error,log_numerator_mean,log_normalizer_mean,ess,degenerate");
  csv.row(fmt::format("{},{},{},{},{},{},{},{},{},{}", t, law, e.n, e.seed, num(e.estimate),
                      num(e.std_error), num(e.log_numerator_mean), num(e.log_normalizer_mean),
                      num(e.ess), e.degenerate ? 1 : 0));
  if (e.degenerate) {
    out << "degenerate: every path had zero weight\n";
    return kExitCheckFailed;
  }
  return kExitOk;
}

int cmd_supermult(const Options& o, const std::string& box_text, long max, std::ostream& out) {
  const auto m = load_model(o.model_path);
  const auto box = parse_box_for(m, box_text);
  const auto r = supermult_check(m, LatticeSpec::infer(m), box, max, max);
  out << fmt::format("supermultiplicativity over {}: {} pairs, {} violations\n", to_string(box),
                     r.pairs_checked, r.violations.size());
  for (const auto& v : r.violations)
    out << fmt::format("  tau={} t={} lhs={} rhs={}\n", v.tau, v.t, num(v.lhs), num(v.rhs));
  out << (r.ok() ? "PASS" : "FAIL") << '\n';
  return r.ok() ? kExitOk : kExitCheckFailed;
}

int cmd_biconjugate(const Options& o, const std::string& wgrid, const std::string& phigrid,
                    double eps, std::ostream& out) {
  const auto m = load_model(o.model_path);
  const auto w_axes = parse_grid(wgrid);
  const auto phi_axes = parse_grid(phigrid);
  if (static_cast<int>(w_axes.size()) != m.dim() || static_cast<int>(phi_axes.size()) != m.dim())
    throw UsageError("grid dimension mismatch");
  const auto r = biconjugate_check(m, w_axes, make_grid(phi_axes), o.threads);
  CsvWriter csv(out, o, "check-biconjugate");
  csv.row(join_names(axis_names("phi", m.dim())) + ",z,conjugate_coarse,conjugate_fine");
  for (std::size_t i = 0; i < r.phi.size(); ++i)
    csv.row(fmt::format("{},{},{},{}", join_nums(r.phi[i]), num(r.z[i]),
                        num(r.coarse.conjugate[i]), num(r.fine.conjugate[i])));
  const bool ok = r.shrinks() && r.dominated(eps);
  out << fmt::format("# gap coarse {} fine {}, violation coarse {} fine {}: {}\n",
                     num(r.coarse.max_gap), num(r.fine.max_gap), num(r.coarse.max_violation),
                     num(r.fine.max_violation), ok ? "PASS" : "FAIL");
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_open_convex(const Options& o, long t, std::ostream& out) {
  const auto r = open_convex_counterexample(t);
  CsvWriter csv(out, o, "counterexample-open-convex");
  csv.row("t,free_rate,log_prob,log_lower_bound,rate_inf_status");
  csv.row(fmt::format("{},{},{},{},{}", r.t, num(r.free_rate), num(r.log_prob),
                      num(r.log_lower_bound), to_string(r.rate_inf.status)));
  out << fmt::format(
      "# open convex box (-inf,1): -(1/t) ln P_t = {:.3e}, inf of I over the box is {}: {}\n",
      r.free_rate, to_string(r.rate_inf.status), r.ok ? "PASS" : "FAIL");
  return r.ok ? kExitOk : kExitCheckFailed;
}

int cmd_closed_convex(const Options& o, const std::string& tlist, double n, std::uint64_t seed,
                      std::ostream& out) {
  const auto r = cauchy_counterexample(parse_long_list(tlist), static_cast<std::size_t>(n), seed,
                                       o.threads);
  CsvWriter csv(out, o, "counterexample-closed-convex");
  csv.row("t,log_tail,log_zc,log_bound,bound_rate,mc_estimate,mc_std_error,bound_holds,low_ess");
  for (const auto& row : r.rows)
    csv.row(fmt::format("{},{},{},{},{},{},{},{},{}", row.t, num(row.log_tail), num(row.log_zc),
                        num(row.log_bound), num(row.bound_rate), num(row.mc.estimate),
                        num(row.mc.std_error), row.bound_holds ? 1 : 0, row.low_ess ? 1 : 0));
  out << fmt::format("# bound rate {}, inf of I over w_S < 1 is {}: {}\n",
                     r.rate_decreasing ? "decreasing" : "NOT decreasing",
                     to_string(r.marginal_rate_inf.status), r.ok() ? "PASS" : "FAIL");
  return r.ok() ? kExitOk : kExitCheckFailed;
}

int cmd_accept(const Options& o, const std::string& models, const std::vector<int>& only,
               std::ostream& out) {
  AcceptanceOptions a;
  a.models_dir = models.empty() ? default_models_dir() : std::filesystem::path(models);
  a.workers = o.threads;
  a.only = only;
  const auto results = run_acceptance(a, out);
  const auto passed = std::count_if(results.begin(), results.end(),
                                    [](const CriterionResult& r) { return r.pass; });
  out << fmt::format("{}/{} criteria passed\n", passed, results.size());
  return passed == static_cast<long>(results.size()) ? kExitOk : kExitCheckFailed;
}

}  // namespace

std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::vector<GridAxis> parse_grid(std::string_view text) {
  std::vector<GridAxis> axes;
  std::size_t start = 0;
  while (true) {
    const auto semi = text.find(';', start);
    const std::string part(text.substr(start, semi - start));
    GridAxis ax;
    char c1 = 0, c2 = 0;
    std::istringstream in(part);
    if (!(in >> ax.lo >> c1 >> ax.hi >> c2 >> ax.n) || c1 != ':' || c2 != ':' || ax.n < 1 ||
        ax.lo > ax.hi || !(in >> std::ws).eof())
      throw std::invalid_argument(fmt::format("bad grid axis '{}', expected lo:hi:n", part));
    axes.push_back(ax);
    if (semi == std::string_view::npos) break;
    start = semi + 1;
  }
  return axes;
}

std::vector<long> parse_long_list(std::string_view text) {
  std::vector<long> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    const std::string part(text.substr(start, comma - start));
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(part, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument(fmt::format("bad integer '{}'", part));
    }
    if (used != part.size()) throw std::invalid_argument(fmt::format("bad integer '{}'", part));
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Large deviations of renewal-reward and pinning models", "renewal_ldp"};
  app.require_subcommand(1);
  app.set_version_flag("--version", RLDP_VERSION);

  Options o;
  o.threads = default_workers();
  std::function<int()> action;

  auto add_common = [&](CLI::App* sub, bool needs_model) {
    auto* opt = sub->add_option("--model", o.model_path, "model JSON file");
    if (needs_model) opt->required()->check(CLI::ExistingFile);
    sub->add_option("--csv", o.csv_path, "write the CSV table to this file");
    sub->add_option("--threads", o.threads, "worker count")->check(CLI::PositiveNumber);
  };
  auto param = [&](const std::string& key, const auto& value) {
    o.params.emplace_back(key, fmt::format("{}", value));
  };

  auto* validate_cmd = app.add_subcommand("validate", "check a model config");
  add_common(validate_cmd, true);
  validate_cmd->callback([&] { action = [&] { return cmd_validate(o, out); }; });

  long horizon = 100;
  auto* partition_cmd = app.add_subcommand("partition", "ln Z_t^c and ln Z_t for t = 0..T");
  add_common(partition_cmd, true);
  partition_cmd->add_option("--T", horizon, "horizon")->required()->check(CLI::NonNegativeNumber);
  partition_cmd->callback([&] {
    param("T", horizon);
    action = [&] { return cmd_partition(o, horizon, out); };
  });

  std::string grid;
  auto* zfun_cmd = app.add_subcommand("zfun", "z(phi) on a grid");
  add_common(zfun_cmd, true);
  zfun_cmd->add_option("--grid", grid, "lo:hi:n per axis, ';' between axes")->required();
  zfun_cmd->callback([&] {
    param("grid", grid);
    action = [&] { return cmd_zfun(o, grid, out); };
  });

  std::string kind = "constrained";
  auto* rate_cmd = app.add_subcommand("rate", "rate function on a grid");
  add_common(rate_cmd, true);
  rate_cmd->add_option("--grid", grid, "lo:hi:n per axis, ';' between axes")->required();
  rate_cmd->add_option("--kind", kind, "constrained | free-lower | free-upper")
      ->check(CLI::IsMember({"constrained", "free-lower", "free-upper"}));
  rate_cmd->callback([&] {
    param("grid", grid);
    param("kind", kind);
    action = [&] { return cmd_rate(o, grid, kind, out); };
  });

  long t = 0;
  std::string law = "constrained";
  std::string box;
  auto law_check = CLI::IsMember({"constrained", "free"});
  auto* dist_cmd = app.add_subcommand("dist", "exact law of W_t");
  add_common(dist_cmd, true);
  dist_cmd->add_option("--t", t, "time")->required()->check(CLI::NonNegativeNumber);
  dist_cmd->add_option("--law", law, "constrained | free")->check(law_check);
  dist_cmd->add_option("--box", box, "event box for W_t/t, e.g. \"0.5,0.8\"");
  dist_cmd->callback([&] {
    param("t", t);
    param("law", law);
    param("box", box);
    action = [&] { return cmd_dist(o, t, law, box, out); };
  });

  std::string tlist;
  auto* emp_cmd = app.add_subcommand("empirical-rate", "-(1/t) ln P_t[W_t/t in box] over t");
  add_common(emp_cmd, true);
  emp_cmd->add_option("--box", box, "event box")->required();
  emp_cmd->add_option("--tlist", tlist, "comma-separated times")->required();
  emp_cmd->callback([&] {
    param("box", box);
    param("tlist", tlist);
    action = [&] { return cmd_empirical(o, box, tlist, out); };
  });

  double n = 1e6;
  std::uint64_t seed = 0;
  auto* mc_cmd = app.add_subcommand("mc", "self-normalized Monte Carlo estimate");
  add_common(mc_cmd, true);
  mc_cmd->add_option("--t", t, "time")->required()->check(CLI::PositiveNumber);
  mc_cmd->add_option("--box", box, "event box")->required();
  mc_cmd->add_option("--law", law, "constrained | free")->check(law_check);
  mc_cmd->add_option("--n", n, "number of paths");
  mc_cmd->add_option("--seed", seed, "RNG seed")->required();
  mc_cmd->callback([&] {
    param("t", t);
    param("box", box);
    param("law", law);
    param("n", static_cast<std::size_t>(n));
    param("seed", seed);
    action = [&] { return cmd_mc(o, t, box, law, n, seed, out); };
  });

  auto* check_cmd = app.add_subcommand("check", "property checks");
  check_cmd->require_subcommand(1);
  long max = 100;
  auto* supermult_cmd = check_cmd->add_subcommand("supermult", "mu_{tau+t}(C) >= mu_tau(C) mu_t(C)");
  add_common(supermult_cmd, true);
  supermult_cmd->add_option("--box", box, "event box")->required();
  supermult_cmd->add_option("--max", max, "largest tau and t")->check(CLI::PositiveNumber);
  supermult_cmd->callback([&] {
    param("box", box);
    param("max", max);
    action = [&] { return cmd_supermult(o, box, max, out); };
  });
  std::string wgrid, phigrid = "-2:2:21";
  double eps = 1e-6;
  auto* bic_cmd = check_cmd->add_subcommand("biconjugate", "J* = z on a grid");
  add_common(bic_cmd, true);
  bic_cmd->add_option("--wgrid", wgrid, "w grid, lo:hi:n per axis")->required();
  bic_cmd->add_option("--phigrid", phigrid, "phi grid, lo:hi:n per axis");
  bic_cmd->add_option("--eps", eps, "allowed J* - z excess");
  bic_cmd->callback([&] {
    param("wgrid", wgrid);
    param("phigrid", phigrid);
    param("eps", eps);
    action = [&] { return cmd_biconjugate(o, wgrid, phigrid, eps, out); };
  });

  auto* ce_cmd = app.add_subcommand("counterexample", "the two convex-set counterexamples");
  ce_cmd->require_subcommand(1);
  long ce_t = 1000;
  auto* open_cmd = ce_cmd->add_subcommand("open-convex", "exact DP, X = S on {2,3}");
  add_common(open_cmd, false);
  open_cmd->add_option("--t", ce_t, "time")->check(CLI::Range(2L, 1000000L));
  open_cmd->callback([&] {
    param("t", ce_t);
    action = [&] { return cmd_open_convex(o, ce_t, out); };
  });
  std::string ce_tlist = "10,20,50,100";
  auto* closed_cmd = ce_cmd->add_subcommand("closed-convex", "Cauchy rewards, analytic bound + MC");
  add_common(closed_cmd, false);
  closed_cmd->add_option("--tlist", ce_tlist, "comma-separated times");
  closed_cmd->add_option("--n", n, "paths per time (0 skips MC)");
  closed_cmd->add_option("--seed", seed, "RNG seed")->required();
  closed_cmd->callback([&] {
    param("tlist", ce_tlist);
    param("n", static_cast<std::size_t>(n));
    param("seed", seed);
    action = [&] { return cmd_closed_convex(o, ce_tlist, n, seed, out); };
  });

  std::string models;
  std::vector<int> only;
  auto* accept_cmd = app.add_subcommand("accept", "run the acceptance suite");
  accept_cmd->add_option("--models", models, "directory of shipped model configs");
  accept_cmd->add_option("--only", only, "criterion ids")->delimiter(',');
  accept_cmd->add_option("--threads", o.threads, "worker count")->check(CLI::PositiveNumber);
  accept_cmd->callback([&] { action = [&] { return cmd_accept(o, models, only, out); }; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    return action ? action() : kExitUsage;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
  } catch (const ModelError& e) {
    err << "invalid model: " << e.what() << '\n';
  } catch (const BudgetError& e) {
    err << "budget exceeded: " << e.what() << '\n';
  } catch (const UsageError& e) {
    err << "usage: " << e.what() << '\n';
  } catch (const std::invalid_argument& e) {
    err << "usage: " << e.what() << '\n';
  } catch (const std::domain_error& e) {
    err << "outside the domain: " << e.what() << '\n';
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitCheckFailed;
  }
  return kExitUsage;
}

}  // namespace rldp
