#pragma once

// Command-line front end. run() is separate from main() so tests can drive it
// in-process with captured streams.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sbandit/sbandit.hpp"

namespace sbandit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitPrecondition = 1;
inline constexpr int kExitUsage = 2;

struct Options {
  std::int64_t horizon = 0;
  std::optional<double> eps;
  std::optional<double> gamma;
  int safe = 1;
  std::string format = "csv";
  bool short_output = false;
  std::string out;
  unsigned workers = 1;

  // dp
  std::string method = "separated";
  std::string trace;
  std::string strategy;  // "t xi_r p1" table, dp and simulate

  // pde
  std::string branch = "C1";
  std::optional<double> b;
  std::optional<double> eta, xi_h, xi_r, t;
  double s2 = 0.0;

  // prefactor
  std::string which = "both";
  std::vector<double> at_gamma;

  // simulate
  std::int64_t episodes = 100000;
  std::uint64_t seed = 1;
  std::string policy = "myopic";
  std::string audit;
  std::int64_t audit_count = 10;

  // sweep
  std::string config;
  bool error_scaling = false;
  std::vector<double> gaps;

  // figure
  std::string grid = "0.01:5:0.01";

  // verify
  int grid_levels = 51;
  std::string classes = "revealed";
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline double resolve_eps(const Options& o) {
  if (o.eps.has_value() == o.gamma.has_value()) throw UsageError("exactly one of --eps, --gamma is required");
  require(o.horizon >= 1, "horizon: T >= 1");
  const double e = o.eps ? *o.eps : *o.gamma / std::sqrt(static_cast<double>(o.horizon));
  require_gap(e);
  return e;
}

inline std::string num(const Options& o, double x) {
  if (!o.short_output) return fmt_num(x);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

inline nlohmann::ordered_json cell_json(const std::string& s) {
  if (s.empty()) return nullptr;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() + s.size()) return v;
  return s;
}

inline void emit(const Options& o, CsvTable table, std::ostream& out) {
  const bool has_seed = std::any_of(table.config.begin(), table.config.end(), [](const auto& kv) { return kv.first == "seed"; });
  if (!has_seed) table.config.emplace_back("seed", std::to_string(o.seed));
  std::ofstream file;
  std::ostream* os = &out;
  if (!o.out.empty()) {
    file.open(o.out);
    require(static_cast<bool>(file), "output: file '" + o.out + "' is writable");
    os = &file;
  }
  if (o.format == "json") {
    nlohmann::ordered_json j;
    j["version"] = kVersion;
    j["schema"] = table.schema;
    auto& cfg = j["config"];
    cfg = nlohmann::ordered_json::object();
    for (const auto& [k, v] : table.config) cfg[k] = v;
    auto& rows = j["rows"];
    rows = nlohmann::ordered_json::array();
    for (const auto& r : table.rows) {
      nlohmann::ordered_json row;
      for (std::size_t i = 0; i < r.size(); ++i) row[table.columns[i]] = cell_json(r[i]);
      rows.push_back(row);
    }
    *os << j.dump(2) << '\n';
  } else {
    table.write(*os);
  }
}

inline std::vector<std::pair<std::string, std::string>> base_config(const Options& o, double eps) {
  return {{"T", std::to_string(o.horizon)},
          {"eps", fmt_exact(eps)},
          {"gamma", fmt_exact(eps * std::sqrt(static_cast<double>(o.horizon)))},
          {"safe_arm", std::to_string(o.safe)}};
}

// ---------------------------------------------------------------------------

inline TabularStrategy load_strategy(const Options& o) {
  std::ifstream f(o.strategy);
  require(static_cast<bool>(f), "strategy table: file '" + o.strategy + "' is readable");
  auto s = TabularStrategy::parse(f);
  require(s.covers(o.horizon), "strategy table: entry for every reachable (t, xi_r) of the horizon");
  return s;
}

template <class Policy>
double dp_regret(const Options& o, double eps, Arm safe, const Policy& policy) {
  if (o.method == "separated") return regret_value(o.horizon, eps, safe, policy);
  if (o.method == "reduced") return regret_value_reduced(o.horizon, eps, safe, policy);
  if (o.method == "full") return regret_value_full(o.horizon, eps, safe, policy);
  throw UsageError("--method must be separated, reduced or full");
}

inline int cmd_dp(const Options& o, std::ostream& out) {
  if (!o.trace.empty() && !o.strategy.empty()) throw UsageError("--trace is available for the myopic player only");
  const double eps = resolve_eps(o);
  const Arm safe = arm_from_index(o.safe);
  double v = 0.0;
  double vbar = 0.0;
  if (o.strategy.empty()) {
    v = dp_regret(o, eps, safe, MyopicPolicy{});
    vbar = pseudoregret_value(o.horizon, eps, safe);
  } else {
    const auto table = load_strategy(o);
    v = dp_regret(o, eps, safe, table);
    vbar = pseudoregret_value(o.horizon, eps, safe, table);
  }
  CsvTable t;
  t.schema = "dp/1";
  t.config = base_config(o, eps);
  t.config.emplace_back("method", o.method);
  t.config.emplace_back("strategy", o.strategy.empty() ? "myopic" : o.strategy);
  t.columns = {"v", "vbar", "v_over_sqrtT", "vbar_over_sqrtT"};
  const double rt = std::sqrt(static_cast<double>(o.horizon));
  t.add_row({num(o, v), num(o, vbar), num(o, v / rt), num(o, vbar / rt)});
  emit(o, t, out);
  if (!o.trace.empty()) {
    std::ofstream f(o.trace);
    require(static_cast<bool>(f), "output: file '" + o.trace + "' is writable");
    trace_csv(o.horizon, eps, value_trace(o.horizon, eps)).write(f);
  }
  return kExitOk;
}

inline int cmd_pde(const Options& o, std::ostream& out) {
  const bool explicit_point = o.t.has_value();
  double eps = 0.0;
  if (explicit_point) {
    if (o.eps.has_value() == o.gamma.has_value()) throw UsageError("exactly one of --eps, --gamma is required");
    if (o.gamma) {
      require(o.horizon >= 1, "horizon: T >= 1 (needed to derive eps from gamma)");
    }
    eps = o.eps ? *o.eps : *o.gamma / std::sqrt(static_cast<double>(o.horizon));
    require_gap(eps);
  } else {
    eps = resolve_eps(o);
  }
  const ClosedForm cf = o.b ? ClosedForm::custom(eps, *o.b) : ClosedForm::of(parse_branch(o.branch), eps);
  const double t = explicit_point ? *o.t : -static_cast<double>(o.horizon);
  const double eta = o.eta.value_or(0.0), xh = o.xi_h.value_or(0.0), xr = o.xi_r.value_or(0.0);

  CsvTable tab;
  tab.schema = "pde/1";
  tab.config = {{"eps", fmt_exact(eps)},
                {"branch", branch_name(cf.branch)},
                {"b", fmt_exact(cf.b)},
                {"eta", fmt_exact(eta)},
                {"xi_h", fmt_exact(xh)},
                {"xi_r", fmt_exact(xr)},
                {"s2", fmt_exact(o.s2)},
                {"t", fmt_exact(t)}};
  tab.columns = {"u", "u_h", "u_n", "phi", "phi_hat", "ubar", "phi_bar", "phi_bar_hat"};
  tab.add_row({num(o, u_total(eta, xh, xr, t, cf)), num(o, u_h(eta, xh, xr, t, cf)), num(o, u_n(xr, t, cf)),
               num(o, phi(xr, cf)), num(o, phi_hat(xr, t, cf)), num(o, bar_u_total(xr, o.s2, t, cf)),
               num(o, phi_bar(xr, cf)), num(o, phi_bar_hat(xr, t, cf))});
  emit(o, tab, out);
  return kExitOk;
}

inline int cmd_prefactor(const Options& o, std::ostream& out) {
  std::vector<Prefactor> which;
  if (o.which == "c" || o.which == "both") which.push_back(Prefactor::C);
  if (o.which == "c_bar" || o.which == "both") which.push_back(Prefactor::CBar);
  if (which.empty()) throw UsageError("--which must be c, c_bar or both");
  CsvTable t;
  t.schema = "prefactor/1";
  t.config = {{"which", o.which}};
  t.columns = {"prefactor", "gamma", "value", "kind"};
  for (Prefactor p : which) {
    const auto m = maximize_prefactor(p);
    t.add_row({prefactor_name(p), num(o, m.gamma_star), num(o, m.value), "max"});
    for (double g : o.at_gamma) t.add_row({prefactor_name(p), num(o, g), num(o, prefactor(p, g)), "point"});
  }
  emit(o, t, out);
  return kExitOk;
}

inline int cmd_simulate(const Options& o, std::ostream& out) {
  const double eps = resolve_eps(o);
  const Arm safe = arm_from_index(o.safe);
  McEstimate mc;
  double dp_v = std::nan("");
  double dp_vbar = std::nan("");
  std::vector<EpisodeLog> logs;
  if (o.policy == "myopic") {
    mc = mc_estimate(MyopicPolicy{}, o.horizon, eps, o.episodes, o.seed, o.workers, safe);
    dp_v = regret_value(o.horizon, eps, safe);
    dp_vbar = pseudoregret_value(o.horizon, eps, safe);
    if (!o.audit.empty()) logs = audit_episodes(MyopicPolicy{}, o.horizon, eps, o.audit_count, o.seed, safe);
  } else if (o.policy == "uniform") {
    mc = mc_estimate(UniformPolicy{}, o.horizon, eps, o.episodes, o.seed, o.workers, safe);
    dp_v = regret_value(o.horizon, eps, safe, UniformPolicy{});
    dp_vbar = pseudoregret_value(o.horizon, eps, safe, UniformPolicy{});
    if (!o.audit.empty()) logs = audit_episodes(UniformPolicy{}, o.horizon, eps, o.audit_count, o.seed, safe);
  } else if (o.policy == "table") {
    if (o.strategy.empty()) throw UsageError("--policy table needs --strategy");
    const auto table = load_strategy(o);
    mc = mc_estimate(table, o.horizon, eps, o.episodes, o.seed, o.workers, safe);
    dp_v = regret_value(o.horizon, eps, safe, table);
    dp_vbar = pseudoregret_value(o.horizon, eps, safe, table);
    if (!o.audit.empty()) logs = audit_episodes(table, o.horizon, eps, o.audit_count, o.seed, safe);
  } else {
    throw UsageError("--policy must be myopic, uniform or table");
  }
  CsvTable t;
  t.schema = "simulate/1";
  t.config = base_config(o, eps);
  t.config.emplace_back("policy", o.policy);
  if (!o.strategy.empty()) t.config.emplace_back("strategy", o.strategy);
  t.config.emplace_back("episodes", std::to_string(o.episodes));
  t.config.emplace_back("seed", std::to_string(o.seed));
  t.columns = {"regret_mean", "regret_se", "pseudo_mean", "pseudo_se", "dp_v", "dp_vbar", "z_regret"};
  const double z = mc.regret_se > 0 ? (mc.regret_mean - dp_v) / mc.regret_se : 0.0;
  t.add_row({num(o, mc.regret_mean), num(o, mc.regret_se), num(o, mc.pseudo_mean), num(o, mc.pseudo_se),
             num(o, dp_v), num(o, dp_vbar), num(o, z)});
  emit(o, t, out);
  if (!o.audit.empty()) {
    std::ofstream f(o.audit);
    require(static_cast<bool>(f), "output: file '" + o.audit + "' is writable");
    f << "# sbandit " << kVersion << " schema=episodes/1\n# config:";
    for (const auto& [k, v] : t.config) f << ' ' << k << '=' << v;
    f << "\n";
    for (const auto& log : logs) f << to_record(log) << '\n';
  }
  return kExitOk;
}

inline int cmd_sweep(const Options& o, std::ostream& out) {
  if (o.error_scaling) {
    if (o.horizon < 1) throw UsageError("--error-scaling needs --T");
    if (o.gaps.empty()) throw UsageError("--error-scaling needs --gaps");
    const auto rows = error_scaling_table(o.horizon, o.gaps, parse_branch(o.branch), o.workers);
    auto t = error_scaling_csv(rows);
    std::string gs;
    for (std::size_t i = 0; i < o.gaps.size(); ++i) gs += (i ? ";" : "") + fmt_exact(o.gaps[i]);
    t.config.insert(t.config.begin(), {{"T", std::to_string(o.horizon)}, {"gaps", gs}, {"branch", o.branch}});
    emit(o, t, out);
    return kExitOk;
  }
  if (o.config.empty()) throw UsageError("sweep needs --config or --error-scaling");
  std::ifstream f(o.config);
  require(static_cast<bool>(f), "sweep config: file '" + o.config + "' is readable");
  const SweepSpec spec = parse_sweep_spec(f);
  emit(o, convergence_csv(spec, convergence_sweep(spec, o.workers)), out);
  return kExitOk;
}

inline int cmd_figure(const Options& o, std::ostream& out) {
  const auto grid = parse_gamma_grid(o.grid);
  emit(o, figure_csv(grid, figure_data(grid)), out);
  return kExitOk;
}

/// Brute-force certificate plus the exact invariants of the DP at small T.
inline int cmd_verify(const Options& o, std::ostream& out) {
  const double eps = resolve_eps(o);
  ObservableClass kind;
  if (o.classes == "revealed") {
    kind = ObservableClass::RevealedDifference;
  } else if (o.classes == "history") {
    kind = ObservableClass::FullHistory;
  } else {
    throw UsageError("--classes must be revealed or history");
  }
  CsvTable t;
  t.schema = "verify/1";
  t.config = base_config(o, eps);
  t.config.emplace_back("grid", std::to_string(o.grid_levels));
  t.config.emplace_back("classes", o.classes);
  t.columns = {"check", "value", "reference", "pass"};
  bool all = true;
  auto row = [&](const std::string& name, double value, double ref, bool pass) {
    all = all && pass;
    t.add_row({name, fmt_num(value), fmt_num(ref), pass ? "1" : "0"});
  };

  const auto cert = brute_force_minimax(o.horizon, eps, o.grid_levels, kind);
  row("minimax_certificate", cert.myopic_value, cert.grid_minimum + cert.lipschitz_bound, cert.achieved_by_myopic);

  const double sep = regret_value(o.horizon, eps);
  const double full = regret_value_full(o.horizon, eps);
  row("full_vs_separated", sep, full, std::fabs(sep - full) <= 1e-12);
  const double enumerated = exact_regret_by_enumeration(MyopicPolicy{}, o.horizon, eps, Arm::One);
  row("enumeration_vs_separated", sep, enumerated, std::fabs(sep - enumerated) <= 1e-12);
  const double swapped = regret_value(o.horizon, eps, Arm::Two);
  row("safe_arm_indifference", swapped, sep, std::fabs(swapped - sep) <= 1e-12);
  const double vbar = pseudoregret_value(o.horizon, eps);
  const double vbar_full = pseudoregret_value_full(o.horizon, eps);
  row("pseudo_full_vs_reduced", vbar, vbar_full, std::fabs(vbar - vbar_full) <= 1e-12);
  const double bayes = bayesian_pseudoregret_check(o.horizon, eps);
  row("bayesian_pseudoregret", bayes, vbar, std::fabs(bayes - vbar) <= 1e-12);

  emit(o, t, out);
  return all ? kExitOk : kExitPrecondition;
}

}  // namespace detail

/// Parse argv and dispatch. Usage errors return 2, violated invariants 1.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Exact values, closed forms and simulations for the symmetric two-armed bandit", "sbandit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Options o;

  auto common = [&](CLI::App* sub, bool needs_gap) {
    sub->add_option("--T", o.horizon, "Horizon T");
    if (needs_gap) {
      auto* e = sub->add_option("--eps", o.eps, "Gap eps (centered scale)");
      auto* g = sub->add_option("--gamma", o.gamma, "gamma = eps sqrt(T); eps is derived");
      e->excludes(g);
    }
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", o.out, "Write the table to this file instead of stdout");
    sub->add_flag("--short", o.short_output, "Print values with 3 decimals");
  };

  auto* dp = app.add_subcommand("dp", "Exact v and vbar at the origin by backward induction");
  common(dp, true);
  dp->add_option("--safe", o.safe, "Index of the safe arm")->check(CLI::IsMember({1, 2}));
  dp->add_option("--method", o.method, "separated | reduced | full");
  dp->add_option("--trace", o.trace, "Also write the t = -T..0 value-at-origin trace CSV");
  dp->add_option("--strategy", o.strategy, "Evaluate a tabular (t, xi_r, p1) player instead of the myopic one");

  auto* pde = app.add_subcommand("pde", "Closed-form u, ubar and their components");
  common(pde, true);
  pde->add_option("--branch", o.branch, "C1 | C0");
  pde->add_option("--b", o.b, "Custom branch constant b (overrides --branch)");
  pde->add_option("--eta", o.eta);
  pde->add_option("--xi-h", o.xi_h);
  pde->add_option("--xi-r", o.xi_r);
  pde->add_option("--t", o.t, "Evaluation time t < 0 (default -T)");
  pde->add_option("--s2", o.s2, "Risky pulls so far");

  auto* pre = app.add_subcommand("prefactor", "Prefactors c, c_bar and their maximizers");
  common(pre, false);
  pre->add_option("--which", o.which, "c | c_bar | both");
  pre->add_option("--at", o.at_gamma, "Also evaluate at these gamma values")->delimiter(',');

  auto* sim = app.add_subcommand("simulate", "Monte Carlo estimate of regret and pseudoregret");
  common(sim, true);
  sim->add_option("--safe", o.safe)->check(CLI::IsMember({1, 2}));
  sim->add_option("--episodes", o.episodes);
  sim->add_option("--seed", o.seed);
  sim->add_option("--workers", o.workers)->check(CLI::Range(1u, 1024u));
  sim->add_option("--policy", o.policy, "myopic | uniform | table");
  sim->add_option("--strategy", o.strategy, "Table file for --policy table");
  sim->add_option("--audit", o.audit, "Write episode audit records to this file");
  sim->add_option("--audit-count", o.audit_count);

  auto* sweep = app.add_subcommand("sweep", "Convergence sweep from a config file, or an error-scaling table");
  common(sweep, false);
  sweep->add_option("--config", o.config, "key = value sweep config");
  sweep->add_option("--workers", o.workers)->check(CLI::Range(1u, 1024u));
  sweep->add_flag("--error-scaling", o.error_scaling, "Tabulate |u - v| over --gaps at fixed --T");
  sweep->add_option("--gaps", o.gaps)->delimiter(',');
  sweep->add_option("--branch", o.branch, "C1 | C0");

  auto* fig = app.add_subcommand("figure", "Prefactor curves c and c_bar on a gamma grid");
  common(fig, false);
  fig->add_option("--grid", o.grid, "start:stop:step within (0, 5]");

  auto* ver = app.add_subcommand("verify", "Brute-force minimax certificate and DP invariants");
  common(ver, true);
  ver->add_option("--grid", o.grid_levels, "Decision grid levels");
  ver->add_option("--classes", o.classes, "revealed | history");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    out << kVersion << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*dp) return detail::cmd_dp(o, out);
    if (*pde) return detail::cmd_pde(o, out);
    if (*pre) return detail::cmd_prefactor(o, out);
    if (*sim) return detail::cmd_simulate(o, out);
    if (*sweep) return detail::cmd_sweep(o, out);
    if (*fig) return detail::cmd_figure(o, out);
    if (*ver) return detail::cmd_verify(o, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const PreconditionError& e) {
    err << "precondition violated: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitPrecondition;
  }
  return kExitUsage;
}

}  // namespace sbandit::cli
