#pragma once

// Monte Carlo estimation, DP-vs-PDE sweeps, log-log scaling fits, prefactor
// curve data, and the CSV writer shared by all of them.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "sbandit/core.hpp"
#include "sbandit/dp.hpp"
#include "sbandit/env.hpp"
#include "sbandit/pde.hpp"
#include "sbandit/strategy.hpp"

namespace sbandit {

// ---------------------------------------------------------------------------
// Parallel fan-out

/// Run job(i) for i in [0, n) on up to `workers` threads. Jobs must write to
/// disjoint outputs; callers merge results in index order.
template <class Job>
void parallel_for(std::size_t n, unsigned workers, const Job& job) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) job(i);
    });
  }
  for (auto& th : pool) th.join();
}

// ---------------------------------------------------------------------------
// Monte Carlo

struct EpisodeResult {
  double regret = 0.0;  // mu(eta_0, xi_0)
  double pseudo = 0.0;  // 2 eps s2
};

/// Play one episode. Ties in the decision consume one uniform draw before
/// the rewards of that round; a deterministic decision consumes none.
template <class Policy>
EpisodeResult play_episode(const Policy& policy, std::int64_t horizon, double eps, SplitMix64& rng,
                           Arm safe = Arm::One, EpisodeLog* log = nullptr) {
  RegretState s{0, 0, 0, -horizon};
  std::int64_t risky = 0;
  if (log) {
    log->safe = safe;
    log->choices.clear();
    log->rewards.clear();
  }
  for (std::int64_t k = 0; k < horizon; ++k) {
    const double p1 = policy(s.t, s.xi_r).p1;
    Arm arm;
    if (p1 >= 1.0) {
      arm = Arm::One;
    } else if (p1 <= 0.0) {
      arm = Arm::Two;
    } else {
      arm = rng.uniform() < p1 ? Arm::One : Arm::Two;
    }
    const RewardPair g = sample_rewards(rng, eps, safe);
    s = step(s, arm, g);
    if (arm != safe) ++risky;
    if (log) {
      log->choices.push_back(arm);
      log->rewards.push_back(g);
    }
  }
  if (log) replay(*log);
  return {terminal_payoff(s), 2.0 * eps * static_cast<double>(risky)};
}

struct McEstimate {
  std::int64_t episodes = 0;
  double regret_mean = 0.0;
  double regret_se = 0.0;
  double pseudo_mean = 0.0;
  double pseudo_se = 0.0;
};

inline constexpr std::int64_t kMcChunk = 4096;

namespace detail {

/// Running mean and sum of squared deviations; merged with Chan's rule.
struct Moments {
  double n = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    n += 1.0;
    const double d = x - mean;
    mean += d / n;
    m2 += d * (x - mean);
  }

  void merge(const Moments& o) {
    if (o.n == 0.0) return;
    const double total = n + o.n;
    const double d = o.mean - mean;
    mean += d * o.n / total;
    m2 += o.m2 + d * d * n * o.n / total;
    n = total;
  }

  double se() const { return n > 1.0 ? std::sqrt(m2 / (n - 1.0) / n) : 0.0; }
};

}  // namespace detail

/// Sample means and standard errors of the final regret and of 2 eps s2.
/// Episode i uses the stream derive_seed(seed, i); episodes are grouped in
/// fixed chunks merged in chunk order, so the result depends only on the
/// arguments, never on `workers`.
template <class Policy = MyopicPolicy>
McEstimate mc_estimate(const Policy& policy, std::int64_t horizon, double eps, std::int64_t episodes,
                       std::uint64_t seed, unsigned workers = 1, Arm safe = Arm::One) {
  require_gap(eps);
  require(horizon >= 1, "horizon: T >= 1");
  require(episodes >= 1, "mc_estimate: episodes >= 1");
  const auto chunks = static_cast<std::size_t>((episodes + kMcChunk - 1) / kMcChunk);
  std::vector<detail::Moments> reg(chunks);
  std::vector<detail::Moments> pse(chunks);
  parallel_for(chunks, workers, [&](std::size_t c) {
    const auto begin = static_cast<std::int64_t>(c) * kMcChunk;
    const auto end = std::min(episodes, begin + kMcChunk);
    for (auto i = begin; i < end; ++i) {
      SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
      const auto r = play_episode(policy, horizon, eps, rng, safe);
      reg[c].add(r.regret);
      pse[c].add(r.pseudo);
    }
  });
  detail::Moments r, p;
  for (std::size_t c = 0; c < chunks; ++c) {
    r.merge(reg[c]);
    p.merge(pse[c]);
  }
  return {episodes, r.mean, r.se(), p.mean, p.se()};
}

/// Episode logs for auditing: episode i of the same seed as mc_estimate.
template <class Policy = MyopicPolicy>
std::vector<EpisodeLog> audit_episodes(const Policy& policy, std::int64_t horizon, double eps, std::int64_t count,
                                       std::uint64_t seed, Arm safe = Arm::One) {
  require(count >= 0, "audit: count >= 0");
  std::vector<EpisodeLog> logs(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    auto& log = logs[static_cast<std::size_t>(i)];
    log.seed = derive_seed(seed, static_cast<std::uint64_t>(i));
    SplitMix64 rng(log.seed);
    play_episode(policy, horizon, eps, rng, safe, &log);
  }
  return logs;
}

// ---------------------------------------------------------------------------
// CSV

inline std::string fmt_num(double x, int digits = 12) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

/// Shortest decimal that reads back to the same double.
inline std::string fmt_exact(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

/// A table with a fixed column list and a metadata preamble:
///   # sbandit <version> schema=<name>/<rev>
///   # config: k=v k=v ...
///   col1,col2,...
struct CsvTable {
  std::string schema;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> r) {
    require(r.size() == columns.size(), "csv: row width equals column count");
    rows.push_back(std::move(r));
  }

  void write(std::ostream& os) const {
    os << "# sbandit " << kVersion << " schema=" << schema << '\n';
    os << "# config:";
    for (const auto& [k, v] : config) os << ' ' << k << '=' << v;
    os << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << '\n';
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
      os << '\n';
    }
  }

  std::string str() const {
    std::ostringstream os;
    write(os);
    return os.str();
  }
};

// ---------------------------------------------------------------------------
// Sweeps

enum class Regime { Small, Medium, Large };

inline const char* regime_name(Regime r) {
  switch (r) {
    case Regime::Small: return "small";
    case Regime::Medium: return "medium";
    case Regime::Large: return "large";
  }
  return "?";
}

inline Regime parse_regime(const std::string& s) {
  if (s == "small") return Regime::Small;
  if (s == "medium") return Regime::Medium;
  if (s == "large") return Regime::Large;
  throw PreconditionError("sweep: regime one of small, medium, large");
}

/// A family of (T, eps) cells. The gap follows either eps = gamma / sqrt T
/// (gamma rule) or eps = T^-a (power rule).
struct SweepSpec {
  Regime regime = Regime::Medium;
  std::vector<std::int64_t> horizons;
  std::optional<double> gamma;
  std::optional<double> gap_power;
  Branch branch = Branch::C1;
  std::uint64_t seed = 1;
  std::int64_t replications = 0;  // Monte Carlo episodes per cell; 0 skips MC

  double eps_for(std::int64_t horizon) const {
    const double T = static_cast<double>(horizon);
    return gamma ? *gamma / std::sqrt(T) : std::pow(T, -*gap_power);
  }

  void validate() const {
    require(!horizons.empty(), "sweep: at least one horizon");
    require(gamma.has_value() != gap_power.has_value(), "sweep: exactly one of gamma, gap_power");
    require(!gamma || *gamma >= 0.0, "sweep: gamma >= 0");
    require(!gap_power || *gap_power > 0.0, "sweep: gap_power > 0");
    require(replications >= 0, "sweep: replications >= 0");
    for (std::size_t i = 0; i < horizons.size(); ++i) {
      require(horizons[i] >= 1, "horizon: T >= 1");
      require(i == 0 || horizons[i] > horizons[i - 1], "sweep: horizons ascending");
      const double e = eps_for(horizons[i]);
      require(std::isfinite(e) && e >= 0.0 && e < 1.0, "sweep: gap rule gives 0 <= eps < 1 for every T");
    }
  }

  std::vector<std::pair<std::string, std::string>> describe() const {
    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("regime", regime_name(regime));
    std::string hs;
    for (std::size_t i = 0; i < horizons.size(); ++i) hs += (i ? ";" : "") + std::to_string(horizons[i]);
    kv.emplace_back("horizons", hs);
    if (gamma) kv.emplace_back("gamma", fmt_exact(*gamma));
    if (gap_power) kv.emplace_back("gap_power", fmt_exact(*gap_power));
    kv.emplace_back("branch", branch_name(branch));
    kv.emplace_back("seed", std::to_string(seed));
    kv.emplace_back("replications", std::to_string(replications));
    return kv;
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& s, const std::string& key) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  require(pos == s.size() && !s.empty(), "sweep config: " + key + " is a number");
  return v;
}

inline std::int64_t parse_int(const std::string& s, const std::string& key) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  require(pos == s.size() && !s.empty(), "sweep config: " + key + " is an integer");
  return v;
}

}  // namespace detail

/// Parse the key = value sweep format. '#' starts a comment; horizons are a
/// comma-separated list. Keys: regime, horizons, gamma, gap_power, branch,
/// seed, replications.
inline SweepSpec parse_sweep_spec(std::istream& in) {
  SweepSpec spec;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, "sweep config: line " + std::to_string(lineno) + " is key = value");
    const auto key = detail::trim(line.substr(0, eq));
    const auto val = detail::trim(line.substr(eq + 1));
    if (key == "regime") {
      spec.regime = parse_regime(val);
    } else if (key == "horizons") {
      spec.horizons.clear();
      std::stringstream ss(val);
      std::string item;
      while (std::getline(ss, item, ',')) spec.horizons.push_back(detail::parse_int(detail::trim(item), key));
    } else if (key == "gamma") {
      spec.gamma = detail::parse_double(val, key);
    } else if (key == "gap_power") {
      spec.gap_power = detail::parse_double(val, key);
    } else if (key == "branch") {
      spec.branch = parse_branch(val);
    } else if (key == "seed") {
      spec.seed = static_cast<std::uint64_t>(detail::parse_int(val, key));
    } else if (key == "replications") {
      spec.replications = detail::parse_int(val, key);
    } else {
      throw PreconditionError("sweep config: unknown key '" + key + "'");
    }
  }
  spec.validate();
  return spec;
}

struct ConvergenceRow {
  std::int64_t horizon = 0;
  double eps = 0.0;
  double gamma = 0.0;
  double v = 0.0;
  double vbar = 0.0;
  double u = 0.0;
  double ubar = 0.0;
  double mc_mean = std::nan("");
  double mc_se = std::nan("");

  double v_norm() const { return v / std::sqrt(static_cast<double>(horizon)); }
  double vbar_norm() const { return vbar / std::sqrt(static_cast<double>(horizon)); }
};

/// DP and closed-form values at the origin for every cell of the sweep.
/// Cells run in parallel and are assembled in horizon order.
inline std::vector<ConvergenceRow> convergence_sweep(const SweepSpec& spec, unsigned workers = 1) {
  spec.validate();
  std::vector<ConvergenceRow> rows(spec.horizons.size());
  parallel_for(rows.size(), workers, [&](std::size_t i) {
    auto& r = rows[i];
    r.horizon = spec.horizons[i];
    r.eps = spec.eps_for(r.horizon);
    r.gamma = r.eps * std::sqrt(static_cast<double>(r.horizon));
    r.v = regret_value(r.horizon, r.eps);
    r.vbar = pseudoregret_value(r.horizon, r.eps);
    const auto cf = ClosedForm::of(spec.branch, r.eps);
    const double t = -static_cast<double>(r.horizon);
    r.u = u_total(0, 0, 0, t, cf);
    r.ubar = bar_u_total(0, 0, t, cf);
    if (spec.replications > 0) {
      const auto mc = mc_estimate(MyopicPolicy{}, r.horizon, r.eps, spec.replications, derive_seed(spec.seed, i));
      r.mc_mean = mc.regret_mean;
      r.mc_se = mc.regret_se;
    }
  });
  return rows;
}

inline CsvTable convergence_csv(const SweepSpec& spec, const std::vector<ConvergenceRow>& rows) {
  CsvTable t;
  t.schema = "convergence/1";
  t.config = spec.describe();
  t.columns = {"T", "eps", "gamma", "v", "vbar", "u", "ubar", "v_minus_u", "vbar_minus_ubar",
               "v_over_sqrtT", "vbar_over_sqrtT", "mc_mean", "mc_se"};
  for (const auto& r : rows) {
    t.add_row({std::to_string(r.horizon), fmt_num(r.eps), fmt_num(r.gamma), fmt_num(r.v), fmt_num(r.vbar),
               fmt_num(r.u), fmt_num(r.ubar), fmt_num(r.v - r.u), fmt_num(r.vbar - r.ubar), fmt_num(r.v_norm()),
               fmt_num(r.vbar_norm()), std::isnan(r.mc_mean) ? "" : fmt_num(r.mc_mean),
               std::isnan(r.mc_se) ? "" : fmt_num(r.mc_se)});
  }
  return t;
}

// ---------------------------------------------------------------------------
// Scaling fits

struct ScalingFit {
  std::vector<std::pair<double, double>> points;  // (log x, log y)
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Least-squares line through (log x, log y).
inline ScalingFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, "fit: at least two points");
  ScalingFit fit;
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    require(x[i] > 0.0 && y[i] > 0.0, "fit: positive data on log-log axes");
    fit.points.emplace_back(std::log(x[i]), std::log(y[i]));
    sx += fit.points.back().first;
    sy += fit.points.back().second;
  }
  const double n = static_cast<double>(x.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& [lx, ly] : fit.points) {
    sxx += (lx - mx) * (lx - mx);
    sxy += (lx - mx) * (ly - my);
    syy += (ly - my) * (ly - my);
  }
  require(sxx > 0.0, "fit: distinct x values");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  return fit;
}

/// Dominant term of the error envelope of each branch, and the remainder it
/// must dominate.
///   C1: eps^2 T      vs eps log T + 1
///   C0: eps^3 T      vs eps^2 sqrt T + eps log T + 1
inline double dominant_term(Branch branch, std::int64_t horizon, double eps) {
  const double T = static_cast<double>(horizon);
  return branch == Branch::C0 ? eps * eps * eps * T : eps * eps * T;
}

inline double remainder_term(Branch branch, std::int64_t horizon, double eps) {
  const double T = static_cast<double>(horizon);
  const double rest = eps * std::log(T) + 1.0;
  return branch == Branch::C0 ? eps * eps * std::sqrt(T) + rest : rest;
}

/// Pseudoregret envelope remainder: the same terms without the trailing 1.
inline double remainder_term_bar(Branch branch, std::int64_t horizon, double eps) {
  return remainder_term(branch, horizon, eps) - 1.0;
}

inline constexpr double kDominanceFactor = 10.0;

inline bool dominance_holds(Branch branch, std::int64_t horizon, double eps) {
  return dominant_term(branch, horizon, eps) >= kDominanceFactor * remainder_term(branch, horizon, eps);
}

inline bool dominance_holds_bar(Branch branch, std::int64_t horizon, double eps) {
  return dominant_term(branch, horizon, eps) >= kDominanceFactor * remainder_term_bar(branch, horizon, eps);
}

struct ErrorScalingRow {
  std::int64_t horizon = 0;
  double eps = 0.0;
  Branch branch = Branch::C1;
  double v = 0.0;
  double u = 0.0;
  double vbar = 0.0;
  double ubar = 0.0;
  double predictor = 0.0;
  bool dominant = false;
  bool dominant_bar = false;

  double abs_diff() const { return std::fabs(u - v); }
  double abs_diff_bar() const { return std::fabs(ubar - vbar); }
};

inline std::vector<ErrorScalingRow> error_scaling_table(std::int64_t horizon, const std::vector<double>& gaps,
                                                        Branch branch, unsigned workers = 1) {
  std::vector<ErrorScalingRow> rows(gaps.size());
  parallel_for(rows.size(), workers, [&](std::size_t i) {
    auto& r = rows[i];
    r.horizon = horizon;
    r.eps = gaps[i];
    r.branch = branch;
    r.v = regret_value(horizon, r.eps);
    r.vbar = pseudoregret_value(horizon, r.eps);
    const auto cf = ClosedForm::of(branch, r.eps);
    const double t = -static_cast<double>(horizon);
    r.u = u_total(0, 0, 0, t, cf);
    r.ubar = bar_u_total(0, 0, t, cf);
    r.predictor = dominant_term(branch, horizon, r.eps);
    r.dominant = dominance_holds(branch, horizon, r.eps);
    r.dominant_bar = dominance_holds_bar(branch, horizon, r.eps);
  });
  return rows;
}

inline CsvTable error_scaling_csv(const std::vector<ErrorScalingRow>& rows) {
  CsvTable t;
  t.schema = "error_scaling/1";
  t.columns = {"T", "eps", "branch", "v", "u", "abs_u_minus_v", "vbar", "ubar", "abs_ubar_minus_vbar",
               "predictor", "dominant", "dominant_bar"};
  for (const auto& r : rows) {
    t.add_row({std::to_string(r.horizon), fmt_num(r.eps), branch_name(r.branch), fmt_num(r.v), fmt_num(r.u),
               fmt_num(r.abs_diff()), fmt_num(r.vbar), fmt_num(r.ubar), fmt_num(r.abs_diff_bar()),
               fmt_num(r.predictor), r.dominant ? "1" : "0", r.dominant_bar ? "1" : "0"});
    if (r.dominant != r.dominant_bar) t.config.emplace_back("envelope_mismatch_eps", fmt_exact(r.eps));
  }
  return t;
}

/// Fit log|u - v| against log(dominant term). Refuses rows where the
/// dominant term does not exceed the rest of the envelope tenfold.
inline ScalingFit error_scaling_fit(const std::vector<ErrorScalingRow>& rows) {
  std::vector<double> x, y;
  for (const auto& r : rows) {
    require(r.dominant, r.branch == Branch::C0
                            ? "error_scaling_fit: eps^3 T >= 10 (eps^2 sqrt T + eps log T + 1)"
                            : "error_scaling_fit: eps^2 T >= 10 (eps log T + 1)");
    x.push_back(r.predictor);
    y.push_back(r.abs_diff());
  }
  return fit_loglog(x, y);
}

// ---------------------------------------------------------------------------
// Prefactor curves

struct GammaGrid {
  double start = 0.01;
  double stop = 5.0;
  double step = 0.01;

  std::size_t size() const { return static_cast<std::size_t>(std::llround((stop - start) / step)) + 1; }
  double at(std::size_t i) const { return start + static_cast<double>(i) * step; }
};

/// Parse "start:stop:step".
inline GammaGrid parse_gamma_grid(const std::string& s) {
  const auto a = s.find(':');
  const auto b = a == std::string::npos ? a : s.find(':', a + 1);
  require(b != std::string::npos, "grid: start:stop:step");
  GammaGrid g;
  g.start = detail::parse_double(s.substr(0, a), "grid start");
  g.stop = detail::parse_double(s.substr(a + 1, b - a - 1), "grid stop");
  g.step = detail::parse_double(s.substr(b + 1), "grid step");
  require(g.step > 0.0, "grid: step > 0");
  require(g.start > 0.0 && g.stop <= 5.0 + 1e-12 && g.start <= g.stop, "grid: within (0, 5]");
  return g;
}

struct FigureRow {
  double gamma = 0.0;
  double c = 0.0;
  double c_bar = 0.0;
  std::string flag;  // "c_max", "c_bar_max", or empty
};

/// c and cbar on the grid; the rows nearest the two maximizers are flagged.
inline std::vector<FigureRow> figure_data(const GammaGrid& grid) {
  std::vector<FigureRow> rows(grid.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double g = grid.at(i);
    rows[i] = {g, prefactor_c(g), prefactor_c_bar(g), ""};
  }
  auto flag_nearest = [&](double target, const char* name) {
    if (target < grid.start - 0.5 * grid.step || target > grid.stop + 0.5 * grid.step) return;
    std::size_t best = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (std::fabs(rows[i].gamma - target) < std::fabs(rows[best].gamma - target)) best = i;
    }
    auto& f = rows[best].flag;
    f = f.empty() ? name : f + ";" + name;
  };
  flag_nearest(maximize_prefactor(Prefactor::C).gamma_star, "c_max");
  flag_nearest(maximize_prefactor(Prefactor::CBar).gamma_star, "c_bar_max");
  return rows;
}

inline CsvTable figure_csv(const GammaGrid& grid, const std::vector<FigureRow>& rows) {
  CsvTable t;
  t.schema = "figure_c/1";
  t.config = {{"grid", fmt_exact(grid.start) + ":" + fmt_exact(grid.stop) + ":" + fmt_exact(grid.step)}};
  const auto mc = maximize_prefactor(Prefactor::C);
  const auto mb = maximize_prefactor(Prefactor::CBar);
  t.config.emplace_back("c_argmax", fmt_num(mc.gamma_star));
  t.config.emplace_back("c_max", fmt_num(mc.value));
  t.config.emplace_back("c_bar_argmax", fmt_num(mb.gamma_star));
  t.config.emplace_back("c_bar_max", fmt_num(mb.value));
  t.columns = {"gamma", "c", "c_bar", "flag"};
  for (const auto& r : rows) t.add_row({fmt_num(r.gamma), fmt_num(r.c), fmt_num(r.c_bar), r.flag});
  return t;
}

inline CsvTable trace_csv(std::int64_t horizon, double eps, const std::vector<TraceRow>& rows) {
  CsvTable t;
  t.schema = "trace/1";
  t.config = {{"T", std::to_string(horizon)}, {"eps", fmt_exact(eps)}};
  t.columns = {"t", "v", "vbar"};
  for (const auto& r : rows) t.add_row({std::to_string(r.t), fmt_num(r.v), fmt_num(r.vbar)});
  return t;
}

}  // namespace sbandit
