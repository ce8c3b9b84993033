#pragma once

// Player strategies and the brute-force minimax certificate for the myopic
// player at tiny horizons.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sbandit/core.hpp"
#include "sbandit/env.hpp"

namespace sbandit {

/// Probability of choosing arm 1.
struct Decision {
  double p1 = 0.5;

  Decision() = default;
  explicit Decision(double p) : p1(p) { require(p >= 0.0 && p <= 1.0, "decision: 0 <= p1 <= 1"); }
};

/// Follow the arm with the larger revealed cumulative reward; split ties.
inline Decision myopic_decision(std::int64_t xi_r) {
  if (xi_r > 0) return Decision(1.0);
  if (xi_r < 0) return Decision(0.0);
  return Decision(0.5);
}

/// pi_1 / pi_2 = ((1+eps)/(1-eps))^xi_r, the likelihood that arm 1 is safe
/// relative to arm 2 given the revealed rewards.
inline double likelihood_ratio(std::int64_t xi_r, double eps) {
  require_gap(eps);
  return std::pow((1.0 + eps) / (1.0 - eps), static_cast<double>(xi_r));
}

struct MyopicPolicy {
  Decision operator()(std::int64_t /*t*/, std::int64_t xi_r) const { return myopic_decision(xi_r); }
};

struct UniformPolicy {
  Decision operator()(std::int64_t, std::int64_t) const { return Decision(0.5); }
};

/// Decisions keyed by the observable class (t, xi_r).
class TabularStrategy {
 public:
  void set(std::int64_t t, std::int64_t xi_r, Decision d) { table_[{t, xi_r}] = d; }

  Decision operator()(std::int64_t t, std::int64_t xi_r) const {
    auto it = table_.find({t, xi_r});
    if (it == table_.end()) {
      throw PreconditionError("tabular strategy: entry for (t=" + std::to_string(t) + ", xi_r=" + std::to_string(xi_r) +
                              ")");
    }
    return it->second;
  }

  bool contains(std::int64_t t, std::int64_t xi_r) const { return table_.count({t, xi_r}) > 0; }
  std::size_t size() const { return table_.size(); }

  /// True when every reachable (t, xi_r) of horizon T has an entry.
  bool covers(std::int64_t horizon) const {
    for (std::int64_t k = 0; k < horizon; ++k) {
      for (std::int64_t x = -k; x <= k; x += 2) {
        if (!contains(k - horizon, x)) return false;
      }
    }
    return true;
  }

  static TabularStrategy myopic(std::int64_t horizon) {
    TabularStrategy s;
    for (std::int64_t k = 0; k < horizon; ++k) {
      for (std::int64_t x = -k; x <= k; x += 2) s.set(k - horizon, x, myopic_decision(x));
    }
    return s;
  }

  /// Plain-text table: one "t xi_r p1" triple per line, '#' starts a comment.
  static TabularStrategy parse(std::istream& in) {
    TabularStrategy s;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      std::istringstream ls(line);
      std::int64_t t = 0;
      std::int64_t x = 0;
      double p = 0.0;
      if (!(ls >> t)) continue;
      require(static_cast<bool>(ls >> x >> p), "strategy table: line " + std::to_string(lineno) + " has t xi_r p1");
      require(t < 0, "strategy table: t < 0 on line " + std::to_string(lineno));
      s.set(t, x, Decision(p));
    }
    return s;
  }

  void write(std::ostream& out) const {
    out << "# t xi_r p1\n";
    for (const auto& [key, d] : table_) out << key.first << ' ' << key.second << ' ' << d.p1 << '\n';
  }

 private:
  std::map<std::pair<std::int64_t, std::int64_t>, Decision> table_;
};

// ---------------------------------------------------------------------------
// One-step pairwise minimax

struct PairSolution {
  std::vector<double> x;
  std::vector<double> y;
  double value = 0.0;
  double first = 0.0;   // <x, a> + <y, b>
  double second = 0.0;  // -<x, b> - <y, a>
};

inline double pair_objective_first(std::span<const double> x, std::span<const double> y,
                                   std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += x[i] * a[i] + y[i] * b[i];
  return s;
}

inline double pair_objective_second(std::span<const double> x, std::span<const double> y,
                                    std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s -= x[i] * b[i] + y[i] * a[i];
  return s;
}

/// Minimizer over x, y in [-1/2, 1/2]^d of
///   max(<x, a> + <y, b>, -<x, b> - <y, a>).
/// Coordinates with a_i == b_i take x_i = y_i = 0.
inline PairSolution minimax_pair_solve(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), "minimax_pair_solve: a and b have equal length");
  PairSolution s;
  s.x.resize(a.size());
  s.y.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) {
      s.x[i] = -0.5;
      s.y[i] = 0.5;
    } else if (a[i] < b[i]) {
      s.x[i] = 0.5;
      s.y[i] = -0.5;
    }
  }
  s.first = pair_objective_first(s.x, s.y, a, b);
  s.second = pair_objective_second(s.x, s.y, a, b);
  s.value = std::max(s.first, s.second);
  return s;
}

// ---------------------------------------------------------------------------
// Exact regret by outcome-tree enumeration

namespace detail {

struct OutcomeProbs {
  // P(g1 = +1), P(g2 = +1)
  double p1_plus;
  double p2_plus;

  OutcomeProbs(double eps, Arm safe) {
    const double hi = 0.5 * (1.0 + eps);
    const double lo = 0.5 * (1.0 - eps);
    p1_plus = safe == Arm::One ? hi : lo;
    p2_plus = safe == Arm::One ? lo : hi;
  }
};

/// Walk every (choice, reward) branch of a T-round game. `decide(k, history,
/// xi_r)` returns P(arm 1) at round k given the observable history code
/// (base-4 digits of (arm, sign of the revealed reward)).
template <class Decide>
double enumerate_regret(std::int64_t horizon, double eps, Arm safe, const Decide& decide) {
  const OutcomeProbs probs(eps, safe);
  double total = 0.0;
  auto recurse = [&](auto&& self, std::int64_t k, const RegretState& s, std::uint64_t history,
                     double weight) -> void {
    if (k == horizon) {
      total += weight * terminal_payoff(s);
      return;
    }
    const double p1 = decide(k, history, s.xi_r);
    for (Arm arm : {Arm::One, Arm::Two}) {
      const double pa = arm == Arm::One ? p1 : 1.0 - p1;
      if (pa == 0.0) continue;
      for (int g1 : {1, -1}) {
        const double q1 = g1 > 0 ? probs.p1_plus : 1.0 - probs.p1_plus;
        for (int g2 : {1, -1}) {
          const double q2 = g2 > 0 ? probs.p2_plus : 1.0 - probs.p2_plus;
          const RewardPair g{g1, g2};
          const auto code = history * 4 + static_cast<std::uint64_t>((index(arm) - 1) * 2 + (g.of(arm) > 0));
          self(self, k + 1, step(s, arm, g), code, weight * pa * q1 * q2);
        }
      }
    }
  };
  recurse(recurse, 0, RegretState{0, 0, 0, -horizon}, 0, 1.0);
  return total;
}

}  // namespace detail

/// Exact expected final regret of a (t, xi_r)-policy by full tree enumeration.
/// Cost is 8^T leaves, so this is an oracle for small T only.
template <class Policy>
double exact_regret_by_enumeration(const Policy& policy, std::int64_t horizon, double eps, Arm safe) {
  require(horizon >= 1 && horizon <= 8, "exact_regret_by_enumeration: 1 <= T <= 8");
  require_gap(eps);
  return detail::enumerate_regret(horizon, eps, safe, [&](std::int64_t k, std::uint64_t, std::int64_t x) {
    return policy(k - horizon, x).p1;
  });
}

struct MinimaxCertificate {
  double grid_minimum = 0.0;     // min over grid strategies of max over safe arm
  double myopic_value = 0.0;     // max over safe arm for the myopic player
  double lipschitz_bound = 0.0;  // worst-case loss from rounding to the grid
  bool achieved_by_myopic = false;
  std::size_t classes = 0;
  std::size_t candidates = 0;
  std::vector<double> best_p1;   // one entry per class
};

enum class ObservableClass {
  RevealedDifference,  // (t, xi_r)
  FullHistory,         // every revealed history
};

namespace detail {

inline std::size_t class_count(std::int64_t horizon, ObservableClass kind) {
  std::size_t n = 0;
  for (std::int64_t k = 0; k < horizon; ++k) {
    n += kind == ObservableClass::RevealedDifference ? static_cast<std::size_t>(k + 1)
                                                     : static_cast<std::size_t>(1) << (2 * k);
  }
  return n;
}

inline std::size_t class_of(ObservableClass kind, std::int64_t k, std::uint64_t history, std::int64_t xi_r) {
  if (kind == ObservableClass::RevealedDifference) {
    return static_cast<std::size_t>(k * (k + 1) / 2 + (xi_r + k) / 2);
  }
  const std::size_t offset = ((static_cast<std::size_t>(1) << (2 * k)) - 1) / 3;
  return offset + static_cast<std::size_t>(history);
}

}  // namespace detail

inline constexpr double kBruteForceBudget = 2e9;  // leaf evaluations

/// Exhaustive search over strategies whose decisions lie on the grid
/// {0, 1/(grid-1), ..., 1}, scoring each by the larger of its exact regrets
/// under the two safe-arm labels. The myopic player is certified when its
/// worst-case regret is within the grid-rounding Lipschitz bound of the best
/// grid strategy.
inline MinimaxCertificate brute_force_minimax(std::int64_t horizon, double eps, int grid,
                                              ObservableClass kind = ObservableClass::RevealedDifference) {
  require(horizon >= 1, "brute_force_minimax: T >= 1");
  require(horizon <= 3, "brute_force_minimax: T <= 3");
  require(kind == ObservableClass::RevealedDifference || horizon <= 2,
          "brute_force_minimax: full-history classes need T <= 2");
  require(grid >= 2, "brute_force_minimax: grid >= 2");
  require_gap(eps);

  MinimaxCertificate cert;
  cert.classes = detail::class_count(horizon, kind);
  const double leaves = std::pow(8.0, static_cast<double>(horizon)) * 2.0;
  const double candidates = std::pow(static_cast<double>(grid), static_cast<double>(cert.classes));
  require(candidates * leaves <= kBruteForceBudget, "brute_force_minimax: grid^classes * 8^T within search budget");
  cert.candidates = static_cast<std::size_t>(candidates);

  std::vector<double> levels(static_cast<std::size_t>(grid));
  for (int i = 0; i < grid; ++i) levels[static_cast<std::size_t>(i)] = static_cast<double>(i) / (grid - 1);

  std::vector<int> digits(cert.classes, 0);
  std::vector<double> p1(cert.classes, levels[0]);
  auto worst_case = [&](const std::vector<double>& table) {
    auto decide = [&](std::int64_t k, std::uint64_t h, std::int64_t x) {
      return table[detail::class_of(kind, k, h, x)];
    };
    return std::max(detail::enumerate_regret(horizon, eps, Arm::One, decide),
                    detail::enumerate_regret(horizon, eps, Arm::Two, decide));
  };

  cert.grid_minimum = std::numeric_limits<double>::infinity();
  while (true) {
    const double value = worst_case(p1);
    if (value < cert.grid_minimum) {
      cert.grid_minimum = value;
      cert.best_p1 = p1;
    }
    std::size_t i = 0;
    while (i < digits.size() && ++digits[i] == grid) {
      digits[i] = 0;
      p1[i] = levels[0];
      ++i;
    }
    if (i == digits.size()) break;
    p1[i] = levels[static_cast<std::size_t>(digits[i])];
  }

  const MyopicPolicy myopic;
  cert.myopic_value = std::max(exact_regret_by_enumeration(myopic, horizon, eps, Arm::One),
                               exact_regret_by_enumeration(myopic, horizon, eps, Arm::Two));
  // Terminal payoff ranges over [-T, 2T]; moving one decision by delta moves
  // the expectation by at most delta times that range.
  const double payoff_range = 3.0 * static_cast<double>(horizon);
  cert.lipschitz_bound = static_cast<double>(cert.classes) * 0.5 / (grid - 1) * payoff_range;
  cert.achieved_by_myopic = cert.myopic_value <= cert.grid_minimum + cert.lipschitz_bound;
  return cert;
}

}  // namespace sbandit
