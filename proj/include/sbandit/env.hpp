#pragma once

// Symmetric two-armed Bernoulli bandit on the centered +-1 reward scale.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "sbandit/core.hpp"

namespace sbandit {

enum class Arm : int { One = 1, Two = 2 };

inline constexpr Arm other(Arm a) { return a == Arm::One ? Arm::Two : Arm::One; }
inline constexpr int index(Arm a) { return static_cast<int>(a); }

inline Arm arm_from_index(int i) {
  require(i == 1 || i == 2, "arm: index in {1, 2}");
  return i == 1 ? Arm::One : Arm::Two;
}

struct RewardPair {
  int g1 = 1;
  int g2 = 1;

  int of(Arm a) const { return a == Arm::One ? g1 : g2; }
  friend bool operator==(const RewardPair&, const RewardPair&) = default;
};

/// 0/1 reward to the centered scale, g -> 2g - 1.
inline int centered(int raw) {
  require(raw == 0 || raw == 1, "centering: raw reward in {0, 1}");
  return 2 * raw - 1;
}

inline int uncentered(int g) {
  require(g == -1 || g == 1, "centering: centered reward in {-1, +1}");
  return (g + 1) / 2;
}

/// SplitMix64. Small state, so every episode can own an independent stream.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/// Sub-seed splitting rule: seed_i = mix(master ^ mix(i + 1)), where mix is
/// the SplitMix64 finalizer. Stream i depends only on (master, i), never on
/// how work is scheduled.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t i) {
  auto mix = [](std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  };
  return mix(master ^ mix(i + 1));
}

/// One round of rewards. The safe arm pays +1 with probability (1+eps)/2,
/// the risky arm with probability (1-eps)/2, independently.
inline RewardPair sample_rewards(SplitMix64& rng, double eps, Arm safe = Arm::One) {
  require_gap(eps);
  const double p_safe = 0.5 * (1.0 + eps);
  const double p_risky = 0.5 * (1.0 - eps);
  const double p1 = safe == Arm::One ? p_safe : p_risky;
  const double p2 = safe == Arm::One ? p_risky : p_safe;
  RewardPair r;
  r.g1 = rng.uniform() < p1 ? 1 : -1;
  r.g2 = rng.uniform() < p2 ? 1 : -1;
  return r;
}

/// Advance the lattice state by one round.
inline RegretState step(const RegretState& s, Arm choice, const RewardPair& g) {
  require(s.t < 0, "step: t < 0");
  RegretState n = s;
  n.eta += g.g1 + g.g2 - 2 * g.of(choice);
  if (choice == Arm::One) {
    n.xi_r += g.g1;
    n.xi_h -= g.g2;
  } else {
    n.xi_r -= g.g2;
    n.xi_h += g.g1;
  }
  n.t += 1;
  return n;
}

/// One simulated play-through.
struct EpisodeLog {
  std::uint64_t seed = 0;
  Arm safe = Arm::One;
  std::vector<Arm> choices;
  std::vector<RewardPair> rewards;
  std::vector<RegretState> trajectory;  // T + 1 entries, t = -T .. 0
  double final_regret = 0.0;
  std::int64_t risky_pulls = 0;
};

/// Rebuild trajectory, final regret and risky pull count from choices and
/// rewards.
inline void replay(EpisodeLog& log) {
  require(log.choices.size() == log.rewards.size(), "episode: choices and rewards have equal length");
  const auto horizon = static_cast<std::int64_t>(log.choices.size());
  log.trajectory.clear();
  log.trajectory.reserve(log.choices.size() + 1);
  RegretState s{0, 0, 0, -horizon};
  log.trajectory.push_back(s);
  log.risky_pulls = 0;
  for (std::size_t i = 0; i < log.choices.size(); ++i) {
    s = step(s, log.choices[i], log.rewards[i]);
    log.trajectory.push_back(s);
    if (log.choices[i] != log.safe) ++log.risky_pulls;
  }
  log.final_regret = terminal_payoff(s);
}

// Audit line format (tab separated):
//   seed  safe_arm  choices  rewards  final_regret  risky_pulls
// choices is a string over {1,2}; rewards is a comma list of two-character
// sign pairs such as "+-"; final_regret is printed with 17 significant digits.

inline std::string to_record(const EpisodeLog& log) {
  std::string choices;
  choices.reserve(log.choices.size());
  for (Arm a : log.choices) choices.push_back(a == Arm::One ? '1' : '2');
  std::string rewards;
  rewards.reserve(3 * log.rewards.size());
  for (std::size_t i = 0; i < log.rewards.size(); ++i) {
    if (i) rewards.push_back(',');
    rewards.push_back(log.rewards[i].g1 > 0 ? '+' : '-');
    rewards.push_back(log.rewards[i].g2 > 0 ? '+' : '-');
  }
  char regret[64];
  std::snprintf(regret, sizeof regret, "%.17g", log.final_regret);
  std::ostringstream os;
  os << log.seed << '\t' << index(log.safe) << '\t' << choices << '\t' << rewards << '\t' << regret
     << '\t' << log.risky_pulls;
  return os.str();
}

/// Parse an audit line; the trajectory is replayed and checked against the
/// recorded final regret and risky pull count.
inline EpisodeLog parse_record(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab == std::string_view::npos ? tab : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  require(fields.size() == 6, "episode record: 6 tab-separated fields");

  EpisodeLog log;
  auto parse_int = [](std::string_view f, auto& out, const char* what) {
    auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), out);
    require(ec == std::errc() && p == f.data() + f.size(), std::string("episode record: ") + what);
  };
  parse_int(fields[0], log.seed, "seed");
  int safe = 0;
  parse_int(fields[1], safe, "safe arm");
  log.safe = arm_from_index(safe);
  for (char c : fields[2]) {
    require(c == '1' || c == '2', "episode record: choices over {1,2}");
    log.choices.push_back(c == '1' ? Arm::One : Arm::Two);
  }
  const auto& rw = fields[3];
  for (std::size_t i = 0; i < rw.size();) {
    require(i + 1 < rw.size(), "episode record: reward pairs");
    auto sign = [](char c) {
      require(c == '+' || c == '-', "episode record: reward signs");
      return c == '+' ? 1 : -1;
    };
    log.rewards.push_back({sign(rw[i]), sign(rw[i + 1])});
    i += 2;
    if (i < rw.size()) {
      require(rw[i] == ',', "episode record: comma between reward pairs");
      ++i;
    }
  }
  const double recorded = std::stod(std::string(fields[4]));
  std::int64_t pulls = 0;
  parse_int(fields[5], pulls, "risky pulls");
  replay(log);
  require(log.final_regret == recorded, "episode record: final regret matches replay");
  require(log.risky_pulls == pulls, "episode record: risky pulls match replay");
  return log;
}

}  // namespace sbandit
