#pragma once

// Domain types shared by every module: game parameters, lattice states of the
// discrete game, the heat kernel, and the terminal payoff.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <string>

#include "sbandit/special_functions.hpp"

namespace sbandit {

inline constexpr const char* kVersion = "1.0.0";

/// Thrown when an argument violates a documented invariant. The message
/// starts with the invariant's name so callers can report it verbatim.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline void require(bool ok, const char* invariant) {
  if (!ok) throw PreconditionError(invariant);
}

inline void require(bool ok, const std::string& invariant) {
  if (!ok) throw PreconditionError(invariant);
}

inline void require_gap(double eps) {
  require(std::isfinite(eps) && eps >= 0.0 && eps < 1.0, "gap: 0 <= eps < 1");
}

/// Horizon T and half-gap eps of the centered game; gamma = eps * sqrt(T).
class GameParams {
 public:
  GameParams(std::int64_t horizon, double gap) : horizon_(horizon), gap_(gap) {
    require(horizon >= 1, "horizon: T >= 1");
    require_gap(gap);
  }

  static GameParams from_gamma(std::int64_t horizon, double gamma) {
    require(horizon >= 1, "horizon: T >= 1");
    return GameParams(horizon, gamma / std::sqrt(static_cast<double>(horizon)));
  }

  std::int64_t horizon() const { return horizon_; }
  double gap() const { return gap_; }
  double gamma() const { return gap_ * std::sqrt(static_cast<double>(horizon_)); }

 private:
  std::int64_t horizon_;
  double gap_;
};

/// Lattice state of the regret game. t runs from -T up to 0.
struct RegretState {
  std::int64_t eta = 0;   // sum of g1 + g2 - 2 g_I
  std::int64_t xi_h = 0;  // hidden-reward difference
  std::int64_t xi_r = 0;  // revealed-reward difference
  std::int64_t t = 0;

  friend bool operator==(const RegretState&, const RegretState&) = default;
};

/// Lattice state of the pseudoregret game.
struct PseudoState {
  std::int64_t xi_r = 0;
  std::int64_t s2 = 0;  // pulls of the risky arm
  std::int64_t t = 0;

  friend bool operator==(const PseudoState&, const PseudoState&) = default;
};

/// Parity and range invariants of a state reached from the origin at time -T.
inline bool is_reachable(const RegretState& s, std::int64_t horizon) {
  const std::int64_t k = horizon + s.t;
  if (k < 0 || s.t > 0) return false;
  auto ok = [k](std::int64_t x) { return std::llabs(x) <= k && ((x + k) % 2 == 0); };
  return ok(s.xi_r) && ok(s.xi_h) && s.eta % 2 == 0 && std::llabs(s.eta) <= 2 * k;
}

/// Fundamental solution of u_t + u_ss / 2 = 0 for t < 0.
inline double heat_kernel(double s, double t) {
  require(t < 0.0, "heat_kernel: t < 0");
  return std::exp(s * s / (2.0 * t)) / std::sqrt(-2.0 * std::numbers::pi * t);
}

/// mu(eta, xi) = (eta + |xi_r + xi_h|) / 2, which equals max_i x_i of the game.
inline double terminal_payoff(std::int64_t eta, std::int64_t xi_h, std::int64_t xi_r) {
  return 0.5 * static_cast<double>(eta + std::llabs(xi_r + xi_h));
}

inline double terminal_payoff(const RegretState& s) {
  return terminal_payoff(s.eta, s.xi_h, s.xi_r);
}

}  // namespace sbandit
