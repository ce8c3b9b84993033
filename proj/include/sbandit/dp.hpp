#pragma once

// Exact backward induction for the regret value v(eta, xi, t) and the
// pseudoregret value vbar(xi_r, s2, t) of a player whose decision depends on
// (t, xi_r) only (the myopic player by default).
//
// Three parameterizations of the regret recursion are provided:
//
//   full       (eta, xi_h, xi_r) lattice, O(T^4) work, T <= 12
//   reduced    (xi_r, zeta = xi_r + xi_h) with eta accumulated as a scalar
//              source E[d eta]/2, O(T^3) work
//   separated  two 1-D recursions, O(T^2) work, any T
//
// The separated form rests on two facts about the symmetric game: xi_r moves
// by +1 with probability P(g1 = +1) whichever arm is pulled, and zeta moves
// by g1 - g2 regardless of the choice. Hence v(0,0,-T) splits into the
// expected eta drift (a function of the xi_r walk only) plus E|zeta_0| / 2
// (a function of the zeta walk only).
//
// All slices are parity-packed: at k = T + t rounds elapsed, a coordinate
// that moves by +-1 per round takes values -k, -k+2, ..., k and is stored at
// index (x + k) / 2.

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "sbandit/core.hpp"
#include "sbandit/env.hpp"
#include "sbandit/strategy.hpp"

namespace sbandit {

inline constexpr std::int64_t kFullTableMaxHorizon = 12;
inline constexpr std::int64_t kReducedTableMaxHorizon = 2048;
inline constexpr std::int64_t kPseudoFullMaxHorizon = 512;

enum class Reduction {
  Full,           // (eta, xi_h, xi_r)
  Reduced,        // (xi_r, zeta)
  PseudoReduced,  // (xi_r)
  PseudoFull,     // (xi_r, s2)
};

namespace detail {

/// Index of x in a parity-packed range of half-width k, if present.
inline std::optional<std::size_t> packed(std::int64_t x, std::int64_t k) {
  if (x < -k || x > k || ((x + k) & 1) != 0) return std::nullopt;
  return static_cast<std::size_t>((x + k) / 2);
}

inline void check_args(std::int64_t horizon, double eps) {
  require(horizon >= 1, "horizon: T >= 1");
  require_gap(eps);
}

/// E[d eta] / 2 for a round with P(arm 1) = p1: -E[g_I].
inline double eta_drift(double p1, double eps, Arm safe) {
  const double e1 = safe == Arm::One ? eps : -eps;  // E[g1]
  return -(p1 * e1 - (1.0 - p1) * e1);
}

/// 2 eps * P(risky arm pulled).
inline double pseudo_drift(double p1, double eps, Arm safe) {
  return 2.0 * eps * (safe == Arm::One ? 1.0 - p1 : p1);
}

}  // namespace detail

/// One time slice of a value function.
struct ValueTable {
  std::int64_t t = 0;
  std::int64_t steps = 0;  // k = T + t
  Reduction reduction = Reduction::Full;
  std::vector<double> values;

  /// v(eta, xi_h, xi_r) for Reduction::Full.
  std::optional<double> full(std::int64_t eta, std::int64_t xi_h, std::int64_t xi_r) const {
    const auto k = steps;
    if ((eta & 1) != 0 || eta < -2 * k || eta > 2 * k) return std::nullopt;
    auto ih = detail::packed(xi_h, k);
    auto ir = detail::packed(xi_r, k);
    if (!ih || !ir) return std::nullopt;
    const auto ie = static_cast<std::size_t>((eta + 2 * k) / 2);
    const auto n = static_cast<std::size_t>(k + 1);
    return values[(ie * n + *ih) * n + *ir];
  }

  /// vbar(xi_r, s2) for Reduction::PseudoFull.
  std::optional<double> pseudo(std::int64_t xi_r, std::int64_t s2) const {
    auto ir = detail::packed(xi_r, steps);
    if (!ir || s2 < 0 || s2 > steps) return std::nullopt;
    return values[*ir * static_cast<std::size_t>(steps + 1) + static_cast<std::size_t>(s2)];
  }
};

// ---------------------------------------------------------------------------
// Full lattice

/// Every slice t = -T .. 0 of v over the full (eta, xi_h, xi_r) lattice.
/// Element i of the result is the slice at t = -T + i.
template <class Policy = MyopicPolicy>
std::vector<ValueTable> full_regret_tables(std::int64_t horizon, double eps, Arm safe = Arm::One,
                                           const Policy& policy = {}) {
  detail::check_args(horizon, eps);
  require(horizon <= kFullTableMaxHorizon, "regret_value_full: T <= 12");
  const detail::OutcomeProbs probs(eps, safe);

  std::vector<ValueTable> slices(static_cast<std::size_t>(horizon + 1));
  {
    auto& last = slices.back();
    last.t = 0;
    last.steps = horizon;
    const auto k = horizon;
    const auto n = static_cast<std::size_t>(k + 1);
    last.values.resize(static_cast<std::size_t>(2 * k + 1) * n * n);
    for (std::int64_t eta = -2 * k; eta <= 2 * k; eta += 2) {
      for (std::int64_t xh = -k; xh <= k; xh += 2) {
        for (std::int64_t xr = -k; xr <= k; xr += 2) {
          const auto ie = static_cast<std::size_t>((eta + 2 * k) / 2);
          last.values[(ie * n + *detail::packed(xh, k)) * n + *detail::packed(xr, k)] =
              terminal_payoff(eta, xh, xr);
        }
      }
    }
  }

  for (std::int64_t k = horizon - 1; k >= 0; --k) {
    const auto& next = slices[static_cast<std::size_t>(k + 1)];
    auto& cur = slices[static_cast<std::size_t>(k)];
    cur.t = k - horizon;
    cur.steps = k;
    const auto n = static_cast<std::size_t>(k + 1);
    cur.values.resize(static_cast<std::size_t>(2 * k + 1) * n * n);
    for (std::int64_t eta = -2 * k; eta <= 2 * k; eta += 2) {
      for (std::int64_t xh = -k; xh <= k; xh += 2) {
        for (std::int64_t xr = -k; xr <= k; xr += 2) {
          const RegretState s{eta, xh, xr, cur.t};
          const double p1 = policy(cur.t, xr).p1;
          double acc = 0.0;
          for (Arm arm : {Arm::One, Arm::Two}) {
            const double pa = arm == Arm::One ? p1 : 1.0 - p1;
            if (pa == 0.0) continue;
            for (int g1 : {1, -1}) {
              const double q1 = g1 > 0 ? probs.p1_plus : 1.0 - probs.p1_plus;
              for (int g2 : {1, -1}) {
                const double q2 = g2 > 0 ? probs.p2_plus : 1.0 - probs.p2_plus;
                const RegretState ns = step(s, arm, RewardPair{g1, g2});
                acc += pa * q1 * q2 * *next.full(ns.eta, ns.xi_h, ns.xi_r);
              }
            }
          }
          const auto ie = static_cast<std::size_t>((eta + 2 * k) / 2);
          cur.values[(ie * n + *detail::packed(xh, k)) * n + *detail::packed(xr, k)] = acc;
        }
      }
    }
  }
  return slices;
}

/// v(0, 0, -T) from the full lattice. Test-oracle scale only (T <= 12).
template <class Policy = MyopicPolicy>
double regret_value_full(std::int64_t horizon, double eps, Arm safe = Arm::One, const Policy& policy = {}) {
  return *full_regret_tables(horizon, eps, safe, policy).front().full(0, 0, 0);
}

// ---------------------------------------------------------------------------
// Reduced (xi_r, zeta) lattice

/// v(0, 0, -T) over (xi_r, zeta) with eta carried as the scalar source
/// E[d eta]/2 per round. O(T^3); used to cross-check the separated form.
template <class Policy = MyopicPolicy>
double regret_value_reduced(std::int64_t horizon, double eps, Arm safe = Arm::One, const Policy& policy = {}) {
  detail::check_args(horizon, eps);
  require(horizon <= kReducedTableMaxHorizon, "regret_value_reduced: T <= 2048");
  const detail::OutcomeProbs probs(eps, safe);

  // slice k: xi_r index ir in [0, k], zeta index iz in [0, 2k]
  auto width = [](std::int64_t k) { return static_cast<std::size_t>(2 * k + 1); };
  std::vector<double> next(static_cast<std::size_t>(horizon + 1) * width(horizon));
  for (std::int64_t ir = 0; ir <= horizon; ++ir) {
    for (std::int64_t iz = 0; iz <= 2 * horizon; ++iz) {
      const std::int64_t zeta = 2 * iz - 2 * horizon;
      next[static_cast<std::size_t>(ir) * width(horizon) + static_cast<std::size_t>(iz)] =
          0.5 * static_cast<double>(zeta < 0 ? -zeta : zeta);
    }
  }
  std::vector<double> cur;
  for (std::int64_t k = horizon - 1; k >= 0; --k) {
    const auto wn = width(k + 1);
    const auto wc = width(k);
    cur.assign(static_cast<std::size_t>(k + 1) * wc, 0.0);
    for (std::int64_t ir = 0; ir <= k; ++ir) {
      const std::int64_t xr = 2 * ir - k;
      const double p1 = policy(k - horizon, xr).p1;
      const double source = detail::eta_drift(p1, eps, safe);
      for (std::int64_t iz = 0; iz <= 2 * k; ++iz) {
        double acc = source;
        for (int g1 : {1, -1}) {
          const double q1 = g1 > 0 ? probs.p1_plus : 1.0 - probs.p1_plus;
          for (int g2 : {1, -1}) {
            const double q2 = g2 > 0 ? probs.p2_plus : 1.0 - probs.p2_plus;
            // zeta moves by g1 - g2 for either choice
            const auto jz = static_cast<std::size_t>(iz + 1 + (g1 - g2) / 2);
            const auto jr1 = static_cast<std::size_t>(ir + (g1 > 0 ? 1 : 0));   // xi_r += g1
            const auto jr2 = static_cast<std::size_t>(ir + (g2 < 0 ? 1 : 0));   // xi_r -= g2
            double v = 0.0;
            if (p1 > 0.0) v += p1 * next[jr1 * wn + jz];
            if (p1 < 1.0) v += (1.0 - p1) * next[jr2 * wn + jz];
            acc += q1 * q2 * v;
          }
        }
        cur[static_cast<std::size_t>(ir) * wc + static_cast<std::size_t>(iz)] = acc;
      }
    }
    next.swap(cur);
  }
  return next[0];
}

// ---------------------------------------------------------------------------
// Separated 1-D recursions

/// Expected cumulative source from time -T onward, started at xi_r = 0:
/// sum_t E[source(p(t, xi_r_t))], by backward induction on the xi_r walk.
template <class Policy, class Source>
double xi_r_source_value(std::int64_t horizon, double eps, Arm safe, const Policy& policy, const Source& source) {
  const double up = safe == Arm::One ? 0.5 * (1.0 + eps) : 0.5 * (1.0 - eps);
  const double down = 1.0 - up;
  std::vector<double> w(static_cast<std::size_t>(horizon + 1), 0.0);
  std::vector<double> src(static_cast<std::size_t>(horizon), 0.0);
  for (std::int64_t k = horizon - 1; k >= 0; --k) {
    const std::int64_t t = k - horizon;
    const auto n = static_cast<std::size_t>(k + 1);
    for (std::size_t i = 0; i < n; ++i) src[i] = source(policy(t, 2 * static_cast<std::int64_t>(i) - k).p1);
    double* __restrict out = w.data();
    const double* __restrict s = src.data();
    for (std::size_t i = 0; i < n; ++i) out[i] = s[i] + up * out[i + 1] + down * out[i];
  }
  return w[0];
}

/// E|zeta_0| / 2 from zeta = 0 at time -T. zeta is a sum of T independent
/// increments g1 - g2 in {-2, 0, +2}; the player's choices never enter.
inline double zeta_spread_value(std::int64_t horizon, double eps) {
  detail::check_args(horizon, eps);
  const double hi = 0.5 * (1.0 + eps);
  const double lo = 0.5 * (1.0 - eps);
  const double up = hi * hi;      // g_safe = +1, g_risky = -1 (either labeling)
  const double down = lo * lo;
  const double flat = 1.0 - up - down;
  const auto size = static_cast<std::size_t>(2 * horizon + 1);
  std::vector<double> w(size);
  for (std::size_t i = 0; i < size; ++i) {
    const auto zeta = 2 * static_cast<std::int64_t>(i) - 2 * horizon;
    w[i] = 0.5 * static_cast<double>(zeta < 0 ? -zeta : zeta);
  }
  for (std::int64_t k = horizon - 1; k >= 0; --k) {
    const auto n = static_cast<std::size_t>(2 * k + 1);
    for (std::size_t i = 0; i < n; ++i) w[i] = down * w[i] + flat * w[i + 1] + up * w[i + 2];
  }
  return w[0];
}

/// v(0, 0, -T): exact final-time regret of the policy.
template <class Policy = MyopicPolicy>
double regret_value(std::int64_t horizon, double eps, Arm safe = Arm::One, const Policy& policy = {}) {
  detail::check_args(horizon, eps);
  const double drift = xi_r_source_value(horizon, eps, safe, policy,
                                         [=](double p1) { return detail::eta_drift(p1, eps, safe); });
  // E|zeta| is the same under either labeling (the walk is mirrored).
  return drift + zeta_spread_value(horizon, eps);
}

/// vbar(0, 0, -T) = 2 eps E[risky pulls], by the 1-D recursion over xi_r;
/// linearity in s2 turns the terminal 2 eps s2 into a per-round source.
template <class Policy = MyopicPolicy>
double pseudoregret_value(std::int64_t horizon, double eps, Arm safe = Arm::One, const Policy& policy = {}) {
  detail::check_args(horizon, eps);
  return xi_r_source_value(horizon, eps, safe, policy,
                           [=](double p1) { return detail::pseudo_drift(p1, eps, safe); });
}

/// Every slice of vbar over the unreduced (xi_r, s2) lattice.
template <class Policy = MyopicPolicy>
std::vector<ValueTable> pseudo_full_tables(std::int64_t horizon, double eps, Arm safe = Arm::One,
                                           const Policy& policy = {}) {
  detail::check_args(horizon, eps);
  require(horizon <= kPseudoFullMaxHorizon, "pseudoregret_value_full: T <= 512");
  const double up = safe == Arm::One ? 0.5 * (1.0 + eps) : 0.5 * (1.0 - eps);
  const double down = 1.0 - up;
  const Arm risky = other(safe);

  std::vector<ValueTable> slices(static_cast<std::size_t>(horizon + 1));
  auto& last = slices.back();
  last.t = 0;
  last.steps = horizon;
  last.reduction = Reduction::PseudoFull;
  const auto nT = static_cast<std::size_t>(horizon + 1);
  last.values.resize(nT * nT);
  for (std::size_t ir = 0; ir < nT; ++ir) {
    for (std::size_t s2 = 0; s2 < nT; ++s2) last.values[ir * nT + s2] = 2.0 * eps * static_cast<double>(s2);
  }
  for (std::int64_t k = horizon - 1; k >= 0; --k) {
    const auto& next = slices[static_cast<std::size_t>(k + 1)];
    auto& cur = slices[static_cast<std::size_t>(k)];
    cur.t = k - horizon;
    cur.steps = k;
    cur.reduction = Reduction::PseudoFull;
    const auto n = static_cast<std::size_t>(k + 1);
    const auto nn = n + 1;
    cur.values.resize(n * n);
    for (std::size_t ir = 0; ir < n; ++ir) {
      const std::int64_t xr = 2 * static_cast<std::int64_t>(ir) - k;
      const double p1 = policy(cur.t, xr).p1;
      const double p_risky = risky == Arm::One ? p1 : 1.0 - p1;
      for (std::size_t s2 = 0; s2 < n; ++s2) {
        auto at = [&](std::size_t jr, std::size_t js) { return next.values[jr * nn + js]; };
        // xi_r goes up with probability `up` under either choice
        const double stay = up * at(ir + 1, s2) + down * at(ir, s2);
        const double pulled = up * at(ir + 1, s2 + 1) + down * at(ir, s2 + 1);
        cur.values[ir * n + s2] = (1.0 - p_risky) * stay + p_risky * pulled;
      }
    }
  }
  return slices;
}

template <class Policy = MyopicPolicy>
double pseudoregret_value_full(std::int64_t horizon, double eps, Arm safe = Arm::One, const Policy& policy = {}) {
  return *pseudo_full_tables(horizon, eps, safe, policy).front().pseudo(0, 0);
}

/// Prior-averaged pseudoregret, (vbar(safe=1) + vbar(safe=2)) / 2. Equals
/// the minimax pseudoregret when the player is indifferent to the labeling.
inline double bayesian_pseudoregret_check(std::int64_t horizon, double eps) {
  return 0.5 * (pseudoregret_value(horizon, eps, Arm::One) + pseudoregret_value(horizon, eps, Arm::Two));
}

struct TraceRow {
  std::int64_t t = 0;
  double v = 0.0;
  double vbar = 0.0;
};

/// Values at the origin v(0,0,t) and vbar(0,0,t) for t = -T .. 0 under the
/// myopic player, by forward propagation of the xi_r and zeta distributions.
/// Independent of the backward recursions above.
inline std::vector<TraceRow> value_trace(std::int64_t horizon, double eps) {
  detail::check_args(horizon, eps);
  const double up = 0.5 * (1.0 + eps);
  const double hi = 0.5 * (1.0 + eps);
  const double lo = 0.5 * (1.0 - eps);
  const double z_up = hi * hi;
  const double z_down = lo * lo;
  const double z_flat = 1.0 - z_up - z_down;

  std::vector<double> px{1.0};  // xi_r distribution after r rounds
  std::vector<double> pz{1.0};  // zeta distribution after r rounds
  std::vector<double> abs_zeta(static_cast<std::size_t>(horizon + 1), 0.0);
  std::vector<double> drift(static_cast<std::size_t>(horizon + 1), 0.0);
  std::vector<double> pdrift(static_cast<std::size_t>(horizon + 1), 0.0);
  for (std::int64_t r = 0; r < horizon; ++r) {
    double d = 0.0;
    double pd = 0.0;
    for (std::size_t i = 0; i < px.size(); ++i) {
      const double p1 = myopic_decision(2 * static_cast<std::int64_t>(i) - r).p1;
      d += px[i] * detail::eta_drift(p1, eps, Arm::One);
      pd += px[i] * detail::pseudo_drift(p1, eps, Arm::One);
    }
    drift[static_cast<std::size_t>(r + 1)] = drift[static_cast<std::size_t>(r)] + d;
    pdrift[static_cast<std::size_t>(r + 1)] = pdrift[static_cast<std::size_t>(r)] + pd;

    std::vector<double> nx(px.size() + 1, 0.0);
    for (std::size_t i = 0; i < px.size(); ++i) {
      nx[i] += (1.0 - up) * px[i];
      nx[i + 1] += up * px[i];
    }
    px.swap(nx);
    std::vector<double> nz(pz.size() + 2, 0.0);
    for (std::size_t i = 0; i < pz.size(); ++i) {
      nz[i] += z_down * pz[i];
      nz[i + 1] += z_flat * pz[i];
      nz[i + 2] += z_up * pz[i];
    }
    pz.swap(nz);
    double e = 0.0;
    const std::int64_t rr = r + 1;
    for (std::size_t i = 0; i < pz.size(); ++i) {
      const auto zeta = 2 * static_cast<std::int64_t>(i) - 2 * rr;
      e += pz[i] * static_cast<double>(zeta < 0 ? -zeta : zeta);
    }
    abs_zeta[static_cast<std::size_t>(rr)] = e;
  }

  std::vector<TraceRow> rows;
  rows.reserve(static_cast<std::size_t>(horizon + 1));
  for (std::int64_t t = -horizon; t <= 0; ++t) {
    const auto r = static_cast<std::size_t>(-t);
    rows.push_back({t, drift[r] + 0.5 * abs_zeta[r], pdrift[r]});
  }
  return rows;
}

}  // namespace sbandit
