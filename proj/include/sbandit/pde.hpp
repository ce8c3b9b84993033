#pragma once

// Closed-form solutions of the linear parabolic equations that approximate
// the regret value v and the pseudoregret value vbar.
//
// Notation: tau = -t > 0. Under the drifted heat kernel the smoothed image of
// a function g of xi_r is E[g(S)] with S ~ N(xi_r + eps tau, tau).
//
//   phi(x)        = -x                         x <= 0
//                 =  x + b (e^{-2 eps x} - 1)  x > 0
//   phi_hat(x,t)  = E|S| + b (E[e^{-2 eps S}; S > 0] - P(S > 0))
//                 = sqrt(tau) f(m / sqrt tau)
//                   + b (e^{-2 eps x} N((x - eps tau)/sqrt tau) - N(m / sqrt tau))
//   with m = x + eps tau, f the folded normal mean and N the normal CDF.
//
// The product b * eps is carried separately so that b -> infinity as
// eps -> 0 (both standard branches) stays finite.

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "sbandit/core.hpp"
#include "sbandit/special_functions.hpp"

namespace sbandit {

enum class Branch { C1, C0, Custom };

inline const char* branch_name(Branch b) {
  switch (b) {
    case Branch::C1: return "C1";
    case Branch::C0: return "C0";
    case Branch::Custom: return "custom";
  }
  return "?";
}

inline Branch parse_branch(const std::string& s) {
  if (s == "C1" || s == "c1") return Branch::C1;
  if (s == "C0" || s == "c0") return Branch::C0;
  throw PreconditionError("branch: one of C1, C0");
}

/// Parameters of one member of the solution family.
struct ClosedForm {
  double eps = 0.0;
  double b = std::numeric_limits<double>::infinity();
  double b_eps = 1.0;  // b * eps, finite at eps = 0 for C1 and C0
  Branch branch = Branch::C1;

  double kappa() const { return 2.0 * (1.0 + eps * eps); }

  /// b = 1/eps: the unique C^1 member.
  static ClosedForm c1(double eps) {
    require_gap(eps);
    ClosedForm cf;
    cf.eps = eps;
    cf.b = eps > 0.0 ? 1.0 / eps : std::numeric_limits<double>::infinity();
    cf.b_eps = 1.0;
    cf.branch = Branch::C1;
    return cf;
  }

  /// b = 1/(eps - eps^3): the C^0 member with the smaller error envelope.
  static ClosedForm c0(double eps) {
    require_gap(eps);
    ClosedForm cf;
    cf.eps = eps;
    cf.b = eps > 0.0 ? 1.0 / (eps - eps * eps * eps) : std::numeric_limits<double>::infinity();
    cf.b_eps = 1.0 / (1.0 - eps * eps);
    cf.branch = Branch::C0;
    return cf;
  }

  static ClosedForm custom(double eps, double b) {
    require_gap(eps);
    require(std::isfinite(b), "closed form: finite b");
    ClosedForm cf;
    cf.eps = eps;
    cf.b = b;
    cf.b_eps = b * eps;
    cf.branch = Branch::Custom;
    return cf;
  }

  static ClosedForm of(Branch branch, double eps) {
    require(branch != Branch::Custom, "closed form: custom branch needs an explicit b");
    return branch == Branch::C1 ? c1(eps) : c0(eps);
  }
};

namespace detail {

inline double tau_of(double t, const char* what) {
  if (!(t < 0.0)) throw PreconditionError(std::string(what) + ": t < 0");
  return -t;
}

/// b (e^{-2 eps x} - 1), written through b * eps so eps = 0 is exact.
inline double b_expm1(double x, const ClosedForm& cf) {
  return cf.b_eps * (-2.0 * x) * expm1_ratio(-2.0 * cf.eps * x);
}

}  // namespace detail

/// Homogeneous part: u_h = (eta + sqrt(kappa tau) f(z / sqrt tau)) / 2 with
/// z = (xi_r + xi_h + 2 eps tau) / sqrt(kappa).
inline double u_h(double eta, double xi_h, double xi_r, double t, const ClosedForm& cf) {
  const double tau = detail::tau_of(t, "u_h");
  const double sk = std::sqrt(cf.kappa());
  const double z = (xi_r + xi_h + 2.0 * cf.eps * tau) / sk;
  const double st = std::sqrt(tau);
  return 0.5 * (eta + sk * st * folded_normal_mean(z / st));
}

/// ODE layer, phi(0) = 0.
inline double phi(double xi_r, const ClosedForm& cf) {
  if (xi_r <= 0.0) return -xi_r;
  return xi_r + detail::b_expm1(xi_r, cf);
}

enum class Side { Left, Right };

/// One-sided first derivative of phi.
inline double phi_d1(double xi_r, Side side, const ClosedForm& cf) {
  if (xi_r < 0.0 || (xi_r == 0.0 && side == Side::Left)) return -1.0;
  return 1.0 - 2.0 * cf.b_eps * std::exp(-2.0 * cf.eps * xi_r);
}

/// One-sided second derivative of phi.
inline double phi_d2(double xi_r, Side side, const ClosedForm& cf) {
  if (xi_r < 0.0 || (xi_r == 0.0 && side == Side::Left)) return 0.0;
  return 4.0 * cf.eps * cf.b_eps * std::exp(-2.0 * cf.eps * xi_r);
}

/// Drifted heat smoothing of phi.
inline double phi_hat(double xi_r, double t, const ClosedForm& cf) {
  const double tau = detail::tau_of(t, "phi_hat");
  const double eps = cf.eps;
  const double st = std::sqrt(tau);
  const double m = xi_r + eps * tau;
  const double abs_part = st * folded_normal_mean(m / st);
  if (eps == 0.0) {
    // b (e^{-2 eps S} - 1) -> -2 (b eps) S
    const double pos_mean = m * normal_cdf(m / st) + st * normal_pdf(m / st);
    return abs_part - 2.0 * cf.b_eps * pos_mean;
  }
  const double tilted = std::exp(-2.0 * eps * xi_r) * normal_cdf((xi_r - eps * tau) / st);
  return abs_part + cf.b * (tilted - normal_cdf(m / st));
}

/// Non-homogeneous part u_n = phi - phi_hat.
inline double u_n(double xi_r, double t, const ClosedForm& cf) { return phi(xi_r, cf) - phi_hat(xi_r, t, cf); }

/// u = u_h + phi - phi_hat.
inline double u_total(double eta, double xi_h, double xi_r, double t, const ClosedForm& cf) {
  return u_h(eta, xi_h, xi_r, t, cf) + u_n(xi_r, t, cf);
}

/// Pseudoregret ODE layer: phi_bar(x) = -2x for x <= 0, b (e^{-2 eps x} - 1)
/// for x > 0; equals phi(x) - x.
inline double phi_bar(double xi_r, const ClosedForm& cf) {
  if (xi_r <= 0.0) return -2.0 * xi_r;
  return detail::b_expm1(xi_r, cf);
}

/// Smoothed phi_bar = phi_hat - E[S].
inline double phi_bar_hat(double xi_r, double t, const ClosedForm& cf) {
  const double tau = detail::tau_of(t, "phi_bar_hat");
  return phi_hat(xi_r, t, cf) - (xi_r + cf.eps * tau);
}

/// ubar = 2 eps s2 + phi_bar - phi_bar_hat.
inline double bar_u_total(double xi_r, double s2, double t, const ClosedForm& cf) {
  return 2.0 * cf.eps * s2 + phi_bar(xi_r, cf) - phi_bar_hat(xi_r, t, cf);
}

/// Source of the regret equation.
inline double source_q(double xi_r, double eps) { return xi_r > 0.0 ? eps : (xi_r < 0.0 ? -eps : 0.0); }

/// Source of the pseudoregret equation.
inline double source_q_bar(double xi_r, double eps) { return xi_r < 0.0 ? -2.0 * eps : 0.0; }

struct PdePoint {
  double eta = 0.0;
  double xi_h = 0.0;
  double xi_r = 0.0;
  double t = -1.0;
};

/// Central-difference residual of
///   u_t + eps u_r + eps u_h + (u_rr + u_hh)/2 + eps^2 u_rh - q
/// at a point where u is smooth (|xi_r| >= 2h, t + h < 0).
inline double pde_residual(const PdePoint& p, const ClosedForm& cf, double h) {
  require(h > 0.0, "pde_residual: h > 0");
  require(std::fabs(p.xi_r) >= 2.0 * h, "pde_residual: |xi_r| >= 2h");
  require(p.t + h < 0.0, "pde_residual: t + h < 0");
  auto u = [&](double dh, double dr, double dt) { return u_total(p.eta, p.xi_h + dh, p.xi_r + dr, p.t + dt, cf); };
  const double u0 = u(0, 0, 0);
  const double ut = (u(0, 0, h) - u(0, 0, -h)) / (2 * h);
  const double ur = (u(0, h, 0) - u(0, -h, 0)) / (2 * h);
  const double uh = (u(h, 0, 0) - u(-h, 0, 0)) / (2 * h);
  const double urr = (u(0, h, 0) - 2 * u0 + u(0, -h, 0)) / (h * h);
  const double uhh = (u(h, 0, 0) - 2 * u0 + u(-h, 0, 0)) / (h * h);
  const double urh = (u(h, h, 0) - u(h, -h, 0) - u(-h, h, 0) + u(-h, -h, 0)) / (4 * h * h);
  const double e = cf.eps;
  return ut + e * ur + e * uh + 0.5 * (urr + uhh) + e * e * urh - source_q(p.xi_r, e);
}

/// Central-difference residual of ubar_t + eps ubar_r + ubar_rr / 2 - qbar.
inline double bar_pde_residual(double xi_r, double s2, double t, const ClosedForm& cf, double h) {
  require(h > 0.0, "bar_pde_residual: h > 0");
  require(std::fabs(xi_r) >= 2.0 * h, "bar_pde_residual: |xi_r| >= 2h");
  require(t + h < 0.0, "bar_pde_residual: t + h < 0");
  auto u = [&](double dr, double dt) { return bar_u_total(xi_r + dr, s2, t + dt, cf); };
  const double u0 = u(0, 0);
  const double ut = (u(0, h) - u(0, -h)) / (2 * h);
  const double ur = (u(h, 0) - u(-h, 0)) / (2 * h);
  const double urr = (u(h, 0) - 2 * u0 + u(-h, 0)) / (h * h);
  return ut + cf.eps * ur + 0.5 * urr - source_q_bar(xi_r, cf.eps);
}

// ---------------------------------------------------------------------------
// Prefactors: limits of u(0,0,-T)/sqrt T and ubar(0,0,-T)/sqrt T (C1 branch)
// at fixed gamma = eps sqrt T.

inline constexpr double kSmallGammaLimit = std::numbers::inv_sqrtpi;  // lim_{gamma -> 0} c
inline constexpr double kPrefactorSafeGamma = 8.0;

inline double prefactor_c(double gamma) {
  require(gamma > 0.0 && std::isfinite(gamma), "prefactor: gamma > 0");
  const double g = gamma;
  const double r2 = std::numbers::sqrt2;
  const double gauss = std::sqrt(2.0 / std::numbers::pi) * std::exp(-0.5 * g * g);
  const double head = std::exp(-g * g) * std::numbers::inv_sqrtpi;
  if (g > kPrefactorSafeGamma) {
    // gamma (erf g - erf(g/sqrt2)) rewritten with complements
    return head + g * (erfc(g / r2) - erfc(g)) + erf(g / r2) / g - gauss;
  }
  return head + g * erf(g) + (1.0 / g - g) * erf(g / r2) - gauss;
}

inline double prefactor_c_bar(double gamma) {
  require(gamma > 0.0 && std::isfinite(gamma), "prefactor: gamma > 0");
  const double g = gamma;
  const double r2 = std::numbers::sqrt2;
  const double gauss = std::sqrt(2.0 / std::numbers::pi) * std::exp(-0.5 * g * g);
  if (g > kPrefactorSafeGamma) return erf(g / r2) / g + g * erfc(g / r2) - gauss;
  return (1.0 / g - g) * erf(g / r2) - gauss + g;
}

enum class Prefactor { C, CBar };

inline const char* prefactor_name(Prefactor p) { return p == Prefactor::C ? "c" : "c_bar"; }

inline double prefactor(Prefactor which, double gamma) {
  return which == Prefactor::C ? prefactor_c(gamma) : prefactor_c_bar(gamma);
}

struct Maximizer {
  double gamma_star = 0.0;
  double value = 0.0;
};

inline constexpr double kScanLow = 1e-3;
inline constexpr double kScanHigh = 10.0;
inline constexpr int kScanPoints = 1000;

/// Coarse scan over (1e-3, 10) then golden-section refinement on the
/// bracket around the best scan point.
inline Maximizer maximize_prefactor(Prefactor which) {
  auto f = [which](double g) { return prefactor(which, g); };
  const double step = (kScanHigh - kScanLow) / (kScanPoints - 1);
  int best = 0;
  double best_val = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < kScanPoints; ++i) {
    const double v = f(kScanLow + i * step);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  require(best > 0 && best < kScanPoints - 1, "maximize_prefactor: interior bracket on (1e-3, 10)");

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = kScanLow + (best - 1) * step;
  double b = kScanLow + (best + 1) * step;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > 1e-10) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  const double g = 0.5 * (a + b);
  return {g, f(g)};
}

}  // namespace sbandit
