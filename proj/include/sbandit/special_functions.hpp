#pragma once

// Error function, its complement, and the Gaussian helpers built on them.
//
// erf is evaluated with two expansions that have no cancellation in their
// respective ranges:
//
//   |x| < 2.5 : erf(x) = 2/sqrt(pi) exp(-x^2) sum_n 2^n x^(2n+1) / (2n+1)!!
//               (every term positive)
//   |x| >= 2.5: erfc(x) from the Laplace continued fraction, erf = 1 - erfc
//
// Absolute error is below 1e-14 on [-6, 6]; beyond |x| > 6 erf saturates to
// +-1 exactly (|1 - erf(6)| < 2.2e-17).

#include <cmath>
#include <limits>
#include <numbers>

namespace sbandit {

inline constexpr double kErfSaturation = 6.0;

namespace detail {

inline constexpr double kTwoOverSqrtPi = 2.0 * std::numbers::inv_sqrtpi;
inline constexpr double kSeriesCrossover = 2.5;

/// Positive-term series, x >= 0.
inline double erf_series(double x) {
  const double x2 = x * x;
  double term = x;
  double sum = x;
  for (int n = 1; n < 400; ++n) {
    term *= 2.0 * x2 / (2.0 * n + 1.0);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return kTwoOverSqrtPi * std::exp(-x2) * sum;
}

/// erfc(x) for x >= kSeriesCrossover via modified Lentz on
///   erfc(x) = exp(-x^2)/sqrt(pi) / (x + (1/2)/(x + (2/2)/(x + (3/2)/(x + ...))))
inline double erfc_continued_fraction(double x) {
  constexpr double tiny = 1e-300;
  double f = x;
  double c = x;
  double d = 0.0;
  for (int j = 1; j < 2000; ++j) {
    const double a = 0.5 * j;
    d = x + a * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = x + a / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x * x) * std::numbers::inv_sqrtpi / f;
}

}  // namespace detail

/// Gauss error function.
inline double erf(double x) {
  if (std::isnan(x)) return x;
  const double ax = std::fabs(x);
  double r;
  if (ax > kErfSaturation) {
    r = 1.0;
  } else if (ax < detail::kSeriesCrossover) {
    r = detail::erf_series(ax);
  } else {
    r = 1.0 - detail::erfc_continued_fraction(ax);
  }
  return x < 0 ? -r : r;
}

/// Complementary error function, accurate in relative terms for large x.
inline double erfc(double x) {
  if (std::isnan(x)) return x;
  if (x >= detail::kSeriesCrossover) return detail::erfc_continued_fraction(x);
  if (x <= -detail::kSeriesCrossover) {
    return 2.0 - detail::erfc_continued_fraction(-x);
  }
  return 1.0 - erf(x);
}

/// Standard normal CDF, P(N(0,1) <= x).
inline double normal_cdf(double x) { return 0.5 * erfc(-x * std::numbers::sqrt2 / 2.0); }

/// Standard normal density.
inline double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) * std::numbers::inv_sqrtpi / std::numbers::sqrt2;
}

/// E|x + N(0,1)| = sqrt(2/pi) exp(-x^2/2) + x erf(x/sqrt 2).
///
/// This is the profile of the heat-smoothed absolute value: (Phi * |.|)(z, t)
/// equals sqrt(-t) * folded_normal_mean(z / sqrt(-t)).
inline double folded_normal_mean(double x) {
  return 2.0 * normal_pdf(x) + x * erf(x / std::numbers::sqrt2);
}

/// expm1(x) / x, continuous at 0.
inline double expm1_ratio(double x) {
  if (x == 0.0) return 1.0;
  return std::expm1(x) / x;
}

}  // namespace sbandit
