// Acceptance gate: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (capped at 125).

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "sbandit/sbandit.hpp"

using namespace sbandit;

namespace {

// Pinned tolerances.
constexpr double kRuntimePrefactorSec = 1.0;
constexpr double kLimitTol = 1e-5;
constexpr double kLargeGammaTol = 1e-6;
constexpr double kSlopeTarget = -0.5;
constexpr double kSlopeTol = 0.15;
constexpr double kRuntimeSweepSec = 300.0;
constexpr double kPseudoConstTarget = 0.530;
constexpr double kPseudoConstRelTol = 0.02;
constexpr double kC1SlopeTarget = 2.0, kC1SlopeTol = 0.3;
constexpr double kC0SlopeTarget = 3.0, kC0SlopeTol = 0.4;
constexpr double kSmallGapTol = 0.05;
constexpr double kLargeGapTol = 0.1;
constexpr double kExactTol = 1e-12;
constexpr double kOneRoundTol = 1e-15;
constexpr int kCertificateGrid = 51;
constexpr double kMcSigmas = 4.0;
constexpr double kRuntimeMcSec = 60.0;
constexpr double kResidualTol = 1e-5;
constexpr double kResidualH = 1e-3;
constexpr double kDecayRatioLow = 3.0, kDecayRatioHigh = 5.0;
constexpr double kCoarseH = 2e-2;  // diagnostic only, truncation-dominated

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double round3(double x) { return std::round(x * 1000.0) / 1000.0; }

int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
  std::printf("%s  %2d  %-34s %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

void criterion1() {
  const auto t0 = Clock::now();
  const auto c = maximize_prefactor(Prefactor::C);
  const auto cb = maximize_prefactor(Prefactor::CBar);
  const double dt = seconds_since(t0);
  const bool ok_c = round3(c.gamma_star) == 0.707 && round3(c.value) == 0.572;
  const bool ok_cb = round3(cb.gamma_star) == 1.274 && round3(cb.value) == 0.530;
  report(1, "prefactor constants", ok_c && ok_cb && dt < kRuntimePrefactorSec,
         fmt("c: (%.6f, %.6f) want (0.707, 0.572); c_bar: (%.6f, %.6f) want (1.274, 0.530); %.3fs", c.gamma_star,
             c.value, cb.gamma_star, cb.value, dt));
}

void criterion2() {
  const double a = prefactor_c(1e-6) - std::numbers::inv_sqrtpi;
  const double b = prefactor_c_bar(1e-6) / 1e-6 - 1.0;
  const double c = 50.0 * prefactor_c(50.0) - 1.0;
  const double d = 50.0 * prefactor_c_bar(50.0) - 1.0;
  const bool ok = std::fabs(a) <= kLimitTol && std::fabs(b) <= kLimitTol && std::fabs(c) <= kLargeGammaTol &&
                  std::fabs(d) <= kLargeGammaTol;
  report(2, "small/large gap limits", ok,
         fmt("c(1e-6)-1/sqrt(pi)=%.2e c_bar/g-1=%.2e 50c(50)-1=%.2e 50c_bar(50)-1=%.2e", a, b, c, d));
}

void convergence_criterion(int id, const char* name, double gamma, bool pseudo) {
  const std::vector<std::int64_t> horizons{100, 400, 1600, 6400};
  const double target = pseudo ? prefactor_c_bar(gamma) : prefactor_c(gamma);
  const auto t0 = Clock::now();
  std::vector<double> gaps, hs;
  std::string vals;
  for (auto T : horizons) {
    const double eps = gamma / std::sqrt(static_cast<double>(T));
    const double value = pseudo ? pseudoregret_value(T, eps) : regret_value(T, eps);
    const double d = std::fabs(value / std::sqrt(static_cast<double>(T)) - target);
    gaps.push_back(d);
    hs.push_back(static_cast<double>(T));
    vals += fmt(" %.3e", d);
  }
  const double dt = seconds_since(t0);
  const auto fit = fit_loglog(hs, gaps);
  const bool mono = strictly_decreasing(gaps);
  const bool slope_ok = std::fabs(fit.slope - kSlopeTarget) <= kSlopeTol;
  report(id, name, mono && slope_ok && dt < kRuntimeSweepSec,
         fmt("|dev|:%s monotone=%s slope=%.3f (want %.2f+-%.2f) %.2fs", vals.c_str(), mono ? "yes" : "no", fit.slope,
             kSlopeTarget, kSlopeTol, dt));
}

void criterion5() {
  const std::int64_t T = 6400;
  const double eps = 1.274 / 80.0;
  const double r = pseudoregret_value(T, eps) / 80.0;
  const double rel = std::fabs(r - kPseudoConstTarget) / kPseudoConstTarget;
  report(5, "pseudoregret constant", rel <= kPseudoConstRelTol, fmt("vbar/sqrtT=%.6f rel.dev=%.4f", r, rel));
}

void criterion6() {
  const std::int64_t T = 4096;
  const std::vector<double> gaps{0.05, 0.1, 0.2};
  std::vector<double> d1, d0;
  std::string dom;
  for (double e : gaps) {
    const double v = regret_value(T, e);
    d1.push_back(std::fabs(u_total(0, 0, 0, -double(T), ClosedForm::c1(e)) - v));
    d0.push_back(std::fabs(u_total(0, 0, 0, -double(T), ClosedForm::c0(e)) - v));
    dom += fmt("%d%d", dominance_holds(Branch::C1, T, e), dominance_holds(Branch::C0, T, e));
  }
  // Raw slope against log eps; error_scaling_fit would refuse this grid
  // whenever the dominance flags below are 0.
  const auto f1 = fit_loglog(gaps, d1);
  const auto f0 = fit_loglog(gaps, d0);
  const bool ok1 = std::fabs(f1.slope - kC1SlopeTarget) <= kC1SlopeTol;
  const bool ok0 = std::fabs(f0.slope - kC0SlopeTarget) <= kC0SlopeTol;
  const bool smaller = d0.back() < d1.back();
  report(6, "error-branch improvement", ok1 && ok0 && smaller,
         fmt("C1 |u-v|=%.2e,%.2e,%.2e slope=%.2f; C0 |u-v|=%.2e,%.2e,%.2e slope=%.2f; C0<C1 at 0.2: %s; "
             "dominance(C1C0 per eps)=%s",
             d1[0], d1[1], d1[2], f1.slope, d0[0], d0[1], d0[2], f0.slope, smaller ? "yes" : "no", dom.c_str()));
}

void criterion7() {
  const std::int64_t T = 100000;
  const double Td = static_cast<double>(T);
  const double e_small = std::pow(Td, -0.75);
  const double ratio = pseudoregret_value(T, e_small) / (e_small * Td);
  const double e_large = std::pow(Td, -0.3);
  const double ev = e_large * regret_value(T, e_large);
  const bool ok = std::fabs(ratio - 1.0) <= kSmallGapTol && std::fabs(ev - 1.0) <= kLargeGapTol;
  report(7, "small/large gap laws", ok, fmt("vbar/(eps T)=%.4f (eps=T^-3/4); eps v=%.6f (eps=T^-0.3)", ratio, ev));
}

void criterion8() {
  double worst_full = 0.0, worst_swap = 0.0, worst_one = 0.0;
  for (std::int64_t T = 1; T <= 12; ++T) {
    for (double e : {0.0, 0.1, 0.3, 0.7}) {
      const double v = regret_value(T, e);
      worst_full = std::max(worst_full, std::fabs(v - regret_value_full(T, e)));
      worst_swap = std::max(worst_swap, std::fabs(v - regret_value(T, e, Arm::Two)));
      worst_swap = std::max(worst_swap, std::fabs(regret_value_full(T, e) - regret_value_full(T, e, Arm::Two)));
      if (T == 1) {
        worst_one = std::max(worst_one, std::fabs(v - 0.5 * (1 + e * e)));
        worst_one = std::max(worst_one, std::fabs(pseudoregret_value(1, e) - e));
      }
    }
  }
  const bool ok = worst_full <= kExactTol && worst_swap <= kExactTol && worst_one <= kOneRoundTol;
  report(8, "exactness oracles", ok,
         fmt("max|full-reduced|=%.1e max|swap|=%.1e max|T=1 - closed form|=%.1e", worst_full, worst_swap, worst_one));
}

void criterion9() {
  bool ok = true;
  std::string detail;
  for (std::int64_t T : {1, 2}) {
    for (double e : {0.1, 0.5}) {
      const auto c = brute_force_minimax(T, e, kCertificateGrid);
      ok = ok && c.achieved_by_myopic;
      detail += fmt("T=%lld eps=%.1f myopic=%.6f grid_min=%.6f bound=%.3f; ", static_cast<long long>(T), e,
                    c.myopic_value, c.grid_minimum, c.lipschitz_bound);
    }
  }
  report(9, "optimality certificate", ok, detail);
}

void criterion10(unsigned workers) {
  const std::int64_t T = 100;
  const double eps = 0.0707;
  const auto t0 = Clock::now();
  const auto mc = mc_estimate(MyopicPolicy{}, T, eps, 1000000, 20240601, workers);
  const double dt = seconds_since(t0);
  const double v = regret_value(T, eps);
  const double z = (mc.regret_mean - v) / mc.regret_se;
  report(10, "Monte Carlo consistency", std::fabs(z) <= kMcSigmas && dt < kRuntimeMcSec,
         fmt("mc=%.6f se=%.6f dp=%.6f z=%.2f workers=%u %.2fs", mc.regret_mean, mc.regret_se, v, z, workers, dt));
}

void criterion11() {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> mag(0.5, 5.0), xh(-5, 5), tt(-10, -0.5), ep(0.01, 0.5);
  std::bernoulli_distribution sign(0.5);
  double worst = 0.0, worst_bar = 0.0;
  double ss_h = 0, ss_h2 = 0, ssb_h = 0, ssb_h2 = 0, ss_c = 0, ss_c2 = 0;
  for (int i = 0; i < 100; ++i) {
    const double e = ep(gen);
    const auto cf = i % 2 ? ClosedForm::c0(e) : ClosedForm::c1(e);
    const double xr = sign(gen) ? mag(gen) : -mag(gen);
    const PdePoint p{2.0 * (i % 5 - 2), xh(gen), xr, tt(gen)};
    const double r1 = pde_residual(p, cf, kResidualH);
    const double r2 = pde_residual(p, cf, kResidualH / 2);
    const double s2 = static_cast<double>(i % 4);
    const double b1 = bar_pde_residual(p.xi_r, s2, p.t, cf, kResidualH);
    const double b2 = bar_pde_residual(p.xi_r, s2, p.t, cf, kResidualH / 2);
    worst = std::max(worst, std::fabs(r1));
    worst_bar = std::max(worst_bar, std::fabs(b1));
    ss_h += r1 * r1;
    ss_h2 += r2 * r2;
    ssb_h += b1 * b1;
    ssb_h2 += b2 * b2;
    const double c1 = pde_residual(p, cf, kCoarseH);
    const double c2 = pde_residual(p, cf, kCoarseH / 2);
    ss_c += c1 * c1;
    ss_c2 += c2 * c2;
  }
  const double ratio_coarse = std::sqrt(ss_c / ss_c2);
  const double ratio = std::sqrt(ss_h / ss_h2);
  const double ratio_bar = std::sqrt(ssb_h / ssb_h2);
  const bool ok = worst <= kResidualTol && worst_bar <= kResidualTol && ratio >= kDecayRatioLow &&
                  ratio <= kDecayRatioHigh && ratio_bar >= kDecayRatioLow && ratio_bar <= kDecayRatioHigh;
  report(11, "PDE residuals", ok,
         fmt("h=%.0e: max|r|=%.2e max|rbar|=%.2e rms(h)/rms(h/2)=%.2f, %.2f (want %.0f..%.0f); "
             "at h=%.0e the same ratio is %.2f",
             kResidualH, worst, worst_bar, ratio, ratio_bar, kDecayRatioLow, kDecayRatioHigh, kCoarseH, ratio_coarse));
}

}  // namespace

int main(int argc, char** argv) {
  unsigned workers = 8;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::strcmp(argv[i], "--workers") == 0) workers = static_cast<unsigned>(std::atoi(argv[i + 1]));
  }
  std::printf("sbandit %s acceptance\n", kVersion);
  criterion1();
  criterion2();
  convergence_criterion(3, "DP-PDE convergence (regret)", 0.707, false);
  convergence_criterion(4, "DP-PDE convergence (pseudoregret)", 1.274, true);
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10(workers);
  criterion11();
  std::printf("%d of 11 criteria failed\n", failures);
  return std::min(failures, 125);
}
