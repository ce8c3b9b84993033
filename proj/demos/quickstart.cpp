// Exact regret of the myopic player next to its closed-form approximation
// and a short Monte Carlo run.

#include <cmath>
#include <cstdio>

#include "sbandit/sbandit.hpp"

int main() {
  using namespace sbandit;
  const std::int64_t T = 400;
  const auto params = GameParams::from_gamma(T, 0.707);
  const double eps = params.gap();

  const double v = regret_value(T, eps);
  const double vbar = pseudoregret_value(T, eps);
  const auto cf = ClosedForm::c1(eps);
  const double u = u_total(0, 0, 0, -static_cast<double>(T), cf);
  const double rt = std::sqrt(static_cast<double>(T));

  std::printf("T = %lld, eps = %.6f, gamma = %.3f\n", static_cast<long long>(T), eps, params.gamma());
  std::printf("v    = %.6f  (v/sqrt T = %.6f, c(gamma) = %.6f)\n", v, v / rt, prefactor_c(params.gamma()));
  std::printf("u    = %.6f\n", u);
  std::printf("vbar = %.6f  (vbar/sqrt T = %.6f)\n", vbar, vbar / rt);

  const auto mc = mc_estimate(MyopicPolicy{}, T, eps, 20000, 7);
  std::printf("MC   = %.6f +- %.6f\n", mc.regret_mean, mc.regret_se);

  const auto best = maximize_prefactor(Prefactor::C);
  std::printf("max c = %.6f at gamma = %.6f\n", best.value, best.gamma_star);
}
