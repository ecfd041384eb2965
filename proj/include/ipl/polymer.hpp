#pragma once

#include "ipl/lpp_exp.hpp"
#include "ipl/simulate.hpp"

#include <cstdint>
#include <vector>

namespace ipl {

// E[exp(-r Z)] at N = 1 from the Whittaker-function integral over x > 0,
// evaluated in log x by Gauss-Legendre panels. Rejects N != 1.
double laplace_whittaker(const LogGammaSpec& s, double r);

struct ContourOptions {
  // Real parts of the vertical lines; <= 0 picks alpha + 1/2 and beta + 1/2.
  double delta = 0, eps = 0;
  double rel_tol = 1e-14;
  int nodes_per_unit = 16;
};

struct ContourResult {
  double value = 0;
  double height = 0;      // truncation |Im| <= height
  double tail_bound = 0;  // Stirling bound on the discarded part
};

// E[exp(-r Z)] at N = 1 from the Mellin-Barnes form: a 1-d line integral for
// half-flat and restricted (beta replaced by gamma), 2-d for flat.
ContourResult laplace_contour(const LogGammaSpec& s, double r, const ContourOptions& o = {});
// The integrand at imaginary parts (t, t2); t2 is ignored in the 1-d cases.
cdouble contour_integrand(const LogGammaSpec& s, double r, double t, double t2, const ContourOptions& o = {});

Estimate laplace_mc(const LogGammaSpec& s, double r, long samples, std::uint64_t seed, bool parallel = true);

// Log-gamma spec at temperature eps whose weights scale to the exponential
// rates of `e`: shapes eps times the rates, gamma = 0.
LogGammaSpec zero_temp_spec(const ExpEnvSpec& e, double eps);
// |E[exp(-e^{-u/eps} Z_eps)] - P(tau <= u)| for each eps, at N = 1.
std::vector<double> zero_temp_check(const ExpEnvSpec& e, const std::vector<double>& eps, double u);

}  // namespace ipl
