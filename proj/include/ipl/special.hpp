#pragma once

#include "ipl/linalg.hpp"

#include <vector>

namespace ipl {

// Ai(x) from the rotated-ray contour through `eps`; eps <= 0 picks max(1, sqrt(x)).
double airy(double x, double eps = 0);
// Power series about 0 (oracle, |x| small) and leading asymptotic (x large).
double airy_series(double x);
double airy_asymptotic(double x);

// K_nu(z) = int_0^inf exp(-z cosh s) cosh(nu s) ds, and e^z K_nu(z).
double macdonald_k(double nu, double z);
double macdonald_k_scaled(double nu, double z);
double log_macdonald_k(double nu, double z);
// Small-argument series for non-integer nu (oracle).
double macdonald_k_series(double nu, double z);

cdouble lgamma_complex(cdouble z);
inline cdouble gamma_complex(cdouble z) { return std::exp(lgamma_complex(z)); }

// (2 pi)^{-n} (n!)^{-1} prod_{i != j} |Gamma(l_i - l_j)|^{-1}.
double sklyanin_density(const std::vector<cdouble>& lambda);

}  // namespace ipl
