#pragma once

#include "ipl/fredholm.hpp"
#include "ipl/lpp_exp.hpp"

#include <vector>

namespace ipl {

enum class KernelMethod { ResidueSum, ContourQuadrature };

struct PrelimitConfig {
  int contour_nodes = 256;  // trapezoid nodes per circle
  // For i.i.d. parameters, split the kernel into the pieces of the scaling
  // argument (Airy-type pieces on triangles through the critical point, the
  // rest on circles). Otherwise the whole kernel is integrated on circles.
  bool decompose_iid = true;
  double eps = 1;  // shift of the triangles, in units of gamma / (2N)^{1/3}
};

// Finite-N kernel K_{N,u} on L^2(0, inf) with det(I - K) = P(tau <= u), for
// flat and half-flat exponential environments. ResidueSum needs pairwise
// distinct alphas and pairwise distinct betas.
KernelOperator prelimit_kernel(const ExpEnvSpec& s, double u, KernelMethod m, const PrelimitConfig& c = {});
FredholmValue prelimit_cdf(const ExpEnvSpec& s, double u, KernelMethod m, const NystromConfig& n = {},
                           const PrelimitConfig& c = {});

// Rank-N kernel sum_{i,k} exp(-alpha_k x - beta_i y) Hbar(alpha_k, beta_i) P_k Q_i in factored form:
// K(x, y) = sum_k f_k(x) g_k(y).
struct FiniteRankKernel {
  std::vector<double> rate_x, rate_y;  // f_k(x) = sum_l A(k,l) e^{-rate_x[l] x}, g_k(y) = e^{-rate_y[k] y}
  Matrix<double> A;
};
FiniteRankKernel residue_kernel(const ExpEnvSpec& s, double u);
// det(I - K) computed on the N-dimensional side, det(I - G F) with (G F)_{kl} = int g_k f_l.
double residue_det(const FiniteRankKernel& k);

// J(n, gamma, c) = -(1 / 2 pi i) oint_{around gamma} e^{-c z} ((gamma + z)/(gamma - z))^n dz, on the negatively
// oriented triangle through eps gamma / (2n)^{1/3} (at most gamma / 2) with sides at angle +-pi/3.
// Well conditioned for c near 2n / gamma; far from it, large n cancels.
double j_triangle(int n, double gamma, double c, double eps = 1);
// J~_N(x) = (2N)^{1/3}/gamma J_N((2N)^{1/3} x / gamma), with J_N(x) = J(N, gamma, 2N/gamma + x).
double j_tilde(int N, double gamma, double x, double eps = 1);
// |J~_N(x) - Ai(x)| for each N.
std::vector<double> steepest_descent_demo(const std::vector<int>& Ns, double gamma, double x, double eps = 1);

struct UniformBound {
  double c1 = 0, c2 = 0;
  double worst_ratio = 0;  // max over N and grid of |J~_N(x)| / (c1 e^{-c2 x})
  bool holds = false;
};
// Fixes c2 = eps and c1 from (1/2pi) int_{C + eps} exp(Re(z^3)/3) |dz| (the
// bound on the limit), scaled by `slack`, then checks every N on the grid.
UniformBound uniform_bound_witness(const std::vector<int>& Ns, double gamma, const std::vector<double>& xs,
                                   double eps = 1, double slack = 2);

// sup over r of |P(tau_{2N} <= 2N/gamma + r N^{1/3}) - limit(r)| for i.i.d. rate 2 gamma;
// limit = F1(2^{1/3} gamma r) (flat) or F21(2^{-1/3} gamma r) (half-flat).
std::vector<double> scaling_limit_check(Geometry g, const std::vector<int>& Ns, double gamma,
                                        const std::vector<double>& rs);
// The limit law argument for a given geometry.
double scaling_limit_value(Geometry g, double gamma, double r);

}  // namespace ipl
