#pragma once

#include "ipl/geometry.hpp"
#include "ipl/lpp_geom.hpp"

#include <vector>

namespace ipl {

// Exponential environments; Exp(c) has density c e^{-c x}.
struct ExpEnvSpec {
  Geometry geometry = Geometry::Flat;
  int N = 1;
  std::vector<double> alpha, beta;  // restricted uses alpha only
  void validate() const;
  // Rate of the exponential weight at lattice site (i,j).
  double site_rate(int i, int j) const;
  bool iid() const;
};

ExpEnvSpec iid_exp_spec(Geometry g, int N, double gamma);

// The i.i.d. flat and half-flat determinants become badly conditioned as N
// grows; `Automatic` sends them to the multiprecision path for N > 4.
enum class ExpMethod { Automatic, DoubleEngine, HighPrecisionIid };

// P(tau <= u): det(H_u)/det(C) (flat, half-flat) or Pf(Phi_u)/Pf(S) (restricted).
double cdf_exp(const ExpEnvSpec& spec, double u, ExpMethod method = ExpMethod::Automatic);
std::vector<double> cdf_exp_curve(const ExpEnvSpec& spec, const std::vector<double>& us,
                                  ExpMethod method = ExpMethod::Automatic, bool parallel = true);

// Multiprecision i.i.d. evaluation (flat or half-flat, all rates gamma).
// bits = 0 picks a precision growing with N.
double cdf_exp_iid_hp(Geometry g, int N, double gamma, double u, int bits = 0);
int default_hp_bits(int N);

// The same CDF by direct quadrature of the continuous Schur integral over
// {u > x_1 > ... > x_N > 0}; N <= 3.
double cdf_exp_schur_integral(const ExpEnvSpec& spec, double u, int order = 20);

// Flat N = 1 with alpha = beta = gamma.
double flat_n1_closed_form(double gamma, double u);
// Restricted N = 1.
double restricted_n1_closed_form(double alpha, double u);

// Andreief: int_{ordered} det f_i(x_j) det g_i(x_j) = det int f_i g_j, with
// f_i = e^{a_i x}, g_j = e^{b_j x} on (0, nu). Returns |lhs - rhs| / max(1, |rhs|).
double cauchy_binet_check(const std::vector<double>& a, const std::vector<double>& b, double nu);
// de Bruijn: int_{x_1 < ... < x_N} det phi_i(x_j) = Pf(int int sgn(y - x) phi_i(x) phi_j(y)),
// bordered by int phi_i for odd N; phi_i = e^{a_i x} on (0, nu).
double de_bruijn_check(const std::vector<double>& a, double nu);

// |P(delta tau_geom <= u) - P(tau_exp <= u)| for the geometric environment
// with q_i = e^{-delta alpha_i}, p_j = e^{-delta beta_j}, evaluated exactly at
// floor(u / delta).
std::vector<double> exp_limit_check(const ExpEnvSpec& spec, const std::vector<double>& deltas, double u);

}  // namespace ipl
