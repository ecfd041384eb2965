#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ipl {

// Integrals over (0, inf) are taken in t = log x, truncated where the integrand
// has dropped by `drop` (natural-log units) below its peak, and integrated with
// `panels` Gauss-Legendre panels of `order` nodes each.
struct WhittakerQuad {
  int panels = 16;
  int order = 16;
  double drop = 40;
  double tol = 1e-8;  // accepted relative change under node doubling
  bool parallel = true;
};

enum class Algebra { Gl, So };
Algebra parse_algebra(const std::string& s);

// gl_n Whittaker function for real alpha and x in R^n_{>0}, n <= 3.
double gl_whittaker(const std::vector<double>& alpha, const std::vector<double>& x, const WhittakerQuad& q = {});
// so_{2n+1} Whittaker function, n <= 2.
double so_whittaker(const std::vector<double>& alpha, const std::vector<double>& x, const WhittakerQuad& q = {});

// Closed forms through the Macdonald function.
double gl2_whittaker_closed(double a1, double a2, double x1, double x2);
double so3_whittaker_closed(double alpha, double x);

struct QuadratureError : std::runtime_error {
  double achieved;
  QuadratureError(const std::string& what, double err) : std::runtime_error(what), achieved(err) {}
};

struct WhittakerValue {
  double value = 0;
  double error = 0;  // relative change when node counts are doubled
};
// Evaluates at q and at doubled node counts; throws QuadratureError if the
// change exceeds q.tol.
WhittakerValue whittaker_eval(Algebra alg, const std::vector<double>& alpha, const std::vector<double>& x,
                              const WhittakerQuad& q = {});

struct IdentityCheck {
  double lhs = 0, rhs = 0, residual = 0;  // |lhs - rhs| / |rhs|
};

// int e^{-r x_1} Psi_a Psi_b prod dx/x against r^{-sum(a+b)} prod Gamma(a_i + b_j); n <= 2.
IdentityCheck bump_stade_check(const std::vector<double>& a, const std::vector<double>& b, double r);
// int Psi^{so_3}_a(x) x^{-b} dx/x against Gamma(b + a) Gamma(b - a); n = 1.
IdentityCheck ishii_stade_check(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace ipl
