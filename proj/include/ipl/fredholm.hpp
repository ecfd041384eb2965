#pragma once

#include "ipl/linalg.hpp"

#include <functional>
#include <vector>

namespace ipl {

// An integral operator on L^2([a, a + length]) given by its matrix on a node
// set. Kernels must be negligible beyond a + length; each factory below picks
// the length from the kernel's decay.
struct KernelOperator {
  double a = 0, length = 12;
  std::function<Matrix<double>(const std::vector<double>& x, bool parallel)> matrix;
};

KernelOperator pointwise_kernel(std::function<double(double, double)> k, double a, double length);

struct NystromConfig {
  int nodes = 32;  // the estimate doubles this
  double tol = 1e-8;
  bool parallel = true;
};

struct FredholmValue {
  double value = 1;
  double error = 0;  // |det_{2n} - det_n|
  int nodes = 0;
  bool converged = true;
};

// det(I - K) by Gauss-Legendre Nystrom with symmetric sqrt-weight scaling.
double nystrom_det(const KernelOperator& k, int nodes, bool parallel = true);
// The same at n and 2n nodes; the value is the 2n result.
FredholmValue fredholm_det(const KernelOperator& k, const NystromConfig& c = {});

// Minimum truncation length of the limiting kernels, in their own variable.
inline constexpr double kXmax = 12;

// 1/2 Ai((x + y)/2) on [s, inf).
KernelOperator goe_kernel(double s);
// int_0^inf Ai(x + t) Ai(y + t) dt + int_0^inf Ai(x + t) Ai(y - t) dt on [s, inf).
KernelOperator airy21_kernel(double s);

FredholmValue f1_value(double s, const NystromConfig& c = {});
FredholmValue f21_value(double s, const NystromConfig& c = {});
inline double f1(double s) { return f1_value(s).value; }
inline double f21(double s) { return f21_value(s).value; }

}  // namespace ipl
