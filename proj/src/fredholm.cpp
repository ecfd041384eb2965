#include "ipl/fredholm.hpp"

#include "ipl/quadrature.hpp"
#include "ipl/special.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace ipl {

KernelOperator pointwise_kernel(std::function<double(double, double)> k, double a, double length) {
  KernelOperator op;
  op.a = a;
  op.length = length;
  op.matrix = [k](const std::vector<double>& x, bool parallel) {
    const std::size_t n = x.size();
    Matrix<double> m(n, n);
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = k(x[i], x[j]);
    return m;
  };
  return op;
}

double nystrom_det(const KernelOperator& k, int nodes, bool parallel) {
  if (nodes < 1) throw std::invalid_argument("nystrom_det: need at least one node");
  QuadRule q = gl_panels(k.a, k.a + k.length, 1, nodes);
  Matrix<double> km = k.matrix(q.x, parallel);
  const int n = static_cast<int>(q.size());
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = (i == j) - std::sqrt(q.w[i] * q.w[j]) * km(i, j);
  return a.partialPivLu().determinant();
}

FredholmValue fredholm_det(const KernelOperator& k, const NystromConfig& c) {
  FredholmValue v;
  double d1 = nystrom_det(k, c.nodes, c.parallel);
  double d2 = nystrom_det(k, 2 * c.nodes, c.parallel);
  v.value = d2;
  v.error = std::fabs(d2 - d1);
  v.nodes = 2 * c.nodes;
  v.converged = v.error <= c.tol;
  return v;
}

namespace {

// Ai(t) < 1e-18 for t beyond this.
constexpr double kAiryNegligible = 16;

double limit_length(double s) { return std::max(kXmax, kAiryNegligible - 2 - s); }

}  // namespace

KernelOperator goe_kernel(double s) {
  KernelOperator op;
  op.a = s;
  op.length = limit_length(s);
  op.matrix = [](const std::vector<double>& x, bool parallel) {
    const std::size_t n = x.size();
    Matrix<double> m(n, n);
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j) m(i, j) = m(j, i) = 0.5 * airy((x[i] + x[j]) / 2);
    return m;
  };
  return op;
}

KernelOperator airy21_kernel(double s) {
  KernelOperator op;
  op.a = s;
  op.length = limit_length(s);
  op.matrix = [s](const std::vector<double>& x, bool parallel) {
    // Ai(x_i + t) vanishes once x_i + t > kAiryNegligible, and x_i >= s.
    const double tmax = std::max(2.0, kAiryNegligible - s);
    QuadRule t = gl_panels(0, tmax, static_cast<int>(std::ceil(tmax)), 16);
    const std::size_t n = x.size(), m = t.size();
    Eigen::MatrixXd plus(n, m), sum(n, m);
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t q = 0; q < m; ++q) {
        double p = airy(x[i] + t.x[q]);
        plus(i, q) = p * t.w[q];
        sum(i, q) = p + airy(x[i] - t.x[q]);
      }
    Eigen::MatrixXd k = plus * sum.transpose();
    Matrix<double> out(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out(i, j) = k(i, j);
    return out;
  };
  return op;
}

FredholmValue f1_value(double s, const NystromConfig& c) { return fredholm_det(goe_kernel(s), c); }
FredholmValue f21_value(double s, const NystromConfig& c) { return fredholm_det(airy21_kernel(s), c); }

}  // namespace ipl
