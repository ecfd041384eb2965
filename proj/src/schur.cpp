#include "ipl/schur.hpp"

#include "ipl/quadrature.hpp"

#include <cmath>
#include <limits>

namespace ipl {

namespace {

bool strictly_decreasing(const std::vector<double>& x) {
  for (std::size_t i = 1; i < x.size(); ++i)
    if (!(x[i - 1] > x[i])) return false;
  return true;
}

// Taylor coefficients in y of sinh(sqrt(y) x)/sqrt(y) at y0 >= 0.
std::vector<double> sinhc_taylor(double x, double y0, int orders) {
  std::vector<double> c(orders, 0.0);
  const double x2y = x * x * y0;
  for (int k = 0; k < orders; ++k) {
    // t_k = x^{2k+1}/(2k+1)!
    double t = std::pow(x, 2 * k + 1) / std::tgamma(2.0 * k + 2.0);
    double s = t;
    for (int m = k; m < k + 2000; ++m) {
      t *= static_cast<double>(m + 1) / (m + 1 - k) * x2y / ((2.0 * m + 2) * (2.0 * m + 3));
      s += t;
      if (m > k + 4 && std::fabs(t) < 1e-18 * std::fabs(s)) break;
    }
    c[k] = s;
  }
  return c;
}

}  // namespace

double schur_cont(const std::vector<double>& alpha, const std::vector<double>& x) {
  if (alpha.size() != x.size()) throw std::invalid_argument("schur_cont: size mismatch");
  if (!strictly_decreasing(x)) return 0.0;
  TaylorColumn<double> f = [&](std::size_t j, const double& t, int orders) {
    std::vector<double> c(orders);
    double e = std::exp(x[j] * t), p = 1;
    for (int k = 0; k < orders; ++k) {
      c[k] = p * e;
      p *= x[j] / (k + 1);
    }
    return c;
  };
  return confluent_det_ratio(alpha, f, kConfluentRelTol);
}

double sp_cont(const std::vector<double>& alpha, const std::vector<double>& x) {
  if (alpha.size() != x.size()) throw std::invalid_argument("sp_cont: size mismatch");
  if (!strictly_decreasing(x) || x.empty() || !(x.back() > 0)) return 0.0;
  std::vector<double> y(alpha.size());
  for (std::size_t i = 0; i < alpha.size(); ++i) y[i] = alpha[i] * alpha[i];
  TaylorColumn<double> f = [&](std::size_t j, const double& y0, int orders) {
    return sinhc_taylor(x[j], std::max(y0, 0.0), orders);
  };
  return confluent_det_ratio(y, f, kConfluentRelTol);
}

CauchyKind parse_cauchy_kind(const std::string& s) {
  if (s == "discrete-std") return CauchyKind::DiscreteStd;
  if (s == "cont-std") return CauchyKind::ContStd;
  if (s == "discrete-sp") return CauchyKind::DiscreteSp;
  if (s == "cont-sp") return CauchyKind::ContSp;
  throw std::invalid_argument("unknown Cauchy kind: " + s);
}

namespace {

double rhs_std(const std::vector<double>& p, const std::vector<double>& q, double t) {
  double v = 1;
  for (double pi : p)
    for (double qj : q) v /= 1 - pi * t * qj;
  return v;
}

double rhs_sp(const std::vector<double>& p, const std::vector<double>& q, double t) {
  double v = 1;
  const std::size_t n = q.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) v *= 1 - t * t * q[i] * q[j];
  for (double qi : q)
    for (double pj : p) v /= (1 - t * qi * pj) * (1 - t * qi / pj);
  return v;
}

// Relative bound inf_t t^{-(L+1)} RHS(t q) / RHS(q) over admissible t > 1.
double tail_bound(const std::function<double(double)>& rhs, double tmax, int Lambda) {
  double base = rhs(1.0), best = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 4000; ++k) {
    double t = std::exp(std::log(tmax) * k / 4000.0);
    double r = rhs(t);
    if (!(r > 0) || !std::isfinite(r)) continue;
    double b = std::exp(std::log(r) - (Lambda + 1) * std::log(t)) / base;
    best = std::min(best, b);
  }
  return best;
}

// 2-d integral over {x1 > x2 > 0} truncated at X.
double ordered_integral(const std::function<double(const std::vector<double>&)>& f, std::size_t n, double X) {
  if (n == 1) return integrate([&](double x) { return f({x}); }, 0, X, 16, 24);
  if (n == 2) {
    return integrate(
        [&](double x2) { return integrate([&](double x1) { return f({x1, x2}); }, x2, X, 12, 24); }, 0, X, 12, 24);
  }
  throw std::invalid_argument("cauchy_check: continuous identities evaluated for n <= 2");
}

}  // namespace

CauchyResult cauchy_check(CauchyKind kind, const std::vector<double>& first, const std::vector<double>& second,
                          int Lambda) {
  const std::size_t n = first.size();
  if (second.size() != n || n == 0) throw std::invalid_argument("cauchy_check: parameter vectors must match");
  CauchyResult r;
  switch (kind) {
    case CauchyKind::DiscreteStd:
    case CauchyKind::DiscreteSp: {
      const auto& p = first;
      const auto& q = second;
      const bool sp = kind == CauchyKind::DiscreteSp;
      double tmax = std::numeric_limits<double>::infinity();
      bool positive = true;
      for (double pi : p)
        for (double qj : q) {
          double m = sp ? std::max(std::fabs(qj * pi), std::fabs(qj / pi)) : std::fabs(pi * qj);
          if (!(m < 1)) throw std::domain_error("cauchy_check: parameters outside the convergence domain");
          tmax = std::min(tmax, 1 / m);
          if (!(pi > 0 && qj > 0)) positive = false;
        }
      if (sp)
        for (double pi : p)
          if (pi == 0) throw std::domain_error("cauchy_check: symplectic variables must be nonzero");
      double s = 0;
      for_each_partition(static_cast<int>(n), Lambda, [&](const std::vector<int>& l) {
        Partition lam(l);
        double a = sp ? sp_det(lam, p) : schur_det(lam, p);
        s += a * schur_det(lam, q);
        ++r.terms;
      });
      r.lhs = s;
      auto rhs = [&](double t) { return sp ? rhs_sp(p, q, t) : rhs_std(p, q, t); };
      r.rhs = rhs(1.0);
      r.tail_bound = positive ? tail_bound(rhs, tmax, Lambda) : std::numeric_limits<double>::infinity();
      break;
    }
    case CauchyKind::ContStd: {
      const auto& a = first;
      const auto& b = second;
      double cmin = std::numeric_limits<double>::infinity();
      r.rhs = 1;
      for (double ai : a)
        for (double bj : b) {
          if (!(ai + bj > 0)) throw std::domain_error("cauchy_check: need alpha_i + beta_j > 0");
          r.rhs /= ai + bj;
          cmin = std::min(cmin, ai + bj);
        }
      std::vector<double> ma(n), mb(n);
      for (std::size_t i = 0; i < n; ++i) {
        ma[i] = -a[i];
        mb[i] = -b[i];
      }
      r.lhs = ordered_integral([&](const std::vector<double>& x) { return schur_cont(ma, x) * schur_cont(mb, x); },
                               n, 45.0 / cmin);
      break;
    }
    case CauchyKind::ContSp: {
      const auto& a = first;
      const auto& b = second;
      double cmin = std::numeric_limits<double>::infinity();
      double num = 1, den = 1;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) num *= b[i] + b[j];
      for (double bi : b)
        for (double aj : a) {
          if (!(bi + aj > 0 && bi - aj > 0)) throw std::domain_error("cauchy_check: need beta_i +- alpha_j > 0");
          den *= (bi + aj) * (bi - aj);
          cmin = std::min(cmin, bi - std::fabs(aj));
        }
      r.rhs = num / den;
      std::vector<double> mb(n);
      for (std::size_t i = 0; i < n; ++i) mb[i] = -b[i];
      r.lhs = ordered_integral([&](const std::vector<double>& x) { return sp_cont(a, x) * schur_cont(mb, x); }, n,
                               45.0 / cmin);
      break;
    }
  }
  r.residual = std::fabs(r.lhs - r.rhs) / std::fabs(r.rhs);
  r.excess = std::max(0.0, r.residual - r.tail_bound);
  return r;
}

}  // namespace ipl
