#include "ipl/whittaker.hpp"

#include "ipl/quadrature.hpp"
#include "ipl/special.hpp"

#include <cmath>
#include <limits>

namespace ipl {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log int_0^inf v^nu exp(-a/v - b v) dv/v = log(2 (a/b)^{nu/2} K_nu(2 sqrt(ab)))
double log_gamma_pair(double nu, double a, double b) {
  return std::log(2.0) + 0.5 * nu * std::log(a / b) + log_macdonald_k(nu, 2 * std::sqrt(a * b));
}

double log_gl2(double a1, double a2, double x1, double x2) {
  return a2 * std::log(x1 * x2) + log_gamma_pair(a1 - a2, x2, 1 / x1);
}

double log_so3(double a, double x) { return -a * std::log(x) + log_gamma_pair(2 * a, 1.0, 1 / x); }

// log of the integral of exp(g(t)) over the real line.
template <class G>
double log_line(G&& g, double start, const WhittakerQuad& q, bool parallel = false) {
  CutoffConfig cfg;
  cfg.start = start;
  cfg.drop = q.drop;
  cfg.step = 0.25;
  cfg.max_steps = 4000;
  auto [lo, hi] = decay_window(g, cfg);
  QuadRule r = gl_panels(lo, hi, q.panels, q.order);
  const long m = static_cast<long>(r.size());
  std::vector<double> vals(m);
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (long k = 0; k < m; ++k) vals[k] = g(r.x[k]);
  double peak = kNegInf;
  for (double v : vals) peak = std::max(peak, v);
  double s = 0;
  for (long k = 0; k < m; ++k) s += r.w[k] * std::exp(vals[k] - peak);
  return peak + std::log(s);
}

void check_args(const std::vector<double>& a, const std::vector<double>& x, std::size_t max_rank, const char* who) {
  if (a.size() != x.size()) throw std::invalid_argument(std::string(who) + ": alpha and x sizes differ");
  if (a.empty() || a.size() > max_rank)
    throw std::invalid_argument(std::string(who) + ": rank must be in 1.." + std::to_string(max_rank));
  for (double v : x)
    if (!(v > 0)) throw std::domain_error(std::string(who) + ": arguments must be positive");
}

double log_gl(const std::vector<double>& a, const std::vector<double>& x, const WhittakerQuad& q) {
  check_args(a, x, 3, "gl_whittaker");
  const std::size_t n = a.size();
  if (n == 1) return a[0] * std::log(x[0]);
  if (n == 2) {
    // one kernel step from gl_1: z^{a1} (x1 x2 / z)^{a2} exp(-x2/z - z/x1)
    auto g = [&](double t) {
      double z = std::exp(t);
      return a[0] * t + a[1] * (std::log(x[0] * x[1]) - t) - x[1] / z - z / x[0];
    };
    return log_line(g, 0.5 * std::log(x[0] * x[1]), q);
  }
  // (x1x2x3 / u1u2)^{a3} exp(-x2/u1 - u1/x1 - x3/u2 - u2/x2) Psi_{a1,a2}(u), the
  // inner gl_2 through its closed form.
  const double lx = std::log(x[0] * x[1] * x[2]);
  auto inner = [&](double t1) {
    double u1 = std::exp(t1);
    auto g = [&](double t2) {
      double u2 = std::exp(t2);
      return a[2] * (lx - t1 - t2) - x[1] / u1 - u1 / x[0] - x[2] / u2 - u2 / x[1] + log_gl2(a[0], a[1], u1, u2);
    };
    return log_line(g, 0.5 * (std::log(x[1]) + std::log(x[2])), q);
  };
  return log_line(inner, 0.5 * (std::log(x[0]) + std::log(x[1])), q, q.parallel);
}

double log_so(const std::vector<double>& a, const std::vector<double>& x, const WhittakerQuad& q) {
  check_args(a, x, 2, "so_whittaker");
  if (a.size() == 1) {
    auto g = [&](double t) {
      double z = std::exp(t);
      return a[0] * (2 * t - std::log(x[0])) - 1 / z - z / x[0];
    };
    return log_line(g, 0.5 * std::log(x[0]), q);
  }
  // The rank-2 kernel factorises in v1 and v2:
  //   v1^{2a} exp(-(u + x2)/v1 - v1/x1),  v2^{2a} exp(-1/v2 - v2 (1/u + 1/x2)),
  // each a Macdonald integral; the remaining u-integral meets Psi^{so_3}(u).
  const double lx = std::log(x[0] * x[1]);
  auto g = [&](double t) {
    double u = std::exp(t);
    return -a[1] * (lx + t) + log_gamma_pair(2 * a[1], u + x[1], 1 / x[0]) +
           log_gamma_pair(2 * a[1], 1.0, 1 / u + 1 / x[1]) + log_so3(a[0], u);
  };
  return log_line(g, 0.5 * (std::log(x[0]) + std::log(x[1])), q, q.parallel);
}

WhittakerQuad doubled(const WhittakerQuad& q) {
  WhittakerQuad d = q;
  d.panels *= 2;
  return d;
}

}  // namespace

Algebra parse_algebra(const std::string& s) {
  if (s == "gl") return Algebra::Gl;
  if (s == "so" || s == "so_odd") return Algebra::So;
  throw std::invalid_argument("unknown algebra '" + s + "' (expected gl or so)");
}

double gl_whittaker(const std::vector<double>& alpha, const std::vector<double>& x, const WhittakerQuad& q) {
  return std::exp(log_gl(alpha, x, q));
}

double so_whittaker(const std::vector<double>& alpha, const std::vector<double>& x, const WhittakerQuad& q) {
  return std::exp(log_so(alpha, x, q));
}

double gl2_whittaker_closed(double a1, double a2, double x1, double x2) {
  if (!(x1 > 0 && x2 > 0)) throw std::domain_error("whittaker: arguments must be positive");
  return std::exp(log_gl2(a1, a2, x1, x2));
}

double so3_whittaker_closed(double alpha, double x) {
  if (!(x > 0)) throw std::domain_error("whittaker: arguments must be positive");
  return std::exp(log_so3(alpha, x));
}

WhittakerValue whittaker_eval(Algebra alg, const std::vector<double>& alpha, const std::vector<double>& x,
                              const WhittakerQuad& q) {
  if (q.order < 16 || q.panels < 1 || !(q.tol > 0)) throw std::invalid_argument("whittaker: need order >= 16, tol > 0");
  auto f = [&](const WhittakerQuad& c) { return alg == Algebra::Gl ? log_gl(alpha, x, c) : log_so(alpha, x, c); };
  double l1 = f(q), l2 = f(doubled(q));
  WhittakerValue v{std::exp(l2), std::fabs(std::expm1(l1 - l2))};
  if (!(v.error <= q.tol))
    throw QuadratureError("whittaker: quadrature did not converge (achieved relative error " +
                              std::to_string(v.error) + ")",
                          v.error);
  return v;
}

IdentityCheck bump_stade_check(const std::vector<double>& a, const std::vector<double>& b, double r) {
  const std::size_t n = a.size();
  if (b.size() != n || n == 0 || n > 2) throw std::invalid_argument("bump_stade_check: n must be 1 or 2");
  if (!(r > 0)) throw std::domain_error("bump_stade_check: r must be positive");
  double s = 0, logrhs = 0;
  for (std::size_t i = 0; i < n; ++i) {
    s += a[i] + b[i];
    for (std::size_t j = 0; j < n; ++j) {
      if (!(a[i] + b[j] > 0)) throw std::domain_error("bump_stade_check: need a_i + b_j > 0");
      logrhs += std::lgamma(a[i] + b[j]);
    }
  }
  logrhs -= s * std::log(r);
  WhittakerQuad q;
  q.panels = 24;
  q.order = 24;
  double loglhs;
  if (n == 1) {
    auto g = [&](double t) { return s * t - r * std::exp(t); };
    loglhs = log_line(g, -std::log(r), q);
  } else {
    auto outer = [&](double t1) {
      double x1 = std::exp(t1);
      auto g = [&](double t2) {
        double x2 = std::exp(t2);
        return -r * x1 + log_gl2(a[0], a[1], x1, x2) + log_gl2(b[0], b[1], x1, x2);
      };
      return log_line(g, t1 - 1, q);
    };
    loglhs = log_line(outer, -std::log(r), q, true);
  }
  IdentityCheck c;
  c.lhs = std::exp(loglhs);
  c.rhs = std::exp(logrhs);
  c.residual = std::fabs(std::expm1(loglhs - logrhs));
  return c;
}

IdentityCheck ishii_stade_check(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != 1 || b.size() != 1) throw std::invalid_argument("ishii_stade_check: n = 1 only");
  const double al = a[0], be = b[0];
  if (!(be > std::fabs(al))) throw std::domain_error("ishii_stade_check: need b > |a|");
  WhittakerQuad q;
  q.panels = 32;
  q.order = 24;
  // 2-d integral in (log x, log z) of (z^2/x)^a exp(-1/z - z/x) x^{-b}.
  auto outer = [&](double t) {
    double x = std::exp(t);
    auto g = [&](double s) {
      double z = std::exp(s);
      return al * (2 * s - t) - 1 / z - z / x - be * t;
    };
    return log_line(g, 0.5 * t, q);
  };
  double loglhs = log_line(outer, 0, q, true);
  double logrhs = std::lgamma(be + al) + std::lgamma(be - al);
  IdentityCheck c;
  c.lhs = std::exp(loglhs);
  c.rhs = std::exp(logrhs);
  c.residual = std::fabs(std::expm1(loglhs - logrhs));
  return c;
}

}  // namespace ipl
