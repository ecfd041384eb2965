#include "ipl/special.hpp"

#include "ipl/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace ipl {

constexpr int kMacdonaldPanels = 8, kMacdonaldOrder = 16;

namespace {

// For x < 0 the rays pick up a hump of size exp((2/3)(|x|/2)^{3/2}) and the
// result cancels; route through the saddles +-i sqrt|x| instead: vertical
// segment Re z = d between them, then the e^{+-i pi/3} rays. Upper half only.
double airy_saddle(double x) {
  const double a = std::sqrt(-x), d = std::min(0.5, 0.5 / a);
  auto phi = [&](cdouble z) { return z * z * z / 3.0 - x * z; };
  const int pv = static_cast<int>(std::ceil(a * a * a / 10)) + 4;
  double v = integrate([&](double t) { return (std::exp(phi({d, t})) * cdouble(0, 1)).imag(); }, 0, a, pv, 20);
  const cdouble w = std::polar(1.0, M_PI / 3), z0(d, a);
  double T = 2;
  while (phi(z0 + T * w).real() > phi(z0).real() - 45) T += 0.5;
  const int pr = static_cast<int>(std::ceil(a * T / 2)) + 8;
  double r = integrate([&](double t) { return (std::exp(phi(z0 + t * w)) * w).imag(); }, 0, T, pr, 20);
  return (v + r) / M_PI;
}

}  // namespace

double airy(double x, double eps) {
  if (eps <= 0 && x < -2) return airy_saddle(x);
  if (eps <= 0) eps = std::max(1.0, std::sqrt(std::max(x, 0.0)));
  const cdouble w = std::polar(1.0, M_PI / 3);
  auto f = [&](double t) {
    cdouble z = eps + t * w;
    return (std::exp(z * z * z / 3.0 - x * z) * w).imag();
  };
  auto logf = [&](double t) {
    cdouble z = eps + t * w;
    return (z * z * z / 3.0 - x * z).real();
  };
  // Real part of the exponent decreases like -t^3/3; walk out until it has
  // dropped well below its maximum on the ray.
  double peak = logf(0), T = 1;
  for (double t = 0; t < 40; t += 0.25) peak = std::max(peak, logf(t));
  while (logf(T) > peak - 45 || T < 2) T += 0.5;
  return integrate(f, 0, T, 8, 16) / M_PI;
}

double airy_series(double x) {
  const double c1 = 0.355028053887817239, c2 = 0.258819403792806798;
  double f = 1, g = x, sf = 1, sg = x;
  for (int k = 1; k < 200; ++k) {
    f *= x * x * x / ((3.0 * k - 1) * (3.0 * k));
    g *= x * x * x / ((3.0 * k) * (3.0 * k + 1));
    sf += f;
    sg += g;
    if (std::fabs(f) + std::fabs(g) < 1e-18 * (std::fabs(sf) + std::fabs(sg))) break;
  }
  return c1 * sf - c2 * sg;
}

double airy_asymptotic(double x) {
  double zeta = 2.0 / 3.0 * std::pow(x, 1.5);
  // Leading terms of the asymptotic series.
  double u1 = 5.0 / 72.0, u2 = 385.0 / 10368.0, u3 = 85085.0 / 2239488.0;
  double s = 1 - u1 / zeta + u2 / (zeta * zeta) - u3 / (zeta * zeta * zeta);
  return std::exp(-zeta) / (2 * std::sqrt(M_PI) * std::pow(x, 0.25)) * s;
}

double macdonald_k_scaled(double nu, double z) {
  if (!(z > 0)) throw std::domain_error("macdonald_k: argument must be positive");
  nu = std::fabs(nu);
  auto logf = [&](double s) { return -z * (std::cosh(s) - 1) + nu * std::fabs(s); };
  // Peak at sinh(s) = nu / z.
  double sp = std::asinh(nu / z);
  double peak = logf(sp);
  double step = 0.05 + 0.1 * sp;
  double hi = sp + 0.01, lo = sp;
  while (logf(hi) > peak - 42) hi += step;
  while (lo > 0 && logf(lo) > peak - 42) lo = std::max(0.0, lo - step);
  auto f = [&](double s) { return std::exp(logf(s) - peak) * 0.5 * (1 + std::exp(-2 * nu * s)); };
  std::vector<double> br;
  const int half = kMacdonaldPanels / 2;
  if (sp > lo) {
    for (int k = 0; k <= half; ++k) br.push_back(lo + (sp - lo) * k / half);
    for (int k = 1; k <= half; ++k) br.push_back(sp + (hi - sp) * k / half);
  } else {
    for (int k = 0; k <= 2 * half; ++k) br.push_back(lo + (hi - lo) * k / (2 * half));
  }
  QuadRule q = gl_breaks(br, kMacdonaldOrder);
  double s = 0;
  for (std::size_t k = 0; k < q.size(); ++k) s += q.w[k] * f(q.x[k]);
  return s * std::exp(peak);
}

double macdonald_k(double nu, double z) { return macdonald_k_scaled(nu, z) * std::exp(-z); }

double log_macdonald_k(double nu, double z) { return std::log(macdonald_k_scaled(nu, z)) - z; }

double macdonald_k_series(double nu, double z) {
  // K = pi/2 (I_{-nu} - I_nu)/sin(nu pi)
  auto bessel_i = [&](double v) {
    double h = z / 2, term = std::pow(h, v) / std::tgamma(v + 1), s = term;
    for (int k = 1; k < 300; ++k) {
      term *= h * h / (k * (k + v));
      s += term;
      if (std::fabs(term) < 1e-18 * std::fabs(s)) break;
    }
    return s;
  };
  return M_PI / 2 * (bessel_i(-nu) - bessel_i(nu)) / std::sin(nu * M_PI);
}

cdouble lgamma_complex(cdouble z) {
  static const double g = 7;
  static const double c[9] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                              771.32342877765313,   -176.61502916214059,   12.507343278686905,
                              -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  if (z.real() < 0.5) {
    // Reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
    return std::log(M_PI) - std::log(std::sin(M_PI * z)) - lgamma_complex(1.0 - z);
  }
  z -= 1.0;
  cdouble x = c[0];
  for (int i = 1; i < 9; ++i) x += c[i] / (z + static_cast<double>(i));
  cdouble t = z + g + 0.5;
  return 0.5 * std::log(2 * M_PI) + (z + 0.5) * std::log(t) - t + std::log(x);
}

double sklyanin_density(const std::vector<cdouble>& lambda) {
  const std::size_t n = lambda.size();
  double logd = -static_cast<double>(n) * std::log(2 * M_PI) - std::lgamma(n + 1.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) logd -= lgamma_complex(lambda[i] - lambda[j]).real();
  return std::exp(logd);
}

}  // namespace ipl
