#include "ipl/polymer.hpp"

#include "ipl/quadrature.hpp"
#include "ipl/special.hpp"

#include <cmath>
#include <stdexcept>

namespace ipl {

namespace {

void require_n1(const LogGammaSpec& s, const char* who) {
  s.validate();
  if (s.N != 1) throw std::invalid_argument(std::string(who) + ": only N = 1 is available; use Monte Carlo");
}

// Second parameter of the one-Psi form: beta (half-flat) or gamma (restricted).
double second_param(const LogGammaSpec& s) { return s.geometry == Geometry::Restricted ? s.gamma : s.beta[0]; }

// log Psi_a(e^t) with Psi_a(x) = 2 K_{2a}(2 / sqrt x).
double log_psi(double a, double t) { return std::log(2.0) + log_macdonald_k(2 * a, 2 * std::exp(-t / 2)); }

struct Placement {
  double delta, eps;
};

Placement placement(const LogGammaSpec& s, const ContourOptions& o) {
  const double a = s.alpha[0];
  Placement p{o.delta > 0 ? o.delta : a + 0.5, 0};
  if (!(p.delta > a)) throw std::invalid_argument("laplace_contour: need delta > alpha");
  if (s.geometry == Geometry::Flat) {
    const double b = s.beta[0];
    p.eps = o.eps > 0 ? o.eps : b + 0.5;
    if (!(p.eps > b)) throw std::invalid_argument("laplace_contour: need eps > beta");
  }
  return p;
}

// |f(t)| ~ t^p e^{-k t}: bound on int_T^inf |f| from |f(T)|.
double stirling_tail(double fT, double p, double k, double T) {
  double rate = k - std::max(p, 0.0) / T;
  return rate > 0 ? fT / rate : INFINITY;
}

// Panel width so that r^{-it} is resolved.
double panel_width(double r) { return 1.0 / std::max(1.0, std::ceil(std::fabs(std::log(r)) / 4)); }

}  // namespace

double laplace_whittaker(const LogGammaSpec& s, double r) {
  require_n1(s, "laplace_whittaker");
  if (!(r > 0)) throw std::invalid_argument("laplace_whittaker: need r > 0");
  const double a = s.alpha[0];
  std::function<double(double)> logf;
  double power;
  if (s.geometry == Geometry::Flat) {
    const double b = s.beta[0], g = s.gamma;
    power = a + b + g;
    const double pre = power * std::log(r) - std::lgamma(power) - std::lgamma(2 * a) - std::lgamma(2 * b);
    logf = [=](double t) { return pre - r * std::exp(t) + log_psi(a, t) + log_psi(b, t) + g * t; };
  } else {
    const double b = second_param(s);
    power = a + b;
    const double pre = power * std::log(r) - std::lgamma(power) - std::lgamma(2 * a);
    logf = [=](double t) { return pre - r * std::exp(t) + log_psi(a, t) + b * t; };
  }
  CutoffConfig cfg;
  cfg.drop = 40;
  cfg.start = std::log(power / r);
  cfg.max_steps = 4000;
  auto [lo, hi] = decay_window(logf, cfg);
  int panels = std::max(16, static_cast<int>(std::ceil(2 * (hi - lo))));
  return integrate([&](double t) { return std::exp(logf(t)); }, lo, hi, panels, 20);
}

cdouble contour_integrand(const LogGammaSpec& s, double r, double t, double t2, const ContourOptions& o) {
  require_n1(s, "laplace_contour");
  if (!(r > 0)) throw std::invalid_argument("laplace_contour: need r > 0");
  const Placement p = placement(s, o);
  const double a = s.alpha[0], lr = std::log(r);
  const cdouble lam(p.delta, t);
  if (s.geometry == Geometry::Flat) {
    const double b = s.beta[0], g = s.gamma;
    const cdouble rho(p.eps, t2);
    const double lG = std::lgamma(a + b + g) + std::lgamma(2 * a) + std::lgamma(2 * b);
    cdouble l = -(lam + rho - a - b) * lr + lgamma_complex(lam + rho + g) + lgamma_complex(lam + a) +
                lgamma_complex(lam - a) + lgamma_complex(rho + b) + lgamma_complex(rho - b) - lG;
    return std::exp(l) / (4 * M_PI * M_PI);
  }
  const double b = second_param(s);
  const double lG = std::lgamma(a + b) + std::lgamma(2 * a);
  cdouble l = -(lam - a) * lr + lgamma_complex(lam + a) + lgamma_complex(lam - a) + lgamma_complex(lam + b) - lG;
  return std::exp(l) / (2 * M_PI);
}

ContourResult laplace_contour(const LogGammaSpec& s, double r, const ContourOptions& o) {
  require_n1(s, "laplace_contour");
  if (!(r > 0)) throw std::invalid_argument("laplace_contour: need r > 0");
  const Placement pl = placement(s, o);
  const double a = s.alpha[0], h = panel_width(r);
  const auto& rule = gauss_legendre(o.nodes_per_unit);
  ContourResult res;

  if (s.geometry != Geometry::Flat) {
    // Conjugate symmetry in t: value = 2 Re int_0^inf.
    const double b = second_param(s);
    const double p = (pl.delta + a - 0.5) + (pl.delta - a - 0.5) + (pl.delta + b - 0.5);
    double acc = 0;
    for (double T = 0; T < 400; T += h) {
      for (std::size_t k = 0; k < rule.x.size(); ++k) {
        double t = T + h * (rule.x[k] + 1) / 2;
        acc += h / 2 * rule.w[k] * 2 * contour_integrand(s, r, t, 0, o).real();
      }
      const double top = T + h;
      const double tail = 2 * stirling_tail(std::abs(contour_integrand(s, r, top, 0, o)), p, 1.5 * M_PI, top);
      if (top >= 4 && tail <= o.rel_tol * std::fabs(acc)) {
        res = {acc, top, tail};
        return res;
      }
    }
    throw std::runtime_error("laplace_contour: truncation did not converge");
  }

  // |Gamma(lam + rho + g)| <= Gamma(delta + eps + g) splits the bound into
  // one-dimensional factors A(t) = |Gamma(lam + a) Gamma(lam - a)| and B(s).
  const double b = s.beta[0], g = s.gamma, lr = std::log(r);
  const double lG = std::lgamma(a + b + g) + std::lgamma(2 * a) + std::lgamma(2 * b);
  const double scale =
      std::exp(-(pl.delta + pl.eps - a - b) * lr + std::lgamma(pl.delta + pl.eps + g) - lG) / (4 * M_PI * M_PI);
  auto factor = [](double c, double x, double t) {
    return std::exp((lgamma_complex({c + x, t}) + lgamma_complex({c - x, t})).real());
  };
  auto full = [&](double c, double x) {
    double acc = 0;
    for (double T = 0; T < 400; T += 0.5) {
      acc += 2 * integrate([&](double t) { return factor(c, x, t); }, T, T + 0.5, 1, 16);
      if (factor(c, x, T + 0.5) < 1e-18 * acc) break;
    }
    return acc;
  };
  const double Afull = full(pl.delta, a), Bfull = full(pl.eps, b);
  auto bound = [&](double T) {
    double At = 2 * stirling_tail(factor(pl.delta, a, T), 2 * pl.delta - 1, M_PI, T);
    double Bt = 2 * stirling_tail(factor(pl.eps, b, T), 2 * pl.eps - 1, M_PI, T);
    return scale * (At * Bfull + Afull * Bt);
  };
  auto box = [&](double T) {
    const int n = static_cast<int>(std::lround(T / h));
    std::vector<double> nodes, weights;
    for (int k = -n; k < n; ++k)
      for (std::size_t q = 0; q < rule.x.size(); ++q) {
        nodes.push_back(h * (k + (rule.x[q] + 1) / 2));
        weights.push_back(h / 2 * rule.w[q]);
      }
    // Row sums first so the total does not depend on the thread count.
    const std::size_t half = nodes.size() / 2;
    std::vector<double> row(nodes.size() - half, 0.0);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t j = half; j < nodes.size(); ++j)
      for (std::size_t i = 0; i < nodes.size(); ++i)
        row[j - half] += weights[i] * weights[j] * 2 * contour_integrand(s, r, nodes[i], nodes[j], o).real();
    double acc = 0;
    for (double v : row) acc += v;
    return acc;
  };
  double est = box(6);
  double T = 6;
  while (bound(T) > 0.5 * o.rel_tol * std::fabs(est) && T < 200) T += 1;
  for (; T < 200; T += 4) {
    double v = box(T), tb = bound(T);
    if (tb <= o.rel_tol * std::fabs(v)) return {v, T, tb};
  }
  throw std::runtime_error("laplace_contour: truncation did not converge");
}

Estimate laplace_mc(const LogGammaSpec& s, double r, long samples, std::uint64_t seed, bool parallel) {
  s.validate();
  if (!(r > 0)) throw std::invalid_argument("laplace_mc: need r > 0");
  SimConfig c;
  c.seed = seed;
  c.samples = samples;
  c.env = s;
  c.stat = Statistic::LaplaceAtR;
  c.points = {r};
  c.parallel = parallel;
  return estimate(c).front();
}

LogGammaSpec zero_temp_spec(const ExpEnvSpec& e, double eps) {
  e.validate();
  if (!(eps > 0)) throw std::invalid_argument("zero_temp_spec: need eps > 0");
  LogGammaSpec s;
  s.geometry = e.geometry;
  s.N = e.N;
  for (double a : e.alpha) s.alpha.push_back(eps * a);
  for (double b : e.beta) s.beta.push_back(eps * b);
  s.gamma = 0;
  return s;
}

std::vector<double> zero_temp_check(const ExpEnvSpec& e, const std::vector<double>& eps, double u) {
  if (e.N != 1) throw std::invalid_argument("zero_temp_check: N = 1 only");
  const double exact = cdf_exp(e, u);
  std::vector<double> out;
  for (double x : eps) out.push_back(std::fabs(laplace_whittaker(zero_temp_spec(e, x), std::exp(-u / x)) - exact));
  return out;
}

}  // namespace ipl
