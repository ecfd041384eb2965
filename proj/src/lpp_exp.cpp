#include "ipl/lpp_exp.hpp"

#include "ipl/divdiff.hpp"
#include "ipl/quadrature.hpp"
#include "ipl/schur.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ipl {

void ExpEnvSpec::validate() const {
  if (N < 1) throw std::invalid_argument("exponential spec: N must be positive");
  auto check = [&](const std::vector<double>& v, const char* name) {
    if (static_cast<int>(v.size()) != N)
      throw std::invalid_argument(std::string("exponential spec: ") + name + " needs N entries");
    for (double x : v)
      if (!(x > 0) || !std::isfinite(x))
        throw std::invalid_argument(std::string("exponential spec: ") + name + " must be positive");
  };
  check(alpha, "alpha");
  if (geometry != Geometry::Restricted) check(beta, "beta");
}

double ExpEnvSpec::site_rate(int i, int j) const {
  SiteParams s = site_params(geometry, N, i, j);
  switch (s.kind) {
    case SiteParams::Cross: return alpha[s.first] + beta[s.second];
    case SiteParams::AA: return alpha[s.first] + alpha[s.second];
    case SiteParams::BB: return beta[s.first] + beta[s.second];
    case SiteParams::Diag: return alpha[s.first];
  }
  return 0;
}

bool ExpEnvSpec::iid() const {
  for (double a : alpha)
    if (a != alpha[0]) return false;
  if (geometry == Geometry::Restricted) return true;
  for (double b : beta)
    if (b != alpha[0]) return false;
  return true;
}

ExpEnvSpec iid_exp_spec(Geometry g, int N, double gamma) {
  ExpEnvSpec s{g, N, std::vector<double>(N, gamma), {}};
  if (g != Geometry::Restricted) s.beta = s.alpha;
  return s;
}

double flat_n1_closed_form(double gamma, double u) {
  return 1 - 4 * gamma * u * std::exp(-2 * gamma * u) - std::exp(-4 * gamma * u);
}

double restricted_n1_closed_form(double alpha, double u) {
  double e = -std::expm1(-alpha * u);
  return e * e;
}

namespace {

// (1 - e^{-x}) / x
double phi1(double x) { return x == 0 ? 1.0 : -std::expm1(-x) / x; }

QuadRule rule_for(double zmax, double u) {
  int panels = std::clamp(static_cast<int>(std::ceil(zmax * u / 2)) + 2, 4, 512);
  return gl_panels(0, u, panels, 20);
}

// k-th Taylor coefficient in z of c(s) = e^{-z s}: (-s)^k e^{-z s} / k!.
void exp_taylor(double z, double s, int orders, std::vector<double>& out) {
  out.resize(orders);
  double v = std::exp(-z * s);
  for (int k = 0; k < orders; ++k) {
    out[k] = v;
    v *= -s / (k + 1);
  }
}

// Taylor coefficients of a(z,s) = e^{-zs} - e^{-z(2u-s)}.
void a_taylor(double z, double s, double u, int orders, std::vector<double>& out, std::vector<double>& tmp) {
  exp_taylor(z, s, orders, out);
  exp_taylor(z, 2 * u - s, orders, tmp);
  for (int k = 0; k < orders; ++k) out[k] -= tmp[k];
}

Matrix<double> cauchy_block(double z, double w, int kz, int kw) {
  Matrix<double> m(kz, kw);
  for (int a = 0; a < kz; ++a)
    for (int b = 0; b < kw; ++b) {
      double binom = std::exp(std::lgamma(a + b + 1.0) - std::lgamma(a + 1.0) - std::lgamma(b + 1.0));
      double v = std::round(binom) * std::pow(z + w, -(a + b + 1));
      m(a, b) = ((a + b) % 2) ? -v : v;
    }
  return m;
}

double flat_h_closed(double z, double w, double u) {
  double s = z + w;
  return u * phi1(s * u) + std::exp(-s * u) * u * phi1(s * u) - std::exp(-2 * u * w) * u * phi1((z - w) * u) -
         std::exp(-2 * u * z) * u * phi1((w - z) * u);
}

double half_h_closed(double z, double w, double u) {
  return u * phi1((z + w) * u) - std::exp(-2 * u * z) * u * phi1((w - z) * u);
}

Matrix<double> h_block(Geometry g, double z, double w, int kz, int kw, double u) {
  if (kz == 1 && kw == 1) {
    Matrix<double> m(1, 1);
    m(0, 0) = g == Geometry::Flat ? flat_h_closed(z, w, u) : half_h_closed(z, w, u);
    return m;
  }
  Matrix<double> m(kz, kw);
  QuadRule q = rule_for(std::max(z, w), u);
  std::vector<double> A, B, tmp;
  for (std::size_t n = 0; n < q.size(); ++n) {
    double s = q.x[n];
    a_taylor(z, s, u, kz, A, tmp);
    if (g == Geometry::Flat)
      a_taylor(w, s, u, kw, B, tmp);
    else
      exp_taylor(w, s, kw, B);
    for (int a = 0; a < kz; ++a)
      for (int b = 0; b < kw; ++b) m(a, b) += q.w[n] * A[a] * B[b];
  }
  return m;
}

// Nearly equal rates are expanded about their mean rather than differenced;
// the Taylor order grows until the neglected terms (spread * 2u)^m / m! vanish.
struct Clustering {
  double rel_tol;
  int extra;
};

Clustering clustering_for(const ExpEnvSpec& s, double u) {
  constexpr double kRel = 1e-2;
  double amax = 0;
  for (double a : s.alpha) amax = std::max(amax, a);
  for (double b : s.beta) amax = std::max(amax, b);
  const double x = kRel * std::max(1.0, amax) * s.N * 2 * u;
  int m = 1;
  double t = x;
  while (m < 40 && t > 1e-17) {
    ++m;
    t *= x / m;
  }
  return {kRel, std::max(m, 6)};
}

double cdf_det_ratio(const ExpEnvSpec& s, double u) {
  TaylorBlock<double> H = [&](const double& z, const double& w, int kz, int kw) {
    return h_block(s.geometry, z, w, kz, kw, u);
  };
  TaylorBlock<double> C = [](const double& z, const double& w, int kz, int kw) { return cauchy_block(z, w, kz, kw); };
  auto [tol, extra] = clustering_for(s, u);
  return confluent_det2(s.alpha, s.beta, H, tol, extra) / confluent_det2(s.alpha, s.beta, C, tol, extra);
}

// Restricted kernel, phi_z(x) = z e^{-zu}(e^{zx} - e^{-zx}) on [0,u].

// e^{-t u} * int_0^u e^{c x} dx without overflow.
double scaled_e(double c, double t, double u) {
  if (c == 0) return u * std::exp(-t * u);
  return (std::exp((c - t) * u) - std::exp(-t * u)) / c;
}

double pfaff_closed(double z, double w, double u) {
  // sum over sigma, tau of sigma tau [2 J(sigma z, tau w) - E(sigma z) E(tau w)] e^{-(z+w)u}
  double tot = 0;
  for (int sg : {1, -1})
    for (int tg : {1, -1}) {
      double a = sg * z, b = tg * w;
      double J = (scaled_e(a + b, z + w, u) - scaled_e(b, w, u) * std::exp(-z * u)) / a;
      double EE = scaled_e(a, z, u) * scaled_e(b, w, u);
      tot += sg * tg * (2 * J - EE);
    }
  return z * w * tot;
}

std::vector<double> border_taylor(double z, double u, int orders) {
  std::vector<double> c(orders), e1, e2;
  exp_taylor(z, 2 * u, orders, e2);
  exp_taylor(z, u, orders, e1);
  for (int k = 0; k < orders; ++k) c[k] = e2[k] - 2 * e1[k] + (k == 0 ? 1.0 : 0.0);
  return c;
}

Matrix<double> pfaff_block(double z, double w, int kz, int kw, double u) {
  Matrix<double> m(kz, kw);
  if (kz == 1 && kw == 1) {
    m(0, 0) = pfaff_closed(z, w, u);
    return m;
  }
  // 2 int_0^u phi(w,y) F(z,y) dy - F(z,u) F(w,u), F(z,y) = int_0^y phi(z,x) dx.
  QuadRule q = rule_for(std::max(z, w), u);
  std::vector<double> F, t1, t2, G, g1, g2;
  for (std::size_t n = 0; n < q.size(); ++n) {
    double y = q.x[n];
    exp_taylor(z, u - y, kz, t1);
    exp_taylor(z, u + y, kz, t2);
    exp_taylor(z, u, kz, F);
    for (int k = 0; k < kz; ++k) F[k] = t1[k] + t2[k] - 2 * F[k];
    exp_taylor(w, u - y, kw, g1);
    exp_taylor(w, u + y, kw, g2);
    G.assign(kw, 0.0);
    for (int l = 0; l < kw; ++l) {
      double gl = g1[l] - g2[l];
      G[l] += w * gl;
      if (l + 1 < kw) G[l + 1] += gl;
    }
    for (int a = 0; a < kz; ++a)
      for (int b = 0; b < kw; ++b) m(a, b) += 2 * q.w[n] * F[a] * G[b];
  }
  auto bz = border_taylor(z, u, kz), bw = border_taylor(w, u, kw);
  for (int a = 0; a < kz; ++a)
    for (int b = 0; b < kw; ++b) m(a, b) -= bz[a] * bw[b];
  return m;
}

Matrix<double> schur_pf_block(double z, double w, int kz, int kw) {
  Matrix<double> c = cauchy_block(z, w, kz + 1, kw);
  Matrix<double> m(kz, kw);
  for (int a = 0; a < kz; ++a)
    for (int b = 0; b < kw; ++b) {
      double zg = z * c(a, b) + (a > 0 ? c(a - 1, b) : 0.0);
      m(a, b) = (a == 0 && b == 0 ? 1.0 : 0.0) - 2 * zg;
    }
  return m;
}

double cdf_pfaffian_ratio(const ExpEnvSpec& s, double u) {
  TaylorBlock<double> Phi = [&](const double& z, const double& w, int kz, int kw) { return pfaff_block(z, w, kz, kw, u); };
  TaylorBlock<double> S = [](const double& z, const double& w, int kz, int kw) { return schur_pf_block(z, w, kz, kw); };
  TaylorColumn<double> gphi = [&](std::size_t, const double& z, int orders) { return border_taylor(z, u, orders); };
  TaylorColumn<double> gone = [](std::size_t, const double&, int orders) {
    std::vector<double> c(orders, 0.0);
    c[0] = 1;
    return c;
  };
  auto [tol, extra] = clustering_for(s, u);
  return confluent_pfaffian(s.alpha, Phi, &gphi, tol, extra) / confluent_pfaffian(s.alpha, S, &gone, tol, extra);
}

ExpMethod resolve(const ExpEnvSpec& s, ExpMethod m) {
  if (m != ExpMethod::Automatic) return m;
  if (s.geometry != Geometry::Restricted && s.iid() && s.N > 4) return ExpMethod::HighPrecisionIid;
  return ExpMethod::DoubleEngine;
}

// Ordered simplex u > x_1 > ... > x_n > 0 through x_1 = u t_1, x_{k+1} = x_k t_{k+1}.
double simplex_integral(const std::function<double(const std::vector<double>&)>& f, int n, double u, int panels,
                        int order) {
  QuadRule r = gl_panels(0, 1, panels, order);
  std::vector<double> x(n);
  std::function<double(int, double, double)> rec = [&](int k, double top, double jac) -> double {
    if (k == n) return jac * f(x);
    double s = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      x[k] = top * r.x[i];
      s += r.w[i] * rec(k + 1, x[k], jac * top);
    }
    return s;
  };
  return rec(0, u, 1.0);
}

// int_0^nu e^{c x} dx
double E(double c, double nu) { return c == 0 ? nu : std::expm1(c * nu) / c; }

// int_0^nu e^{b y} int_0^y e^{a x} dx dy
double J(double a, double b, double nu) {
  if (a != 0) return (E(a + b, nu) - E(b, nu)) / a;
  if (b == 0) return nu * nu / 2;
  return (nu * std::exp(b * nu) - E(b, nu)) / b;
}

}  // namespace

double cdf_exp(const ExpEnvSpec& spec, double u, ExpMethod method) {
  spec.validate();
  if (!(u > 0)) throw std::invalid_argument("cdf_exp: u must be positive");
  ExpMethod m = resolve(spec, method);
  if (m == ExpMethod::HighPrecisionIid) {
    if (spec.geometry == Geometry::Restricted || !spec.iid())
      throw std::invalid_argument("cdf_exp: high-precision path needs i.i.d. flat or half-flat rates");
    return cdf_exp_iid_hp(spec.geometry, spec.N, spec.alpha[0], u);
  }
  if (spec.geometry == Geometry::Restricted) return cdf_pfaffian_ratio(spec, u);
  return cdf_det_ratio(spec, u);
}

std::vector<double> cdf_exp_curve(const ExpEnvSpec& spec, const std::vector<double>& us, ExpMethod method,
                                  bool parallel) {
  spec.validate();
  ExpMethod m = resolve(spec, method);
  // The multiprecision path changes process-wide precision, so it stays serial.
  const bool par = parallel && m == ExpMethod::DoubleEngine;
  std::vector<double> out(us.size());
  const long n = static_cast<long>(us.size());
#pragma omp parallel for schedule(dynamic) if (par)
  for (long i = 0; i < n; ++i) out[i] = cdf_exp(spec, us[i], m);
  return out;
}

double cdf_exp_schur_integral(const ExpEnvSpec& spec, double u, int order) {
  spec.validate();
  if (!(u > 0)) throw std::invalid_argument("cdf_exp_schur_integral: u must be positive");
  if (spec.N > 3) throw std::invalid_argument("cdf_exp_schur_integral: N <= 3");
  const int N = spec.N;
  const auto& a = spec.alpha;
  const auto& b = spec.beta;
  double logpre = 0, sum = 0;
  std::function<double(const std::vector<double>&)> f;
  for (int i = 0; i < N; ++i)
    for (int j = i; j < N; ++j) logpre += std::log(a[i] + a[j]);
  switch (spec.geometry) {
    case Geometry::Flat:
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) logpre += std::log(a[i] + b[j]);
      for (int i = 0; i < N; ++i)
        for (int j = i; j < N; ++j) logpre += std::log(b[i] + b[j]);
      for (int i = 0; i < N; ++i) sum += a[i] + b[i];
      f = [&](const std::vector<double>& x) { return sp_cont(a, x) * sp_cont(b, x); };
      break;
    case Geometry::HalfFlat:
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) logpre += std::log(a[i] + b[j]);
      for (int i = 0; i < N; ++i) sum += a[i] + b[i];
      f = [&](const std::vector<double>& x) { return sp_cont(a, x) * schur_cont(b, x); };
      break;
    case Geometry::Restricted:
      for (int i = 0; i < N; ++i) logpre += std::log(a[i]);
      for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j) logpre += std::log(a[i] + a[j]);
      for (int i = 0; i < N; ++i) sum += a[i];
      f = [&](const std::vector<double>& x) { return sp_cont(a, x); };
      break;
  }
  const int panels = N == 3 ? 2 : 4;
  return std::exp(logpre - u * sum) * simplex_integral(f, N, u, panels, order);
}

double cauchy_binet_check(const std::vector<double>& a, const std::vector<double>& b, double nu) {
  const std::size_t n = a.size();
  if (b.size() != n || n == 0 || n > 3) throw std::invalid_argument("cauchy_binet_check: 1 <= N <= 3, matching sizes");
  auto lhs = simplex_integral(
      [&](const std::vector<double>& x) {
        Matrix<double> F(n, n), G(n, n);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) {
            F(i, j) = std::exp(a[i] * x[j]);
            G(i, j) = std::exp(b[i] * x[j]);
          }
        return determinant(F) * determinant(G);
      },
      static_cast<int>(n), nu, 4, 20);
  Matrix<double> M(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) M(i, j) = E(a[i] + b[j], nu);
  double rhs = determinant(M);
  return std::fabs(lhs - rhs) / std::max(1.0, std::fabs(rhs));
}

double de_bruijn_check(const std::vector<double>& a, double nu) {
  const std::size_t n = a.size();
  if (n == 0 || n > 3) throw std::invalid_argument("de_bruijn_check: 1 <= N <= 3");
  auto lhs = simplex_integral(
      [&](const std::vector<double>& x) {
        // simplex points decrease; column j holds the j-th smallest
        Matrix<double> F(n, n);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) F(i, j) = std::exp(a[i] * x[n - 1 - j]);
        return determinant(F);
      },
      static_cast<int>(n), nu, 4, 20);
  const std::size_t m = n + (n % 2);
  Matrix<double> P(m, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) P(i, j) = 2 * J(a[i], a[j], nu) - E(a[i], nu) * E(a[j], nu);
  if (n % 2)
    for (std::size_t i = 0; i < n; ++i) {
      P(i, n) = E(a[i], nu);
      P(n, i) = -P(i, n);
    }
  double rhs = pfaffian(P);
  return std::fabs(lhs - rhs) / std::max(1.0, std::fabs(rhs));
}

std::vector<double> exp_limit_check(const ExpEnvSpec& spec, const std::vector<double>& deltas, double u) {
  spec.validate();
  const double target = cdf_exp(spec, u);
  std::vector<double> out;
  for (double d : deltas) {
    if (!(d > 0)) throw std::invalid_argument("exp_limit_check: delta must be positive");
    GeomEnvSpec g{spec.geometry, spec.N, {}, {}};
    for (double x : spec.alpha) g.q.emplace_back(std::exp(-d * x));
    for (double x : spec.beta) g.p.emplace_back(std::exp(-d * x));
    int k = static_cast<int>(std::floor(u / d + 1e-9));
    out.push_back(std::fabs(cdf_geom(g, k).value.get_d() - target));
  }
  return out;
}

}  // namespace ipl
