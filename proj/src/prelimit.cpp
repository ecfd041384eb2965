#include "ipl/prelimit.hpp"

#include "ipl/quadrature.hpp"
#include "ipl/special.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ipl {

namespace {

using Cmat = Eigen::MatrixXcd;
using Cvec = Eigen::VectorXcd;

// (1 - e^{-x}) / x, continuous at 0.
template <class T>
T phi1(const T& x) {
  if (std::abs(x) < 1e-4) return T(1) - x / 2.0 + x * x / 6.0 - x * x * x / 24.0;
  return (T(1) - std::exp(-x)) / x;
}

// Hbar = 1/(z + w) - H for the flat and half-flat exponential models.
template <class T>
T hbar(Geometry g, double u, const T& z, const T& w) {
  const T d = w - z;
  if (g == Geometry::Flat) {
    T cross = std::abs(d) * u < 1e-2 ? std::exp(-2.0 * u * z) * 2.0 * u * phi1(T(2.0 * u) * d)
                                     : (std::exp(-2.0 * u * z) - std::exp(-2.0 * u * w)) / d;
    return cross + std::exp(-2.0 * u * (z + w)) / (z + w);
  }
  T cross = std::abs(d) * u < 1e-2 ? std::exp(-2.0 * u * z) * u * phi1(T(u) * d)
                                   : (std::exp(-2.0 * u * z) - std::exp(-u * (z + w))) / d;
  return cross + std::exp(-u * (z + w)) / (z + w);
}

void check_spec(const ExpEnvSpec& s, double u) {
  s.validate();
  if (s.geometry == Geometry::Restricted) throw std::invalid_argument("prelimit kernel: flat or half-flat only");
  if (!(u > 0)) throw std::invalid_argument("prelimit kernel: need u > 0");
}

double min_param(const ExpEnvSpec& s) {
  double m = *std::min_element(s.alpha.begin(), s.alpha.end());
  return std::min(m, *std::min_element(s.beta.begin(), s.beta.end()));
}

// Raw-variable truncation: kXmax in units of the natural scale.
double domain_length(const ExpEnvSpec& s) {
  return kXmax * std::max(std::cbrt(2.0 * s.N), 3.5) / min_param(s);
}

struct ContourNodes {
  std::vector<cdouble> z, dz;  // dz includes the 1/(2 pi i) factor
};

// Positively oriented circle, trapezoid rule.
ContourNodes circle(double centre, double radius, int m) {
  ContourNodes c;
  for (int k = 0; k < m; ++k) {
    cdouble e = std::polar(1.0, 2 * M_PI * (k + 0.5) / m);
    c.z.push_back(centre + radius * e);
    c.dz.push_back(radius * e / double(m));
  }
  return c;
}

// Breakpoints on [0, len]: steps of h near 0, then growing geometrically.
std::vector<double> graded_breaks(double len, double h, double max_step) {
  std::vector<double> b{0};
  double t = 0, step = h;
  while (t < len) {
    t = std::min(len, t + step);
    b.push_back(t);
    if (t > 10 * h) step = std::min(1.5 * step, max_step);
  }
  return b;
}

// Negatively oriented triangle v0 -> v0 + 2a e^{i pi/3} -> v0 + 2a e^{-i pi/3} -> v0,
// GL nodes graded towards the vertex v0 at scale h, panels at most max_step long.
ContourNodes triangle(double v0, double a, double h, double max_step = INFINITY, int order = 16) {
  ContourNodes c;
  const cdouble up = std::polar(1.0, M_PI / 3), down = std::polar(1.0, -M_PI / 3);
  const cdouble scale = 1.0 / cdouble(0, 2 * M_PI);
  QuadRule ray = gl_breaks(graded_breaks(2 * a, h, max_step), order);
  for (std::size_t k = 0; k < ray.size(); ++k) {
    c.z.push_back(v0 + ray.x[k] * up);
    c.dz.push_back(ray.w[k] * up * scale);
  }
  const double side = 2 * a * std::sqrt(3.0);
  QuadRule vert = gl_panels(0, side, 8, order);
  const cdouble top = v0 + 2 * a * up;
  for (std::size_t k = 0; k < vert.size(); ++k) {
    c.z.push_back(top - cdouble(0, vert.x[k]));
    c.dz.push_back(-cdouble(0, vert.w[k]) * scale);
  }
  for (std::size_t k = 0; k < ray.size(); ++k) {
    c.z.push_back(v0 + ray.x[k] * down);
    c.dz.push_back(-ray.w[k] * down * scale);
  }
  return c;
}

// Triangle vertex eps gamma / (2n)^{1/3}, kept below cap * gamma so the contour encloses gamma for small n.
double vertex_shift(double eps, double g, int n, double cap) { return std::min(eps / std::cbrt(2.0 * n), cap) * g; }

// Grading scale: the critical window gamma / (2n)^{1/3} or the distance to the pole, whichever is smaller.
ContourNodes triangle_near(double v0, double g, int n, double a = 0, double max_step = INFINITY) {
  return triangle(v0, a > 0 ? a : 2 * g, 0.5 * std::min(g / std::cbrt(2.0 * n), g - v0), max_step);
}

// exp(n log((g + z)/(g - z)) + shift z): the i.i.d. product with an exponential.
cdouble iid_factor(int n, double g, cdouble z, double shift) {
  return std::exp(double(n) * std::log((g + z) / (g - z)) + shift * z);
}

Matrix<double> real_part(const Cmat& k) {
  Matrix<double> out(k.rows(), k.cols());
  for (int i = 0; i < k.rows(); ++i)
    for (int j = 0; j < k.cols(); ++j) out(i, j) = k(i, j).real();
  return out;
}

// E(i, p) = exp(-x_i z_p) * weight_p
Cmat exp_matrix(const std::vector<double>& x, const std::vector<cdouble>& z, const std::vector<cdouble>& wt,
                bool parallel) {
  Cmat e(x.size(), z.size());
#pragma omp parallel for schedule(static) if (parallel)
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t p = 0; p < z.size(); ++p) e(i, p) = std::exp(-x[i] * z[p]) * wt[p];
  return e;
}

// sum_{p,q} E1(i,p) H(p,q) E2(j,q)
Cmat double_contour(const Cmat& e1, const Cmat& h, const Cmat& e2) { return e1 * h * e2.transpose(); }

struct IidContours {
  ContourNodes g1, g2;
};

// Circles for the pieces that vanish in the limit: Gamma1 radius (sqrt(3/2) - 1) gamma
// about gamma, Gamma2 radius 0.9 gamma about gamma.
IidContours iid_circles(double g, int m) {
  const double t0 = std::sqrt(1.5) - 1;
  return {circle(g, t0 * g, m), circle(g, 0.9 * g, m)};
}

Matrix<double> iid_kernel_matrix(const ExpEnvSpec& s, double u, const PrelimitConfig& c, const std::vector<double>& x,
                                 bool parallel) {
  const int N = s.N;
  const double g = s.alpha[0];
  const std::size_t n = x.size();
  Cmat total = Cmat::Zero(n, n);

  // Pieces on circles.
  auto [g1, g2] = iid_circles(g, c.contour_nodes);
  std::vector<cdouble> a(g1.z.size()), b(g2.z.size());
  const std::size_t P = g1.z.size(), Q = g2.z.size();
  for (std::size_t p = 0; p < P; ++p) a[p] = g1.dz[p] * iid_factor(N, g, g1.z[p], -2 * u);
  for (std::size_t q = 0; q < Q; ++q) b[q] = g2.dz[q] * iid_factor(N, g, g2.z[q], 0);
  Cmat e1 = exp_matrix(x, g1.z, a, parallel), e2 = exp_matrix(x, g2.z, b, parallel);
  // K2: e^{-2uz}/(w - z); in the half-flat case this is the third piece.
  Cmat h2(P, Q);
  for (std::size_t p = 0; p < P; ++p)
    for (std::size_t q = 0; q < Q; ++q) h2(p, q) = 1.0 / (g2.z[q] - g1.z[p]);
  Cmat k2 = double_contour(e1, h2, e2);
  total += k2;

  if (s.geometry == Geometry::Flat) {
    total += k2.transpose();
    // K4: e^{-2u(z + w)}/(z + w)
    std::vector<cdouble> b4(Q);
    for (std::size_t q = 0; q < Q; ++q) b4[q] = b[q] * std::exp(-2 * u * g2.z[q]);
    Cmat e4 = exp_matrix(x, g2.z, b4, parallel), h4(P, Q);
    for (std::size_t p = 0; p < P; ++p)
      for (std::size_t q = 0; q < Q; ++q) h4(p, q) = 1.0 / (g1.z[p] + g2.z[q]);
    total += double_contour(e1, h4, e4);
    // K1: single contour, power 2N, on the triangle through the critical point.
    const int n2 = 2 * N;
    auto tri = triangle_near(vertex_shift(c.eps, g, n2, 0.5), g, n2);
    std::vector<cdouble> w1(tri.z.size());
    for (std::size_t p = 0; p < tri.z.size(); ++p) w1[p] = tri.dz[p] * iid_factor(n2, g, tri.z[p], -2 * u);
    Cmat et = exp_matrix(x, tri.z, w1, parallel);
    Cmat ez = exp_matrix(x, tri.z, std::vector<cdouble>(tri.z.size(), 1.0), parallel);
    total += et * ez.transpose();
  } else {
    // First two half-flat pieces: e^{-u(z + w)}/(z +- w) on nested triangles.
    // The rays of the two triangles are parallel; panels stay comparable to their gap.
    const double vz = vertex_shift(2 * c.eps, g, N, 2.0 / 3), vw = vertex_shift(c.eps, g, N, 1.0 / 3);
    auto tz = triangle_near(vz, g, N, 2 * g, vz - vw);
    auto tw = triangle_near(vw, g, N, 3 * g, vz - vw);
    std::vector<cdouble> az(tz.z.size()), bw(tw.z.size());
    for (std::size_t p = 0; p < tz.z.size(); ++p) az[p] = tz.dz[p] * iid_factor(N, g, tz.z[p], -u);
    for (std::size_t q = 0; q < tw.z.size(); ++q) bw[q] = tw.dz[q] * iid_factor(N, g, tw.z[q], -u);
    Cmat ez = exp_matrix(x, tz.z, az, parallel), ew = exp_matrix(x, tw.z, bw, parallel);
    Cmat h(tz.z.size(), tw.z.size());
    for (std::size_t p = 0; p < tz.z.size(); ++p)
      for (std::size_t q = 0; q < tw.z.size(); ++q)
        h(p, q) = 1.0 / (tz.z[p] + tw.z[q]) + 1.0 / (tz.z[p] - tw.z[q]);
    total += double_contour(ez, h, ew);
  }
  return real_part(total);
}

// Whole kernel on two circles: Gamma1 around the alphas, Gamma2 around the betas and Gamma1.
Matrix<double> contour_kernel_matrix(const ExpEnvSpec& s, double u, const PrelimitConfig& c,
                                     const std::vector<double>& x, bool parallel) {
  const auto [amin, amax] = std::minmax_element(s.alpha.begin(), s.alpha.end());
  const auto [bmin, bmax] = std::minmax_element(s.beta.begin(), s.beta.end());
  const double t0 = std::sqrt(1.5) - 1;
  const double c1 = (*amin + *amax) / 2, r1 = (*amax - *amin) / 2 + t0 * *amin;
  const double left = 0.1 * std::min(*bmin, c1 - r1);
  const double right = std::max(c1 + r1 + (c1 - r1 - left), *bmax + 0.5 * *bmin);
  auto g1 = circle(c1, r1, c.contour_nodes), g2 = circle((left + right) / 2, (right - left) / 2, c.contour_nodes);
  const std::size_t P = g1.z.size(), Q = g2.z.size();
  std::vector<cdouble> a(P), b(Q);
  for (std::size_t p = 0; p < P; ++p) {
    cdouble v = g1.dz[p];
    for (int m = 0; m < s.N; ++m) v *= (g1.z[p] + s.beta[m]) / (g1.z[p] - s.alpha[m]);
    a[p] = v;
  }
  for (std::size_t q = 0; q < Q; ++q) {
    cdouble v = g2.dz[q];
    for (int m = 0; m < s.N; ++m) v *= (g2.z[q] + s.alpha[m]) / (g2.z[q] - s.beta[m]);
    b[q] = v;
  }
  Cmat e1 = exp_matrix(x, g1.z, a, parallel), e2 = exp_matrix(x, g2.z, b, parallel), h(P, Q);
  for (std::size_t p = 0; p < P; ++p)
    for (std::size_t q = 0; q < Q; ++q) h(p, q) = hbar(s.geometry, u, g1.z[p], g2.z[q]);
  return real_part(double_contour(e1, h, e2));
}

void require_distinct(const std::vector<double>& v, const char* name) {
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      if (std::fabs(v[i] - v[j]) <= 1e-6 * std::max(std::fabs(v[i]), std::fabs(v[j])))
        throw std::invalid_argument(std::string("residue-sum kernel: coincident ") + name +
                                    "; use the contour-quadrature method");
}

}  // namespace

FiniteRankKernel residue_kernel(const ExpEnvSpec& s, double u) {
  check_spec(s, u);
  require_distinct(s.alpha, "alphas");
  require_distinct(s.beta, "betas");
  const int N = s.N;
  FiniteRankKernel k;
  k.rate_x = s.alpha;
  k.rate_y = s.beta;
  k.A = Matrix<double>(N, N);
  std::vector<double> P(N), Q(N);
  for (int i = 0; i < N; ++i) {
    double p = 1, q = 1;
    for (int m = 0; m < N; ++m) {
      p *= s.alpha[i] + s.beta[m];
      q *= s.beta[i] + s.alpha[m];
      if (m != i) {
        p /= s.alpha[i] - s.alpha[m];
        q /= s.beta[i] - s.beta[m];
      }
    }
    P[i] = p;
    Q[i] = q;
  }
  for (int i = 0; i < N; ++i)
    for (int kk = 0; kk < N; ++kk) k.A(i, kk) = hbar(s.geometry, u, s.alpha[kk], s.beta[i]) * P[kk] * Q[i];
  return k;
}

double residue_det(const FiniteRankKernel& k) {
  const int n = static_cast<int>(k.rate_y.size());
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l) {
      double v = 0;
      for (std::size_t kk = 0; kk < k.rate_x.size(); ++kk) v += k.A(l, kk) / (k.rate_y[i] + k.rate_x[kk]);
      m(i, l) = (i == l) - v;
    }
  return m.determinant();
}

KernelOperator prelimit_kernel(const ExpEnvSpec& s, double u, KernelMethod m, const PrelimitConfig& c) {
  check_spec(s, u);
  KernelOperator op;
  op.a = 0;
  op.length = domain_length(s);
  if (m == KernelMethod::ResidueSum) {
    auto k = residue_kernel(s, u);
    op.matrix = [k](const std::vector<double>& x, bool) {
      const std::size_t n = x.size(), N = k.rate_x.size();
      Matrix<double> out(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          double v = 0;
          for (std::size_t r = 0; r < N; ++r) {
            double f = 0;
            for (std::size_t l = 0; l < N; ++l) f += k.A(r, l) * std::exp(-k.rate_x[l] * x[i]);
            v += f * std::exp(-k.rate_y[r] * x[j]);
          }
          out(i, j) = v;
        }
      return out;
    };
    return op;
  }
  const bool iid = s.iid() && c.decompose_iid;
  op.matrix = [s, u, c, iid](const std::vector<double>& x, bool parallel) {
    return iid ? iid_kernel_matrix(s, u, c, x, parallel) : contour_kernel_matrix(s, u, c, x, parallel);
  };
  return op;
}

FredholmValue prelimit_cdf(const ExpEnvSpec& s, double u, KernelMethod m, const NystromConfig& n,
                           const PrelimitConfig& c) {
  return fredholm_det(prelimit_kernel(s, u, m, c), n);
}

double j_triangle(int n, double gamma, double c, double eps) {
  if (n < 1 || !(gamma > 0)) throw std::invalid_argument("j_triangle: need n >= 1 and gamma > 0");
  auto t = triangle_near(vertex_shift(eps, gamma, n, 0.5), gamma, n);
  cdouble s = 0;
  for (std::size_t p = 0; p < t.z.size(); ++p) s += t.dz[p] * iid_factor(n, gamma, t.z[p], -c);
  return s.real();
}

double j_tilde(int N, double gamma, double x, double eps) {
  const double c = std::cbrt(2.0 * N) / gamma;
  return c * j_triangle(N, gamma, 2.0 * N / gamma + c * x, eps);
}

std::vector<double> steepest_descent_demo(const std::vector<int>& Ns, double gamma, double x, double eps) {
  if (!(gamma > 0)) throw std::invalid_argument("steepest_descent_demo: need gamma > 0");
  const double ai = airy(x);
  std::vector<double> out;
  for (int N : Ns) out.push_back(std::fabs(j_tilde(N, gamma, x, eps) - ai));
  return out;
}

UniformBound uniform_bound_witness(const std::vector<int>& Ns, double gamma, const std::vector<double>& xs,
                                   double eps, double slack) {
  UniformBound b;
  b.c2 = eps;
  // (1/2pi) int_{C + eps} e^{Re z^3 / 3} |dz|, both rays.
  const cdouble w = std::polar(1.0, M_PI / 3);
  double m = integrate([&](double t) { return std::exp(std::pow(eps + t * w, 3).real() / 3); }, 0, 12, 24, 20);
  b.c1 = slack * 2 * m / (2 * M_PI);
  for (int N : Ns)
    for (double x : xs) b.worst_ratio = std::max(b.worst_ratio, std::fabs(j_tilde(N, gamma, x, eps)) / (b.c1 * std::exp(-b.c2 * x)));
  b.holds = b.worst_ratio <= 1;
  return b;
}

double scaling_limit_value(Geometry g, double gamma, double r) {
  if (g == Geometry::Flat) return f1(std::cbrt(2.0) * gamma * r);
  if (g == Geometry::HalfFlat) return f21(gamma * r / std::cbrt(2.0));
  throw std::invalid_argument("scaling limit: flat or half-flat only");
}

std::vector<double> scaling_limit_check(Geometry g, const std::vector<int>& Ns, double gamma,
                                        const std::vector<double>& rs) {
  std::vector<double> lim;
  for (double r : rs) lim.push_back(scaling_limit_value(g, gamma, r));
  std::vector<double> out;
  for (int N : Ns) {
    auto spec = iid_exp_spec(g, N, gamma);
    double sup = 0;
    for (std::size_t k = 0; k < rs.size(); ++k) {
      double u = 2.0 * N / gamma + rs[k] * std::cbrt(double(N));
      sup = std::max(sup, std::fabs(cdf_exp(spec, u) - lim[k]));
    }
    out.push_back(sup);
  }
  return out;
}

}  // namespace ipl
