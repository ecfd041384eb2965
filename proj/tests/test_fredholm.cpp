#include <doctest.h>

#include "ipl/prelimit.hpp"
#include "ipl/quadrature.hpp"
#include "ipl/special.hpp"
#include "ipl/textio.hpp"

#include <cmath>

using namespace ipl;

namespace {

ExpEnvSpec distinct_spec(Geometry g, int N) {
  ExpEnvSpec s;
  s.geometry = g;
  s.N = N;
  for (int i = 0; i < N; ++i) {
    s.alpha.push_back(0.5 + 0.13 * i);
    s.beta.push_back(0.7 + 0.11 * i);
  }
  return s;
}

// Residue evaluation of -(1/2 pi i) oint e^{-cz} ((g + z)/(g - z))^n dz at z = g.
double j_exact(int n, double g, double c) {
  BigReal::default_precision(300);
  BigReal G(g), Cc(c), s(0), binom(1), fact(1);
  for (int m = 1; m < n; ++m) fact *= m;  // (n - 1)!
  for (int k = 0; k < n; ++k) {
    const int e = n - 1 - k;
    s += binom * pow(2 * G, n - k) * pow(-Cc, e) / fact;
    binom = binom * (n - k) / (k + 1);
    if (e > 0) fact /= e;
  }
  BigReal v = (n % 2 ? 1 : -1) * exp(-Cc * G) * s;
  double out = v.convert_to<double>();
  BigReal::default_precision(50);
  return out;
}

}  // namespace

TEST_CASE("Nystrom determinant of elementary kernels") {
  auto zero = pointwise_kernel([](double, double) { return 0.0; }, 0, 10);
  CHECK(fredholm_det(zero).value == 1.0);
  for (double c : {0.3, 1.0, 1.7}) {
    auto k = pointwise_kernel([c](double x, double y) { return c * std::exp(-x - y); }, 0, 40);
    CHECK(std::fabs(fredholm_det(k).value - (1 - c / 2)) < 1e-10);
  }
  // Rank two: det(I - M) with M_ij = int g_i f_j.
  auto k2 = pointwise_kernel([](double x, double y) { return std::exp(-x - y) + 0.5 * std::exp(-2 * x - 3 * y); }, 0, 40);
  const double m11 = 0.5, m12 = 0.5 / 3, m21 = 0.25, m22 = 0.5 / 5;
  CHECK(std::fabs(fredholm_det(k2).value - ((1 - m11) * (1 - m22) - m12 * m21)) < 1e-10);
}

TEST_CASE("Parallel and serial Nystrom paths agree") {
  NystromConfig par, ser;
  ser.parallel = false;
  CHECK(f1_value(-1, par).value == doctest::Approx(f1_value(-1, ser).value).epsilon(1e-15));
  auto s = iid_exp_spec(Geometry::Flat, 8, 0.5);
  CHECK(prelimit_cdf(s, 16, KernelMethod::ContourQuadrature, par).value ==
        doctest::Approx(prelimit_cdf(s, 16, KernelMethod::ContourQuadrature, ser).value).epsilon(1e-14));
}

TEST_CASE("GOE distribution") {
  CHECK(std::fabs(f1(0) - 0.831908066202953) < 1e-10);
  CHECK(f1(6) > 1 - 1e-5);
  // Right tail against e^{-2/3 s^{3/2}} / (4 sqrt(pi) s^{3/4}).
  for (double s : {6.0, 8.0}) {
    const double tail = std::exp(-2.0 / 3 * std::pow(s, 1.5)) / (4 * std::sqrt(M_PI) * std::pow(s, 0.75));
    CHECK(std::fabs((1 - f1(s)) / tail - 1) < 0.1);
  }
  CHECK(f1(-6) < 1e-4);
  double prev = 0;
  for (double s = -5; s <= 3; s += 0.5) {
    double v = f1(s);
    CHECK(v > prev);
    prev = v;
  }
  auto v = f1_value(0);
  CHECK(v.converged);
  CHECK(v.error < 1e-7);
}

TEST_CASE("Default Nystrom settings reproduce the frozen high-node values") {
  // 96/192-node run of the same kernels, node-doubling differences below 3e-15.
  auto t = read_csv(std::string(IPL_TEST_DATA) + "/tw_golden.csv");
  REQUIRE(t.header == std::vector<std::string>{"s", "f1", "f21"});
  REQUIRE(t.rows.size() >= 10);
  for (const auto& r : t.rows) {
    const double s = std::stod(r[0]);
    CHECK(std::fabs(f1(s) - std::stod(r[1])) < 1e-10);
    CHECK(std::fabs(f21(s) - std::stod(r[2])) < 1e-10);
  }
}

TEST_CASE("Sylvester identity for finite-rank kernels") {
  // Operator side by Nystrom, matrix side in the rank.
  for (auto g : {Geometry::Flat, Geometry::HalfFlat})
    for (int N : {1, 3}) {
      auto k = residue_kernel(distinct_spec(g, N), 2.0);
      const double op = nystrom_det(prelimit_kernel(distinct_spec(g, N), 2.0, KernelMethod::ResidueSum), 64);
      CHECK(std::fabs(op - residue_det(k)) < 1e-10);
    }
  // det(I + AB) = det(I + BA) for A: L^2 -> C^2, B: C^2 -> L^2.
  auto f = [](int i, double x) { return std::exp(-(1.0 + i) * x); };
  auto g = [](int i, double y) { return (i ? 0.4 : -0.7) * std::exp(-(0.5 + i) * y); };
  auto op = pointwise_kernel([&](double x, double y) { return -(f(0, x) * g(0, y) + f(1, x) * g(1, y)); }, 0, 60);
  double m[2][2];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m[i][j] = integrate([&](double y) { return g(i, y) * f(j, y); }, 0, 60, 60, 20);
  const double small = (1 + m[0][0]) * (1 + m[1][1]) - m[0][1] * m[1][0];
  CHECK(std::fabs(fredholm_det(op).value - small) < 1e-10);
}

TEST_CASE("Airy 2->1 distribution") {
  CHECK(f21(6) > 1 - 1e-5);
  double prev = 0;
  for (double s = -4; s <= 3; s += 1) {
    double v = f21(s);
    CHECK(v > prev);
    prev = v;
  }
  CHECK(f21_value(0).error < 1e-7);
  // Independent assembly: inner integrals by adaptive-free composite rules.
  for (double s : {-2.0, 0.5}) {
    auto k = pointwise_kernel(
        [](double x, double y) {
          auto part = [&](double sign) {
            return integrate([&](double t) { return airy(x + t) * airy(y + sign * t); }, 0, 20, 20, 16);
          };
          return part(1) + part(-1);
        },
        s, 14);
    CHECK(std::fabs(nystrom_det(k, 24) - f21(s)) < 1e-8);
  }
}

TEST_CASE("Prelimit kernel reproduces the determinant CDF") {
  for (auto g : {Geometry::Flat, Geometry::HalfFlat})
    for (int N : {1, 2, 4}) {
      auto s = distinct_spec(g, N);
      for (double u : {1.0, 3.0, 6.0}) {
        const double exact = cdf_exp(s, u);
        CHECK(std::fabs(prelimit_cdf(s, u, KernelMethod::ResidueSum).value - exact) < 1e-8);
        CHECK(std::fabs(prelimit_cdf(s, u, KernelMethod::ContourQuadrature).value - exact) < 1e-8);
        CHECK(std::fabs(residue_det(residue_kernel(s, u)) - exact) < 1e-8);
      }
    }
}

TEST_CASE("Residue and contour kernels coincide pointwise") {
  for (auto g : {Geometry::Flat, Geometry::HalfFlat}) {
    auto s = distinct_spec(g, 2);
    std::vector<double> x{0, 0.3, 1.1, 2.5, 5};
    auto a = prelimit_kernel(s, 2.5, KernelMethod::ResidueSum).matrix(x, false);
    auto b = prelimit_kernel(s, 2.5, KernelMethod::ContourQuadrature).matrix(x, false);
    for (std::size_t i = 0; i < x.size(); ++i)
      for (std::size_t j = 0; j < x.size(); ++j) CHECK(std::fabs(a(i, j) - b(i, j)) < 1e-8);
  }
}

TEST_CASE("i.i.d. kernel split matches the whole-kernel contour and the exact CDF") {
  PrelimitConfig whole;
  whole.decompose_iid = false;
  for (auto g : {Geometry::Flat, Geometry::HalfFlat}) {
    for (int N : {1, 2, 4})
      for (double u : {2.0 * N, 4.0 * N}) {
        auto s = iid_exp_spec(g, N, 0.5);
        const double exact = cdf_exp(s, u);
        CHECK(std::fabs(prelimit_cdf(s, u, KernelMethod::ContourQuadrature).value - exact) < 1e-6);
        CHECK(std::fabs(prelimit_cdf(s, u, KernelMethod::ContourQuadrature, {}, whole).value - exact) < 1e-6);
      }
    auto big = iid_exp_spec(g, 32, 0.5);
    const double u = 128 + std::cbrt(32.0);
    CHECK(std::fabs(prelimit_cdf(big, u, KernelMethod::ContourQuadrature).value - cdf_exp(big, u)) < 1e-9);
  }
}

TEST_CASE("Residue kernel refuses coincident parameters") {
  auto s = iid_exp_spec(Geometry::Flat, 2, 0.5);
  CHECK_THROWS_AS(residue_kernel(s, 3), std::invalid_argument);
  CHECK_THROWS_AS(prelimit_kernel(s, -1, KernelMethod::ContourQuadrature), std::invalid_argument);
  ExpEnvSpec r{Geometry::Restricted, 1, {0.5}, {}};
  CHECK_THROWS_AS(prelimit_kernel(r, 1, KernelMethod::ContourQuadrature), std::invalid_argument);
}

TEST_CASE("Triangle contour integral against the residue sum") {
  for (int n : {1, 3, 8, 32, 128})
    for (double eps : {0.5, 1.0, 2.0})
      for (double dc : {-3.0, 0.0, 3.0, 10.0}) {
        const double c = 2.0 * n / 0.5 + dc * std::cbrt(double(n));
        const double e = j_exact(n, 0.5, c);
        CHECK(std::fabs(j_triangle(n, 0.5, c, eps) - e) < 1e-11 * std::max(1.0, std::fabs(e)));
      }
  // Away from the critical window only small n stays well conditioned.
  for (int n : {1, 3, 8})
    for (double c : {0.0, 1.0}) CHECK(std::fabs(j_triangle(n, 0.5, c) - j_exact(n, 0.5, c)) < 1e-11 * n);
}

TEST_CASE("Steepest descent towards Airy") {
  for (double x : {0.0, 1.0, 2.0}) {
    auto d = steepest_descent_demo({8, 32, 128, 512}, 0.5, x);
    for (std::size_t k = 1; k < d.size(); ++k) CHECK(d[k] < d[k - 1]);
    CHECK(d.back() < 1e-2);
  }
  // The vertex shift does not change the integral.
  for (double eps : {0.5, 2.0}) CHECK(std::fabs(j_tilde(64, 0.5, 1.0, eps) - j_tilde(64, 0.5, 1.0)) < 1e-11);
  std::vector<double> xs;
  for (double x = 0; x <= 6; x += 0.25) xs.push_back(x);
  auto b = uniform_bound_witness({8, 16, 32, 64, 128, 256}, 0.5, xs);
  CHECK(b.holds);
  CHECK(b.c2 == 1.0);
  // The limit itself sits under the unscaled bound.
  for (double x : xs) CHECK(std::fabs(airy(x)) <= b.c1 / 2 * std::exp(-x));
}

TEST_CASE("Scaling towards the GOE law improves with N") {
  std::vector<double> rs{-2, -1, 0, 1, 2};
  auto d = scaling_limit_check(Geometry::Flat, {4, 8, 16}, 0.5, rs);
  CHECK(d[1] < d[0]);
  CHECK(d[2] < d[1]);
  CHECK(d[2] < 0.05);
  CHECK(scaling_limit_value(Geometry::Flat, 0.5, 0) == doctest::Approx(f1(0)));
  CHECK_THROWS(scaling_limit_value(Geometry::Restricted, 0.5, 0));
}
