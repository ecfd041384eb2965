#include <doctest.h>

#include "ipl/lpp_exp.hpp"

#include <cmath>
#include <random>

using namespace ipl;

namespace {

// P(X + Y <= u) for independent Exp(a), Exp(b).
double two_exp_sum_cdf(double a, double b, double u) {
  if (std::fabs(a - b) < 1e-12) return 1 - std::exp(-a * u) * (1 + a * u);
  return 1 - (b * std::exp(-a * u) - a * std::exp(-b * u)) / (b - a);
}

double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

}  // namespace

TEST_CASE("flat N=1 i.i.d. closed form on a u-grid") {
  for (double g : {0.25, 0.5, 1.0}) {
    auto s = iid_exp_spec(Geometry::Flat, 1, g);
    for (int k = 1; k <= 50; ++k) {
      double u = 0.2 * k / g;
      double ref = flat_n1_closed_form(g, u);
      CHECK(std::fabs(cdf_exp(s, u, ExpMethod::DoubleEngine) - ref) < 1e-12);
      CHECK(std::fabs(cdf_exp(s, u, ExpMethod::HighPrecisionIid) - ref) < 1e-12);
    }
  }
  CHECK(flat_n1_closed_form(0.5, 1.0) == doctest::Approx(1 - 2 * std::exp(-1.0) - std::exp(-2.0)).epsilon(1e-15));
}

TEST_CASE("N=1 half-flat and restricted reduce to two-site sums") {
  for (double u : {0.1, 0.7, 2.0, 5.0}) {
    ExpEnvSpec h{Geometry::HalfFlat, 1, {0.7}, {0.4}};
    CHECK(std::fabs(cdf_exp(h, u) - two_exp_sum_cdf(1.1, 1.4, u)) < 1e-13);
    ExpEnvSpec r{Geometry::Restricted, 1, {0.9}, {}};
    CHECK(std::fabs(cdf_exp(r, u) - two_exp_sum_cdf(0.9, 1.8, u)) < 1e-13);
    CHECK(std::fabs(cdf_exp(r, u) - restricted_n1_closed_form(0.9, u)) < 1e-13);
    // distinct flat N=1: still three independent sites, closed form via convolution in quadrature
    ExpEnvSpec f{Geometry::Flat, 1, {0.6}, {0.3}};
    CHECK(cdf_exp(f, u) == doctest::Approx(cdf_exp_schur_integral(f, u)).epsilon(1e-10));
  }
}

TEST_CASE("N=2 determinant and Pfaffian match the Schur integral") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> U(0.3, 1.5);
  for (Geometry g : {Geometry::Flat, Geometry::HalfFlat, Geometry::Restricted}) {
    for (int p = 0; p < 10; ++p) {
      ExpEnvSpec s{g, 2, {U(rng), U(rng)}, {}};
      if (g != Geometry::Restricted) s.beta = {U(rng), U(rng)};
      double u = 0.5 + 0.4 * p;
      CHECK(rel(cdf_exp(s, u), cdf_exp_schur_integral(s, u)) < 1e-6);
    }
  }
}

TEST_CASE("N=3 restricted Pfaffian with odd border matches the Schur integral") {
  ExpEnvSpec s{Geometry::Restricted, 3, {0.5, 0.8, 1.3}, {}};
  for (double u : {1.0, 3.0}) CHECK(rel(cdf_exp(s, u), cdf_exp_schur_integral(s, u, 16)) < 1e-6);
}

TEST_CASE("confluent parameters are continuous limits") {
  for (Geometry g : {Geometry::Flat, Geometry::HalfFlat, Geometry::Restricted}) {
    for (int N : {2, 3}) {
      auto iid = iid_exp_spec(g, N, 0.7);
      auto near = iid;
      for (int i = 0; i < N; ++i) {
        near.alpha[i] += 1e-4 * (i + 1);
        if (g != Geometry::Restricted) near.beta[i] -= 7e-5 * (i + 1);
      }
      for (double u : {1.5, 4.0}) {
        double a = cdf_exp(iid, u, ExpMethod::DoubleEngine), b = cdf_exp(near, u, ExpMethod::DoubleEngine);
        CHECK(std::fabs(a - b) < 1e-3);
        CHECK(a > 0);
        CHECK(a < 1);
      }
    }
  }
  for (double h : {1e-2, 1e-3, 1e-4}) {
    ExpEnvSpec f{Geometry::Flat, 2, {0.7, 0.7 + h}, {0.7, 0.7 - 0.7 * h}};
    CHECK(rel(cdf_exp(f, 1.5), cdf_exp_schur_integral(f, 1.5)) < 1e-8);
    ExpEnvSpec r{Geometry::Restricted, 2, {0.7, 0.7 + h}, {}};
    CHECK(rel(cdf_exp(r, 1.5), cdf_exp_schur_integral(r, 1.5)) < 1e-8);
  }
  // a cluster inside the threshold and exact equality agree
  ExpEnvSpec a{Geometry::Flat, 2, {0.8, 0.8 + 1e-9}, {0.5, 1.1}}, b{Geometry::Flat, 2, {0.8, 0.8}, {0.5, 1.1}};
  CHECK(rel(cdf_exp(a, 2.0), cdf_exp(b, 2.0)) < 1e-7);
}

TEST_CASE("multiprecision and double engines agree for small i.i.d. N") {
  for (Geometry g : {Geometry::Flat, Geometry::HalfFlat})
    for (int N = 1; N <= 4; ++N) {
      auto s = iid_exp_spec(g, N, 0.5);
      for (double u : {2.0, 6.0, 12.0}) {
        double d = cdf_exp(s, u, ExpMethod::DoubleEngine), h = cdf_exp(s, u, ExpMethod::HighPrecisionIid);
        CHECK(std::fabs(d - h) < 1e-8);
      }
    }
}

TEST_CASE("multiprecision result is stable in the working precision") {
  for (Geometry g : {Geometry::Flat, Geometry::HalfFlat}) {
    const int N = 16;
    double u = 2 * N / 1.0;
    double a = cdf_exp_iid_hp(g, N, 1.0, u), b = cdf_exp_iid_hp(g, N, 1.0, u, default_hp_bits(N) + 256);
    CHECK(std::fabs(a - b) < 1e-14);
    CHECK(a > 0);
    CHECK(a < 1);
  }
}

TEST_CASE("flat CDF increases in u") {
  ExpEnvSpec s{Geometry::Flat, 3, {0.4, 0.9, 1.2}, {0.7, 0.5, 1.0}};
  std::vector<double> us;
  for (int k = 1; k <= 40; ++k) us.push_back(0.25 * k);
  auto c = cdf_exp_curve(s, us);
  for (std::size_t k = 1; k < c.size(); ++k) CHECK(c[k] > c[k - 1]);
  CHECK(c.front() > 0);
  CHECK(c.back() < 1);
  auto hp = cdf_exp_curve(iid_exp_spec(Geometry::Flat, 6, 1.0), {4.0, 6.0, 8.0, 10.0});
  for (std::size_t k = 1; k < hp.size(); ++k) CHECK(hp[k] > hp[k - 1]);
}

TEST_CASE("Cauchy-Binet and de Bruijn identities") {
  CHECK(cauchy_binet_check({0.7}, {-1.2}, 1.0) < 1e-12);
  CHECK(cauchy_binet_check({0.3, -0.8}, {1.1, 0.4}, 1.0) < 1e-10);
  CHECK(cauchy_binet_check({0.3, -0.8, 1.5}, {1.1, 0.4, -0.6}, 1.0) < 1e-9);
  CHECK(de_bruijn_check({0.5}, 1.0) < 1e-12);
  CHECK(de_bruijn_check({0.5, -1.3}, 1.0) < 1e-10);
  CHECK(de_bruijn_check({0.5, -1.3, 2.1}, 1.0) < 1e-9);
  CHECK(de_bruijn_check({0.0, 0.9, -0.4}, 2.0) < 1e-9);
}

TEST_CASE("geometric environments converge to exponential ones") {
  ExpEnvSpec r{Geometry::Restricted, 1, {1.0}, {}};
  auto d = exp_limit_check(r, {0.1, 0.05, 0.02}, 2.0);
  CHECK(d[1] < d[0]);
  CHECK(d[2] < d[1]);
  ExpEnvSpec f{Geometry::Flat, 1, {0.5}, {0.5}};
  auto e = exp_limit_check(f, {0.1, 0.05, 0.02}, 2.0);
  CHECK(e[1] < e[0]);
  CHECK(e[2] < e[1]);
  CHECK(e[2] < 0.02);
}

TEST_CASE("invalid exponential specs are rejected") {
  CHECK_THROWS_AS(cdf_exp(iid_exp_spec(Geometry::Flat, 1, 1.0), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(cdf_exp(ExpEnvSpec{Geometry::Flat, 1, {-1.0}, {1.0}}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(cdf_exp(ExpEnvSpec{Geometry::HalfFlat, 2, {1.0, 2.0}, {1.0}}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(cdf_exp(ExpEnvSpec{Geometry::Flat, 2, {1.0, 2.0}, {1.0, 1.0}}, 1.0, ExpMethod::HighPrecisionIid),
                  std::invalid_argument);
}
