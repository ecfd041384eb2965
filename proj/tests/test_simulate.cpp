#include <doctest.h>

#include "ipl/rsk.hpp"
#include "ipl/simulate.hpp"

#include <boost/math/special_functions/digamma.hpp>

#include <cmath>
#include <cstdlib>
#include <random>

using namespace ipl;

namespace {

// Dyadic weights keep every sum exact, so different summation orders agree bitwise.
PolyArray<double> dyadic_weights(Geometry g, int N, std::mt19937& rng) {
  PolyArray<double> w(lattice_shape(g, N), 0.0);
  for (auto [i, j] : lattice_sites(g, N)) w(i, j) = static_cast<double>(rng() % 4096) / 1024.0;
  return w;
}

// LPP weights at the sites carrying the TASEP weights W_{i,j}, N = 2.
PolyArray<double> from_tasep_labels(Geometry g, const std::map<std::pair<int, int>, double>& W) {
  const int N = 2;
  PolyArray<double> w(lattice_shape(g, N), 0.0);
  for (auto [m, n] : lattice_sites(g, N)) w(m, n) = W.at({N + 1 - m, 2 * N + 2 - m - n});
  return w;
}

}  // namespace

TEST_CASE("passage times and partition functions on tiny lattices") {
  auto w = PolyArray<double>::from_rows({{1, 2}, {3}});
  CHECK(lpp_dp(w, Geometry::Flat) == 4);
  CHECK(partition_function(w, Geometry::Flat) == 5);
  CHECK(partition_function(w, Geometry::Restricted) == 2);
  CHECK(lpp_dp(w, Geometry::Restricted) == 3);
  CHECK(tasep_oracle(PolyArray<double>::from_rows({{7.5}}), TasepVariant::Step) == 7.5);
  auto logw = w.map<double>([](double x) { return std::log(x); });
  CHECK(std::exp(log_partition_function(logw, Geometry::Flat)) == doctest::Approx(5).epsilon(1e-15));
  CHECK_THROWS_AS(lpp_dp(PolyArray<double>::from_rows({{1, 2, 3}, {4}}), Geometry::Flat), std::invalid_argument);
}

TEST_CASE("TASEP recurrences reproduce the displayed examples") {
  auto step = PolyArray<double>::from_rows({{1, 2}, {3, 4}});
  CHECK(tasep_oracle(step, TasepVariant::Step) == 1 + std::max(3.0, 2.0) + 4);
  // N=1 alternating: T_{1,2} = max(W_{1,1}, W_{0,1}) + W_{1,2}
  auto w = PolyArray<double>::from_rows({{1, 2}, {3}});  // W_{1,2}=1, W_{1,1}=2, W_{0,1}=3
  CHECK(tasep_oracle(w, TasepVariant::Alternating) == std::max(2.0, 3.0) + 1);
  std::map<std::pair<int, int>, double> W{{{1, 1}, 1.25}, {{1, 2}, 0.5}, {{2, 1}, 2.0},
                                          {{2, 2}, 0.75}, {{2, 3}, 3.5}, {{2, 4}, 0.125}, {{1, 3}, 9.0}};
  const double head = std::max({W[{2, 2}] + W[{2, 1}], W[{2, 2}] + W[{1, 1}], W[{1, 2}] + W[{1, 1}]});
  auto half = from_tasep_labels(Geometry::HalfFlat, W);
  CHECK(tasep_oracle(half, TasepVariant::HalfAlternating, 2, 3) == head + W[{2, 3}]);
  auto absorb = from_tasep_labels(Geometry::Restricted, W);
  CHECK(tasep_oracle(absorb, TasepVariant::Absorbing) == head + W[{2, 3}] + W[{2, 4}]);
  CHECK(lpp_dp(absorb, Geometry::Restricted) == head + W[{2, 3}] + W[{2, 4}]);
}

TEST_CASE("dynamic programming equals the TASEP oracle") {
  std::mt19937 rng(17);
  for (TasepVariant v : {TasepVariant::Alternating, TasepVariant::HalfAlternating, TasepVariant::Absorbing}) {
    Geometry g = tasep_geometry(v);
    int mismatches = 0;
    for (int k = 0; k < 10000; ++k) {
      int N = 1 + k % 4;
      auto w = dyadic_weights(g, N, rng);
      if (lpp_dp(w, g) != tasep_oracle(w, v)) ++mismatches;
    }
    CHECK(mismatches == 0);
    GeomEnvSpec s{g, 3, {ratio(1, 2), ratio(2, 3), ratio(1, 3)}, {ratio(3, 4), ratio(1, 5), ratio(1, 2)}};
    for (int k = 0; k < 200; ++k) {
      auto e = sample_geom_env(s, 9, k);
      CHECK(lpp_dp(e, g) == tasep_oracle(e, v));
    }
  }
}

TEST_CASE("flat passage time is the outer-line maximum of the RSK output") {
  std::mt19937 rng(23);
  for (int k = 0; k < 200; ++k) {
    int N = 1 + k % 3;
    auto w = dyadic_weights(Geometry::Flat, N, rng);
    auto t = rsk_pl(w);
    double best = -1;
    for (auto [i, j] : w.shape().outer_indices()) best = std::max(best, t(i, j));
    CHECK(best == lpp_dp(w, Geometry::Flat));
  }
}

TEST_CASE("restricted and symmetric partition functions at N=1") {
  std::mt19937 rng(4);
  for (int k = 0; k < 50; ++k) {
    auto w = dyadic_weights(Geometry::Restricted, 1, rng);
    w(1, 1) += 0.5;
    auto s = symmetric_weights(w);
    CHECK(partition_function(s, Geometry::Flat) == partition_function(w, Geometry::Restricted));
    auto full = s;
    full(1, 1) = w(1, 1);
    CHECK(partition_function(full, Geometry::Flat) == 2 * partition_function(w, Geometry::Restricted));
  }
}

TEST_CASE("samplers have the stated laws") {
  const int n = 200000;
  double gsum = 0, esum = 0, l1 = 0, l2 = 0;
  for (int k = 0; k < n; ++k) {
    SiteStream s(1, k, 0);
    gsum += sample_geometric(0.3, s);
    esum += sample_exponential(2.0, s);
    l1 += sample_log_gamma(0.3, s);
    l2 += sample_log_gamma(2.5, s);
  }
  CHECK(gsum / n == doctest::Approx(0.3 / 0.7).epsilon(0.02));
  CHECK(esum / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(std::fabs(l1 / n - boost::math::digamma(0.3)) < 0.02);
  CHECK(std::fabs(l2 / n - boost::math::digamma(2.5)) < 0.01);
  SiteStream a(5, 6, 7), b(5, 6, 7), c(5, 6, 8);
  CHECK(a() == b());
  CHECK(a() != c());
  for (int k = 0; k < 1000; ++k) {
    double u = a.uniform();
    CHECK((u > 0 && u < 1));
  }
}

TEST_CASE("Monte Carlo estimates match exact CDFs") {
  SimConfig c;
  c.seed = seed_from_env(2024);
  c.samples = 1000000;
  c.env = iid_exp_spec(Geometry::Flat, 1, 0.5);
  c.points = {1.0};
  auto e = estimate(c)[0];
  CHECK(std::fabs(e.value - (1 - 2 * std::exp(-1.0) - std::exp(-2.0))) < 4 * e.se);
  GeomEnvSpec g{Geometry::Flat, 2, {ratio(1, 2), ratio(1, 3)}, {ratio(1, 4), ratio(1, 5)}};
  c.env = g;
  c.points = {2, 3, 4};
  auto ge = estimate(c);
  for (int k = 0; k < 3; ++k) CHECK(std::fabs(ge[k].value - cdf_geom(g, 2 + k).value.get_d()) < 4 * ge[k].se);
}

TEST_CASE("estimates are reproducible and thread independent") {
  SimConfig c;
  c.seed = 77;
  c.samples = 50000;
  c.env = LogGammaSpec{Geometry::Flat, 2, {0.6, 0.9}, {0.7, 0.8}, 0.3};
  c.stat = Statistic::LaplaceAtR;
  c.points = {0.5, 1.0};
  auto a = estimate(c), b = estimate(c);
  c.parallel = false;
  auto s = estimate(c);
  for (int k = 0; k < 2; ++k) {
    CHECK(a[k].value == b[k].value);
    CHECK(a[k].value == s[k].value);
    CHECK(a[k].se == s[k].se);
  }
  CHECK(a[1].value < a[0].value);
  c.samples = 1;
  c.stat = Statistic::CdfAtU;
  c.env = iid_exp_spec(Geometry::Flat, 1, 0.5);
  c.points = {1.0};
  auto one = estimate(c)[0];
  CHECK((one.value == 0 || one.value == 1));
  CHECK(one.degenerate);
  c.samples = 1000;
  double direct = estimate(c)[0].value;
  c.stat = Statistic::RescaledCdf;
  c.center = 0.5;
  c.scale = 0.25;
  c.points = {2.0};
  CHECK(estimate(c)[0].value == direct);
}

TEST_CASE("seed override from the environment") {
  setenv("IPL_SEED", "12345", 1);
  CHECK(seed_from_env(1) == 12345);
  setenv("IPL_SEED", "abc", 1);
  CHECK_THROWS_AS(seed_from_env(1), std::invalid_argument);
  unsetenv("IPL_SEED");
  CHECK(seed_from_env(9) == 9);
}
