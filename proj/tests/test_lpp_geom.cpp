#include <doctest.h>

#include "ipl/lpp_geom.hpp"

#include <algorithm>
#include <map>
#include <random>

using namespace ipl;

namespace {

// Exhaustive oracle: tau <= u forces every weight <= u, so summing the
// probabilities of all configurations in {0..u}^sites with tau <= u is exact.
Rational brute_force_cdf(const GeomEnvSpec& s, int u) {
  auto sites = lattice_sites(s.geometry, s.N);
  const int n = static_cast<int>(sites.size());
  std::vector<std::vector<Rational>> pw(n);
  Rational base(1);
  for (int k = 0; k < n; ++k) {
    Rational r = s.site_param(sites[k].first, sites[k].second);
    base *= Rational(1) - r;
    pw[k].push_back(Rational(1));
    for (int e = 1; e <= u; ++e) pw[k].push_back(pw[k].back() * r);
  }
  std::map<std::pair<int, int>, int> tau;
  Rational total(0);
  std::function<void(int, const Rational&)> rec = [&](int k, const Rational& acc) {
    if (k == n) {
      total += acc;
      return;
    }
    auto [i, j] = sites[k];
    int prev = 0;
    if (auto it = tau.find({i - 1, j}); it != tau.end()) prev = std::max(prev, it->second);
    if (auto it = tau.find({i, j - 1}); it != tau.end()) prev = std::max(prev, it->second);
    for (int w = 0; prev + w <= u; ++w) {
      tau[{i, j}] = prev + w;
      rec(k + 1, acc * pw[k][w]);
    }
    tau.erase({i, j});
  };
  rec(0, Rational(1));
  Rational r = base * total;
  r.canonicalize();
  return r;
}

std::vector<Rational> random_unit(int n, std::mt19937& rng) {
  std::vector<Rational> v;
  for (int i = 0; i < n; ++i) {
    long d = 2 + rng() % 9;
    v.push_back(ratio(1 + rng() % (d - 1), d));
  }
  return v;
}

}  // namespace

TEST_CASE("flat N=1 at u=0 is the atom at zero") {
  Rational q = ratio(1, 3), p = ratio(2, 5);
  GeomEnvSpec s{Geometry::Flat, 1, {q}, {p}};
  auto c = cdf_geom(s, 0);
  CHECK(c.value == (1 - q * p) * (1 - q * q) * (1 - p * p));
  CHECK(c.terms == 1);
  CHECK(cdf_geom_baik_rains(s, 0).value == c.value);
}

TEST_CASE("restricted N=1 is a two-site convolution") {
  Rational q = ratio(1, 2);
  GeomEnvSpec s{Geometry::Restricted, 1, {q}, {}};
  // W11 ~ Geom(q), W12 ~ Geom(q^2), tau = W11 + W12
  for (int u = 0; u <= 5; ++u) {
    Rational ref(0);
    for (int a = 0; a <= u; ++a)
      for (int b = 0; a + b <= u; ++b) {
        Rational pa = (1 - q), pb = (1 - q * q);
        for (int k = 0; k < a; ++k) pa *= q;
        for (int k = 0; k < b; ++k) pb *= q * q;
        ref += pa * pb;
      }
    ref.canonicalize();
    CHECK(cdf_geom(s, u).value == ref);
  }
}

TEST_CASE("exhaustive oracle in all geometries") {
  GeomEnvSpec flat{Geometry::Flat, 2, {ratio(1, 2), ratio(1, 3)}, {ratio(1, 4), ratio(1, 5)}};
  CHECK(cdf_geom(flat, 3).value == brute_force_cdf(flat, 3));
  GeomEnvSpec half{Geometry::HalfFlat, 2, {ratio(1, 2), ratio(2, 3)}, {ratio(1, 4), ratio(3, 5)}};
  for (int u = 0; u <= 3; ++u) CHECK(cdf_geom(half, u).value == brute_force_cdf(half, u));
  GeomEnvSpec res{Geometry::Restricted, 2, {ratio(1, 2), ratio(2, 7)}, {}};
  for (int u = 0; u <= 4; ++u) CHECK(cdf_geom(res, u).value == brute_force_cdf(res, u));
  GeomEnvSpec res3{Geometry::Restricted, 3, {ratio(1, 3), ratio(1, 2), ratio(1, 5)}, {}};
  CHECK(cdf_geom(res3, 2).value == brute_force_cdf(res3, 2));
}

TEST_CASE("CDF is nondecreasing, bounded and saturates") {
  std::mt19937 rng(11);
  for (Geometry g : {Geometry::Flat, Geometry::HalfFlat, Geometry::Restricted}) {
    GeomEnvSpec s{g, 2, random_unit(2, rng), random_unit(2, rng)};
    auto curve = cdf_geom_curve(s, 40);
    for (std::size_t u = 1; u < curve.size(); ++u) {
      CHECK(curve[u].value >= curve[u - 1].value);
      CHECK(curve[u].value <= 1);
    }
    CHECK(curve.back().value.get_d() > 0.9);
  }
  GeomEnvSpec s{Geometry::Flat, 1, {ratio(1, 2)}, {ratio(1, 3)}};
  CHECK(1 - cdf_geom(s, 60).value.get_d() < 1e-12);
}

TEST_CASE("invariance under permuting parameters") {
  std::vector<Rational> q{ratio(1, 2), ratio(1, 3), ratio(3, 4)}, p{ratio(1, 5), ratio(2, 3), ratio(1, 7)};
  std::vector<Rational> q2{q[2], q[0], q[1]}, p2{p[1], p[2], p[0]};
  for (Geometry g : {Geometry::Flat, Geometry::HalfFlat, Geometry::Restricted}) {
    GeomEnvSpec a{g, 3, q, p}, b{g, 3, q2, p2};
    CHECK(cdf_geom(a, 3).value == cdf_geom(b, 3).value);
  }
}

TEST_CASE("comparison identities hold exactly") {
  std::mt19937 rng(3);
  for (int N = 1; N <= 3; ++N)
    for (int draw = 0; draw < 2; ++draw) {
      auto q = random_unit(N, rng), p = random_unit(N, rng);
      for (int u : {0, 2, 4}) {
        auto f = flat_comparison(q, p, u);
        CHECK(f.lhs == f.rhs);
        auto r = restricted_comparison(q, u);
        CHECK(r.lhs == r.rhs);
      }
    }
  GeomEnvSpec s{Geometry::Flat, 2, {ratio(1, 2), ratio(1, 3)}, {ratio(1, 4), ratio(1, 5)}};
  auto a = cdf_geom_curve(s, 5), b = cdf_geom_baik_rains_curve(s, 5);
  for (int u = 0; u <= 5; ++u) CHECK(a[u].value == b[u].value);
}

TEST_CASE("parallel and serial partition sums agree") {
  GeomEnvSpec s{Geometry::HalfFlat, 3, {ratio(1, 2), ratio(1, 3), ratio(2, 5)}, {ratio(1, 4), ratio(3, 5), ratio(1, 6)}};
  auto a = cdf_geom_curve(s, 4, true), b = cdf_geom_curve(s, 4, false);
  for (int u = 0; u <= 4; ++u) CHECK(a[u].value == b[u].value);
}

TEST_CASE("bad specs are rejected") {
  CHECK_THROWS_AS(cdf_geom(GeomEnvSpec{Geometry::Flat, 1, {Rational(1)}, {ratio(1, 2)}}, 1), std::invalid_argument);
  CHECK_THROWS_AS(cdf_geom(GeomEnvSpec{Geometry::Flat, 2, {ratio(1, 2)}, {ratio(1, 2)}}, 1), std::invalid_argument);
  CHECK_THROWS_AS(cdf_geom_baik_rains(GeomEnvSpec{Geometry::HalfFlat, 1, {ratio(1, 2)}, {ratio(1, 2)}}, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_geometry("curved"), std::invalid_argument);
}
