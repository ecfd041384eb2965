// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include "ipl/lpp_exp.hpp"
#include "ipl/lpp_geom.hpp"
#include "ipl/polymer.hpp"
#include "ipl/prelimit.hpp"
#include "ipl/rsk.hpp"
#include "ipl/simulate.hpp"
#include "ipl/whittaker.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace ipl;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void run(int id, const char* name, const std::function<Outcome()>& f) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = f();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("[%s] %2d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
  std::fflush(stdout);
}

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

// Forward-mode derivative carrier for exact Jacobians of the local-move maps.
struct Dual {
  double v = 0;
  std::vector<double> d;
  Dual() = default;
  Dual(double x) : v(x) {}
  Dual(double x, std::vector<double> g) : v(x), d(std::move(g)) {}
};

std::vector<double> combine(const std::vector<double>& a, double ca, const std::vector<double>& b, double cb) {
  std::vector<double> out(std::max(a.size(), b.size()), 0.0);
  for (std::size_t k = 0; k < a.size(); ++k) out[k] += ca * a[k];
  for (std::size_t k = 0; k < b.size(); ++k) out[k] += cb * b[k];
  return out;
}

Dual operator+(const Dual& a, const Dual& b) { return {a.v + b.v, combine(a.d, 1, b.d, 1)}; }
Dual operator-(const Dual& a, const Dual& b) { return {a.v - b.v, combine(a.d, 1, b.d, -1)}; }
Dual operator*(const Dual& a, const Dual& b) { return {a.v * b.v, combine(a.d, b.v, b.d, a.v)}; }
Dual operator/(const Dual& a, const Dual& b) { return {a.v / b.v, combine(a.d, 1 / b.v, b.d, -a.v / (b.v * b.v))}; }
bool operator<(const Dual& a, const Dual& b) { return a.v < b.v; }
bool operator>(const Dual& a, const Dual& b) { return a.v > b.v; }

// Jacobian determinant of `map`; log coordinates on both sides when `logs`.
template <class Map>
double dual_jacobian(const PolyArray<double>& w, bool logs, Map map) {
  const auto idx = w.shape().indices();
  const int n = static_cast<int>(idx.size());
  PolyArray<Dual> x(w.shape());
  for (int k = 0; k < n; ++k) {
    auto [i, j] = idx[k];
    std::vector<double> g(n, 0.0);
    g[k] = logs ? w(i, j) : 1.0;
    x(i, j) = Dual(w(i, j), g);
  }
  PolyArray<Dual> t = map(x);
  Matrix<double> J(n, n);
  for (int k = 0; k < n; ++k) {
    auto [i, j] = idx[k];
    const Dual& y = t(i, j);
    for (int l = 0; l < n; ++l) {
      double g = l < static_cast<int>(y.d.size()) ? y.d[l] : 0.0;
      J(k, l) = logs ? g / y.v : g;
    }
  }
  return determinant(J);
}

// Random shapes with at most `max_entries` boxes, by family.
YoungShape random_shape(int family, std::mt19937& rng, int max_entries = 25) {
  switch (family) {
    case 0: {
      int m = 1 + rng() % 5, n = 1 + rng() % 5;
      return YoungShape::rectangle(m, n);
    }
    case 1: return YoungShape::flat(1 + rng() % 3);       // 3, 10, 21 boxes
    case 2: return YoungShape::half_flat(1 + rng() % 3);  // 2, 7, 15 boxes
    default: {
      std::vector<int> rows;
      int left = 1 + rng() % max_entries, prev = 7;
      while (left > 0) {
        int r = 1 + rng() % std::min(prev, left);
        rows.push_back(r);
        left -= r;
        prev = r;
      }
      return YoungShape(rows);
    }
  }
}

const char* family_name(int f) {
  static const char* names[] = {"rectangle", "flat", "half-flat", "generic"};
  return names[f];
}

Outcome exact_geometric_identities() {
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937 rng(101);
  auto draw = [&] {
    long b = 2 + rng() % 11;
    return ratio(1 + rng() % (b - 1), b);
  };
  int checked = 0, bad = 0;
  for (int N = 1; N <= 3; ++N)
    for (int d = 0; d < 20; ++d) {
      std::vector<Rational> q(N), p(N);
      for (auto& x : q) x = draw();
      for (auto& x : p) x = draw();
      for (int u = 0; u <= 6; ++u) {
        auto f = flat_comparison(q, p, u);
        auto r = restricted_comparison(q, u);
        bad += (f.lhs != f.rhs) + (r.lhs != r.rhs);
        checked += 2;
      }
    }
  double secs = elapsed_since(t0);
  return {bad == 0 && secs < 60,
          std::to_string(checked) + " identities, " + std::to_string(bad) + " unequal, " + sci(secs) + " s < 60 s"};
}

Outcome closed_form() {
  double worst = 0;
  for (double g : {0.25, 0.5, 1.0}) {
    auto s = iid_exp_spec(Geometry::Flat, 1, g);
    for (int k = 1; k <= 50; ++k) {
      double u = k * 0.2 / g;
      double exact = 1 - 4 * g * u * std::exp(-2 * g * u) - std::exp(-4 * g * u);
      worst = std::max(worst, std::fabs(cdf_exp(s, u) - exact));
    }
  }
  return {worst < 1e-12, "max |diff| " + sci(worst) + " < 1e-12 over 150 points"};
}

Outcome schur_integral() {
  std::mt19937 rng(103);
  std::uniform_real_distribution<double> U(0.3, 1.6);
  std::ostringstream os;
  bool ok = true;
  for (Geometry g : {Geometry::Flat, Geometry::HalfFlat, Geometry::Restricted}) {
    double worst = 0;
    for (int p = 0; p < 10; ++p) {
      ExpEnvSpec s{g, 2, {U(rng), U(rng)}, {}};
      if (g != Geometry::Restricted) s.beta = {U(rng), U(rng)};
      double u = 1.0 + 0.5 * p;
      worst = std::max(worst, rel(cdf_exp_schur_integral(s, u), cdf_exp(s, u, ExpMethod::DoubleEngine)));
    }
    ok &= worst < 1e-6;
    os << to_string(g) << " " << sci(worst) << "; ";
  }
  os << "max rel. err < 1e-6";
  return {ok, os.str()};
}

Outcome det_fredholm() {
  std::mt19937 rng(107);
  std::uniform_real_distribution<double> U(0.4, 1.4);
  double worst = 0;
  int count = 0;
  for (Geometry g : {Geometry::Flat, Geometry::HalfFlat})
    for (int N : {1, 2, 4})
      for (int draw = 0; draw < 3; ++draw) {
        ExpEnvSpec s{g, N, {}, {}};
        // pairwise spacing keeps the residue weights moderate
        for (int k = 0; k < N; ++k) {
          s.alpha.push_back(0.4 + 0.25 * k + 0.15 * U(rng));
          s.beta.push_back(0.5 + 0.25 * k + 0.15 * U(rng));
        }
        std::shuffle(s.beta.begin(), s.beta.end(), rng);
        for (double c : {0.8, 1.6, 3.2}) {
          double u = c * N, exact = cdf_exp(s, u, ExpMethod::DoubleEngine);
          for (auto m : {KernelMethod::ResidueSum, KernelMethod::ContourQuadrature}) {
            worst = std::max(worst, std::fabs(prelimit_cdf(s, u, m).value - exact));
            ++count;
          }
        }
      }
  return {worst < 1e-8, std::to_string(count) + " evaluations, max |diff| " + sci(worst) + " < 1e-8"};
}

// u-points near the 10..90% quantiles of an increasing CDF.
std::vector<double> quantile_points(const std::function<double(double)>& F, double hi) {
  std::vector<double> us;
  for (double target : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    double a = 0, b = hi;
    for (int it = 0; it < 60; ++it) {
      double m = 0.5 * (a + b);
      (F(m) < target ? a : b) = m;
    }
    us.push_back(b);
  }
  return us;
}

Outcome monte_carlo() {
  const long n = 1000000;
  int points = 0, outside = 0;
  double worst = 0;
  for (Geometry g : {Geometry::Flat, Geometry::HalfFlat, Geometry::Restricted}) {
    GeomEnvSpec gs{g, 2, {ratio(1, 2), ratio(2, 5)}, {}};
    if (g != Geometry::Restricted) gs.p = {ratio(1, 3), ratio(3, 5)};
    auto curve = cdf_geom_curve(gs, 60);
    std::vector<double> gu;
    for (double target : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      int u = 0;
      while (u < 60 && curve[u].value.get_d() < target) ++u;
      if (!gu.empty() && u <= gu.back()) u = static_cast<int>(gu.back()) + 1;
      gu.push_back(u);
    }
    ExpEnvSpec es{g, 2, {0.7, 1.1}, {}};
    if (g != Geometry::Restricted) es.beta = {0.9, 0.6};
    auto eu = quantile_points([&](double u) { return cdf_exp(es, u); }, 60);

    for (int env = 0; env < 2; ++env) {
      SimConfig c;
      c.samples = n;
      c.seed = 20240601 + 10 * static_cast<int>(g) + env;
      if (env == 0) {
        c.env = gs;
        c.points = gu;
      } else {
        c.env = es;
        c.points = eu;
      }
      auto est = estimate(c);
      for (std::size_t k = 0; k < c.points.size(); ++k) {
        double p = env == 0 ? curve[static_cast<int>(c.points[k])].value.get_d() : cdf_exp(es, c.points[k]);
        double z = std::fabs(est[k].value - p) / std::sqrt(p * (1 - p) / n);
        worst = std::max(worst, z);
        outside += z > kBand999;
        ++points;
      }
    }
  }
  return {outside == 0, std::to_string(points) + " points, " + std::to_string(outside) +
                            " outside the 99.9% band, max |z| " + sci(worst) + " <= " + sci(kBand999)};
}

Outcome goe_scaling() {
  const std::vector<double> rs{-2, -1, 0, 1, 2};
  auto f = scaling_limit_check(Geometry::Flat, {16, 32, 64}, 0.5, rs);
  auto h = scaling_limit_check(Geometry::HalfFlat, {16, 32, 64}, 0.5, rs);
  bool ok = f[0] <= 0.05 && f[2] <= 0.02 && f[1] < f[0] && f[2] < f[1] && h[2] <= 0.03 && h[1] < h[0] && h[2] < h[1];
  return {ok, "flat sup at N=16,32,64: " + sci(f[0]) + ", " + sci(f[1]) + ", " + sci(f[2]) +
                  " (<= 0.05, <= 0.02 at 64); half-flat: " + sci(h[0]) + ", " + sci(h[1]) + ", " + sci(h[2]) +
                  " (<= 0.03 at 64)"};
}

Outcome whittaker_identities() {
  double b1 = 0, b2 = 0, is = 0;
  b1 = std::max({bump_stade_check({0.6}, {0.9}, 1.7).residual, bump_stade_check({0.2}, {0.5}, 1.0).residual,
                 bump_stade_check({-0.3}, {1.1}, 0.6).residual});
  b2 = std::max({bump_stade_check({0.4, 0.9}, {0.5, 0.8}, 1.0).residual,
                 bump_stade_check({0.4, 0.9}, {0.5, 0.8}, 2.0).residual,
                 bump_stade_check({0.3, 0.7}, {0.6, 0.6}, 1.5).residual});
  is = std::max({ishii_stade_check({0.0}, {1.0}).residual, ishii_stade_check({0.3}, {1.2}).residual,
                 ishii_stade_check({-0.45}, {0.6}).residual});
  return {b1 < 1e-12 && b2 < 1e-4 && is < 1e-8, "Bump-Stade n=1 " + sci(b1) + " < 1e-12, n=2 " + sci(b2) +
                                                    " < 1e-4; Ishii-Stade " + sci(is) + " < 1e-8"};
}

Outcome polymer_laplace() {
  struct Case {
    LogGammaSpec s;
    double r;
  };
  std::vector<Case> cases{{{Geometry::Flat, 1, {0.6}, {0.6}, 0.3}, 1.0},
                          {{Geometry::HalfFlat, 1, {0.7}, {0.5}}, 1.0},
                          {{Geometry::Restricted, 1, {0.8}, {}, 0.2}, 0.5}};
  bool ok = true;
  std::ostringstream os;
  std::uint64_t seed = 211;
  for (const auto& c : cases) {
    double w = laplace_whittaker(c.s, c.r), k = laplace_contour(c.s, c.r).value;
    auto m = laplace_mc(c.s, c.r, 1000000, seed++);
    double q = rel(k, w), z = std::fabs(m.value - w) / m.se;
    ok &= q < 1e-4 && z < 3;
    os << to_string(c.s.geometry) << " rel " << sci(q) << " mc " << sci(z) << " se; ";
  }
  os << "limits 1e-4 rel., 3 se";
  return {ok, os.str()};
}

Outcome rsk_suite() {
  std::mt19937 rng(307);
  bool ok = true;
  std::ostringstream os;
  double worst_float = 0, worst_jac = 0;
  for (int fam = 0; fam < 4; ++fam) {
    int exact_bad = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      auto s = random_shape(fam, rng);
      PolyArray<Rational> wq(s), vq(s);
      PolyArray<double> wd(s), vd(s);
      std::uniform_real_distribution<double> U(0.2, 3.0), V(-2.0, 2.0);
      for (auto [i, j] : s.indices()) {
        wq(i, j) = ratio(1 + rng() % 9, 1 + rng() % 7);
        bool nonneg = trial % 2 == 0;
        vq(i, j) = ratio(static_cast<long>(rng() % 19) - (nonneg ? 0 : 9), 1 + rng() % 5);
        wd(i, j) = U(rng);
        vd(i, j) = trial % 2 == 0 ? U(rng) : V(rng);
      }
      // exact
      auto tq = grsk(wq);
      auto r = grsk_property_residuals(wq, tq);
      bool ordered = false;
      auto uq = rsk_pl(vq);
      auto pr = pl_property_residuals(vq, uq, &ordered);
      if (r[0] != 0 || r[1] != 0 || r[2] != 0 || !(grsk_inverse(tq) == wq) || pr[0] != 0 || pr[1] != 0 ||
          pr[2] != 0 || !ordered || !(rsk_pl_inverse(uq) == vq))
        ++exact_bad;
      // floating point
      auto td = grsk(wd);
      auto rd = grsk_property_residuals(wd, td);
      auto ud = rsk_pl(vd);
      bool ordered_d = false;
      auto pd = pl_property_residuals(vd, ud, &ordered_d);
      auto back = grsk_inverse(td);
      auto back_pl = rsk_pl_inverse(ud);
      double inv = 0, inv_pl = 0;
      for (auto [i, j] : s.indices()) {
        inv = std::max(inv, std::fabs(back(i, j) / wd(i, j) - 1));
        inv_pl = std::max(inv_pl, std::fabs(back_pl(i, j) - vd(i, j)) / std::max(1.0, std::fabs(vd(i, j))));
      }
      double jg = std::fabs(std::fabs(dual_jacobian(wd, true, [](const PolyArray<Dual>& x) { return grsk(x); })) - 1);
      double jp = std::fabs(std::fabs(dual_jacobian(vd, false, [](const PolyArray<Dual>& x) { return rsk_pl(x); })) - 1);
      worst_float = std::max({worst_float, rd[0], rd[1], rd[2], pd[0], pd[1], pd[2], inv, inv_pl});
      worst_jac = std::max({worst_jac, jg, jp});
      if (!ordered_d) worst_float = INFINITY;
    }
    ok &= exact_bad == 0;
    os << family_name(fam) << " " << exact_bad << " exact failures; ";
  }
  auto w = PolyArray<double>::from_rows({{1, 2, 0.5}, {3, 4}, {-1}});
  auto dev = tropicalization_check(w, {0.5, 0.1, 0.02});
  bool trop = dev[1] < dev[0] && dev[2] < dev[1];
  ok &= worst_float < 1e-10 && worst_jac < 1e-10 && trop;
  os << "float max " << sci(worst_float) << ", |det J| - 1 max " << sci(worst_jac) << " (< 1e-10); tropicalization "
     << sci(dev[0]) << " > " << sci(dev[1]) << " > " << sci(dev[2]);
  return {ok, os.str()};
}

Outcome zero_temperature() {
  const std::vector<double> eps{0.5, 0.2, 0.1, 0.05};
  bool ok = true;
  double last = 0;
  for (Geometry g : {Geometry::Flat, Geometry::HalfFlat, Geometry::Restricted}) {
    auto e = iid_exp_spec(g, 1, 0.5);
    for (double u : {3.0, 5.0, 8.0}) {
      auto d = zero_temp_check(e, eps, u);
      for (std::size_t k = 1; k < d.size(); ++k) ok &= d[k] < d[k - 1];
      last = std::max(last, d.back());
    }
  }
  return {ok, "strictly decreasing at u = 3, 5, 8 in all geometries; max at eps=0.05 " + sci(last)};
}

Outcome steepest_descent() {
  bool ok = true;
  std::ostringstream os;
  for (double x : {0.0, 1.0, 2.0}) {
    auto d = steepest_descent_demo({8, 32, 128}, 1.0, x);
    ok &= d[1] < d[0] && d[2] < d[1];
    os << "x=" << x << ": " << sci(d[0]) << " > " << sci(d[1]) << " > " << sci(d[2]) << "; ";
  }
  std::vector<double> xs;
  for (int k = 0; k <= 24; ++k) xs.push_back(0.25 * k);
  auto b = uniform_bound_witness({8, 32, 128}, 1.0, xs);
  ok &= b.holds;
  os << "bound c1=" << sci(b.c1) << " c2=" << sci(b.c2) << " worst ratio " << sci(b.worst_ratio);
  return {ok, os.str()};
}

}  // namespace

int main() {
  run(1, "exact geometric identities", exact_geometric_identities);
  run(2, "closed form N=1", closed_form);
  run(3, "Schur integral vs determinant", schur_integral);
  run(4, "determinant vs Fredholm", det_fredholm);
  run(5, "Monte Carlo concordance", monte_carlo);
  run(6, "GOE and Airy 2->1 scaling", goe_scaling);
  run(7, "Whittaker identities", whittaker_identities);
  run(8, "polymer Laplace transforms", polymer_laplace);
  run(9, "RSK property suite", rsk_suite);
  run(10, "zero-temperature limit", zero_temperature);
  run(11, "steepest descent", steepest_descent);
  std::printf("%d of 11 criteria failed\n", failures);
  return failures ? 1 : 0;
}
