#include "ipl/lpp_geom.hpp"

#include "ipl/schur.hpp"

#include <functional>
#include <stdexcept>

namespace ipl {

namespace {

Rational one_minus_prod(const Rational& a, const Rational& b) { return Rational(1) - a * b; }

Rational prod_all(const std::vector<Rational>& v) {
  Rational r(1);
  for (const auto& x : v) r *= x;
  return r;
}

// sums[k] = sum of term(l) over partitions with at most `len` parts and l_1 = k.
std::vector<Rational> sums_by_first_part(int len, int umax, const std::function<Rational(const Partition&)>& term,
                                         bool parallel, long* count) {
  std::vector<Partition> parts = partitions_in_box(len, umax);
  std::vector<Rational> vals(parts.size());
  const long m = static_cast<long>(parts.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (long k = 0; k < m; ++k) vals[k] = term(parts[k]);
  std::vector<Rational> sums(umax + 1, Rational(0));
  for (long k = 0; k < m; ++k) sums[parts[k][0]] += vals[k];
  if (count) *count = m;
  return sums;
}

std::vector<long> cumulative_counts(int len, int umax) {
  std::vector<long> c(umax + 1, 0);
  for (const auto& l : partitions_in_box(len, umax)) ++c[l[0]];
  for (int u = 1; u <= umax; ++u) c[u] += c[u - 1];
  return c;
}

std::vector<Rational> inverses(const std::vector<Rational>& v) {
  std::vector<Rational> r;
  for (const auto& x : v) r.push_back(Rational(1) / x);
  return r;
}

void check_unit(const std::vector<Rational>& v, const char* name, int N) {
  if (static_cast<int>(v.size()) != N) throw std::invalid_argument(std::string("geometric spec: ") + name + " needs N entries");
  for (const auto& x : v)
    if (!(x > 0 && x < 1)) throw std::invalid_argument(std::string("geometric spec: ") + name + " must lie in (0,1)");
}

// 1/c for each geometry.
Rational inverse_normalization(const GeomEnvSpec& s) {
  const int N = s.N;
  Rational r(1);
  if (s.geometry == Geometry::Restricted) {
    for (int i = 0; i < N; ++i) r *= Rational(1) - s.q[i];
    for (int i = 0; i < N; ++i)
      for (int j = i + 1; j < N; ++j) r *= one_minus_prod(s.q[i], s.q[j]);
    for (int i = 0; i < N; ++i)
      for (int j = i; j < N; ++j) r *= one_minus_prod(s.q[i], s.q[j]);
    return r;
  }
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) r *= one_minus_prod(s.q[i], s.p[j]);
  for (int i = 0; i < N; ++i)
    for (int j = i; j < N; ++j) {
      r *= one_minus_prod(s.q[i], s.q[j]);
      if (s.geometry == Geometry::Flat) r *= one_minus_prod(s.p[i], s.p[j]);
    }
  return r;
}

std::vector<ExactCdf> assemble(const std::vector<Rational>& sums, const Rational& c_inv, const Rational& base,
                               const std::vector<long>& counts) {
  std::vector<ExactCdf> out;
  Rational acc(0), pw(1);
  for (std::size_t u = 0; u < sums.size(); ++u) {
    acc += sums[u];
    ExactCdf e;
    e.normalization = c_inv * pw;
    e.value = e.normalization * acc;
    e.value.canonicalize();
    e.terms = counts[u];
    out.push_back(e);
    pw *= base;
  }
  return out;
}

}  // namespace

void GeomEnvSpec::validate() const {
  if (N < 1) throw std::invalid_argument("geometric spec: N must be positive");
  check_unit(q, "q", N);
  if (geometry != Geometry::Restricted) check_unit(p, "p", N);
}

Rational GeomEnvSpec::site_param(int i, int j) const {
  SiteParams s = site_params(geometry, N, i, j);
  switch (s.kind) {
    case SiteParams::Cross: return q[s.first] * p[s.second];
    case SiteParams::AA: return q[s.first] * q[s.second];
    case SiteParams::BB: return p[s.first] * p[s.second];
    case SiteParams::Diag: return q[s.first];
  }
  return Rational(0);
}

std::vector<ExactCdf> cdf_geom_curve(const GeomEnvSpec& spec, int umax, bool parallel) {
  spec.validate();
  if (umax < 0) throw std::invalid_argument("cdf_geom: u must be nonnegative");
  const int N = spec.N;
  std::function<Rational(const Partition&)> term;
  Rational base = prod_all(spec.q);
  std::vector<Rational> pinv;
  switch (spec.geometry) {
    case Geometry::Flat:
      term = [&](const Partition& l) -> Rational { return sp_det(l, spec.q) * sp_det(l, spec.p); };
      base *= prod_all(spec.p);
      break;
    case Geometry::HalfFlat:
      pinv = inverses(spec.p);
      term = [&](const Partition& l) -> Rational { return sp_det(l, spec.q) * schur_jt_vars(l, pinv); };
      base *= prod_all(spec.p);
      break;
    case Geometry::Restricted:
      term = [&](const Partition& l) -> Rational { return sp_det(l, spec.q); };
      break;
  }
  auto sums = sums_by_first_part(N, umax, term, parallel, nullptr);
  return assemble(sums, inverse_normalization(spec), base, cumulative_counts(N, umax));
}

ExactCdf cdf_geom(const GeomEnvSpec& spec, int u) { return cdf_geom_curve(spec, u).back(); }

std::vector<ExactCdf> cdf_geom_baik_rains_curve(const GeomEnvSpec& spec, int umax, bool parallel) {
  spec.validate();
  if (umax < 0) throw std::invalid_argument("cdf_geom_baik_rains: u must be nonnegative");
  const int N = spec.N;
  std::vector<Rational> vars;
  std::function<Rational(const Partition&)> term;
  int len = N;
  if (spec.geometry == Geometry::Flat) {
    vars = spec.q;
    vars.insert(vars.end(), spec.p.rbegin(), spec.p.rend());
    len = 2 * N;
    term = [&](const Partition& l) -> Rational {
      std::vector<int> d = l.parts();
      for (int& x : d) x *= 2;
      return schur_jt_vars(Partition(d), vars);
    };
  } else if (spec.geometry == Geometry::Restricted) {
    vars = spec.q;
    vars.push_back(Rational(1));
    term = [&](const Partition& l) -> Rational { return schur_jt_vars(l, spec.q) * schur_jt_vars(l, vars); };
  } else {
    throw std::invalid_argument("cdf_geom_baik_rains: defined for flat and restricted geometries");
  }
  auto sums = sums_by_first_part(len, umax, term, parallel, nullptr);
  return assemble(sums, inverse_normalization(spec), Rational(1), cumulative_counts(len, umax));
}

ExactCdf cdf_geom_baik_rains(const GeomEnvSpec& spec, int u) { return cdf_geom_baik_rains_curve(spec, u).back(); }

IdentitySides flat_comparison(const std::vector<Rational>& q, const std::vector<Rational>& p, int u) {
  GeomEnvSpec s{Geometry::Flat, static_cast<int>(q.size()), q, p};
  s.validate();
  Rational cinv = inverse_normalization(s);
  // Both CDFs carry the same 1/c; strip it to compare the raw sums.
  IdentitySides r;
  r.lhs = cdf_geom_baik_rains(s, u).value / cinv;
  r.rhs = cdf_geom(s, u).value / cinv;
  r.lhs.canonicalize();
  r.rhs.canonicalize();
  return r;
}

IdentitySides restricted_comparison(const std::vector<Rational>& q, int u) {
  GeomEnvSpec s{Geometry::Restricted, static_cast<int>(q.size()), q, {}};
  s.validate();
  Rational cinv = inverse_normalization(s);
  IdentitySides r;
  r.lhs = cdf_geom_baik_rains(s, u).value / cinv;
  r.rhs = cdf_geom(s, u).value / cinv;
  r.lhs.canonicalize();
  r.rhs.canonicalize();
  return r;
}

}  // namespace ipl
