#include "ipl/simulate.hpp"

#include <cmath>
#include <cstdlib>
#include <random>
#include <string>

namespace ipl {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

SiteStream::SiteStream(std::uint64_t seed, std::uint64_t sample, std::uint64_t site)
    : key_(splitmix64(seed ^ splitmix64(sample ^ splitmix64(site ^ 0xA5A5A5A5DEADBEEFULL)))) {}

SiteStream::result_type SiteStream::operator()() { return splitmix64(key_ + 0x9E3779B97F4A7C15ULL * ++counter_); }

double SiteStream::uniform() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

long sample_geometric(double q, SiteStream& s) {
  if (q <= 0) return 0;
  return static_cast<long>(std::floor(std::log(s.uniform()) / std::log(q)));
}

double sample_exponential(double rate, SiteStream& s) { return -std::log(s.uniform()) / rate; }

double sample_log_gamma(double shape, SiteStream& s) {
  if (shape >= 1) return std::log(std::gamma_distribution<double>(shape, 1.0)(s));
  // G_a = G_{a+1} U^{1/a}
  double g = std::gamma_distribution<double>(shape + 1, 1.0)(s);
  return std::log(g) + std::log(s.uniform()) / shape;
}

void LogGammaSpec::validate() const {
  if (N < 1) throw std::invalid_argument("log-gamma spec: N must be positive");
  auto check = [&](const std::vector<double>& v, const char* name) {
    if (static_cast<int>(v.size()) != N)
      throw std::invalid_argument(std::string("log-gamma spec: ") + name + " needs N entries");
    for (double x : v)
      if (!(x > 0)) throw std::invalid_argument(std::string("log-gamma spec: ") + name + " must be positive");
  };
  check(alpha, "alpha");
  if (geometry != Geometry::Restricted) check(beta, "beta");
  if (!(gamma >= 0)) throw std::invalid_argument("log-gamma spec: gamma must be nonnegative");
}

double LogGammaSpec::site_shape(int i, int j) const {
  SiteParams s = site_params(geometry, N, i, j);
  const double g = geometry == Geometry::HalfFlat ? 0.0 : gamma;
  switch (s.kind) {
    case SiteParams::Cross: return alpha[s.first] + beta[s.second] + g;
    case SiteParams::AA:
      if (geometry == Geometry::Restricted && j <= N) return alpha[s.first] + alpha[s.second] + 2 * g;
      return alpha[s.first] + alpha[s.second];
    case SiteParams::BB: return beta[s.first] + beta[s.second];
    case SiteParams::Diag: return alpha[s.first] + g;
  }
  return 0;
}

double partition_function(const PolyArray<double>& w, Geometry g) {
  const int N = lattice_size(w, g);
  PolyArray<double> z(w.shape());
  double total = 0;
  for (auto [i, j] : w.shape().indices()) {
    if (!in_lattice(g, N, i, j)) continue;
    double prev = 0;
    if (in_lattice(g, N, i - 1, j)) prev += z(i - 1, j);
    if (in_lattice(g, N, i, j - 1)) prev += z(i, j - 1);
    if (i == 1 && j == 1) prev = 1;
    z(i, j) = w(i, j) * prev;
    if (i + j == 2 * N + 1) total += z(i, j);
  }
  return total;
}

namespace {

double log_add(double a, double b) {
  if (a == -INFINITY) return b;
  if (b == -INFINITY) return a;
  double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

}  // namespace

double log_partition_function(const PolyArray<double>& logw, Geometry g) {
  const int N = lattice_size(logw, g);
  PolyArray<double> z(logw.shape(), -INFINITY);
  double total = -INFINITY;
  for (auto [i, j] : logw.shape().indices()) {
    if (!in_lattice(g, N, i, j)) continue;
    double prev = -INFINITY;
    if (in_lattice(g, N, i - 1, j)) prev = log_add(prev, z(i - 1, j));
    if (in_lattice(g, N, i, j - 1)) prev = log_add(prev, z(i, j - 1));
    if (i == 1 && j == 1) prev = 0;
    z(i, j) = logw(i, j) + prev;
    if (i + j == 2 * N + 1) total = log_add(total, z(i, j));
  }
  return total;
}

PolyArray<double> symmetric_weights(const PolyArray<double>& r) {
  lattice_size(r, Geometry::Restricted);
  PolyArray<double> s(r.shape());
  for (auto [i, j] : r.shape().indices()) {
    if (i == j)
      s(i, j) = r(i, j) / 2;
    else
      s(i, j) = i < j ? r(i, j) : r(j, i);
  }
  return s;
}

TasepVariant parse_tasep_variant(const std::string& s) {
  if (s == "step") return TasepVariant::Step;
  if (s == "alternating") return TasepVariant::Alternating;
  if (s == "half-alternating") return TasepVariant::HalfAlternating;
  if (s == "absorbing") return TasepVariant::Absorbing;
  throw std::invalid_argument("unknown TASEP variant: " + s);
}

Geometry tasep_geometry(TasepVariant v) {
  switch (v) {
    case TasepVariant::HalfAlternating: return Geometry::HalfFlat;
    case TasepVariant::Absorbing: return Geometry::Restricted;
    default: return Geometry::Flat;
  }
}

template <class T>
T tasep_oracle(const PolyArray<T>& w, TasepVariant v, int ti, int tj) {
  if (v == TasepVariant::Step) {
    const int m = w.shape().num_rows(), n = w.shape().row_length(1);
    if (!(w.shape() == YoungShape::rectangle(m, n))) throw std::invalid_argument("tasep_oracle: step needs a rectangle");
    std::vector<std::vector<T>> t(m + 1, std::vector<T>(n + 1, T(0)));
    for (int i = 1; i <= m; ++i)
      for (int j = 1; j <= n; ++j) t[i][j] = std::max(t[i][j - 1], t[i - 1][j]) + w(i, j);
    if (ti == 0 && tj == 0) return t[m][n];
    if (ti < 1 || tj < 1 || ti > m || tj > n) throw std::out_of_range("tasep_oracle: jump time outside the array");
    return t[ti][tj];
  }
  const Geometry g = tasep_geometry(v);
  const int N = lattice_size(w, g);
  // particle i in [1-N, N], jump j in [1, 2N]
  auto at = [&](int i, int j) { return static_cast<std::size_t>(i + N - 1) * (2 * N + 1) + j; };
  std::vector<T> W(2 * N * (2 * N + 1), T(0)), Tt(2 * N * (2 * N + 1), T(0));
  std::vector<char> have(W.size(), 0);
  for (auto [m, n] : lattice_sites(g, N)) {
    W[at(N + 1 - m, 2 * N + 2 - m - n)] = w(m, n);
    have[at(N + 1 - m, 2 * N + 2 - m - n)] = 1;
  }
  const int ilow = v == TasepVariant::Alternating ? 1 - N : 1;
  auto value = [&](int i, int j) -> T {
    if (j <= 0 || i < ilow) return T(0);
    if (v == TasepVariant::Absorbing && j > 2 * i) return T(0);
    return Tt[at(i, j)];
  };
  for (int j = 1; j <= 2 * N; ++j)
    for (int i = std::max(ilow, j - N); i <= N; ++i) {
      if (v == TasepVariant::Absorbing && j > 2 * i) continue;
      if (!have[at(i, j)]) throw std::logic_error("tasep_oracle: relabelling left a gap");
      Tt[at(i, j)] = std::max(value(i, j - 1), value(i - 1, j - 1)) + W[at(i, j)];
    }
  if (ti == 0 && tj == 0) return Tt[at(N, 2 * N)];
  if (tj < 1 || tj > 2 * N || ti > N || ti < std::max(ilow, tj - N) || (v == TasepVariant::Absorbing && tj > 2 * ti))
    throw std::out_of_range("tasep_oracle: jump time outside the computed range");
  return Tt[at(ti, tj)];
}

template long tasep_oracle<long>(const PolyArray<long>&, TasepVariant, int, int);
template double tasep_oracle<double>(const PolyArray<double>&, TasepVariant, int, int);

PolyArray<long> sample_geom_env(const GeomEnvSpec& s, std::uint64_t seed, std::uint64_t sample) {
  PolyArray<long> w(lattice_shape(s.geometry, s.N), 0);
  auto sites = lattice_sites(s.geometry, s.N);
  for (std::size_t k = 0; k < sites.size(); ++k) {
    SiteStream st(seed, sample, k);
    auto [i, j] = sites[k];
    w(i, j) = sample_geometric(s.site_param(i, j).get_d(), st);
  }
  return w;
}

PolyArray<double> sample_exp_env(const ExpEnvSpec& s, std::uint64_t seed, std::uint64_t sample) {
  PolyArray<double> w(lattice_shape(s.geometry, s.N), 0.0);
  auto sites = lattice_sites(s.geometry, s.N);
  for (std::size_t k = 0; k < sites.size(); ++k) {
    SiteStream st(seed, sample, k);
    auto [i, j] = sites[k];
    w(i, j) = sample_exponential(s.site_rate(i, j), st);
  }
  return w;
}

PolyArray<double> sample_log_weights(const LogGammaSpec& s, std::uint64_t seed, std::uint64_t sample) {
  PolyArray<double> w(lattice_shape(s.geometry, s.N), 0.0);
  auto sites = lattice_sites(s.geometry, s.N);
  for (std::size_t k = 0; k < sites.size(); ++k) {
    SiteStream st(seed, sample, k);
    auto [i, j] = sites[k];
    w(i, j) = -sample_log_gamma(s.site_shape(i, j), st);
  }
  return w;
}

Statistic parse_statistic(const std::string& s) {
  if (s == "cdf") return Statistic::CdfAtU;
  if (s == "laplace") return Statistic::LaplaceAtR;
  if (s == "rescaled-cdf") return Statistic::RescaledCdf;
  throw std::invalid_argument("unknown statistic: " + s);
}

namespace {

// Per-site parameters hoisted out of the sample loop.
struct Sampler {
  const SimConfig& c;
  Geometry g;
  int N;
  std::vector<std::pair<int, int>> sites;
  std::vector<double> par;
  int kind;  // 0 geometric, 1 exponential, 2 log-gamma

  explicit Sampler(const SimConfig& cfg) : c(cfg) {
    kind = static_cast<int>(c.env.index());
    std::visit(
        [&](const auto& s) {
          s.validate();
          g = s.geometry;
          N = s.N;
        },
        c.env);
    sites = lattice_sites(g, N);
    for (auto [i, j] : sites) {
      if (kind == 0) par.push_back(std::get<GeomEnvSpec>(c.env).site_param(i, j).get_d());
      if (kind == 1) par.push_back(std::get<ExpEnvSpec>(c.env).site_rate(i, j));
      if (kind == 2) par.push_back(std::get<LogGammaSpec>(c.env).site_shape(i, j));
    }
  }

  // tau, or log Z for log-gamma
  double draw(std::uint64_t sample) const {
    if (kind == 0) {
      PolyArray<long> w(lattice_shape(g, N), 0);
      for (std::size_t k = 0; k < sites.size(); ++k) {
        SiteStream st(c.seed, sample, k);
        w(sites[k].first, sites[k].second) = sample_geometric(par[k], st);
      }
      return static_cast<double>(lpp_dp(w, g));
    }
    PolyArray<double> w(lattice_shape(g, N), 0.0);
    for (std::size_t k = 0; k < sites.size(); ++k) {
      SiteStream st(c.seed, sample, k);
      w(sites[k].first, sites[k].second) =
          kind == 1 ? sample_exponential(par[k], st) : -sample_log_gamma(par[k], st);
    }
    return kind == 1 ? lpp_dp(w, g) : log_partition_function(w, g);
  }
};

}  // namespace

std::vector<Estimate> estimate(const SimConfig& c) {
  if (c.samples < 1) throw std::invalid_argument("estimate: sample count must be positive");
  if (c.points.empty()) throw std::invalid_argument("estimate: no evaluation points");
  Sampler smp(c);
  const std::size_t np = c.points.size();
  constexpr long kBlock = 4096;
  const long nblocks = (c.samples + kBlock - 1) / kBlock;
  std::vector<double> s1(nblocks * np, 0.0), s2(nblocks * np, 0.0);
  std::vector<double> thresh(np);
  for (std::size_t k = 0; k < np; ++k)
    thresh[k] = c.stat == Statistic::RescaledCdf ? c.center + c.scale * c.points[k] : c.points[k];
#pragma omp parallel for schedule(dynamic) if (c.parallel)
  for (long b = 0; b < nblocks; ++b) {
    const long lo = b * kBlock, hi = std::min(c.samples, lo + kBlock);
    for (long n = lo; n < hi; ++n) {
      double x = smp.draw(static_cast<std::uint64_t>(n));
      for (std::size_t k = 0; k < np; ++k) {
        double v;
        if (c.stat == Statistic::LaplaceAtR) {
          // kind 2 already carries log Z
          double logx = smp.kind == 2 ? x : (x > 0 ? std::log(x) : -INFINITY);
          v = std::exp(-std::exp(std::log(c.points[k]) + logx));
        } else {
          v = x <= thresh[k] ? 1.0 : 0.0;
        }
        s1[b * np + k] += v;
        s2[b * np + k] += v * v;
      }
    }
  }
  std::vector<Estimate> out(np);
  const double n = static_cast<double>(c.samples);
  for (std::size_t k = 0; k < np; ++k) {
    double a = 0, q = 0;
    for (long b = 0; b < nblocks; ++b) {
      a += s1[b * np + k];
      q += s2[b * np + k];
    }
    Estimate& e = out[k];
    e.n = c.samples;
    e.value = a / n;
    e.degenerate = c.samples < 2;
    if (!e.degenerate) {
      double var = c.stat == Statistic::LaplaceAtR ? std::max(0.0, (q - n * e.value * e.value) / (n - 1))
                                                   : e.value * (1 - e.value);
      e.se = std::sqrt(var / n);
    }
  }
  return out;
}

std::uint64_t seed_from_env(std::uint64_t fallback) {
  const char* s = std::getenv("IPL_SEED");
  if (!s || !*s) return fallback;
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("IPL_SEED is not an unsigned integer: ") + s);
  }
}

}  // namespace ipl
