#pragma once

#include "ipl/combinatorics.hpp"
#include "ipl/geometry.hpp"
#include "ipl/lpp_exp.hpp"
#include "ipl/lpp_geom.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace ipl {

// Counter-based generator: the stream for (seed, sample, site) is fixed, so
// environments do not depend on thread scheduling or iteration order.
// Satisfies UniformRandomBitGenerator.
class SiteStream {
 public:
  using result_type = std::uint64_t;
  SiteStream(std::uint64_t seed, std::uint64_t sample, std::uint64_t site);
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();
  // Uniform on the open interval (0,1).
  double uniform();

 private:
  std::uint64_t key_, counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

// Geom(q): P(k) = (1 - q) q^k, k >= 0, sampled as floor(log U / log q).
long sample_geometric(double q, SiteStream& s);
double sample_exponential(double rate, SiteStream& s);
// log G for G ~ Gamma(shape, 1); stays finite for very small shapes.
double sample_log_gamma(double shape, SiteStream& s);

// Log-gamma environments: 1/W ~ Gamma(shape, 1).
struct LogGammaSpec {
  Geometry geometry = Geometry::Flat;
  int N = 1;
  std::vector<double> alpha, beta;  // restricted uses alpha only
  double gamma = 0;                 // ignored for half-flat
  void validate() const;
  double site_shape(int i, int j) const;
};

// Lattice size N implied by a weight array, checked against the geometry.
template <class T>
int lattice_size(const PolyArray<T>& w, Geometry g) {
  const int N = w.shape().row_length(1) / 2;
  if (N < 1 || !(w.shape() == lattice_shape(g, N))) throw std::invalid_argument("weights: shape does not match geometry");
  return N;
}

// Point-to-line last passage time over the geometry's lattice.
template <class T>
T lpp_dp(const PolyArray<T>& w, Geometry g) {
  const int N = lattice_size(w, g);
  PolyArray<T> t(w.shape());
  T best{};
  bool first = true;
  for (auto [i, j] : w.shape().indices()) {
    if (!in_lattice(g, N, i, j)) continue;
    bool up = in_lattice(g, N, i - 1, j), left = in_lattice(g, N, i, j - 1);
    T prev{};
    if (up && left)
      prev = std::max(t(i - 1, j), t(i, j - 1));
    else if (up)
      prev = t(i - 1, j);
    else if (left)
      prev = t(i, j - 1);
    t(i, j) = prev + w(i, j);
    if (i + j == 2 * N + 1 && (first || t(i, j) > best)) {
      best = t(i, j);
      first = false;
    }
  }
  return best;
}

// Sum over lattice paths to the terminal line of products of weights.
double partition_function(const PolyArray<double>& w, Geometry g);
// The same from log-weights, computed with log-sum-exp.
double log_partition_function(const PolyArray<double>& logw, Geometry g);
// Symmetric extension of restricted weights to the flat lattice with the
// diagonal halved, i.e. the symmetric log-gamma picture.
PolyArray<double> symmetric_weights(const PolyArray<double>& restricted);

enum class TasepVariant { Step, Alternating, HalfAlternating, Absorbing };
TasepVariant parse_tasep_variant(const std::string& s);
// Geometry whose LPP equals the variant's jump time T_{N,2N}.
Geometry tasep_geometry(TasepVariant v);

// Particle-jump recurrences. For Step, w is a rectangle read as W_{i,j} and
// the result is T_{m,n}. Otherwise w holds LPP weights W_{m,n} on the lattice
// of tasep_geometry(v); they are relabelled W_{m,n} = T-weight at
// (N + 1 - m, 2N + 2 - m - n) and the result is T_{N,2N}. A nonzero (i, j)
// returns that intermediate jump time instead.
template <class T>
T tasep_oracle(const PolyArray<T>& w, TasepVariant v, int i = 0, int j = 0);

// Random environments; site (i,j) uses stream (seed, sample, index of (i,j)
// in lattice_sites()).
PolyArray<long> sample_geom_env(const GeomEnvSpec& s, std::uint64_t seed, std::uint64_t sample);
PolyArray<double> sample_exp_env(const ExpEnvSpec& s, std::uint64_t seed, std::uint64_t sample);
PolyArray<double> sample_log_weights(const LogGammaSpec& s, std::uint64_t seed, std::uint64_t sample);

enum class Statistic { CdfAtU, LaplaceAtR, RescaledCdf };
Statistic parse_statistic(const std::string& s);

struct SimConfig {
  std::uint64_t seed = 0;
  long samples = 1;
  std::variant<GeomEnvSpec, ExpEnvSpec, LogGammaSpec> env;
  Statistic stat = Statistic::CdfAtU;
  // u values (CdfAtU), r values (LaplaceAtR), or r with u = center + scale r (RescaledCdf).
  std::vector<double> points;
  double center = 0, scale = 1;
  bool parallel = true;
};

struct Estimate {
  double value = 0, se = 0;
  long n = 0;
  bool degenerate = false;  // fewer than two samples
};

// CDF statistics use tau for LPP environments and log Z for log-gamma ones;
// the Laplace statistic is E[exp(-r X)] with X = tau or Z.
std::vector<Estimate> estimate(const SimConfig& c);

// Seed from the IPL_SEED environment variable, or `fallback`.
std::uint64_t seed_from_env(std::uint64_t fallback);

// Half-width multiplier of the two-sided 99.9% normal band.
inline constexpr double kBand999 = 3.2905267314919;

}  // namespace ipl
