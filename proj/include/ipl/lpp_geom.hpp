#pragma once

#include "ipl/geometry.hpp"
#include "ipl/linalg.hpp"

#include <vector>

namespace ipl {

// Geom(r) means P(k) = (1 - r) r^k, k >= 0.
struct GeomEnvSpec {
  Geometry geometry = Geometry::Flat;
  int N = 1;
  std::vector<Rational> q, p;  // restricted uses q only
  void validate() const;
  // Parameter of the geometric law at lattice site (i,j).
  Rational site_param(int i, int j) const;
};

struct ExactCdf {
  Rational value;
  Rational normalization;  // prefactor multiplying the partition sum
  long terms = 0;           // partitions summed
};

// P(tau <= u) for u = 0..umax by the symplectic Schur sums.
std::vector<ExactCdf> cdf_geom_curve(const GeomEnvSpec& spec, int umax, bool parallel = true);
ExactCdf cdf_geom(const GeomEnvSpec& spec, int u);

// Alternative single-standard (flat) or two-standard (restricted) Schur sums.
std::vector<ExactCdf> cdf_geom_baik_rains_curve(const GeomEnvSpec& spec, int umax, bool parallel = true);
ExactCdf cdf_geom_baik_rains(const GeomEnvSpec& spec, int u);

// Both sides of the two comparison identities:
//   sum s_{2l}(q, p) = (prod q p)^u sum sp_l(q) sp_l(p),
//   sum s_l(q) s_l(q, 1) = (prod q)^u sum sp_l(q).
struct IdentitySides {
  Rational lhs, rhs;
};
IdentitySides flat_comparison(const std::vector<Rational>& q, const std::vector<Rational>& p, int u);
IdentitySides restricted_comparison(const std::vector<Rational>& q, int u);

}  // namespace ipl
