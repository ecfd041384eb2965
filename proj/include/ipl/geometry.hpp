#pragma once

#include "ipl/combinatorics.hpp"

#include <string>
#include <utility>
#include <vector>

namespace ipl {

// Point-to-line paths on {i + j <= 2N + 1}; half-flat adds i <= N, restricted i <= j.
enum class Geometry { Flat, HalfFlat, Restricted };

Geometry parse_geometry(const std::string& s);
std::string to_string(Geometry g);

bool in_lattice(Geometry g, int N, int i, int j);
std::vector<std::pair<int, int>> lattice_sites(Geometry g, int N);
// Smallest Young shape holding the lattice; restricted arrays use the flat
// shape with entries below the diagonal unused.
YoungShape lattice_shape(Geometry g, int N);

// Which parameters meet at a site of the solvable environments:
//   Cross (a_i, b_j), AA (a_i, a_k), BB (b_k, b_j), Diag (a_i) for restricted i = j.
struct SiteParams {
  enum Kind { Cross, AA, BB, Diag } kind;
  int first, second;  // 0-based indices into a / b
};
SiteParams site_params(Geometry g, int N, int i, int j);

}  // namespace ipl
