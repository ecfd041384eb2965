#pragma once

// Confluent divided differences expressed as linear functionals on Taylor
// coefficients.  For nodes x_1..x_n grouped into clusters, row i of A gives
// f[x_1..x_i] = sum_b A(i,b) c_b(f), where c_b(f) = f^{(k)}(centre)/k! for the
// basis element b = (cluster, k).  Nodes inside a cluster are expanded about
// the cluster mean, so nearly equal nodes never cause cancellation.

#include "ipl/linalg.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace ipl {

template <class T>
struct NodeClusters {
  std::vector<T> nodes;        // sorted
  std::vector<T> centre;       // per cluster
  std::vector<int> cluster_of; // per node
  std::vector<int> orders;     // Taylor orders kept per cluster
  std::vector<int> offset;     // basis offset per cluster
  int nbasis = 0;
};

namespace detail {

template <class T>
bool same_cluster(const T& a, const T& b, double rel_tol) {
  if (rel_tol <= 0) return a == b;
  double da = to_double(mag(a)), d = to_double(mag(T(a - b)));
  return d <= rel_tol * std::max(1.0, da);
}

}  // namespace detail

// Default clustering threshold for floating nodes.
inline constexpr double kConfluentRelTol = 1e-6;

template <class T>
NodeClusters<T> cluster_nodes(std::vector<T> nodes, double rel_tol, int extra_orders) {
  NodeClusters<T> c;
  std::sort(nodes.begin(), nodes.end());
  c.nodes = nodes;
  c.cluster_of.resize(nodes.size());
  std::size_t i = 0;
  while (i < nodes.size()) {
    std::size_t j = i + 1;
    while (j < nodes.size() && detail::same_cluster(nodes[j - 1], nodes[j], rel_tol)) ++j;
    T sum(0);
    for (std::size_t k = i; k < j; ++k) sum += nodes[k];
    T mean = sum / T(static_cast<int>(j - i));
    bool spread = !(nodes[i] == nodes[j - 1]);
    int id = static_cast<int>(c.centre.size());
    c.centre.push_back(spread ? mean : nodes[i]);
    c.orders.push_back(static_cast<int>(j - i) + (spread ? extra_orders : 0));
    for (std::size_t k = i; k < j; ++k) c.cluster_of[k] = id;
    i = j;
  }
  c.offset.resize(c.centre.size());
  int off = 0;
  for (std::size_t k = 0; k < c.centre.size(); ++k) {
    c.offset[k] = off;
    off += c.orders[k];
  }
  c.nbasis = off;
  return c;
}

// Rows i = 0..n-1: functional for f[x_1..x_{i+1}].
template <class T>
Matrix<T> newton_functionals(const NodeClusters<T>& c) {
  const std::size_t n = c.nodes.size();
  const std::size_t nb = static_cast<std::size_t>(c.nbasis);
  std::vector<std::vector<T>> P(n, std::vector<T>(nb, T(0)));
  std::vector<T> dev(n);
  for (std::size_t k = 0; k < n; ++k) {
    int cl = c.cluster_of[k];
    dev[k] = c.nodes[k] - c.centre[cl];
    T pw(1);
    for (int o = 0; o < c.orders[cl]; ++o) {
      P[k][c.offset[cl] + o] = pw;
      pw *= dev[k];
    }
  }
  Matrix<T> A(n, nb);
  for (std::size_t b = 0; b < nb; ++b) A(0, b) = P[0][b];
  for (std::size_t m = 1; m < n; ++m) {
    for (std::size_t k = n - 1; k >= m; --k) {
      int cl = c.cluster_of[k];
      if (c.cluster_of[k - m] == cl) {
        // Taylor form: sum_o h_{o-m}(deviations) e_{(cl,o)}.
        const int ord = c.orders[cl];
        const int len = ord - static_cast<int>(m);
        std::vector<T> h(std::max(len, 0), T(0));
        if (len > 0) {
          h[0] = T(1);
          for (std::size_t r = k - m; r <= k; ++r)
            for (int j = 1; j < len; ++j) h[j] += dev[r] * h[j - 1];
        }
        std::fill(P[k].begin(), P[k].end(), T(0));
        for (int j = 0; j < len; ++j) P[k][c.offset[cl] + static_cast<int>(m) + j] = h[j];
      } else {
        T inv = T(1) / (c.nodes[k] - c.nodes[k - m]);
        for (std::size_t b = 0; b < nb; ++b) P[k][b] = (P[k][b] - P[k - 1][b]) * inv;
      }
      if (k == m) break;
    }
    for (std::size_t b = 0; b < nb; ++b) A(m, b) = P[m][b];
  }
  return A;
}

// Taylor coefficients f_j^{(k)}(x)/k!, k = 0..orders-1.
template <class T>
using TaylorColumn = std::function<std::vector<T>(std::size_t j, const T& x, int orders)>;

// det(f_j(x_i)) / prod_{i<j}(x_i - x_j), valid for coincident nodes.
template <class T>
T confluent_det_ratio(const std::vector<T>& nodes, const TaylorColumn<T>& f, double rel_tol, int extra = 6) {
  const std::size_t n = nodes.size();
  if (n == 0) return T(1);
  auto c = cluster_nodes(nodes, rel_tol, extra);
  Matrix<T> A = newton_functionals(c);
  Matrix<T> Tm(c.nbasis, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t cl = 0; cl < c.centre.size(); ++cl) {
      auto v = f(j, c.centre[cl], c.orders[cl]);
      for (int o = 0; o < c.orders[cl]; ++o) Tm(c.offset[cl] + o, j) = v[o];
    }
  T d = determinant(A * Tm);
  const std::size_t pairs = n * (n - 1) / 2;
  return (pairs % 2 == 1) ? T(-d) : d;
}

// Mixed Taylor coefficients of F(z,w): entry (k,l) = d_z^k d_w^l F / (k! l!).
template <class T>
using TaylorBlock = std::function<Matrix<T>(const T& z, const T& w, int kz, int kw)>;

template <class T>
Matrix<T> confluent_kernel_matrix(const NodeClusters<T>& cz, const NodeClusters<T>& cw, const TaylorBlock<T>& F) {
  Matrix<T> Az = newton_functionals(cz), Aw = newton_functionals(cw);
  Matrix<T> Tm(cz.nbasis, cw.nbasis);
  for (std::size_t a = 0; a < cz.centre.size(); ++a)
    for (std::size_t b = 0; b < cw.centre.size(); ++b) {
      Matrix<T> blk = F(cz.centre[a], cw.centre[b], cz.orders[a], cw.orders[b]);
      for (int k = 0; k < cz.orders[a]; ++k)
        for (int l = 0; l < cw.orders[b]; ++l) Tm(cz.offset[a] + k, cw.offset[b] + l) = blk(k, l);
    }
  return Az * Tm * Aw.transpose();
}

// det(F(z_i,w_j)) / (V(z) V(w)) with V(x) = prod_{i<j}(x_i - x_j).
template <class T>
T confluent_det2(const std::vector<T>& z, const std::vector<T>& w, const TaylorBlock<T>& F, double rel_tol,
                 int extra = 6) {
  if (z.size() != w.size()) throw std::invalid_argument("confluent_det2: size mismatch");
  if (z.empty()) return T(1);
  auto cz = cluster_nodes(z, rel_tol, extra);
  auto cw = cluster_nodes(w, rel_tol, extra);
  return determinant(confluent_kernel_matrix(cz, cw, F));
}

// Pf(F(x_i,x_j)) / det(L), where L is the Newton change of basis; the same
// factor appears for every kernel on the same nodes, so ratios of two calls
// give the ratio of Pfaffians.  For odd n the matrix is bordered by the
// column g(x_i) and a final zero diagonal entry.
template <class T>
T confluent_pfaffian(const std::vector<T>& x, const TaylorBlock<T>& F, const TaylorColumn<T>* border,
                     double rel_tol, int extra = 6) {
  const std::size_t n = x.size();
  auto c = cluster_nodes(x, rel_tol, extra);
  Matrix<T> D = confluent_kernel_matrix(c, c, F);
  for (std::size_t i = 0; i < n; ++i) {
    D(i, i) = T(0);
    for (std::size_t j = i + 1; j < n; ++j) {
      T s = (D(i, j) - D(j, i)) / T(2);
      D(i, j) = s;
      D(j, i) = -s;
    }
  }
  if (n % 2 == 0) return pfaffian(D);
  if (border == nullptr) throw std::invalid_argument("confluent_pfaffian: odd order needs a border column");
  Matrix<T> A = newton_functionals(c);
  std::vector<T> coeff(c.nbasis, T(0));
  for (std::size_t cl = 0; cl < c.centre.size(); ++cl) {
    auto v = (*border)(0, c.centre[cl], c.orders[cl]);
    for (int o = 0; o < c.orders[cl]; ++o) coeff[c.offset[cl] + o] = v[o];
  }
  Matrix<T> B(n + 1, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) B(i, j) = D(i, j);
    T g(0);
    for (int b = 0; b < c.nbasis; ++b) g += A(i, b) * coeff[b];
    B(i, n) = g;
    B(n, i) = -g;
  }
  return pfaffian(B);
}

}  // namespace ipl
