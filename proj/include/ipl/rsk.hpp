#pragma once

#include "ipl/combinatorics.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <utility>
#include <vector>

namespace ipl {

struct LocalMove {
  char kind;  // 'a' or 'b'
  int i, j;
  bool operator==(const LocalMove& o) const { return kind == o.kind && i == o.i && j == o.j; }
};
using LocalMoveTrace = std::vector<LocalMove>;

using IntMatrix = std::vector<std::vector<long>>;

struct ClassicalRsk {
  GTPattern<long> p;  // height n (columns of w)
  GTPattern<long> q;  // height m (rows of w)
  std::vector<long> shape;
};

ClassicalRsk classical_rsk(const IntMatrix& w);
// z_{k,j} = number of entries <= k in row j of a semistandard tableau.
GTPattern<long> tableau_to_gt(const std::vector<std::vector<long>>& rows, int height);
// Rectangle array assembled from the two patterns along the diagonals.
IntMatrix glued_matrix(const ClassicalRsk& r, int m, int n);

template <class T>
PolyArray<T> pl_from_matrix(const std::vector<std::vector<T>>& w) {
  return PolyArray<T>::from_rows(w);
}

namespace detail {

template <class T>
T grsk_up_left(const PolyArray<T>& w, int i, int j) {
  if (i == 1 && j == 1) return T(1);
  return w.get(i - 1, j, T(0)) + w.get(i, j - 1, T(0));
}

template <class T>
void move_a(PolyArray<T>& w, int i, int j) {
  w(i, j) = w(i, j) * grsk_up_left(w, i, j);
}

template <class T>
void move_a_inv(PolyArray<T>& w, int i, int j) {
  w(i, j) = w(i, j) / grsk_up_left(w, i, j);
}

template <class T>
void move_b(PolyArray<T>& w, int i, int j) {
  T down_right = T(1) / w(i + 1, j) + T(1) / w(i, j + 1);
  w(i, j) = grsk_up_left(w, i, j) / (w(i, j) * down_right);
}

// Moves of rho_{i,j}: a at (i,j) then b down the diagonal.
inline void rho_moves(int i, int j, LocalMoveTrace& out) {
  out.push_back({'a', i, j});
  for (int k = 1; i - k >= 1 && j - k >= 1; ++k) out.push_back({'b', i - k, j - k});
}

template <class T>
void apply_grsk_moves(PolyArray<T>& w, const LocalMoveTrace& moves) {
  for (const auto& mv : moves) {
    if (mv.kind == 'a')
      move_a(w, mv.i, mv.j);
    else
      move_b(w, mv.i, mv.j);
  }
}

template <class T>
T pl_up_left(const PolyArray<T>& w, int i, int j) {
  if (i == 1 && j == 1) return T(0);
  if (i == 1) return w(i, j - 1);
  if (j == 1) return w(i - 1, j);
  return std::max(w(i - 1, j), w(i, j - 1));
}

template <class T>
void apply_pl_moves(PolyArray<T>& w, const LocalMoveTrace& moves) {
  for (const auto& mv : moves) {
    int i = mv.i, j = mv.j;
    if (mv.kind == 'a')
      w(i, j) = pl_up_left(w, i, j) + w(i, j);
    else
      w(i, j) = pl_up_left(w, i, j) + std::min(w(i + 1, j), w(i, j + 1)) - w(i, j);
  }
}

}  // namespace detail

// Local moves performed when entries are inserted in the given order.
// Every prefix of `order` must be a Young shape.
LocalMoveTrace insertion_trace(const std::vector<std::pair<int, int>>& order);
LocalMoveTrace row_major_trace(const YoungShape& s);

template <class T>
PolyArray<T> grsk(const PolyArray<T>& w, LocalMoveTrace* trace = nullptr) {
  for (auto [i, j] : w.shape().indices())
    if (!(w(i, j) > T(0))) throw std::invalid_argument("grsk: entries must be positive");
  LocalMoveTrace moves = row_major_trace(w.shape());
  PolyArray<T> t = w;
  detail::apply_grsk_moves(t, moves);
  if (trace) *trace = std::move(moves);
  return t;
}

template <class T>
PolyArray<T> grsk_with_order(const PolyArray<T>& w, const std::vector<std::pair<int, int>>& order) {
  PolyArray<T> t = w;
  detail::apply_grsk_moves(t, insertion_trace(order));
  return t;
}

template <class T>
PolyArray<T> grsk_inverse(const PolyArray<T>& t) {
  LocalMoveTrace moves = row_major_trace(t.shape());
  PolyArray<T> w = t;
  for (auto it = moves.rbegin(); it != moves.rend(); ++it) {
    if (it->kind == 'a')
      detail::move_a_inv(w, it->i, it->j);
    else
      detail::move_b(w, it->i, it->j);
  }
  return w;
}

template <class T>
PolyArray<T> rsk_pl(const PolyArray<T>& w, LocalMoveTrace* trace = nullptr) {
  LocalMoveTrace moves = row_major_trace(w.shape());
  PolyArray<T> t = w;
  detail::apply_pl_moves(t, moves);
  if (trace) *trace = std::move(moves);
  return t;
}

template <class T>
PolyArray<T> rsk_pl_with_order(const PolyArray<T>& w, const std::vector<std::pair<int, int>>& order) {
  PolyArray<T> t = w;
  detail::apply_pl_moves(t, insertion_trace(order));
  return t;
}

template <class T>
PolyArray<T> rsk_pl_inverse(const PolyArray<T>& t) {
  LocalMoveTrace moves = row_major_trace(t.shape());
  PolyArray<T> w = t;
  for (auto it = moves.rbegin(); it != moves.rend(); ++it) {
    int i = it->i, j = it->j;
    if (it->kind == 'a')
      w(i, j) = w(i, j) - detail::pl_up_left(w, i, j);
    else
      detail::apply_pl_moves(w, {*it});
  }
  return w;
}

template <class T>
bool is_symmetric(const PolyArray<T>& w) {
  if (!(w.shape() == w.shape().transpose())) return false;
  for (auto [i, j] : w.shape().indices())
    if (!(w(i, j) == w(j, i))) return false;
  return true;
}

template <class T>
PolyArray<T> grsk_symmetric(const PolyArray<T>& w) {
  if (!is_symmetric(w)) throw std::invalid_argument("grsk_symmetric: input not symmetric");
  return grsk(w);
}

template <class T>
PolyArray<T> rsk_pl_symmetric(const PolyArray<T>& w) {
  if (!is_symmetric(w)) throw std::invalid_argument("rsk_pl_symmetric: input not symmetric");
  return rsk_pl(w);
}

// Sum over directed paths (1,1)->(m,n) of weight products.
template <class T>
T path_sum(const PolyArray<T>& w, int m, int n) {
  std::vector<std::vector<T>> z(m + 1, std::vector<T>(n + 1, T(0)));
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= n; ++j) {
      if (!w.shape().contains(i, j)) continue;
      T prev = (i == 1 && j == 1) ? T(1) : z[i - 1][j] + z[i][j - 1];
      z[i][j] = prev * w(i, j);
    }
  return z[m][n];
}

// Max over directed paths (1,1)->(m,n) of weight sums.
template <class T>
T path_max(const PolyArray<T>& w, int m, int n) {
  std::vector<std::vector<T>> z(m + 1, std::vector<T>(n + 1, T(0)));
  std::vector<std::vector<bool>> ok(m + 1, std::vector<bool>(n + 1, false));
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= n; ++j) {
      if (!w.shape().contains(i, j)) continue;
      T prev(0);
      if (!(i == 1 && j == 1)) {
        bool have = false;
        if (ok[i - 1][j]) { prev = z[i - 1][j]; have = true; }
        if (ok[i][j - 1] && (!have || z[i][j - 1] > prev)) prev = z[i][j - 1];
      }
      z[i][j] = prev + w(i, j);
      ok[i][j] = true;
    }
  return z[m][n];
}

template <class T>
T rel_dev(const T& a, const T& b) {
  T d = a - b;
  if (d < T(0)) d = -d;
  T s = b < T(0) ? T(-b) : b;
  return s > T(1) ? T(d / s) : d;
}

// Residuals of the gRSK properties: path sums on border indices, the two
// product type identities, and the energy identity. Zero in exact arithmetic.
template <class T>
std::array<T, 3> grsk_property_residuals(const PolyArray<T>& w, const PolyArray<T>& t) {
  std::array<T, 3> r{T(0), T(0), T(0)};
  const auto& s = w.shape();
  auto upd = [](T& acc, const T& v) {
    if (v > acc) acc = v;
  };
  for (auto [m, n] : s.indices()) {
    if (!s.is_border(m, n)) continue;
    upd(r[0], rel_dev<T>(t(m, n), path_sum(w, m, n)));
    if (!s.contains(m, n + 1)) {
      T prod(1);
      for (int j = 1; j <= n; ++j) prod *= w(m, j);
      upd(r[1], rel_dev<T>(diag_prod(t, n - m) / diag_prod(t, n - m + 1), prod));
    }
    if (!s.contains(m + 1, n)) {
      T prod(1);
      for (int i = 1; i <= m; ++i) prod *= w(i, n);
      upd(r[1], rel_dev<T>(diag_prod(t, n - m) / diag_prod(t, n - m - 1), prod));
    }
  }
  T inv(0);
  for (auto [i, j] : s.indices()) inv += T(1) / w(i, j);
  upd(r[2], rel_dev<T>(energy(t), inv));
  return r;
}

// Residuals of the piecewise-linear RSK properties: LPP on border indices,
// additive type identities, the min identity; the flag reports the ordering
// when all inputs are nonnegative (true when not applicable).
template <class T>
std::array<T, 3> pl_property_residuals(const PolyArray<T>& w, const PolyArray<T>& t, bool* ordered = nullptr) {
  std::array<T, 3> r{T(0), T(0), T(0)};
  const auto& s = w.shape();
  auto upd = [](T& acc, const T& v) {
    if (v > acc) acc = v;
  };
  for (auto [m, n] : s.indices()) {
    if (!s.is_border(m, n)) continue;
    upd(r[0], rel_dev<T>(t(m, n), path_max(w, m, n)));
    if (!s.contains(m, n + 1)) {
      T sum(0);
      for (int j = 1; j <= n; ++j) sum += w(m, j);
      upd(r[1], rel_dev<T>(diag_sum(t, n - m) - diag_sum(t, n - m + 1), sum));
    }
    if (!s.contains(m + 1, n)) {
      T sum(0);
      for (int i = 1; i <= m; ++i) sum += w(i, n);
      upd(r[1], rel_dev<T>(diag_sum(t, n - m) - diag_sum(t, n - m - 1), sum));
    }
  }
  T lhs = t(1, 1), wmin = w(1, 1);
  bool nonneg = true;
  for (auto [i, j] : s.indices()) {
    if (i > 1) lhs = std::min(lhs, T(t(i, j) - t(i - 1, j)));
    if (j > 1) lhs = std::min(lhs, T(t(i, j) - t(i, j - 1)));
    wmin = std::min(wmin, w(i, j));
    if (w(i, j) < T(0)) nonneg = false;
  }
  upd(r[2], rel_dev<T>(lhs, wmin));
  if (ordered) {
    bool ok = true;
    if (nonneg) {
      if (t(1, 1) < T(0)) ok = false;
      for (auto [i, j] : s.indices()) {
        if (i > 1 && t(i - 1, j) > t(i, j)) ok = false;
        if (j > 1 && t(i, j - 1) > t(i, j)) ok = false;
      }
    }
    *ordered = ok;
  }
  return r;
}

// Determinant of the finite-difference Jacobian of log t in log w.
double grsk_log_jacobian(const PolyArray<double>& w, double h = 1e-6);
// Determinant of the finite-difference Jacobian of rsk_pl.
double rsk_pl_jacobian(const PolyArray<double>& w, double h = 1e-7);

// Sup-norm of eps*log(gRSK(exp(w/eps))) - rsk_pl(w), evaluated at `bits` precision.
std::vector<double> tropicalization_check(const PolyArray<double>& w, const std::vector<double>& eps_list,
                                          unsigned bits = 512);

}  // namespace ipl
