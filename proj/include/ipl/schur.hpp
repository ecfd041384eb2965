#pragma once

#include "ipl/combinatorics.hpp"
#include "ipl/divdiff.hpp"

#include <type_traits>

namespace ipl {

template <class T>
double default_rel_tol() {
  return std::is_same_v<T, Rational> ? 0.0 : kConfluentRelTol;
}

template <class T>
T ipow(const T& a, long e) {
  if (e < 0) return T(1) / ipow(a, -e);
  T r(1), b(a);
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

namespace detail {

// Sum over rows interlacing below `row` (length k) of a_k^{|row| - |below|} * rec(below).
template <class T>
T gt_sum(const std::vector<long>& row, const std::vector<T>& a) {
  const std::size_t k = row.size();
  if (k == 0) return T(1);
  long total = 0;
  for (long v : row) total += v;
  std::vector<long> below(k - 1);
  T acc(0);
  std::function<void(std::size_t, long)> rec = [&](std::size_t j, long sum) {
    if (j == k - 1) {
      acc += ipow(a[k - 1], total - sum) * gt_sum(below, a);
      return;
    }
    for (long v = row[j + 1]; v <= row[j]; ++v) {
      below[j] = v;
      rec(j + 1, sum + v);
    }
  };
  rec(0, 0);
  return acc;
}

// Symplectic pattern rows: row i has ceil(i/2) entries, wall at 0.
template <class T>
T spgt_sum(const std::vector<long>& row, int i, const std::vector<T>& a) {
  if (i == 0) return T(1);
  long total = 0;
  for (long v : row) total += v;
  const int below_len = i / 2;  // ceil((i-1)/2)
  std::vector<long> below(below_len);
  T acc(0);
  std::function<void(int, long)> rec = [&](int j, long sum) {
    if (j == below_len) {
      long t = total - sum;
      // type_i enters with sign + for odd i, - for even i, on variable ceil(i/2)
      int var = (i + 1) / 2 - 1;
      long e = (i % 2 == 1) ? t : -t;
      acc += ipow(a[var], e) * spgt_sum(below, i - 1, a);
      return;
    }
    long lo = (j + 1 < static_cast<int>(row.size())) ? row[j + 1] : 0;
    for (long v = lo; v <= row[j]; ++v) {
      below[j] = v;
      rec(j + 1, sum + v);
    }
  };
  rec(0, 0);
  return acc;
}

// Complete homogeneous symmetric polynomials h_0..h_K.
template <class T>
std::vector<T> complete_homogeneous(const std::vector<T>& x, int K) {
  std::vector<T> h(K + 1, T(0));
  h[0] = T(1);
  for (const auto& xi : x)
    for (int k = 1; k <= K; ++k) h[k] += xi * h[k - 1];
  return h;
}

}  // namespace detail

// Sum over Gelfand-Tsetlin patterns (oracle; small shapes only).
template <class T>
T schur_gt(const Partition& lam, const std::vector<T>& a) {
  const int n = static_cast<int>(a.size());
  if (lam.length() > n) return T(0);
  auto row = lam.padded(n);
  return detail::gt_sum(std::vector<long>(row.begin(), row.end()), a);
}

template <class T>
T sp_gt(const Partition& lam, const std::vector<T>& a) {
  const int n = static_cast<int>(a.size());
  if (lam.length() > n) return T(0);
  for (const auto& x : a)
    if (x == T(0)) throw std::invalid_argument("sp_gt: variables must be nonzero");
  auto row = lam.padded(n);
  return detail::spgt_sum(std::vector<long>(row.begin(), row.end()), 2 * n, a);
}

// Weyl ratio det(a_i^{l_j+n-j}) / prod_{i<j}(a_i - a_j) for weakly decreasing
// integer l; coincident variables go through confluent divided differences.
template <class T>
T schur_det(const std::vector<int>& lam, const std::vector<T>& a, double rel_tol = default_rel_tol<T>()) {
  const std::size_t n = a.size();
  if (lam.size() > n) {
    for (std::size_t i = n; i < lam.size(); ++i)
      if (lam[i] != 0) return T(0);
  }
  std::vector<long> l(n, 0);
  for (std::size_t i = 0; i < std::min(n, lam.size()); ++i) l[i] = lam[i];
  for (std::size_t i = 1; i < n; ++i)
    if (l[i] > l[i - 1]) throw std::invalid_argument("schur_det: exponents not weakly decreasing");
  if (n == 0) return T(1);
  long shift = l[n - 1] < 0 ? -l[n - 1] : 0;
  std::vector<long> m(n);
  for (std::size_t j = 0; j < n; ++j) m[j] = l[j] + shift + static_cast<long>(n - 1 - j);
  TaylorColumn<T> f = [&](std::size_t j, const T& x, int orders) {
    std::vector<T> c(orders, T(0));
    // binom(m,k) x^{m-k}
    T binom(1);
    for (int k = 0; k < orders && k <= m[j]; ++k) {
      c[k] = binom * ipow(x, m[j] - k);
      binom = binom * T(static_cast<int>(m[j] - k)) / T(k + 1);
    }
    return c;
  };
  T v = confluent_det_ratio(a, f, rel_tol);
  if (shift) {
    T prod(1);
    for (const auto& x : a) prod *= x;
    v *= ipow(prod, -shift);
  }
  return v;
}

template <class T>
T schur_det(const Partition& lam, const std::vector<T>& a, double rel_tol = default_rel_tol<T>()) {
  return schur_det(lam.parts(), a, rel_tol);
}

// Jacobi-Trudi det(h_{l_i - i + j}); exact and cheap for many partitions.
template <class T>
T schur_jt(const Partition& lam, const std::vector<T>& h) {
  const int L = lam.length();
  Matrix<T> M(L, L);
  for (int i = 0; i < L; ++i)
    for (int j = 0; j < L; ++j) {
      int k = lam[i] - i + j;
      M(i, j) = (k >= 0 && k < static_cast<int>(h.size())) ? h[k] : T(0);
    }
  return determinant(M);
}

template <class T>
T schur_jt_vars(const Partition& lam, const std::vector<T>& a) {
  if (lam.length() > static_cast<int>(a.size())) return T(0);
  return schur_jt(lam, detail::complete_homogeneous(a, lam[0] + lam.length()));
}

// sp_l(a) = det(g_{m_j}(y_i)) / prod_{i<j}(y_i - y_j), y = a + 1/a, g_m = U_{m-1}(y/2),
// m_j = l_j + n - j + 1. Polynomial in y, hence valid for any nonzero a.
template <class T>
T sp_yform(const Partition& lam, const std::vector<T>& a, double rel_tol = default_rel_tol<T>()) {
  const std::size_t n = a.size();
  if (lam.length() > static_cast<int>(n)) return T(0);
  std::vector<T> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] == T(0)) throw std::invalid_argument("sp: variables must be nonzero");
    y[i] = a[i] + T(1) / a[i];
  }
  auto l = lam.padded(static_cast<int>(n));
  std::vector<int> m(n);
  for (std::size_t j = 0; j < n; ++j) m[j] = l[j] + static_cast<int>(n - j);
  // Taylor series of g_m about x from g_{m+1} = y g_m - g_{m-1}.
  TaylorColumn<T> f = [&](std::size_t j, const T& x, int orders) {
    std::vector<T> prev(orders, T(0)), cur(orders, T(0));
    cur[0] = T(1);
    for (int k = 1; k < m[j]; ++k) {
      std::vector<T> nx(orders, T(0));
      for (int d = 0; d < orders; ++d) {
        nx[d] = x * cur[d] - prev[d];
        if (d > 0) nx[d] += cur[d - 1];
      }
      prev.swap(cur);
      cur.swap(nx);
    }
    return cur;
  };
  return confluent_det_ratio(y, f, rel_tol);
}

// Weyl character formula; falls back to the y-form at non-generic points.
template <class T>
T sp_det(const Partition& lam, const std::vector<T>& a, double rel_tol = default_rel_tol<T>()) {
  const std::size_t n = a.size();
  if (lam.length() > static_cast<int>(n)) return T(0);
  bool generic = true;
  for (std::size_t i = 0; i < n && generic; ++i) {
    if (a[i] == T(0)) throw std::invalid_argument("sp_det: variables must be nonzero");
    if (a[i] == T(1) || a[i] == T(-1)) generic = false;
    for (std::size_t j = i + 1; j < n; ++j)
      if (a[i] == a[j] || a[i] * a[j] == T(1)) generic = false;
  }
  if (!generic || !std::is_same_v<T, Rational>) return sp_yform(lam, a, rel_tol);
  auto l = lam.padded(static_cast<int>(n));
  Matrix<T> M(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      long m = l[j] + static_cast<long>(n - j);
      M(i, j) = ipow(a[i], m) - ipow(a[i], -m);
    }
  T den(1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) den *= (a[i] - a[j]) * (a[i] * a[j] - T(1));
    den *= (a[i] * a[i] - T(1)) * ipow(a[i], -static_cast<long>(n));
  }
  return determinant(M) / den;
}

// Continuous Schur functions (real parameters).
double schur_cont(const std::vector<double>& alpha, const std::vector<double>& x);
double sp_cont(const std::vector<double>& alpha, const std::vector<double>& x);

enum class CauchyKind { DiscreteStd, ContStd, DiscreteSp, ContSp };
CauchyKind parse_cauchy_kind(const std::string& s);

struct CauchyResult {
  double lhs = 0, rhs = 0;
  double residual = 0;    // |lhs - rhs| / |rhs|
  double tail_bound = 0;  // certified relative bound on the truncated tail (discrete)
  double excess = 0;      // max(0, residual - tail_bound)
  long terms = 0;
};

// Discrete kinds: first/second are (p, q); continuous kinds: (alpha, beta).
// Lambda caps the first part in discrete sums.
CauchyResult cauchy_check(CauchyKind kind, const std::vector<double>& first, const std::vector<double>& second,
                          int Lambda = 60);

}  // namespace ipl
