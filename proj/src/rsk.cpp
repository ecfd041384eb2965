#include "ipl/rsk.hpp"

#include <map>

namespace ipl {

namespace {

// Row insertion of x into tableau p; returns the row index where a box was added.
std::size_t row_insert(std::vector<std::vector<long>>& p, long x) {
  for (std::size_t r = 0;; ++r) {
    if (r == p.size()) {
      p.push_back({x});
      return r;
    }
    auto& row = p[r];
    auto it = std::upper_bound(row.begin(), row.end(), x);
    if (it == row.end()) {
      row.push_back(x);
      return r;
    }
    std::swap(*it, x);
  }
}

}  // namespace

GTPattern<long> tableau_to_gt(const std::vector<std::vector<long>>& t, int height) {
  GTPattern<long> g;
  for (int k = 1; k <= height; ++k) {
    std::vector<long> row(k, 0);
    for (int r = 0; r < k && r < static_cast<int>(t.size()); ++r)
      row[r] = std::upper_bound(t[r].begin(), t[r].end(), static_cast<long>(k)) - t[r].begin();
    g.rows.push_back(row);
  }
  return g;
}

ClassicalRsk classical_rsk(const IntMatrix& w) {
  const int m = static_cast<int>(w.size());
  const int n = m ? static_cast<int>(w[0].size()) : 0;
  std::vector<std::vector<long>> p, q;
  for (int i = 1; i <= m; ++i) {
    if (static_cast<int>(w[i - 1].size()) != n) throw std::invalid_argument("classical_rsk: ragged matrix");
    for (int j = 1; j <= n; ++j) {
      long c = w[i - 1][j - 1];
      if (c < 0) throw std::invalid_argument("classical_rsk: negative entry");
      for (long k = 0; k < c; ++k) {
        std::size_t r = row_insert(p, j);
        if (r == q.size()) q.emplace_back();
        q[r].push_back(i);
      }
    }
  }
  ClassicalRsk out;
  out.p = tableau_to_gt(p, n);
  out.q = tableau_to_gt(q, m);
  for (auto& r : p) out.shape.push_back(static_cast<long>(r.size()));
  return out;
}

IntMatrix glued_matrix(const ClassicalRsk& r, int m, int n) {
  IntMatrix t(m, std::vector<long>(n, 0));
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= n; ++j) {
      int k = std::min(m - i, n - j);
      if (i + k == m)
        t[i - 1][j - 1] = r.p.rows[j + k - 1][k];
      else
        t[i - 1][j - 1] = r.q.rows[i + k - 1][k];
    }
  return t;
}

LocalMoveTrace insertion_trace(const std::vector<std::pair<int, int>>& order) {
  std::map<int, int> row_len;
  LocalMoveTrace moves;
  for (auto [i, j] : order) {
    int have = row_len[i];
    int above = i == 1 ? std::numeric_limits<int>::max() : row_len[i - 1];
    if (have != j - 1 || j > above) throw std::invalid_argument("insertion order does not grow a Young shape");
    row_len[i] = j;
    detail::rho_moves(i, j, moves);
  }
  return moves;
}

LocalMoveTrace row_major_trace(const YoungShape& s) { return insertion_trace(s.indices()); }

namespace {

template <class F>
double fd_jacobian(const PolyArray<double>& w, double h, F map) {
  auto idx = w.shape().indices();
  const std::size_t n = idx.size();
  Matrix<double> J(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    PolyArray<double> wp = w, wm = w;
    auto [i, j] = idx[c];
    map.perturb(wp(i, j), h);
    map.perturb(wm(i, j), -h);
    PolyArray<double> tp = map(wp), tm = map(wm);
    for (std::size_t r = 0; r < n; ++r) {
      auto [a, b] = idx[r];
      J(r, c) = (map.coord(tp(a, b)) - map.coord(tm(a, b))) / (2 * h);
    }
  }
  return determinant(J);
}

struct LogGrsk {
  void perturb(double& x, double h) const { x *= std::exp(h); }
  double coord(double x) const { return std::log(x); }
  PolyArray<double> operator()(const PolyArray<double>& w) const { return grsk(w); }
};

struct LinPl {
  void perturb(double& x, double h) const { x += h; }
  double coord(double x) const { return x; }
  PolyArray<double> operator()(const PolyArray<double>& w) const { return rsk_pl(w); }
};

}  // namespace

double grsk_log_jacobian(const PolyArray<double>& w, double h) { return fd_jacobian(w, h, LogGrsk{}); }
double rsk_pl_jacobian(const PolyArray<double>& w, double h) { return fd_jacobian(w, h, LinPl{}); }

std::vector<double> tropicalization_check(const PolyArray<double>& w, const std::vector<double>& eps_list,
                                          unsigned bits) {
  const unsigned digits = static_cast<unsigned>(bits * 0.30103) + 1;
  BigReal::default_precision(digits);
  PolyArray<double> ref = rsk_pl(w);
  std::vector<double> out;
  for (double eps : eps_list) {
    BigReal e(eps);
    PolyArray<BigReal> g(w.shape());
    for (auto [i, j] : w.shape().indices()) g(i, j) = exp(BigReal(w(i, j)) / e);
    PolyArray<BigReal> t = grsk(g);
    double dev = 0;
    for (auto [i, j] : w.shape().indices()) {
      BigReal d = e * log(t(i, j)) - BigReal(ref(i, j));
      dev = std::max(dev, std::fabs(d.convert_to<double>()));
    }
    out.push_back(dev);
  }
  return out;
}

}  // namespace ipl
