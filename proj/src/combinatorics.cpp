#include "ipl/combinatorics.hpp"

#include <algorithm>

namespace ipl {

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i] < 0) throw std::invalid_argument("Partition: negative part");
    if (i > 0 && parts_[i] > parts_[i - 1]) throw std::invalid_argument("Partition: parts not weakly decreasing");
  }
  while (!parts_.empty() && parts_.back() == 0) parts_.pop_back();
}

int Partition::size() const {
  int s = 0;
  for (int p : parts_) s += p;
  return s;
}

std::vector<int> Partition::padded(int n) const {
  if (length() > n) throw std::invalid_argument("Partition::padded: too many parts");
  std::vector<int> v(parts_);
  v.resize(n, 0);
  return v;
}


void for_each_partition(int max_len, int max_part, const std::function<void(const std::vector<int>&)>& f) {
  if (max_len <= 0) {
    f({});
    return;
  }
  // Last part varies slowest; cur stays weakly decreasing.
  std::vector<int> cur(max_len, 0);
  std::function<void(int, int)> rec = [&](int pos, int lo) {
    if (pos < 0) {
      f(cur);
      return;
    }
    for (int v = lo; v <= max_part; ++v) {
      cur[pos] = v;
      rec(pos - 1, v);
    }
  };
  rec(max_len - 1, 0);
}

std::vector<Partition> partitions_in_box(int max_len, int max_part) {
  std::vector<Partition> out;
  for_each_partition(max_len, max_part, [&](const std::vector<int>& p) { out.emplace_back(p); });
  return out;
}

YoungShape::YoungShape(std::vector<int> row_lengths) : rows_(std::move(row_lengths)) {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i] <= 0) throw std::invalid_argument("YoungShape: row lengths must be positive");
    if (i > 0 && rows_[i] > rows_[i - 1]) throw std::invalid_argument("YoungShape: rows not weakly decreasing");
  }
}

YoungShape YoungShape::rectangle(int m, int n) { return YoungShape(std::vector<int>(m, n)); }

YoungShape YoungShape::flat(int N) {
  std::vector<int> r;
  for (int i = 1; i <= 2 * N; ++i) r.push_back(2 * N + 1 - i);
  return YoungShape(r);
}

YoungShape YoungShape::half_flat(int N) {
  std::vector<int> r;
  for (int i = 1; i <= N; ++i) r.push_back(2 * N + 1 - i);
  return YoungShape(r);
}

int YoungShape::col_length(int j) const {
  int c = 0;
  for (int r : rows_)
    if (r >= j) ++c;
  return c;
}

int YoungShape::size() const {
  int s = 0;
  for (int r : rows_) s += r;
  return s;
}

std::vector<std::pair<int, int>> YoungShape::indices() const {
  std::vector<std::pair<int, int>> v;
  for (int i = 1; i <= num_rows(); ++i)
    for (int j = 1; j <= rows_[i - 1]; ++j) v.emplace_back(i, j);
  return v;
}

std::vector<std::pair<int, int>> YoungShape::outer_indices() const {
  std::vector<std::pair<int, int>> v;
  for (auto [i, j] : indices())
    if (is_outer(i, j)) v.emplace_back(i, j);
  return v;
}

YoungShape YoungShape::remove(int i, int j) const {
  if (!is_outer(i, j)) throw std::invalid_argument("YoungShape::remove: not an outer index");
  std::vector<int> r(rows_);
  r[i - 1] -= 1;
  if (r[i - 1] == 0) r.pop_back();
  return YoungShape(r);
}

YoungShape YoungShape::transpose() const {
  std::vector<int> c;
  int n = rows_.empty() ? 0 : rows_[0];
  for (int j = 1; j <= n; ++j) c.push_back(col_length(j));
  return YoungShape(c);
}

double triangle_energy(const GTPattern<double>& z) {
  double e = 0;
  for (int i = 1; i < z.height(); ++i)
    for (int j = 1; j <= i; ++j) {
      double zij = z.rows[i - 1][j - 1];
      e += z.rows[i][j] / zij + zij / z.rows[i][j - 1];
    }
  return e;
}

double half_triangle_energy(const SpGTPattern<double>& z) {
  auto at = [&](int i, int j) { return j <= (i + 1) / 2 ? z.rows[i - 1][j - 1] : 1.0; };
  double e = 0;
  for (int i = 1; i < z.height(); ++i)
    for (int j = 1; j <= (i + 1) / 2; ++j) e += at(i + 1, j + 1) / at(i, j) + at(i, j) / at(i + 1, j);
  return e;
}

std::vector<double> gtype(const GTPattern<double>& z) {
  std::vector<double> g;
  double prev = 1;
  for (const auto& r : z.rows) {
    double p = row_prod(r);
    g.push_back(p / prev);
    prev = p;
  }
  return g;
}

}  // namespace ipl

#include "ipl/geometry.hpp"

namespace ipl {

Geometry parse_geometry(const std::string& s) {
  if (s == "flat") return Geometry::Flat;
  if (s == "half-flat" || s == "halfflat" || s == "half_flat") return Geometry::HalfFlat;
  if (s == "restricted") return Geometry::Restricted;
  throw std::invalid_argument("unknown geometry '" + s + "' (expected flat, half-flat or restricted)");
}

std::string to_string(Geometry g) {
  switch (g) {
    case Geometry::Flat: return "flat";
    case Geometry::HalfFlat: return "half-flat";
    case Geometry::Restricted: return "restricted";
  }
  return "";
}

bool in_lattice(Geometry g, int N, int i, int j) {
  if (i < 1 || j < 1 || i + j > 2 * N + 1) return false;
  if (g == Geometry::HalfFlat) return i <= N;
  if (g == Geometry::Restricted) return i <= j;
  return true;
}

std::vector<std::pair<int, int>> lattice_sites(Geometry g, int N) {
  std::vector<std::pair<int, int>> s;
  for (int i = 1; i <= 2 * N; ++i)
    for (int j = 1; i + j <= 2 * N + 1; ++j)
      if (in_lattice(g, N, i, j)) s.emplace_back(i, j);
  return s;
}

YoungShape lattice_shape(Geometry g, int N) {
  return g == Geometry::HalfFlat ? YoungShape::half_flat(N) : YoungShape::flat(N);
}

SiteParams site_params(Geometry g, int N, int i, int j) {
  if (!in_lattice(g, N, i, j)) throw std::out_of_range("site outside the lattice");
  if (g == Geometry::Restricted) {
    if (i == j) return {SiteParams::Diag, i - 1, i - 1};
    if (j <= N) return {SiteParams::AA, i - 1, j - 1};
    return {SiteParams::AA, i - 1, 2 * N - j};
  }
  if (i <= N && j <= N) return {SiteParams::Cross, i - 1, j - 1};
  if (i <= N) return {SiteParams::AA, i - 1, 2 * N - j};
  return {SiteParams::BB, 2 * N - i, j - 1};
}

}  // namespace ipl
