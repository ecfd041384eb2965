#pragma once

#include "ipl/linalg.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ipl {

// Weakly decreasing nonnegative parts; trailing zeros are dropped.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<int> parts);

  const std::vector<int>& parts() const { return parts_; }
  int length() const { return static_cast<int>(parts_.size()); }
  int size() const;
  int operator[](std::size_t i) const { return i < parts_.size() ? parts_[i] : 0; }
  // Parts padded with zeros to n entries.
  std::vector<int> padded(int n) const;
  bool operator==(const Partition& o) const { return parts_ == o.parts_; }

 private:
  std::vector<int> parts_;
};

// Calls f for every partition with at most `max_len` parts, each <= `max_part`,
// in colexicographic order of the padded part vector.
void for_each_partition(int max_len, int max_part, const std::function<void(const std::vector<int>&)>& f);
std::vector<Partition> partitions_in_box(int max_len, int max_part);

// Index set of a Young diagram, 1-based (i,j).
class YoungShape {
 public:
  YoungShape() = default;
  explicit YoungShape(std::vector<int> row_lengths);
  static YoungShape rectangle(int m, int n);
  // { (i,j) : i + j <= 2N + 1 }.
  static YoungShape flat(int N);
  // { (i,j) : i + j <= 2N + 1, i <= N }.
  static YoungShape half_flat(int N);

  const std::vector<int>& rows() const { return rows_; }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  int row_length(int i) const { return (i >= 1 && i <= num_rows()) ? rows_[i - 1] : 0; }
  int col_length(int j) const;
  bool contains(int i, int j) const { return i >= 1 && j >= 1 && i <= num_rows() && j <= rows_[i - 1]; }
  bool is_border(int i, int j) const { return contains(i, j) && !contains(i + 1, j + 1); }
  bool is_outer(int i, int j) const { return contains(i, j) && !contains(i + 1, j) && !contains(i, j + 1); }
  int size() const;
  std::vector<std::pair<int, int>> indices() const;  // row-major
  std::vector<std::pair<int, int>> outer_indices() const;
  YoungShape remove(int i, int j) const;  // requires is_outer
  YoungShape transpose() const;
  bool operator==(const YoungShape& o) const { return rows_ == o.rows_; }

 private:
  std::vector<int> rows_;
};

template <class T>
class PolyArray {
 public:
  PolyArray() = default;
  explicit PolyArray(YoungShape s, const T& fill = T(0)) : shape_(std::move(s)) {
    for (int r : shape_.rows()) v_.emplace_back(r, fill);
  }
  static PolyArray from_rows(const std::vector<std::vector<T>>& rows) {
    std::vector<int> len;
    for (auto& r : rows) len.push_back(static_cast<int>(r.size()));
    PolyArray a{YoungShape(len)};
    a.v_ = rows;
    return a;
  }

  const YoungShape& shape() const { return shape_; }
  T& operator()(int i, int j) { return v_[i - 1][j - 1]; }
  const T& operator()(int i, int j) const { return v_[i - 1][j - 1]; }
  // Value at (i,j) or `outside` when the index is not in the shape.
  T get(int i, int j, const T& outside) const { return shape_.contains(i, j) ? (*this)(i, j) : outside; }
  const std::vector<std::vector<T>>& rows() const { return v_; }
  bool operator==(const PolyArray& o) const { return shape_ == o.shape_ && v_ == o.v_; }

  PolyArray transpose() const {
    PolyArray t(shape_.transpose());
    for (auto [i, j] : shape_.indices()) t(j, i) = (*this)(i, j);
    return t;
  }
  template <class U, class F>
  PolyArray<U> map(F f) const {
    PolyArray<U> out(shape_);
    for (auto [i, j] : shape_.indices()) out(i, j) = f((*this)(i, j));
    return out;
  }

 private:
  YoungShape shape_;
  std::vector<std::vector<T>> v_;
};

// Triangular pattern: row i (1-based) has i entries.
template <class T>
struct GTPattern {
  std::vector<std::vector<T>> rows;
  int height() const { return static_cast<int>(rows.size()); }
};

// Half-triangular pattern of height 2n: row i has ceil(i/2) entries.
template <class T>
struct SpGTPattern {
  std::vector<std::vector<T>> rows;
  int height() const { return static_cast<int>(rows.size()); }
};

template <class T>
bool is_valid_gt(const GTPattern<T>& p) {
  for (int i = 1; i <= p.height(); ++i)
    if (static_cast<int>(p.rows[i - 1].size()) != i) return false;
  for (int i = 1; i < p.height(); ++i)
    for (int j = 1; j <= i; ++j) {
      const auto& lo = p.rows[i][j];
      const auto& hi = p.rows[i][j - 1];
      const auto& z = p.rows[i - 1][j - 1];
      if (z < lo || hi < z) return false;
    }
  return true;
}

template <class T>
bool is_valid_spgt(const SpGTPattern<T>& p) {
  auto at = [&](int i, int j) -> T {
    int len = (i + 1) / 2;
    return (j <= len && j <= static_cast<int>(p.rows[i - 1].size())) ? p.rows[i - 1][j - 1] : T(0);
  };
  for (int i = 1; i <= p.height(); ++i) {
    int len = (i + 1) / 2;
    int have = static_cast<int>(p.rows[i - 1].size());
    if (have < len) return false;
    for (int j = len + 1; j <= have; ++j)
      if (!(p.rows[i - 1][j - 1] == T(0))) return false;
    for (int j = 1; j <= len; ++j)
      if (at(i, j) < T(0)) return false;
  }
  for (int i = 1; i < p.height(); ++i)
    for (int j = 1; j <= (i + 1) / 2; ++j) {
      T z = at(i, j);
      if (z < at(i + 1, j + 1) || at(i + 1, j) < z) return false;
    }
  return true;
}

template <class T>
T row_sum(const std::vector<T>& r) {
  T s(0);
  for (const auto& x : r) s += x;
  return s;
}

template <class T>
T row_prod(const std::vector<T>& r) {
  T s(1);
  for (const auto& x : r) s *= x;
  return s;
}

template <class T>
std::vector<T> type_of(const GTPattern<T>& p) {
  std::vector<T> t;
  T prev(0);
  for (const auto& r : p.rows) {
    T s = row_sum(r);
    t.push_back(s - prev);
    prev = s;
  }
  return t;
}

template <class T>
std::vector<T> sp_type_of(const SpGTPattern<T>& p) {
  std::vector<T> t;
  T prev(0);
  for (const auto& r : p.rows) {
    T s = row_sum(r);
    t.push_back(s - prev);
    prev = s;
  }
  return t;
}

template <class T>
T diag_sum(const PolyArray<T>& t, int k) {
  T s(0);
  for (auto [i, j] : t.shape().indices())
    if (j - i == k) s += t(i, j);
  return s;
}

template <class T>
T diag_prod(const PolyArray<T>& t, int k) {
  T s(1);
  for (auto [i, j] : t.shape().indices())
    if (j - i == k) s *= t(i, j);
  return s;
}

// 1/t_{11} + sum (t_{i-1,j} + t_{i,j-1}) / t_{ij}.
template <class T>
T energy(const PolyArray<T>& t) {
  T e = T(1) / t(1, 1);
  for (auto [i, j] : t.shape().indices()) {
    T nb = t.get(i - 1, j, T(0)) + t.get(i, j - 1, T(0));
    if (!(nb == T(0))) e += nb / t(i, j);
  }
  return e;
}

double triangle_energy(const GTPattern<double>& z);
// Wall convention z_{i,j} = 1 for j > ceil(i/2).
double half_triangle_energy(const SpGTPattern<double>& z);
std::vector<double> gtype(const GTPattern<double>& z);

}  // namespace ipl
