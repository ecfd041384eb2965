#pragma once

#include <boost/multiprecision/mpfr.hpp>
#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ipl {

using Rational = mpq_class;
using BigReal = boost::multiprecision::mpfr_float;
using cdouble = std::complex<double>;

// Canonicalized p/q (the two-argument mpq_class constructor does not reduce).
inline Rational ratio(long p, long q) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

inline double mag(double x) { return std::fabs(x); }
inline double mag(const cdouble& z) { return std::abs(z); }
inline Rational mag(const Rational& x) { return abs(x); }
inline BigReal mag(const BigReal& x) { return abs(x); }

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.get_d(); }
inline double to_double(const BigReal& x) { return x.convert_to<double>(); }

// Dense row-major matrix over an arbitrary field-like scalar.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, const T& v = T(0)) : r_(r), c_(c), a_(r * c, v) {}

  T& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }
  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }

  void swap_rows(std::size_t i, std::size_t j) {
    for (std::size_t k = 0; k < c_; ++k) std::swap((*this)(i, k), (*this)(j, k));
  }
  void swap_cols(std::size_t i, std::size_t j) {
    for (std::size_t k = 0; k < r_; ++k) std::swap((*this)(k, i), (*this)(k, j));
  }

  Matrix transpose() const {
    Matrix t(c_, r_);
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

 private:
  std::size_t r_ = 0, c_ = 0;
  std::vector<T> a_;
};

template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: shape mismatch");
  Matrix<T> c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const T& aik = a(i, k);
      if (aik == T(0)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

// Gaussian elimination with partial pivoting; exact for Rational.
template <class T>
T determinant(Matrix<T> a) {
  const std::size_t n = a.rows();
  if (n != a.cols()) throw std::invalid_argument("determinant: matrix not square");
  T det(1);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    auto best = mag(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      auto m = mag(a(i, k));
      if (m > best) {
        best = m;
        piv = i;
      }
    }
    if (a(piv, k) == T(0)) return T(0);
    if (piv != k) {
      a.swap_rows(piv, k);
      det = -det;
    }
    det *= a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k) == T(0)) continue;
      T f = a(i, k) / a(k, k);
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

// Pfaffian of a skew-symmetric matrix by pivoted skew elimination:
// Pf(A) = a * Pf(D - (b c^T - c b^T)/a) for A = [[0,a,b^T],[-a,0,c^T],[-b,-c,D]].
template <class T>
T pfaffian(Matrix<T> a) {
  const std::size_t n = a.rows();
  if (n != a.cols()) throw std::invalid_argument("pfaffian: matrix not square");
  if (n % 2 == 1) return T(0);
  T pf(1);
  for (std::size_t k = 0; k + 1 < n; k += 2) {
    std::size_t piv = k + 1;
    auto best = mag(a(k, k + 1));
    for (std::size_t j = k + 2; j < n; ++j) {
      auto m = mag(a(k, j));
      if (m > best) {
        best = m;
        piv = j;
      }
    }
    if (a(k, piv) == T(0)) return T(0);
    if (piv != k + 1) {
      a.swap_rows(piv, k + 1);
      a.swap_cols(piv, k + 1);
      pf = -pf;
    }
    const T akk = a(k, k + 1);
    pf *= akk;
    for (std::size_t i = k + 2; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        T upd = (a(k, i) * a(k + 1, j) - a(k, j) * a(k + 1, i)) / akk;
        a(i, j) -= upd;
        a(j, i) = -a(i, j);
      }
  }
  return pf;
}

// det(1/(alpha_i + beta_j)) in product form.
template <class T>
T cauchy_det(const std::vector<T>& alpha, const std::vector<T>& beta) {
  const std::size_t n = alpha.size();
  if (beta.size() != n) throw std::invalid_argument("cauchy_det: size mismatch");
  T num(1), den(1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) num *= (alpha[j] - alpha[i]) * (beta[j] - beta[i]);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (alpha[i] + beta[j] == T(0)) throw std::domain_error("cauchy_det: alpha_i + beta_j = 0");
      den *= alpha[i] + beta[j];
    }
  return num / den;
}

// Pf((alpha_j - alpha_i)/(alpha_j + alpha_i)) for even order.
template <class T>
T schur_pfaffian(const std::vector<T>& alpha) {
  T v(1);
  for (std::size_t i = 0; i < alpha.size(); ++i)
    for (std::size_t j = i + 1; j < alpha.size(); ++j) v *= (alpha[j] - alpha[i]) / (alpha[j] + alpha[i]);
  return v;
}

}  // namespace ipl
