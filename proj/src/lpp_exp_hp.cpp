#include "ipl/lpp_exp.hpp"

#include "ipl/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace ipl {

namespace {

struct PrecisionGuard {
  unsigned saved;
  explicit PrecisionGuard(int bits) : saved(BigReal::default_precision()) {
    BigReal::default_precision(static_cast<unsigned>(std::ceil(bits * 0.30103)));
  }
  ~PrecisionGuard() { BigReal::default_precision(saved); }
};

// tail[m] = e^{-x} sum_{k > m} x^k / k!  (regularized lower gamma P(m+1, x)), m = 0..M.
std::vector<BigReal> lower_gamma_table(const BigReal& x, int M, const BigReal& eps) {
  std::vector<BigReal> tail(M + 1);
  // term_k = x^k / k!
  BigReal term(1);
  for (int k = 1; k <= M + 1; ++k) term *= x / k;
  BigReal s(0), t = term;
  for (long k = M + 1;; ++k) {
    s += t;
    t *= x / (k + 1);
    if (k > x && t < eps * s) break;
  }
  tail[M] = s;
  // term is now x^{M+1}/(M+1)!; walk back: x^m/m! = term_{m+1} (m+1)/x
  BigReal tm = term;
  for (int m = M; m >= 1; --m) {
    tm = tm * (m + 1) / x;  // x^m / m!
    tail[m - 1] = tail[m] + tm;
  }
  BigReal ex = exp(-x);
  for (auto& v : tail) v *= ex;
  return tail;
}

}  // namespace

int default_hp_bits(int N) { return 256 + 24 * N; }

double cdf_exp_iid_hp(Geometry g, int N, double gamma, double u, int bits) {
  if (g == Geometry::Restricted) throw std::invalid_argument("cdf_exp_iid_hp: flat or half-flat only");
  if (N < 1 || !(gamma > 0) || !(u > 0)) throw std::invalid_argument("cdf_exp_iid_hp: need N >= 1, gamma > 0, u > 0");
  if (bits <= 0) bits = default_hp_bits(N);
  PrecisionGuard guard(bits);
  const BigReal G(gamma), U(u);
  const BigReal eps = pow(BigReal(2), -bits);
  const int M = 2 * N - 2;
  std::vector<BigReal> fact(2 * N + 1);
  fact[0] = 1;
  for (int k = 1; k <= 2 * N; ++k) fact[k] = fact[k - 1] * k;
  const bool flat = g == Geometry::Flat;
  auto P = lower_gamma_table(flat ? BigReal(4 * G * U) : BigReal(2 * G * U), M, eps);
  const BigReal ecross = exp(-2 * G * U);
  // I[a][b] = int_0^u s^a (2u - s)^b ds = u^{a+b+1} sum_k C(b,k) a! k! / (a+k+1)!
  std::vector<BigReal> upow(2 * N + 1);
  upow[0] = 1;
  for (int k = 1; k <= 2 * N; ++k) upow[k] = upow[k - 1] * U;
  auto I = [&](int a, int b) {
    BigReal s(0), binom(1);
    for (int k = 0; k <= b; ++k) {
      s += binom * fact[a] * fact[k] / fact[a + k + 1];
      binom = binom * (b - k) / (k + 1);
    }
    return BigReal(s * upow[a + b + 1]);
  };
  Matrix<BigReal> C(N, N), H(N, N);
  const BigReal twoG = 2 * G;
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      BigReal ab = fact[a] * fact[b];
      C(a, b) = fact[a + b] / (ab * pow(twoG, a + b + 1));
      BigReal cross = flat ? BigReal(I(a, b) + I(b, a)) : I(b, a);
      H(a, b) = C(a, b) * P[a + b] - ecross * cross / ab;
    }
  BigReal r = determinant(H) / determinant(C);
  return r.convert_to<double>();
}

}  // namespace ipl
