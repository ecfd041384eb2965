#include "ipl/quadrature.hpp"

#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>

namespace ipl {

namespace {

QuadRule make_gl(int n) {
  QuadRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = z;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1;
      dp = n * (z * p1 - p0) / (z * z - 1);
      double dz = p1 / dp;
      z -= dz;
      if (std::fabs(dz) < 1e-16) break;
    }
    {
      double p0 = 1, p1 = z;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1);
    }
    r.x[i] = -z;
    r.x[n - 1 - i] = z;
    r.w[i] = r.w[n - 1 - i] = 2 / ((1 - z * z) * dp * dp);
  }
  return r;
}

}  // namespace

const QuadRule& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: order must be positive");
  static std::mutex mu;
  static std::map<int, QuadRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gl(n)).first;
  return it->second;
}

QuadRule gl_breaks(const std::vector<double>& breaks, int order) {
  const QuadRule& g = gauss_legendre(order);
  QuadRule r;
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    double a = breaks[p], b = breaks[p + 1];
    double h = (b - a) / 2, c = (a + b) / 2;
    for (std::size_t k = 0; k < g.size(); ++k) {
      r.x.push_back(c + h * g.x[k]);
      r.w.push_back(h * g.w[k]);
    }
  }
  return r;
}

QuadRule gl_panels(double a, double b, int panels, int order) {
  std::vector<double> br(panels + 1);
  for (int p = 0; p <= panels; ++p) br[p] = a + (b - a) * p / panels;
  return gl_breaks(br, order);
}

double integrate(const std::function<double(double)>& f, double a, double b, int panels, int order) {
  QuadRule r = gl_panels(a, b, panels, order);
  double s = 0;
  for (std::size_t k = 0; k < r.size(); ++k) s += r.w[k] * f(r.x[k]);
  return s;
}

std::pair<double, double> decay_window(const std::function<double(double)>& log_abs_f, const CutoffConfig& cfg) {
  // Find the peak by a coarse scan outward from `start`, then walk out until
  // the log-integrand has dropped by cfg.drop.
  double peak_x = cfg.start, peak = log_abs_f(cfg.start);
  for (int dir : {-1, 1}) {
    double x = cfg.start;
    for (int k = 0; k < cfg.max_steps; ++k) {
      x += dir * cfg.step;
      double v = log_abs_f(x);
      if (v > peak) {
        peak = v;
        peak_x = x;
      } else if (v < peak - cfg.drop) {
        break;
      }
    }
  }
  double lo = peak_x, hi = peak_x;
  for (int k = 0; k < cfg.max_steps; ++k) {
    lo -= cfg.step;
    if (log_abs_f(lo) < peak - cfg.drop) break;
  }
  for (int k = 0; k < cfg.max_steps; ++k) {
    hi += cfg.step;
    if (log_abs_f(hi) < peak - cfg.drop) break;
  }
  return {lo, hi};
}

double integrate_line(const std::function<double(double)>& f, const std::function<double(double)>& log_abs_f,
                      int panels, int order, const CutoffConfig& cfg) {
  auto [lo, hi] = decay_window(log_abs_f, cfg);
  return integrate(f, lo, hi, panels, order);
}

}  // namespace ipl
