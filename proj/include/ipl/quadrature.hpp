#pragma once

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

namespace ipl {

struct QuadRule {
  std::vector<double> x, w;
  std::size_t size() const { return x.size(); }
};

// Gauss-Legendre rule on [-1,1], cached per order.
const QuadRule& gauss_legendre(int n);

// Composite Gauss-Legendre on [a,b] with `panels` equal panels.
QuadRule gl_panels(double a, double b, int panels, int order);
// Composite rule on the given panel breakpoints.
QuadRule gl_breaks(const std::vector<double>& breaks, int order);

double integrate(const std::function<double(double)>& f, double a, double b, int panels = 8, int order = 20);

// Integral over the real line of f after locating where log-integrand decay
// falls below `drop` relative to its peak; `step` is the search increment.
struct CutoffConfig {
  double drop = 37.0;  // natural-log units (~1e-16)
  double step = 0.5;
  double start = 0.0;
  int max_steps = 400;
};
std::pair<double, double> decay_window(const std::function<double(double)>& log_abs_f, const CutoffConfig& cfg = {});
double integrate_line(const std::function<double(double)>& f, const std::function<double(double)>& log_abs_f,
                      int panels = 24, int order = 24, const CutoffConfig& cfg = {});

}  // namespace ipl
