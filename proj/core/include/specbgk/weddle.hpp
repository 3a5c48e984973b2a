#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "specbgk/error.hpp"

namespace specbgk {

/// Neumaier-compensated running sum. Order of additions is fixed by the caller,
/// so results are run-to-run identical.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Composite Weddle rule: each panel of 6 strips uses weights 3h/10 * (1,5,1,6,1,5,1).
/// Nodes span [a, b] with 6 * panels + 1 points.
inline void weddle_rule(double a, double b, std::size_t panels, std::vector<double>& nodes,
                        std::vector<double>& weights) {
  static constexpr double pattern[6] = {1.0, 5.0, 1.0, 6.0, 1.0, 5.0};
  const std::size_t n = 6 * panels + 1;
  const double h = (b - a) / static_cast<double>(6 * panels);
  nodes.resize(n);
  weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    nodes[i] = a + h * static_cast<double>(i);
    weights[i] = 0.3 * h * pattern[i % 6];
  }
  // interior panel boundaries are shared by two panels
  for (std::size_t i = 6; i + 1 < n; i += 6) weights[i] = 0.6 * h;
  weights[n - 1] = 0.3 * h;
}

template <class F>
double weddle_integrate(F&& f, double a, double b, std::size_t panels) {
  static constexpr double pattern[6] = {2.0, 5.0, 1.0, 6.0, 1.0, 5.0};
  const std::size_t n = 6 * panels;
  const double h = (b - a) / static_cast<double>(n);
  CompensatedSum s;
  s.add(f(a));
  for (std::size_t i = 1; i < n; ++i) s.add(pattern[i % 6] * f(a + h * static_cast<double>(i)));
  s.add(f(b));
  return 0.3 * h * s.value();
}

struct AdaptiveIntegral {
  double value;
  std::size_t nodes;
};

/// Doubles the panel count until two successive values differ by less than
/// rel_tol * |value| (or by less than abs_floor, for integrals that vanish).
template <class F>
AdaptiveIntegral weddle_integrate_adaptive(F&& f, double a, double b, double rel_tol,
                                           double abs_floor = 0.0,
                                           std::size_t max_nodes = std::size_t{1} << 22,
                                           std::size_t initial_panels = 16) {
  std::size_t panels = initial_panels;
  double prev = weddle_integrate(f, a, b, panels);
  while (6 * (2 * panels) + 1 <= max_nodes) {
    panels *= 2;
    const double cur = weddle_integrate(f, a, b, panels);
    const double diff = std::abs(cur - prev);
    if (diff <= rel_tol * std::abs(cur) || diff <= abs_floor) return {cur, 6 * panels + 1};
    prev = cur;
  }
  throw Error(ErrorKind::integration_failure,
              "composite Weddle quadrature did not converge to " + std::to_string(rel_tol) +
                  " within " + std::to_string(max_nodes) + " nodes");
}

}  // namespace specbgk
