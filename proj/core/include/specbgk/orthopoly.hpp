#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "specbgk/potential.hpp"

namespace specbgk {

enum class RecurrenceMethod { stieltjes, chebyshev_extended };

/// Coefficients a_0..a_{n_max} of the orthonormal family for the weight e^{-phi}:
///   x P_n = a_{n+1} P_{n+1} + a_n P_{n-1},  P_0 = 1/a_0,  P_{-1} = 0.
/// The weight is even, so the recurrence carries no diagonal term.
class RecurrenceTable {
 public:
  RecurrenceTable(std::vector<double> a, RecurrenceMethod method, NormalizedPotential weight);

  int n_max() const { return static_cast<int>(a_.size()) - 1; }
  double a(int n) const { return a_[static_cast<std::size_t>(n)]; }
  std::span<const double> coefficients() const { return a_; }
  RecurrenceMethod method() const { return method_; }
  const NormalizedPotential& weight() const { return weight_; }

 private:
  std::vector<double> a_;
  RecurrenceMethod method_;
  NormalizedPotential weight_;
};

struct RecurrenceOptions {
  double tol = 1e-14;  // relative change of a_n between grid refinements
  std::size_t max_nodes = std::size_t{1} << 22;
};

/// Stieltjes: discretized Stieltjes procedure on a converged composite Weddle grid (double).
/// Chebyshev: Chebyshev algorithm on ordinary moments in 113-bit binary128 arithmetic;
/// throws ErrorKind::precision_failure naming the first index where positivity breaks.
RecurrenceTable build_recurrence(const NormalizedPotential& p, int n_max,
                                 RecurrenceMethod method = RecurrenceMethod::stieltjes,
                                 const RecurrenceOptions& opts = {});

/// Closed-form Hermite table a_0 = 1, a_k = sqrt(k), for the velocity basis.
RecurrenceTable hermite_table(int n_max);

double eval_poly(const RecurrenceTable& t, int n, double x);

/// P_0(x) .. P_N(x) in one forward sweep.
Eigen::VectorXd eval_poly_all(const RecurrenceTable& t, int N, double x);

/// Values and first derivatives of P_0 .. P_N at x.
void eval_poly_deriv_all(const RecurrenceTable& t, int N, double x, Eigen::Ref<Eigen::VectorXd> values,
                         Eigen::Ref<Eigen::VectorXd> derivs);

/// Basis matrix B(i, n) = P_n(x_i).
Eigen::MatrixXd basis_matrix(const RecurrenceTable& t, int N, std::span<const double> xs);

enum class QuadratureKind { composite_weddle, gauss_from_jacobi };

/// Nodes and weights with the weight e^{-phi} folded in: sum_i w_i f(x_i) ~ int f rho dx.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  QuadratureKind kind;

  std::size_t size() const { return nodes.size(); }

  template <class F>
  double integrate(F&& f) const;
};

/// Gauss rule with `size` nodes from the Jacobi matrix of `t` (needs t.n_max() >= size - 1).
/// Exact for polynomials of degree <= 2 size - 1, up to rounding.
QuadratureRule gauss_rule(const RecurrenceTable& t, int size);

/// Composite Weddle rule with `panels` panels on [-L, L], where L is the envelope
/// radius for polynomial integrands of degree `degree`.
QuadratureRule composite_rule(const NormalizedPotential& p, std::size_t panels, int degree = 0);

/// Dispatch on kind. For composite_weddle `resolution` is the panel count and the
/// interval covers integrands up to degree 2 * t.n_max().
QuadratureRule build_quadrature(const RecurrenceTable& t, QuadratureKind kind, int resolution);

/// <f, P_n> for n = 0..N.
Eigen::VectorXd inner_products(const RecurrenceTable& t, const QuadratureRule& q,
                               const std::function<double(double)>& f, int N);

/// Limit of a_n * n^{-1/2m} predicted by Magnus: c^{1/2m}, c = (m-1)!^2 / (2 gamma_m (2m-1)!).
double magnus_constant(const NormalizedPotential& p);

template <class F>
double QuadratureRule::integrate(F&& f) const {
  double s = 0.0, c = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double y = weights[i] * f(nodes[i]) - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

}  // namespace specbgk
