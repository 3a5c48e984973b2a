#include "specbgk/orthopoly.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <quadmath.h>

#include "specbgk/error.hpp"
#include "specbgk/weddle.hpp"

namespace specbgk {

RecurrenceTable::RecurrenceTable(std::vector<double> a, RecurrenceMethod method, NormalizedPotential weight)
    : a_(std::move(a)), method_(method), weight_(std::move(weight)) {}

namespace {

using quad = __float128;

/// One Stieltjes sweep on a fixed discrete measure. The vectors carry sqrt(w) * P_n,
/// so every stored value is bounded by one and high degrees cannot overflow.
std::vector<double> stieltjes_sweep(std::span<const double> x, std::span<const double> w, int n_max) {
  const std::size_t m = x.size();
  std::vector<double> prev(m, 0.0), cur(m), next(m);
  std::vector<double> a(static_cast<std::size_t>(n_max) + 1);

  CompensatedSum mass;
  for (double wi : w) mass.add(wi);
  a[0] = std::sqrt(mass.value());
  for (std::size_t i = 0; i < m; ++i) cur[i] = std::sqrt(w[i]) / a[0];

  for (int n = 0; n < n_max; ++n) {
    const double an = a[static_cast<std::size_t>(n)];
    for (std::size_t i = 0; i < m; ++i) next[i] = x[i] * cur[i] - (n > 0 ? an * prev[i] : 0.0);
    // re-orthogonalize against the current vector; the exact projection vanishes by parity
    CompensatedSum proj;
    for (std::size_t i = 0; i < m; ++i) proj.add(next[i] * cur[i]);
    const double alpha = proj.value();
    CompensatedSum norm2;
    for (std::size_t i = 0; i < m; ++i) {
      next[i] -= alpha * cur[i];
      norm2.add(next[i] * next[i]);
    }
    const double an1 = std::sqrt(norm2.value());
    if (!(an1 > 0.0))
      throw Error(ErrorKind::precision_failure,
                  "Stieltjes procedure lost positivity at index " + std::to_string(n + 1));
    a[static_cast<std::size_t>(n) + 1] = an1;
    for (std::size_t i = 0; i < m; ++i) next[i] /= an1;
    std::swap(prev, cur);
    std::swap(cur, next);
  }
  return a;
}

std::vector<double> stieltjes(const NormalizedPotential& p, int n_max, const RecurrenceOptions& opts) {
  const double radius = envelope_radius(p.poly(), 2 * n_max + 2);
  std::vector<double> nodes, weights;
  std::size_t panels = std::max<std::size_t>(64, static_cast<std::size_t>(n_max));
  std::vector<double> prev;
  while (6 * panels + 1 <= opts.max_nodes) {
    weddle_rule(-radius, radius, panels, nodes, weights);
    for (std::size_t i = 0; i < nodes.size(); ++i) weights[i] *= p.weight(nodes[i]);
    auto a = stieltjes_sweep(nodes, weights, n_max);
    if (!prev.empty()) {
      double change = 0.0;
      for (std::size_t n = 0; n < a.size(); ++n) change = std::max(change, std::abs(a[n] - prev[n]) / a[n]);
      if (change <= opts.tol) return a;
    }
    prev = std::move(a);
    panels *= 2;
  }
  throw Error(ErrorKind::integration_failure,
              "Stieltjes recurrence did not converge within " + std::to_string(opts.max_nodes) + " nodes");
}

/// Even moments mu_0, mu_2, ... of e^{-phi} by the trapezoidal rule on [0, L] in binary128.
/// The trapezoidal rule converges geometrically for these entire, rapidly decaying integrands.
std::vector<quad> even_moments(const NormalizedPotential& p, int count) {
  const double radius = envelope_radius(p.poly(), 2 * count + 2);
  const auto coeffs = p.coeffs();
  auto phi = [&](quad x) {
    const quad y = x * x;
    quad acc = 0;
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * y + static_cast<quad>(coeffs[i]);
    return acc;
  };
  auto sweep = [&](std::size_t intervals) {
    std::vector<quad> mu(static_cast<std::size_t>(count), 0);
    const quad h = static_cast<quad>(radius) / static_cast<quad>(intervals);
    for (std::size_t i = 0; i <= intervals; ++i) {
      const quad x = h * static_cast<quad>(i);
      const quad y = x * x;
      quad term = expq(-phi(x)) * ((i == 0 || i == intervals) ? quad(0.5) : quad(1));
      for (auto& m : mu) {
        m += term;
        term *= y;
      }
    }
    for (auto& m : mu) m *= 2 * h;
    return mu;
  };
  std::size_t intervals = 256;
  auto prev = sweep(intervals);
  while (intervals < (std::size_t{1} << 20)) {
    intervals *= 2;
    auto cur = sweep(intervals);
    quad change = 0;
    for (std::size_t j = 0; j < cur.size(); ++j) change = fmaxq(change, fabsq((cur[j] - prev[j]) / cur[j]));
    if (change < quad(1e-32)) return cur;
    prev = std::move(cur);
  }
  throw Error(ErrorKind::integration_failure, "binary128 moment quadrature did not converge");
}

/// Chebyshev algorithm (ordinary moments) for n_max + 1 recurrence coefficients.
std::vector<double> chebyshev(const NormalizedPotential& p, int n_max) {
  const int n = n_max + 1;
  const auto even = even_moments(p, n + 1);
  std::vector<quad> mu(static_cast<std::size_t>(2 * n), 0);
  for (int l = 0; l < 2 * n; l += 2) mu[static_cast<std::size_t>(l)] = even[static_cast<std::size_t>(l / 2)];

  const std::size_t len = static_cast<std::size_t>(2 * n);
  std::vector<quad> sig_prev(len, 0), sig_cur(mu), sig_next(len, 0);
  std::vector<quad> alpha(static_cast<std::size_t>(n)), beta(static_cast<std::size_t>(n));
  alpha[0] = mu[1] / mu[0];
  beta[0] = mu[0];
  for (int k = 1; k < n; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    for (int l = k; l <= 2 * n - k - 1; ++l) {
      const auto lu = static_cast<std::size_t>(l);
      sig_next[lu] = sig_cur[lu + 1] - alpha[ku - 1] * sig_cur[lu] - beta[ku - 1] * sig_prev[lu];
    }
    if (!(sig_next[ku] > 0))
      throw Error(ErrorKind::precision_failure,
                  "Chebyshev algorithm lost positivity at index " + std::to_string(k) +
                      " (moment map too ill-conditioned for binary128)");
    alpha[ku] = sig_next[ku + 1] / sig_next[ku] - sig_cur[ku] / sig_cur[ku - 1];
    beta[ku] = sig_next[ku] / sig_cur[ku - 1];
    std::swap(sig_prev, sig_cur);
    std::swap(sig_cur, sig_next);
  }
  std::vector<double> a(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) a[static_cast<std::size_t>(k)] = static_cast<double>(sqrtq(beta[static_cast<std::size_t>(k)]));
  return a;
}

void check_index(const RecurrenceTable& t, int n) {
  if (n < 0 || n > t.n_max())
    throw Error(ErrorKind::index_out_of_range,
                "polynomial index " + std::to_string(n) + " outside table range [0, " + std::to_string(t.n_max()) + "]");
}

}  // namespace

RecurrenceTable build_recurrence(const NormalizedPotential& p, int n_max, RecurrenceMethod method,
                                 const RecurrenceOptions& opts) {
  if (n_max < 1) throw Error(ErrorKind::invalid_argument, "n_max must be >= 1");
  auto a = method == RecurrenceMethod::stieltjes ? stieltjes(p, n_max, opts) : chebyshev(p, n_max);
  return RecurrenceTable(std::move(a), method, p);
}

RecurrenceTable hermite_table(int n_max) {
  std::vector<double> a(static_cast<std::size_t>(n_max) + 1);
  a[0] = 1.0;
  for (int k = 1; k <= n_max; ++k) a[static_cast<std::size_t>(k)] = std::sqrt(static_cast<double>(k));
  return RecurrenceTable(std::move(a), RecurrenceMethod::stieltjes, harmonic_potential());
}

double eval_poly(const RecurrenceTable& t, int n, double x) {
  check_index(t, n);
  double prev = 0.0, cur = 1.0 / t.a(0);
  for (int k = 0; k < n; ++k) {
    const double next = (x * cur - t.a(k) * prev) / t.a(k + 1);
    prev = cur;
    cur = next;
  }
  return cur;
}

Eigen::VectorXd eval_poly_all(const RecurrenceTable& t, int N, double x) {
  check_index(t, N);
  Eigen::VectorXd p(N + 1);
  p[0] = 1.0 / t.a(0);
  if (N >= 1) p[1] = x * p[0] / t.a(1);
  for (int k = 1; k < N; ++k) p[k + 1] = (x * p[k] - t.a(k) * p[k - 1]) / t.a(k + 1);
  return p;
}

void eval_poly_deriv_all(const RecurrenceTable& t, int N, double x, Eigen::Ref<Eigen::VectorXd> values,
                         Eigen::Ref<Eigen::VectorXd> derivs) {
  check_index(t, N);
  values[0] = 1.0 / t.a(0);
  derivs[0] = 0.0;
  for (int k = 0; k < N; ++k) {
    const double pm = k > 0 ? values[k - 1] : 0.0;
    const double dm = k > 0 ? derivs[k - 1] : 0.0;
    values[k + 1] = (x * values[k] - t.a(k) * pm) / t.a(k + 1);
    derivs[k + 1] = (values[k] + x * derivs[k] - t.a(k) * dm) / t.a(k + 1);
  }
}

Eigen::MatrixXd basis_matrix(const RecurrenceTable& t, int N, std::span<const double> xs) {
  Eigen::MatrixXd b(static_cast<Eigen::Index>(xs.size()), N + 1);
  for (std::size_t i = 0; i < xs.size(); ++i) b.row(static_cast<Eigen::Index>(i)) = eval_poly_all(t, N, xs[i]).transpose();
  return b;
}

QuadratureRule gauss_rule(const RecurrenceTable& t, int size) {
  if (size < 1) throw Error(ErrorKind::invalid_argument, "quadrature resolution must be >= 1");
  if (size - 1 > t.n_max())
    throw Error(ErrorKind::insufficient_recurrence, "Gauss rule of size " + std::to_string(size) +
                                                        " needs a recurrence table with n_max >= " +
                                                        std::to_string(size - 1));
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(size);
  Eigen::VectorXd sub(std::max(size - 1, 0));
  for (int k = 1; k < size; ++k) sub[k - 1] = t.a(k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  eig.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw Error(ErrorKind::solver_failure, "Jacobi matrix eigenvalue solver failed");

  QuadratureRule rule{{}, {}, QuadratureKind::gauss_from_jacobi};
  rule.nodes.resize(static_cast<std::size_t>(size));
  rule.weights.resize(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) {
    const double x = eig.eigenvalues()[i];
    // Christoffel numbers 1 / sum_n P_n(x)^2 keep full relative accuracy in the tails
    const Eigen::VectorXd p = eval_poly_all(t, size - 1, x);
    rule.nodes[static_cast<std::size_t>(i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = 1.0 / p.squaredNorm();
  }
  return rule;
}

QuadratureRule composite_rule(const NormalizedPotential& p, std::size_t panels, int degree) {
  if (panels < 1) throw Error(ErrorKind::invalid_argument, "quadrature resolution must be >= 1");
  const double radius = envelope_radius(p.poly(), degree);
  QuadratureRule rule{{}, {}, QuadratureKind::composite_weddle};
  weddle_rule(-radius, radius, panels, rule.nodes, rule.weights);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) rule.weights[i] *= p.weight(rule.nodes[i]);
  return rule;
}

QuadratureRule build_quadrature(const RecurrenceTable& t, QuadratureKind kind, int resolution) {
  if (resolution < 1) throw Error(ErrorKind::invalid_argument, "quadrature resolution must be >= 1");
  if (kind == QuadratureKind::gauss_from_jacobi) return gauss_rule(t, resolution);
  return composite_rule(t.weight(), static_cast<std::size_t>(resolution), 2 * t.n_max());
}

Eigen::VectorXd inner_products(const RecurrenceTable& t, const QuadratureRule& q,
                               const std::function<double(double)>& f, int N) {
  std::vector<CompensatedSum> acc(static_cast<std::size_t>(N) + 1);
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double fw = f(q.nodes[i]) * q.weights[i];
    const Eigen::VectorXd p = eval_poly_all(t, N, q.nodes[i]);
    for (int n = 0; n <= N; ++n) acc[static_cast<std::size_t>(n)].add(fw * p[n]);
  }
  Eigen::VectorXd out(N + 1);
  for (int n = 0; n <= N; ++n) out[n] = acc[static_cast<std::size_t>(n)].value();
  return out;
}

double magnus_constant(const NormalizedPotential& p) {
  const int m = p.degree() / 2;
  const double c = std::exp(2.0 * std::lgamma(m) - std::log(2.0 * p.leading()) - std::lgamma(2 * m));
  return std::pow(c, 1.0 / (2.0 * m));
}

}  // namespace specbgk
