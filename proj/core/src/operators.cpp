#include "specbgk/operators.hpp"

#include <cstdlib>
#include <string>

#include "specbgk/error.hpp"
#include "specbgk/weddle.hpp"

namespace specbgk {

BandedOperator::BandedOperator(int size, int bandwidth, BandSymmetry symmetry)
    : size_(size),
      bandwidth_(bandwidth),
      symmetry_(symmetry),
      data_(static_cast<std::size_t>(size) * static_cast<std::size_t>(2 * bandwidth + 1), 0.0) {
  if (size < 0 || bandwidth < 0) throw Error(ErrorKind::invalid_argument, "banded operator dimensions must be >= 0");
}

double BandedOperator::operator()(int i, int j) const {
  if (i < 0 || j < 0 || i >= size_ || j >= size_)
    throw Error(ErrorKind::index_out_of_range, "banded operator index outside matrix");
  if (std::abs(i - j) > bandwidth_) return 0.0;
  return data_[slot(i, j)];
}

void BandedOperator::set(int i, int j, double value) {
  if (i < 0 || j < 0 || i >= size_ || j >= size_ || std::abs(i - j) > bandwidth_)
    throw Error(ErrorKind::index_out_of_range, "banded operator write outside band");
  data_[slot(i, j)] = value;
}

Eigen::MatrixXd BandedOperator::dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(size_, size_);
  for (int i = 0; i < size_; ++i)
    for (int j = std::max(0, i - bandwidth_); j <= std::min(size_ - 1, i + bandwidth_); ++j) m(i, j) = data_[slot(i, j)];
  return m;
}

BandedOperator BandedOperator::lower_part() const {
  BandedOperator out(size_, bandwidth_, BandSymmetry::lower);
  for (int i = 0; i < size_; ++i)
    for (int j = std::max(0, i - bandwidth_); j < i; ++j) out.set(i, j, data_[slot(i, j)]);
  return out;
}

BandedOperator BandedOperator::upper_part() const {
  BandedOperator out(size_, bandwidth_, BandSymmetry::upper);
  for (int i = 0; i < size_; ++i)
    for (int j = i + 1; j <= std::min(size_ - 1, i + bandwidth_); ++j) out.set(i, j, data_[slot(i, j)]);
  return out;
}

BandedOperator BandedOperator::truncated(int n) const {
  if (n < 0 || n > size_) throw Error(ErrorKind::invalid_argument, "truncation larger than operator");
  BandedOperator out(n, bandwidth_, symmetry_);
  for (int i = 0; i < n; ++i)
    for (int j = std::max(0, i - bandwidth_); j <= std::min(n - 1, i + bandwidth_); ++j) out.set(i, j, data_[slot(i, j)]);
  return out;
}

BandedOperator build_phi_matrix(const RecurrenceTable& t, int size) {
  const auto& p = t.weight();
  const int deg = p.degree();
  if (size < 1) throw Error(ErrorKind::invalid_argument, "Phi matrix size must be >= 1");
  if (t.n_max() < size + deg)
    throw Error(ErrorKind::insufficient_recurrence,
                "Phi matrix of size " + std::to_string(size) + " needs n_max >= " + std::to_string(size + deg) +
                    " (have " + std::to_string(t.n_max()) + ")");

  // x^j couples indices at most j apart, so J^j on a block of size + deg is exact on the leading block
  const int work = size + deg;
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(work, work);
  for (int k = 1; k < work; ++k) jac(k, k - 1) = jac(k - 1, k) = t.a(k);

  // phi'(x) = sum_i 2i g_i x^(2i-1) = x * q(x^2); Horner in J^2, then one more factor of J
  const auto g = p.coeffs();
  const Eigen::MatrixXd jac2 = jac * jac;
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(work, work);
  for (std::size_t i = g.size(); i-- > 1;) {
    acc = (acc * jac2).eval();
    acc.diagonal().array() += 2.0 * static_cast<double>(i) * g[i];
  }
  const Eigen::MatrixXd full = jac * acc;

  const int bw = deg - 1;
  BandedOperator phi(size, bw, BandSymmetry::symmetric);
  for (int k = 0; k < size; ++k)
    for (int off = 1; off <= bw && k - off >= 0; off += 2) {
      // assembled from the lower triangle; even offsets vanish by parity
      const double v = full(k, k - off);
      phi.set(k, k - off, v);
      phi.set(k - off, k, v);
    }
  return phi;
}

DerivCouplings build_deriv_couplings(const RecurrenceTable& t, const QuadratureRule& q, int N) {
  if (N < 0) throw Error(ErrorKind::invalid_argument, "N must be >= 0");
  const int reach = t.weight().degree() - 1;
  std::vector<CompensatedSum> acc(static_cast<std::size_t>((N + 1) * (N + 1)));
  Eigen::VectorXd values(N + 1), derivs(N + 1);
  for (std::size_t i = 0; i < q.size(); ++i) {
    eval_poly_deriv_all(t, N, q.nodes[i], values, derivs);
    const double w = q.weights[i];
    for (int r = 1; r <= N; ++r)
      for (int n = r - 1; n >= 0 && r - n <= reach; n -= 2)
        acc[static_cast<std::size_t>(r * (N + 1) + n)].add(w * derivs[r] * values[n]);
  }
  DerivCouplings dc{Eigen::MatrixXd::Zero(N + 1, N + 1), t.weight().degree()};
  for (int r = 1; r <= N; ++r)
    for (int n = r - 1; n >= 0 && r - n <= reach; n -= 2) dc.A(r, n) = acc[static_cast<std::size_t>(r * (N + 1) + n)].value();
  return dc;
}

DerivCouplings build_deriv_couplings(const RecurrenceTable& t, int N) {
  return build_deriv_couplings(t, gauss_rule(t, N + 1), N);
}

BandedOperator build_omega_matrix(const BandedOperator& phi, int size) {
  if (size < 1) throw Error(ErrorKind::invalid_argument, "Omega size must be >= 1");
  if (phi.size() < size + phi.bandwidth())
    throw Error(ErrorKind::insufficient_recurrence, "Omega of size " + std::to_string(size) +
                                                        " needs Phi of size >= " +
                                                        std::to_string(size + phi.bandwidth()));
  const Eigen::MatrixXd upper = phi.upper_part().dense().topLeftCorner(size, size);
  const Eigen::MatrixXd omega = upper.transpose() * upper + Eigen::MatrixXd::Identity(size, size);

  const int bw = std::max(phi.bandwidth() - 1, 0);
  BandedOperator out(size, bw, BandSymmetry::symmetric);
  for (int i = 0; i < size; ++i) {
    out.set(i, i, omega(i, i));
    for (int off = 2; off <= bw && i - off >= 0; off += 2) {
      out.set(i, i - off, omega(i, i - off));
      out.set(i - off, i, omega(i, i - off));
    }
  }
  return out;
}

}  // namespace specbgk
