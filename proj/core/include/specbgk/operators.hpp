#pragma once

#include <vector>

#include <Eigen/Dense>

#include "specbgk/orthopoly.hpp"

namespace specbgk {

enum class BandSymmetry { symmetric, lower, upper, general };

/// Square band matrix; entries with |i - j| > bandwidth are identically zero.
class BandedOperator {
 public:
  BandedOperator(int size, int bandwidth, BandSymmetry symmetry);

  int size() const { return size_; }
  int bandwidth() const { return bandwidth_; }
  BandSymmetry symmetry() const { return symmetry_; }

  double operator()(int i, int j) const;
  void set(int i, int j, double value);

  Eigen::MatrixXd dense() const;
  /// Strictly lower / strictly upper triangle as a new operator.
  BandedOperator lower_part() const;
  BandedOperator upper_part() const;
  /// Leading n x n block.
  BandedOperator truncated(int n) const;

 private:
  std::size_t slot(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(2 * bandwidth_ + 1) +
           static_cast<std::size_t>(j - i + bandwidth_);
  }

  int size_;
  int bandwidth_;
  BandSymmetry symmetry_;
  std::vector<double> data_;
};

/// A(r, n) = <d/dx P_r, P_n>. Zero unless n < r, r - n odd and r - n <= deg(phi) - 1.
struct DerivCouplings {
  Eigen::MatrixXd A;
  int potential_degree;

  int N() const { return static_cast<int>(A.rows()) - 1; }
};

/// Phi(k, l) = <phi' P_l, P_k>: the polynomial phi'(J) of the Jacobi matrix J, evaluated
/// on a block large enough that the leading `size` x `size` entries are exact.
/// Requires t.n_max() >= size + deg(phi).
BandedOperator build_phi_matrix(const RecurrenceTable& t, int size);

/// Couplings by quadrature of exact polynomial products. The default rule is the
/// (N+1)-point Gauss rule of `t`, exact for the degree 2N - 2 integrands involved.
DerivCouplings build_deriv_couplings(const RecurrenceTable& t, const QuadratureRule& q, int N);
DerivCouplings build_deriv_couplings(const RecurrenceTable& t, int N);

/// Omega = d_x^* d_x + 1 on the leading `size` block: U^T U + I with U the strictly
/// upper part of Phi. Requires phi.size() >= size + phi.bandwidth().
BandedOperator build_omega_matrix(const BandedOperator& phi, int size);

}  // namespace specbgk
