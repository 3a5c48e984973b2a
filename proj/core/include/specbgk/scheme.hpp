#pragma once

#include <memory>
#include <span>

#include <Eigen/Sparse>

#include "specbgk/diagnostics.hpp"
#include "specbgk/operators.hpp"
#include "specbgk/state.hpp"

namespace specbgk {

using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Semi-discrete generator dC/dt = M C on the flattened (K+1)(N+1) coefficient vector:
///   (M C)[k][n] = sqrt(k+1) sum_r A(n,r) C[k+1][r] - sqrt(k) sum_r A(r,n) C[k-1][r] - [k >= 3] C[k][n]
/// with A(r, n) = <d/dx P_r, P_n>. Block tridiagonal in k, stored CSR.
class Generator {
 public:
  Generator(int K, int N, SparseRowMatrix M) : K_(K), N_(N), M_(std::move(M)) {}

  int K() const { return K_; }
  int N() const { return N_; }
  Eigen::Index dim() const { return M_.rows(); }
  Eigen::Index index(int k, int n) const { return static_cast<Eigen::Index>(k) * (N_ + 1) + n; }
  const SparseRowMatrix& matrix() const { return M_; }

  SpectralState apply(const SpectralState& s) const;

 private:
  int K_;
  int N_;
  SparseRowMatrix M_;
};

/// Enforces N >= deg(phi); C_{-1} = C_{K+1} = 0 is implicit in the block layout.
Generator assemble_generator(const DerivCouplings& dc, int K, int N);

enum class SolverKind { sparse_lu, dense_lu };

/// Factorization of I - dt M, computed once and reused for every step.
class SteppingPlan {
 public:
  static constexpr Eigen::Index kDenseLimit = 2000;

  SteppingPlan(const Generator& gen, double dt, SolverKind solver = SolverKind::sparse_lu);

  double dt() const { return dt_; }
  int K() const { return K_; }
  int N() const { return N_; }
  SolverKind solver() const { return solver_; }

  /// Solves (I - dt M) x = b; throws solver_failure if the residual exceeds 1e-12 |b|
  /// after one round of iterative refinement.
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;

 private:
  struct Factorization;

  double dt_;
  int K_;
  int N_;
  SolverKind solver_;
  std::shared_ptr<const Factorization> factor_;
};

/// One implicit Euler step: (I - dt M) C^{i+1} = C^i.
SpectralState step(const SteppingPlan& plan, const SpectralState& state);

struct InitialCoefficient {
  int k;
  int n;
  double value;
};

/// State with the listed coefficients set and all others zero.
SpectralState project_initial_condition(int K, int N, std::span<const InitialCoefficient> coeffs);

/// Removes the steady (and, for harmonic potentials, oscillating) macroscopic modes so
/// that every active conserved functional of the result vanishes.
SpectralState purge_equilibrium_components(const SpectralState& state, const FunctionalBasis& basis);

}  // namespace specbgk
