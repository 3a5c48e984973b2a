#include "specbgk/scheme.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/SparseLU>

#include "specbgk/error.hpp"

namespace specbgk {

SpectralState Generator::apply(const SpectralState& s) const {
  if (s.K != K_ || s.N != N_) throw Error(ErrorKind::invalid_argument, "state truncation does not match generator");
  SpectralState out = SpectralState::zero(K_, N_, s.t);
  out.flat() = M_ * s.flat();
  return out;
}

Generator assemble_generator(const DerivCouplings& dc, int K, int N) {
  if (K < 0 || N < 0) throw Error(ErrorKind::invalid_argument, "K and N must be non-negative");
  if (N < dc.potential_degree)
    throw Error(ErrorKind::hypothesis_violation, "N = " + std::to_string(N) + " violates N >= deg(phi) = " +
                                                     std::to_string(dc.potential_degree));
  if (dc.N() < N) throw Error(ErrorKind::invalid_argument, "derivative couplings computed for a smaller N");

  const Eigen::MatrixXd A = dc.A.topLeftCorner(N + 1, N + 1);
  auto idx = [N](int k, int n) { return static_cast<Eigen::Index>(k) * (N + 1) + n; };
  std::vector<Eigen::Triplet<double>> entries;
  const auto nnz_a = static_cast<std::size_t>((A.array() != 0.0).count());
  entries.reserve(static_cast<std::size_t>(K + 1) * (2 * nnz_a + static_cast<std::size_t>(N + 1)));

  for (int k = 0; k <= K; ++k) {
    const double up = std::sqrt(static_cast<double>(k + 1));
    const double down = std::sqrt(static_cast<double>(k));
    for (int n = 0; n <= N; ++n) {
      if (k > 0)
        for (int r = 0; r <= N; ++r)
          if (A(r, n) != 0.0) entries.emplace_back(idx(k, n), idx(k - 1, r), -(down * A(r, n)));
      if (k >= 3) entries.emplace_back(idx(k, n), idx(k, n), -1.0);
      if (k < K)
        for (int r = 0; r <= N; ++r)
          if (A(n, r) != 0.0) entries.emplace_back(idx(k, n), idx(k + 1, r), up * A(n, r));
    }
  }
  const Eigen::Index dim = static_cast<Eigen::Index>(K + 1) * (N + 1);
  SparseRowMatrix M(dim, dim);
  M.setFromTriplets(entries.begin(), entries.end());
  M.makeCompressed();
  return Generator(K, N, std::move(M));
}

struct SteppingPlan::Factorization {
  Eigen::SparseMatrix<double> system;
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> sparse;
  Eigen::PartialPivLU<Eigen::MatrixXd> dense;
  SolverKind kind;

  Eigen::VectorXd raw_solve(const Eigen::VectorXd& b) const {
    if (kind == SolverKind::dense_lu) return dense.solve(b);
    return sparse.solve(b);
  }
};

SteppingPlan::SteppingPlan(const Generator& gen, double dt, SolverKind solver)
    : dt_(dt), K_(gen.K()), N_(gen.N()), solver_(solver) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorKind::invalid_argument, "time step must be positive");
  auto f = std::make_shared<Factorization>();
  f->kind = solver;
  Eigen::SparseMatrix<double> eye(gen.dim(), gen.dim());
  eye.setIdentity();
  f->system = eye - dt * Eigen::SparseMatrix<double>(gen.matrix());
  f->system.makeCompressed();
  if (solver == SolverKind::sparse_lu) {
    f->sparse.analyzePattern(f->system);
    f->sparse.factorize(f->system);
    if (f->sparse.info() != Eigen::Success)
      throw Error(ErrorKind::solver_failure, "sparse LU of I - dt M failed: " + f->sparse.lastErrorMessage());
  } else {
    if (gen.dim() > kDenseLimit)
      throw Error(ErrorKind::invalid_argument, "dense solver limited to dimension " + std::to_string(kDenseLimit));
    f->dense.compute(Eigen::MatrixXd(f->system));
  }
  factor_ = std::move(f);
}

Eigen::VectorXd SteppingPlan::solve(const Eigen::VectorXd& b) const {
  const double bnorm = b.norm();
  Eigen::VectorXd x = factor_->raw_solve(b);
  Eigen::VectorXd r = b - factor_->system * x;
  if (r.norm() <= 1e-12 * bnorm) return x;
  x += factor_->raw_solve(r);
  r = b - factor_->system * x;
  if (r.norm() <= 1e-12 * bnorm) return x;
  throw Error(ErrorKind::solver_failure, "implicit Euler solve residual " + std::to_string(r.norm() / bnorm) +
                                             " exceeds 1e-12 relative");
}

SpectralState step(const SteppingPlan& plan, const SpectralState& state) {
  if (state.K != plan.K() || state.N != plan.N())
    throw Error(ErrorKind::invalid_argument, "state truncation does not match stepping plan");
  SpectralState out = SpectralState::zero(state.K, state.N, state.t + plan.dt());
  out.flat() = plan.solve(state.flat());
  return out;
}

SpectralState project_initial_condition(int K, int N, std::span<const InitialCoefficient> coeffs) {
  if (K < 0 || N < 0) throw Error(ErrorKind::invalid_argument, "K and N must be non-negative");
  SpectralState s = SpectralState::zero(K, N);
  for (const auto& c : coeffs) {
    if (c.k < 0 || c.k > K || c.n < 0 || c.n > N)
      throw Error(ErrorKind::index_out_of_range, "initial coefficient (" + std::to_string(c.k) + ", " +
                                                     std::to_string(c.n) + ") outside K = " + std::to_string(K) +
                                                     ", N = " + std::to_string(N));
    s.C(c.k, c.n) = c.value;
  }
  return s;
}

namespace {

std::vector<double> as_vector(const ConservedSet& c) {
  std::vector<double> v{c.mass, c.energy_plus};
  if (c.rx) v.insert(v.end(), {*c.rx, *c.m0, *c.mx, *c.energy_minus});
  return v;
}

}  // namespace

SpectralState purge_equilibrium_components(const SpectralState& state, const FunctionalBasis& basis) {
  const int K = state.K, N = state.N;
  if (basis.N() < N) throw Error(ErrorKind::invalid_argument, "functional basis shorter than state");
  const bool harm = basis.harmonic;
  if (K < 2 || (harm && N < 2))
    throw Error(ErrorKind::invalid_argument, "purge needs K >= 2 (and N >= 2 for harmonic potentials)");
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  // spectral coefficients of the macroscopic modes at t = 0
  std::vector<SpectralState> modes;
  auto add_mode = [&](auto fill) {
    SpectralState m = SpectralState::zero(K, N);
    fill(m.C);
    modes.push_back(std::move(m));
  };
  add_mode([&](CoeffMatrix& c) { c(0, 0) = 1.0; });  // Maxwellian
  add_mode([&](CoeffMatrix& c) {                      // energy: (v^2 - 1)/2 + phi - <phi>
    c(2, 0) = inv_sqrt2;
    for (int n = 1; n <= N; ++n) c(0, n) = basis.ip_phi[n];
  });
  if (harm) {
    add_mode([&](CoeffMatrix& c) { for (int n = 0; n <= N; ++n) c(0, n) = basis.ip_x[n]; });  // x
    add_mode([&](CoeffMatrix& c) { c(1, 0) = 1.0; });                                          // v
    add_mode([&](CoeffMatrix& c) { for (int n = 0; n <= N; ++n) c(1, n) = basis.ip_x[n]; });  // x v
    add_mode([&](CoeffMatrix& c) {  // (x^2 - v^2)/2 = (phi - <phi>) - (v^2 - 1)/2
      for (int n = 1; n <= N; ++n) c(0, n) = basis.ip_phi[n];
      c(2, 0) = -inv_sqrt2;
    });
  }

  const auto target = as_vector(conserved_functionals(state, basis, harm));
  const auto dim = static_cast<Eigen::Index>(modes.size());
  Eigen::MatrixXd G(dim, dim);
  Eigen::VectorXd rhs(dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    const auto col = as_vector(conserved_functionals(modes[static_cast<std::size_t>(j)], basis, harm));
    for (Eigen::Index i = 0; i < dim; ++i) G(i, j) = col[static_cast<std::size_t>(i)];
    rhs[j] = target[static_cast<std::size_t>(j)];
  }
  const Eigen::VectorXd coef = G.fullPivLu().solve(rhs);

  SpectralState out = state;
  for (Eigen::Index j = 0; j < dim; ++j) out.C -= coef[j] * modes[static_cast<std::size_t>(j)].C;
  return out;
}

}  // namespace specbgk
