#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "oracles.hpp"
#include "specbgk/error.hpp"
#include "specbgk/scheme.hpp"

using namespace specbgk;

namespace {

const NormalizedPotential& double_well() {
  static const auto p = normalize_potential(RawPotential{{1.0, -2.0, 1.0}});
  return p;
}

Generator make(const NormalizedPotential& p, int K, int N) {
  const auto t = build_recurrence(p, N + p.degree());
  return assemble_generator(build_deriv_couplings(t, N), K, N);
}

SpectralState random_state(int K, int N, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  auto s = SpectralState::zero(K, N);
  for (Eigen::Index i = 0; i < s.dim(); ++i) s.flat()[i] = g(rng);
  return s;
}

}  // namespace

TEST_CASE("harmonic generator against hand assembly") {
  // K = 1, N = 2: A(1,0) = 1, A(2,1) = sqrt2
  const auto g = make(harmonic_potential(), 1, 2);
  Eigen::MatrixXd ref = Eigen::MatrixXd::Zero(6, 6);
  ref(g.index(0, 1), g.index(1, 0)) = 1.0;
  ref(g.index(0, 2), g.index(1, 1)) = std::numbers::sqrt2;
  ref(g.index(1, 0), g.index(0, 1)) = -1.0;
  ref(g.index(1, 1), g.index(0, 2)) = -std::numbers::sqrt2;
  CHECK((Eigen::MatrixXd(g.matrix()) - ref).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("hypothesis N >= deg is enforced") {
  const auto t = build_recurrence(double_well(), 10);
  try {
    assemble_generator(build_deriv_couplings(t, 3), 4, 3);
    FAIL("expected hypothesis violation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::hypothesis_violation);
  }
  CHECK_THROWS_AS(assemble_generator(build_deriv_couplings(t, 5), -1, 5), Error);
}

TEST_CASE("transport part is exactly skew") {
  const auto g2 = make(double_well(), 2, 8);
  const Eigen::MatrixXd m2(g2.matrix());
  CHECK((m2 + m2.transpose()).cwiseAbs().maxCoeff() == 0.0);

  const int K = 20, N = 30;
  const auto g = make(double_well(), K, N);
  const SparseRowMatrix sum = g.matrix() + SparseRowMatrix(g.matrix().transpose());
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(g.dim(), g.dim());
  for (int k = 3; k <= K; ++k)
    for (int n = 0; n <= N; ++n) expected(g.index(k, n), g.index(k, n)) = -2.0;
  CHECK((Eigen::MatrixXd(sum) - expected).cwiseAbs().maxCoeff() == 0.0);

  const auto dc = build_deriv_couplings(build_recurrence(double_well(), N + 4), N);
  const auto nnz_a = (dc.A.array() != 0.0).count();
  CHECK(g.matrix().nonZeros() <= (K + 1) * (2 * nnz_a + N + 1));
}

TEST_CASE("k = 1 data couples only to k = 0 and k = 2") {
  const auto g = make(double_well(), 6, 8);
  auto s = SpectralState::zero(6, 8);
  s.C.row(1).setLinSpaced(1.0, 2.0);
  const auto out = g.apply(s);
  for (int k = 0; k <= 6; ++k)
    if (k != 0 && k != 2) CHECK(out.C.row(k).cwiseAbs().maxCoeff() == 0.0);
  CHECK(out.C.row(0).cwiseAbs().maxCoeff() > 0.0);
  CHECK(out.C.row(2).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("dissipation identity on random states") {
  const int K = 20, N = 30;
  const auto g = make(double_well(), K, N);
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const auto u = random_state(K, N, rng);
    const double quad = u.flat().dot(g.matrix() * u.flat());
    const double damp = u.C.bottomRows(K - 2).squaredNorm();
    CHECK(std::abs(quad + damp) <= 1e-12 * std::max(1.0, damp));
  }
}

TEST_CASE("implicit Euler step") {
  const int K = 6, N = 8;
  const auto g = make(double_well(), K, N);
  const SteppingPlan sparse(g, 0.05);
  const SteppingPlan dense(g, 0.05, SolverKind::dense_lu);
  CHECK(step(sparse, SpectralState::zero(K, N)).C.cwiseAbs().maxCoeff() == 0.0);

  std::mt19937_64 rng(11);
  auto s = random_state(K, N, rng);
  const Eigen::MatrixXd sys = Eigen::MatrixXd::Identity(g.dim(), g.dim()) - 0.05 * Eigen::MatrixXd(g.matrix());
  for (int i = 0; i < 50; ++i) {
    const auto a = step(sparse, s);
    const auto b = step(dense, s);
    CHECK((a.C - b.C).cwiseAbs().maxCoeff() <= 1e-12 * s.C.cwiseAbs().maxCoeff());
    CHECK((sys * a.flat() - s.flat()).norm() <= 1e-12 * s.flat().norm());
    CHECK(l2_norm(a) <= l2_norm(s));
    CHECK(a.t == doctest::Approx(s.t + 0.05));
    s = a;
  }
  CHECK_THROWS_AS(SteppingPlan(g, 0.0), Error);
  CHECK_THROWS_AS(step(sparse, SpectralState::zero(K, N + 1)), Error);
}

TEST_CASE("skew system loses norm at second order only") {
  const int K = 2, N = 8;
  const auto g = make(double_well(), K, N);
  const double dt = 1e-3;
  const SteppingPlan plan(g, dt);
  std::mt19937_64 rng(3);
  const auto s = random_state(K, N, rng);
  const Eigen::MatrixXd m(g.matrix());
  const Eigen::VectorXd ref = oracle::rk4(m, s.flat(), dt / 10, 10);
  const double lost = s.flat().squaredNorm() - step(plan, s).flat().squaredNorm();
  const double gap = std::abs(ref.squaredNorm() - step(plan, s).flat().squaredNorm());
  CHECK(gap <= 2.0 * dt * dt * (m * s.flat()).squaredNorm());
  CHECK(lost > 0.0);
  CHECK(lost <= dt * dt * (m * s.flat()).squaredNorm() * 1.01);
}

TEST_CASE("one step against the matrix exponential") {
  const int K = 5, N = 5;
  const auto g = make(harmonic_potential(), K, N);
  const std::vector<InitialCoefficient> ic{{1, 2, 1.0}, {2, 1, 1.0}};
  const auto s = project_initial_condition(K, N, ic);
  const double dt = 1e-3;
  const Eigen::VectorXd ref = oracle::expm(dt * Eigen::MatrixXd(g.matrix())) * s.flat();
  const auto out = step(SteppingPlan(g, dt), s);
  CHECK((out.flat() - ref).norm() <= 1e-5 * ref.norm());
}

TEST_CASE("initial condition projection") {
  const std::vector<InitialCoefficient> ic{{1, 2, 1.0}, {2, 1, 1.0}};
  const auto s = project_initial_condition(20, 30, ic);
  CHECK(s.C(1, 2) == 1.0);
  CHECK(s.C(2, 1) == 1.0);
  CHECK(s.C.cwiseAbs().sum() == 2.0);
  CHECK(project_initial_condition(3, 4, {}).C.cwiseAbs().maxCoeff() == 0.0);
  const std::vector<InitialCoefficient> bad{{4, 0, 1.0}};
  try {
    project_initial_condition(3, 4, bad);
    FAIL("expected index error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::index_out_of_range);
  }
}

TEST_CASE("purge removes the macroscopic modes") {
  const auto t = build_recurrence(double_well(), 20);
  const auto basis = functional_basis(t, 10);
  auto mass = SpectralState::zero(4, 10);
  mass.C(0, 0) = 1.0;
  mass.C(0, 3) = 0.5;
  mass.C(2, 0) = 0.25;
  const auto pm = purge_equilibrium_components(mass, basis);
  const auto c = conserved_functionals(pm, basis);
  CHECK(std::abs(c.mass) <= 1e-14);
  CHECK(std::abs(c.energy_plus) <= 1e-14);

  // already compliant data is unchanged
  auto ok = SpectralState::zero(4, 10);
  ok.C(2, 1) = 1.0;
  ok.C(3, 4) = -2.0;
  CHECK((purge_equilibrium_components(ok, basis).C - ok.C).cwiseAbs().maxCoeff() <= 1e-15);

  const auto h = build_recurrence(harmonic_potential(), 20);
  const auto hb = functional_basis(h, 6);
  auto mom = SpectralState::zero(3, 6);
  mom.C(1, 0) = 1.0;
  mom.C(0, 1) = 0.3;
  mom.C(1, 1) = -0.7;
  mom.C(2, 0) = 0.2;
  const auto hc = conserved_functionals(purge_equilibrium_components(mom, hb), hb);
  CHECK(hc.max_abs() <= 1e-14);
}
