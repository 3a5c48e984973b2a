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

DiagnosticsSeries synthetic(std::function<double(double)> f, int n) {
  DiagnosticsSeries s;
  for (int i = 0; i < n; ++i) {
    s.times.push_back(0.1 * i);
    s.norm.push_back(f(0.1 * i));
  }
  return s;
}

}  // namespace

TEST_CASE("norms") {
  CHECK(l2_norm(SpectralState::zero(4, 4)) == 0.0);
  auto s = SpectralState::zero(4, 6);
  s.C(3, 5) = 3.0;
  CHECK(l2_norm(s) == 3.0);
  const std::vector<InitialCoefficient> ic{{1, 2, 1.0}, {2, 1, 1.0}};
  CHECK(l2_norm(project_initial_condition(20, 30, ic)) == doctest::Approx(std::numbers::sqrt2));

  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  auto r = SpectralState::zero(7, 9);
  for (Eigen::Index i = 0; i < r.dim(); ++i) r.flat()[i] = g(rng);
  const double n2 = l2_norm(r) * l2_norm(r);
  CHECK(std::abs(n2 - per_mode_norms(r).squaredNorm()) <= 1e-14 * n2);
}

TEST_CASE("conserved functionals") {
  const auto t = build_recurrence(double_well(), 20);
  const auto basis = functional_basis(t, 10);
  CHECK_FALSE(basis.harmonic);
  const auto z = conserved_functionals(SpectralState::zero(3, 10), basis);
  CHECK(z.max_abs() == 0.0);
  CHECK_FALSE(z.rx.has_value());
  CHECK_THROWS_AS(conserved_functionals(SpectralState::zero(3, 10), basis, true), Error);

  // mass of C_0 = P_0 + P_2 equals int C_0 rho by independent quadrature
  auto s = SpectralState::zero(3, 10);
  s.C(0, 0) = 1.0;
  s.C(0, 2) = 1.0;
  const std::vector<double> a(t.coefficients().begin(), t.coefficients().end());
  const std::vector<double> c(double_well().coeffs().begin(), double_well().coeffs().end());
  const double mass = oracle::weighted_integral(c, [&](double x) {
    const auto v = oracle::recurrence_values(a, 2, x);
    return v[0] + v[2];
  });
  CHECK(conserved_functionals(s, basis).mass == doctest::Approx(mass).epsilon(1e-12));
  const double phi_r = oracle::weighted_integral(c, [&](double x) {
    const auto v = oracle::recurrence_values(a, 2, x);
    return oracle::even_poly(c, x) * (v[0] + v[2]);
  });
  CHECK(conserved_functionals(s, basis).energy_plus == doctest::Approx(phi_r).epsilon(1e-12));

  // linearity
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  auto u = SpectralState::zero(3, 10), w = SpectralState::zero(3, 10);
  for (Eigen::Index i = 0; i < u.dim(); ++i) {
    u.flat()[i] = g(rng);
    w.flat()[i] = g(rng);
  }
  auto mix = u;
  mix.C = 2.0 * u.C - 0.5 * w.C;
  const auto cu = conserved_functionals(u, basis), cw = conserved_functionals(w, basis);
  const auto cm = conserved_functionals(mix, basis);
  CHECK(cm.mass == doctest::Approx(2.0 * cu.mass - 0.5 * cw.mass).epsilon(1e-14));
  CHECK(cm.energy_plus == doctest::Approx(2.0 * cu.energy_plus - 0.5 * cw.energy_plus).epsilon(1e-14));
}

TEST_CASE("harmonic preset keeps all six functionals at zero") {
  const auto t = build_recurrence(harmonic_potential(), 30);
  const int K = 20, N = 30;
  const auto basis = functional_basis(t, N);
  CHECK(basis.harmonic);
  auto one = SpectralState::zero(2, N);
  one.C(0, 1) = 2.0;
  one.C(1, 1) = 3.0;
  const auto c1 = conserved_functionals(one, basis);
  CHECK(*c1.rx == doctest::Approx(2.0 * t.a(1)));
  CHECK(*c1.mx == doctest::Approx(3.0 * t.a(1)));

  const std::vector<InitialCoefficient> ic{{1, 2, 1.0}, {2, 1, 1.0}};
  auto s = project_initial_condition(K, N, ic);
  const SteppingPlan plan(assemble_generator(build_deriv_couplings(t, N), K, N), 1e-2);
  DiagnosticsSeries series;
  for (int i = 0; i < 50; ++i) {
    series.record(s, basis);
    s = step(plan, s);
  }
  for (const auto& c : series.conserved) {
    REQUIRE(c.rx.has_value());
    CHECK(c.max_abs() <= 1e-13);
  }
  CHECK(series.per_mode.size() == 50);
}

TEST_CASE("decay fit") {
  const auto exact = synthetic([](double t) { return 5.0 * std::exp(-2.0 * t); }, 40);
  const auto f = fit_decay_rate(exact, 0.0, 10.0);
  CHECK(std::abs(f.rate - 2.0) <= 1e-12);
  CHECK(f.r2_defined);
  CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(std::log(5.0)).epsilon(1e-12));
  CHECK(f.samples == 40);

  const auto flat = fit_decay_rate(synthetic([](double) { return 1.5; }, 20), 0.0, 10.0);
  CHECK(flat.rate == 0.0);
  CHECK_FALSE(flat.r2_defined);

  CHECK_THROWS_AS(fit_decay_rate(exact, 0.0, 0.5), Error);
  auto zero = exact;
  zero.norm[3] = 0.0;
  CHECK_THROWS_AS(fit_decay_rate(zero, 0.0, 10.0), Error);
}

TEST_CASE("snapshots") {
  const auto t = build_recurrence(double_well(), 20);
  const auto xs = linspace(-4.0, 4.0, 21), vs = linspace(-3.0, 3.0, 13);
  CHECK(xs.front() == -4.0);
  CHECK(xs.back() == 4.0);
  CHECK(snapshot(SpectralState::zero(4, 8), xs, vs, t).cwiseAbs().maxCoeff() == 0.0);
  auto unit = SpectralState::zero(4, 8);
  unit.C(0, 0) = 1.0;
  CHECK((snapshot(unit, xs, vs, t).array() - 1.0).abs().maxCoeff() <= 1e-14);

  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  auto s = SpectralState::zero(4, 8);
  for (Eigen::Index i = 0; i < s.dim(); ++i) s.flat()[i] = g(rng);
  const auto grid = snapshot(s, xs, vs, t);
  const std::vector<double> a(t.coefficients().begin(), t.coefficients().end());
  const std::vector<double> herm{1.0, 1.0, std::sqrt(2.0), std::sqrt(3.0), 2.0};
  for (auto [i, j] : {std::pair{3, 4}, std::pair{10, 6}, std::pair{17, 11}}) {
    const auto px = oracle::recurrence_values(a, 8, xs[i]);
    const auto hv = oracle::recurrence_values(herm, 4, vs[j]);
    double naive = 0.0;
    for (int k = 0; k <= 4; ++k)
      for (int n = 0; n <= 8; ++n) naive += s.C(k, n) * px[n] * hv[k];
    CHECK(std::abs(grid(i, j) - naive) <= 1e-12 * std::max(1.0, std::abs(naive)));
  }
}

TEST_CASE("left-well mass") {
  const auto t = build_recurrence(double_well(), 20);
  auto s = SpectralState::zero(3, 6);
  s.C(0, 0) = 1.0;
  CHECK(left_well_mass(s, t) == doctest::Approx(0.5).epsilon(1e-13));
  s.C(0, 1) = 0.7;
  s.C(2, 1) = 0.3;
  const auto xs = linspace(-6.0, 6.0, 2401), vs = linspace(-9.0, 9.0, 721);
  const double grid = snapshot_left_mass(snapshot(s, xs, vs, t), xs, vs, double_well());
  CHECK(grid == doctest::Approx(left_well_mass(s, t)).epsilon(1e-5));
}
