#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "specbgk/orthopoly.hpp"
#include "specbgk/state.hpp"

namespace specbgk {

/// Inner products needed by the conserved functionals, for n = 0..N.
struct FunctionalBasis {
  Eigen::VectorXd ip_phi;  // <phi, P_n>
  Eigen::VectorXd ip_x;    // <x, P_n>
  bool harmonic = false;

  int N() const { return static_cast<int>(ip_phi.size()) - 1; }
};

/// Inner products by a Gauss rule exact for phi * P_N.
FunctionalBasis functional_basis(const RecurrenceTable& t, int N);

struct ConservedSet {
  double mass = 0.0;         // <r>
  double energy_plus = 0.0;  // <e>/sqrt2 + <phi r>
  // harmonic potentials only
  std::optional<double> rx;            // <r x>
  std::optional<double> m0;            // <m>
  std::optional<double> mx;            // <m x>
  std::optional<double> energy_minus;  // <e>/sqrt2 - <phi r>

  /// Largest absolute value over the active functionals.
  double max_abs() const;
};

/// Throws invalid_argument if harmonic extras are requested for a non-harmonic basis.
ConservedSet conserved_functionals(const SpectralState& s, const FunctionalBasis& basis, bool with_harmonic);
inline ConservedSet conserved_functionals(const SpectralState& s, const FunctionalBasis& basis) {
  return conserved_functionals(s, basis, basis.harmonic);
}

/// ||h||_{L^2(M)} by Parseval.
double l2_norm(const SpectralState& s);

/// ||C_k|| for k = 0..K.
Eigen::VectorXd per_mode_norms(const SpectralState& s);

struct DiagnosticsSeries {
  std::vector<double> times;
  std::vector<double> norm;
  std::vector<Eigen::VectorXd> per_mode;
  std::vector<ConservedSet> conserved;

  void record(const SpectralState& s, const FunctionalBasis& basis);
  std::size_t size() const { return times.size(); }
};

struct DecayFit {
  double rate = 0.0;  // kappa = -slope of ln(norm) against t
  double intercept = 0.0;
  double r2 = 0.0;
  bool r2_defined = false;  // false when the log-norm has zero variance
  std::size_t samples = 0;
};

/// Least-squares line through (t_i, ln norm_i) for t_start <= t_i <= t_end. Needs at
/// least 10 samples with positive norms.
DecayFit fit_decay_rate(const DiagnosticsSeries& series, double t_start, double t_end);

/// h(x_i, v_j) on a tensor grid, as B_x C^T B_v^T with B the basis evaluation matrices.
Eigen::MatrixXd snapshot(const SpectralState& s, std::span<const double> xs, std::span<const double> vs,
                         const RecurrenceTable& recurrence);

/// Trapezoidal integral of h * rho(x) * mu(v) over the part of a snapshot grid with x <= 0.
double snapshot_left_mass(const Eigen::MatrixXd& grid, std::span<const double> xs, std::span<const double> vs,
                          const NormalizedPotential& p);

/// int_{x<0} C_0 rho dx, from the half-line integrals of P_0..P_N.
double left_well_mass(const SpectralState& s, const RecurrenceTable& t);

/// Uniform grid of `count` points on [lo, hi].
std::vector<double> linspace(double lo, double hi, int count);

}  // namespace specbgk
