#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "specbgk/operators.hpp"
#include "specbgk/orthopoly.hpp"

namespace specbgk {

/// Largest singular values, on X_N, of
///   kn0: Omega^{-1/2} Pi_N d*        kn1: Omega^{-1} d Pi_N d*
///   kn2: Omega^{-1} Pi_N d* Pi_N d*  kn3: Omega^{-1} Pi_N d* d
/// with d = d/dx and d* its adjoint in L^2(rho).
using KnValues = std::array<double, 4>;

struct KNReport {
  int N = 0;
  int M_big = 0;  // largest truncation used
  KnValues kn{};
  bool converged = false;
  std::vector<std::pair<int, KnValues>> history;  // (M_big, values) per schedule entry
};

enum class InvSqrtMethod { eigen, inverse_then_sqrt };

/// Omega^{-1/2} of a symmetric positive definite truncation. Throws hypothesis_violation
/// when the smallest eigenvalue is below 1 - 1e-8.
Eigen::MatrixXd omega_inv_sqrt(const Eigen::MatrixXd& omega, InvSqrtMethod method = InvSqrtMethod::eigen);

/// Values for one (N, M_big). `phi` must have size >= M_big + phi.bandwidth().
KnValues estimate_kn(const BandedOperator& phi, int N, int M_big);

using MBigSchedule = std::function<std::vector<int>(int N)>;

/// {N+16, 2(N+16), 4(N+16)}
std::vector<int> default_schedule(int N);

/// Recurrence length needed by kn_sweep for these N.
int required_recurrence(int degree, std::span<const int> Ns, const MBigSchedule& schedule = default_schedule);

/// One report per N; converged when the last two schedule entries agree to 1% relative.
std::vector<KNReport> kn_sweep(const RecurrenceTable& t, std::span<const int> Ns,
                               const MBigSchedule& schedule = default_schedule);

}  // namespace specbgk
