#include "specbgk/conjecture_lab.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <string>

#include <Eigen/Eigenvalues>

#include "specbgk/error.hpp"

namespace specbgk {

namespace {

void check_spd(const Eigen::VectorXd& eig) {
  const double lo = eig.minCoeff();
  if (lo < 1.0 - 1e-8)
    throw Error(ErrorKind::hypothesis_violation,
                "Omega truncation has eigenvalue " + std::to_string(lo) + " < 1");
}

double sigma_max(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()[0];
}

}  // namespace

Eigen::MatrixXd omega_inv_sqrt(const Eigen::MatrixXd& omega, InvSqrtMethod method) {
  if (method == InvSqrtMethod::eigen) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(omega);
    if (es.info() != Eigen::Success) throw Error(ErrorKind::solver_failure, "eigendecomposition of Omega failed");
    check_spd(es.eigenvalues());
    return es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
           es.eigenvectors().transpose();
  }

  Eigen::LLT<Eigen::MatrixXd> llt(omega);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorKind::hypothesis_violation, "Omega truncation is not positive definite");
  const Eigen::Index n = omega.rows();
  const Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(n, n));

  // Denman-Beavers: Y -> inv^{1/2}, Z -> inv^{-1/2}
  Eigen::MatrixXd y = inv, z = Eigen::MatrixXd::Identity(n, n);
  for (int it = 0; it < 100; ++it) {
    const Eigen::MatrixXd y_next = 0.5 * (y + z.inverse());
    const Eigen::MatrixXd z_next = 0.5 * (z + y.inverse());
    const double change = (y_next - y).norm() / y_next.norm();
    y = y_next;
    z = z_next;
    if (change < 1e-15) break;
  }
  return 0.5 * (y + y.transpose());
}

KnValues estimate_kn(const BandedOperator& phi, int N, int M_big) {
  if (N < 0) throw Error(ErrorKind::invalid_argument, "N must be >= 0");
  const int deg = phi.bandwidth() + 1;
  if (M_big < N + 2 * deg)
    throw Error(ErrorKind::invalid_argument, "M_big = " + std::to_string(M_big) + " below N + 2 deg(phi) = " +
                                                 std::to_string(N + 2 * deg));
  const BandedOperator omega_b = build_omega_matrix(phi, M_big);
  const Eigen::MatrixXd omega = omega_b.dense();
  const Eigen::MatrixXd full = phi.dense().topLeftCorner(M_big, M_big);
  const Eigen::MatrixXd d = full.triangularView<Eigen::StrictlyUpper>();
  const Eigen::MatrixXd ds = full.triangularView<Eigen::StrictlyLower>();

  Eigen::MatrixXd proj = Eigen::MatrixXd::Zero(M_big, M_big);
  proj.topLeftCorner(N + 1, N + 1).setIdentity();
  const Eigen::MatrixXd embed = Eigen::MatrixXd::Identity(M_big, N + 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(omega);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::solver_failure, "eigendecomposition of Omega failed");
  check_spd(es.eigenvalues());
  const Eigen::MatrixXd& V = es.eigenvectors();
  const Eigen::MatrixXd inv_sqrt = V * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * V.transpose();
  const Eigen::MatrixXd inv = V * es.eigenvalues().cwiseInverse().asDiagonal() * V.transpose();

  const Eigen::MatrixXd ds_e = ds * embed;
  KnValues kn;
  kn[0] = sigma_max(inv_sqrt * proj * ds_e);
  kn[1] = sigma_max(inv * d * proj * ds_e);
  kn[2] = sigma_max(inv * proj * ds * proj * ds_e);
  kn[3] = sigma_max(inv * proj * ds * d * embed);
  return kn;
}

std::vector<int> default_schedule(int N) { return {N + 16, 2 * (N + 16), 4 * (N + 16)}; }

int required_recurrence(int degree, std::span<const int> Ns, const MBigSchedule& schedule) {
  int m = 0;
  for (int N : Ns)
    for (int mb : schedule(N)) m = std::max(m, mb);
  // Omega needs Phi of size M + deg - 1, which needs n_max >= size + deg
  return m + 2 * degree - 1;
}

std::vector<KNReport> kn_sweep(const RecurrenceTable& t, std::span<const int> Ns, const MBigSchedule& schedule) {
  if (Ns.empty()) return {};
  const int deg = t.weight().degree();
  const int need = required_recurrence(deg, Ns, schedule);
  if (t.n_max() < need)
    throw Error(ErrorKind::insufficient_recurrence,
                "kn sweep needs n_max >= " + std::to_string(need) + " (have " + std::to_string(t.n_max()) + ")");
  const BandedOperator phi = build_phi_matrix(t, need - deg);

  std::vector<std::future<KNReport>> jobs;
  jobs.reserve(Ns.size());
  for (int N : Ns)
    jobs.push_back(std::async(std::launch::async, [&phi, &schedule, N] {
      KNReport r;
      r.N = N;
      const auto sizes = schedule(N);
      if (sizes.empty()) throw Error(ErrorKind::invalid_argument, "empty M_big schedule");
      for (int mb : sizes) r.history.emplace_back(mb, estimate_kn(phi, N, mb));
      r.M_big = r.history.back().first;
      r.kn = r.history.back().second;
      r.converged = r.history.size() >= 2;
      if (r.converged) {
        const auto& prev = r.history[r.history.size() - 2].second;
        for (std::size_t j = 0; j < 4; ++j) {
          const double diff = std::abs(r.kn[j] - prev[j]);
          if (diff > 0.01 * std::abs(r.kn[j]) && diff > 1e-12) r.converged = false;
        }
      }
      return r;
    }));
  std::vector<KNReport> out;
  out.reserve(jobs.size());
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

}  // namespace specbgk
