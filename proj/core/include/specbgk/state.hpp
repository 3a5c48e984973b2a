#pragma once

#include <Eigen/Dense>

namespace specbgk {

/// Row-major so that the flat index of (k, n) is k * (N + 1) + n.
using CoeffMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Coefficients C[k][n] of h(t, x, v) = sum_{k <= K, n <= N} C[k][n] P_n(x) H_k(v).
struct SpectralState {
  int K = 0;
  int N = 0;
  double t = 0.0;
  CoeffMatrix C;

  static SpectralState zero(int K, int N, double t = 0.0) {
    return {K, N, t, CoeffMatrix::Zero(K + 1, N + 1)};
  }

  Eigen::Index dim() const { return static_cast<Eigen::Index>(K + 1) * (N + 1); }
  Eigen::Map<const Eigen::VectorXd> flat() const { return {C.data(), dim()}; }
  Eigen::Map<Eigen::VectorXd> flat() { return {C.data(), dim()}; }
};

}  // namespace specbgk
