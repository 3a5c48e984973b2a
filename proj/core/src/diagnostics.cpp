#include "specbgk/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "specbgk/error.hpp"
#include "specbgk/weddle.hpp"

namespace specbgk {

FunctionalBasis functional_basis(const RecurrenceTable& t, int N) {
  if (N < 0) throw Error(ErrorKind::invalid_argument, "N must be >= 0");
  const auto& p = t.weight();
  // integrands phi * P_n have degree <= N + deg
  const int size = (N + p.degree()) / 2 + 1;
  if (t.n_max() < std::max(size - 1, N))
    throw Error(ErrorKind::insufficient_recurrence,
                "functional basis for N = " + std::to_string(N) + " needs n_max >= " + std::to_string(std::max(size - 1, N)));
  const QuadratureRule q = gauss_rule(t, size);
  FunctionalBasis b;
  b.ip_phi = inner_products(t, q, [&p](double x) { return p(x); }, N);
  b.ip_x = inner_products(t, q, [](double x) { return x; }, N);
  b.harmonic = p.harmonic();
  return b;
}

double ConservedSet::max_abs() const {
  double m = std::max(std::abs(mass), std::abs(energy_plus));
  for (const auto& o : {rx, m0, mx, energy_minus})
    if (o) m = std::max(m, std::abs(*o));
  return m;
}

ConservedSet conserved_functionals(const SpectralState& s, const FunctionalBasis& basis, bool with_harmonic) {
  if (with_harmonic && !basis.harmonic)
    throw Error(ErrorKind::invalid_argument, "harmonic functionals requested for a non-harmonic potential");
  if (basis.N() < s.N) throw Error(ErrorKind::invalid_argument, "functional basis shorter than state");
  const int N = s.N;
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  auto row = [&](int k, const Eigen::VectorXd& ip) {
    if (k > s.K) return 0.0;
    CompensatedSum acc;
    for (int n = 0; n <= N; ++n) acc.add(s.C(k, n) * ip[n]);
    return acc.value();
  };
  auto coef = [&](int k, int n) { return k <= s.K ? s.C(k, n) : 0.0; };

  ConservedSet c;
  c.mass = coef(0, 0);
  const double e = inv_sqrt2 * coef(2, 0);
  const double phi_r = row(0, basis.ip_phi);
  c.energy_plus = e + phi_r;
  if (with_harmonic) {
    c.rx = row(0, basis.ip_x);
    c.m0 = coef(1, 0);
    c.mx = row(1, basis.ip_x);
    c.energy_minus = e - phi_r;
  }
  return c;
}

double l2_norm(const SpectralState& s) { return s.C.norm(); }

Eigen::VectorXd per_mode_norms(const SpectralState& s) { return s.C.rowwise().norm(); }

void DiagnosticsSeries::record(const SpectralState& s, const FunctionalBasis& basis) {
  times.push_back(s.t);
  norm.push_back(l2_norm(s));
  per_mode.push_back(per_mode_norms(s));
  conserved.push_back(conserved_functionals(s, basis));
}

DecayFit fit_decay_rate(const DiagnosticsSeries& series, double t_start, double t_end) {
  std::vector<double> ts, ys;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double t = series.times[i];
    if (t < t_start || t > t_end) continue;
    if (!(series.norm[i] > 0.0))
      throw Error(ErrorKind::invalid_argument, "non-positive norm at t = " + std::to_string(t) + " in fit window");
    ts.push_back(t);
    ys.push_back(std::log(series.norm[i]));
  }
  if (ts.size() < 10)
    throw Error(ErrorKind::invalid_argument,
                "fit window holds " + std::to_string(ts.size()) + " samples, need at least 10");
  const double y0 = ys.front();
  for (double& y : ys) y -= y0;  // a constant series stays exactly flat
  const auto n = static_cast<double>(ts.size());
  double tm = 0.0, ym = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    tm += ts[i];
    ym += ys[i];
  }
  tm /= n;
  ym /= n;
  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    stt += (ts[i] - tm) * (ts[i] - tm);
    sty += (ts[i] - tm) * (ys[i] - ym);
    syy += (ys[i] - ym) * (ys[i] - ym);
  }
  if (!(stt > 0.0)) throw Error(ErrorKind::invalid_argument, "fit window has no spread in t");
  DecayFit f;
  const double slope = sty / stt;
  f.rate = -slope;
  f.intercept = y0 + ym - slope * tm;
  f.samples = ts.size();
  if (syy > 0.0) {
    double sse = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const double r = ys[i] - (ym + slope * (ts[i] - tm));
      sse += r * r;
    }
    f.r2 = 1.0 - sse / syy;
    f.r2_defined = true;
  }
  return f;
}

Eigen::MatrixXd snapshot(const SpectralState& s, std::span<const double> xs, std::span<const double> vs,
                         const RecurrenceTable& recurrence) {
  if (recurrence.n_max() < s.N) throw Error(ErrorKind::insufficient_recurrence, "recurrence shorter than state");
  const Eigen::MatrixXd bx = basis_matrix(recurrence, s.N, xs);
  const Eigen::MatrixXd bv = basis_matrix(hermite_table(s.K), s.K, vs);
  return bx * s.C.transpose() * bv.transpose();
}

double snapshot_left_mass(const Eigen::MatrixXd& grid, std::span<const double> xs, std::span<const double> vs,
                          const NormalizedPotential& p) {
  if (grid.rows() != static_cast<Eigen::Index>(xs.size()) || grid.cols() != static_cast<Eigen::Index>(vs.size()))
    throw Error(ErrorKind::invalid_argument, "snapshot grid does not match axes");
  auto mu = [](double v) { return std::exp(-0.5 * v * v) / std::sqrt(2.0 * std::numbers::pi); };
  auto trap = [](std::span<const double> axis, auto&& f, std::size_t end) {
    double acc = 0.0;
    for (std::size_t i = 1; i < end; ++i) acc += 0.5 * (axis[i] - axis[i - 1]) * (f(i) + f(i - 1));
    return acc;
  };
  std::size_t nx = 0;
  while (nx < xs.size() && xs[nx] <= 0.0) ++nx;
  auto column = [&](std::size_t i) {
    const double inner = trap(vs, [&](std::size_t j) { return grid(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * mu(vs[j]); },
                              vs.size());
    return inner * p.weight(xs[i]);
  };
  return trap(xs, column, nx);
}

double left_well_mass(const SpectralState& s, const RecurrenceTable& t) {
  const int N = s.N;
  if (t.n_max() < N) throw Error(ErrorKind::insufficient_recurrence, "recurrence shorter than state");
  const auto& p = t.weight();
  const double L = envelope_radius(p.poly(), N);

  // half-line integrals of P_n rho, refined until stable
  auto half_line = [&](std::size_t panels) {
    std::vector<double> nodes, weights;
    weddle_rule(-L, 0.0, panels, nodes, weights);
    std::vector<CompensatedSum> acc(static_cast<std::size_t>(N + 1));
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const Eigen::VectorXd v = eval_poly_all(t, N, nodes[i]);
      const double w = weights[i] * p.weight(nodes[i]);
      for (int n = 0; n <= N; ++n) acc[static_cast<std::size_t>(n)].add(w * v[n]);
    }
    Eigen::VectorXd out(N + 1);
    for (int n = 0; n <= N; ++n) out[n] = acc[static_cast<std::size_t>(n)].value();
    return out;
  };
  std::size_t panels = 32;
  Eigen::VectorXd prev = half_line(panels);
  for (;;) {
    panels *= 2;
    Eigen::VectorXd cur = half_line(panels);
    if ((cur - prev).lpNorm<Eigen::Infinity>() <= 1e-14 * std::max(1.0, cur.lpNorm<Eigen::Infinity>())) {
      prev = cur;
      break;
    }
    if (panels > (std::size_t{1} << 18)) throw Error(ErrorKind::integration_failure, "half-line integrals did not converge");
    prev = cur;
  }
  CompensatedSum m;
  for (int n = 0; n <= N; ++n) m.add(s.C(0, n) * prev[n]);
  return m.value();
}

std::vector<double> linspace(double lo, double hi, int count) {
  if (count < 1) throw Error(ErrorKind::invalid_argument, "linspace needs at least one point");
  std::vector<double> out(static_cast<std::size_t>(count));
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double h = (hi - lo) / (count - 1);
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = i == count - 1 ? hi : lo + i * h;
  return out;
}

}  // namespace specbgk
