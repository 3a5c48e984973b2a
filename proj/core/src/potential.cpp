#include "specbgk/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "specbgk/error.hpp"
#include "specbgk/weddle.hpp"

namespace specbgk {

EvenPolynomial::EvenPolynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {}

double EvenPolynomial::value(double x) const {
  const double y = x * x;
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * y + *it;
  return acc;
}

// d/dx sum g_i x^(2i) = x * sum 2i g_i y^(i-1)
double EvenPolynomial::d1(double x) const {
  const double y = x * x;
  double acc = 0.0;
  for (std::size_t i = coeffs_.size(); i-- > 1;) acc = acc * y + 2.0 * static_cast<double>(i) * coeffs_[i];
  return x * acc;
}

double EvenPolynomial::d2(double x) const {
  const double y = x * x;
  double acc = 0.0;
  for (std::size_t i = coeffs_.size(); i-- > 1;) {
    const double k = 2.0 * static_cast<double>(i);
    acc = acc * y + k * (k - 1.0) * coeffs_[i];
  }
  return acc;
}

double EvenPolynomial::d3(double x) const {
  const double y = x * x;
  double acc = 0.0;
  for (std::size_t i = coeffs_.size(); i-- > 2;) {
    const double k = 2.0 * static_cast<double>(i);
    acc = acc * y + k * (k - 1.0) * (k - 2.0) * coeffs_[i];
  }
  return x * acc;
}

void validate(const RawPotential& raw) {
  if (raw.coeffs.size() < 2)
    throw Error(ErrorKind::invalid_potential, "potential must have degree >= 2 (at least two even-power coefficients)");
  for (double c : raw.coeffs)
    if (!std::isfinite(c)) throw Error(ErrorKind::invalid_potential, "potential coefficient is not finite");
  if (!(raw.coeffs.back() > 0.0))
    throw Error(ErrorKind::invalid_potential,
                "leading coefficient must be positive (got " + std::to_string(raw.coeffs.back()) + ")");
}

NormalizedPotential::NormalizedPotential(std::vector<double> coeffs, double scale, double log_shift)
    : poly_(std::move(coeffs)), scale_(scale), log_shift_(log_shift) {}

double NormalizedPotential::weight(double x) const { return std::exp(-poly_.value(x)); }

namespace {

constexpr double kTailDecades = 80.0;

/// Grows R from `start` until `below(R)` is false and stays false under doubling.
template <class Pred>
double outer_bound(Pred below, double start = 1.0) {
  double r = std::max(start, 1.0);
  while (below(r) || below(2.0 * r)) {
    r *= 2.0;
    if (r > 1e8) throw Error(ErrorKind::integration_failure, "weight tail bound exceeds 1e8");
  }
  return r;
}

/// Smallest x in [start, r] with g(x) >= target, assuming g(r) >= target.
template <class G>
double first_crossing(G g, double target, double start, double r) {
  constexpr int samples = 4096;
  if (g(start) >= target) return start;
  double lo = start, hi = r;
  for (int i = 1; i <= samples; ++i) {
    const double x = start + (r - start) * i / samples;
    if (g(x) >= target) {
      hi = x;
      break;
    }
    lo = x;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < target ? lo : hi) = mid;
  }
  return hi;
}

/// Location and value of the sampled minimum of g on [0, r].
template <class G>
std::pair<double, double> sampled_argmin(G g, double r) {
  constexpr int samples = 8192;
  double best_x = 0.0, best = g(0.0);
  for (int i = 1; i <= samples; ++i) {
    const double x = r * i / samples;
    if (const double v = g(x); v < best) {
      best = v;
      best_x = x;
    }
  }
  return {best_x, best};
}

double sampled_min(const EvenPolynomial& phi, double r) {
  return sampled_argmin([&](double x) { return phi.value(x); }, r).second;
}

}  // namespace

double truncation_radius(const EvenPolynomial& phi) {
  auto f = [&](double x) { return phi.value(x); };
  const double r0 = outer_bound([&](double x) { return f(x) < f(0.0) + kTailDecades || phi.d1(x) <= 0.0; });
  const auto [x_min, f_min] = sampled_argmin(f, r0);
  const double target = std::max(kTailDecades, f_min + kTailDecades);
  const double r = outer_bound([&](double x) { return f(x) < target; }, 2.0 * x_min);
  return first_crossing(f, target, x_min, r);
}

double envelope_radius(const EvenPolynomial& phi, int degree) {
  const double deg = static_cast<double>(degree);
  // minus log of the envelope; eventually increasing
  auto f = [&](double x) { return phi.value(x) - deg * std::log1p(x); };
  const double r0 = outer_bound([&](double x) {
    return f(x) < f(0.0) + kTailDecades || phi.d1(x) * (1.0 + x) <= deg;
  });
  const auto [x_peak, f_peak] = sampled_argmin(f, r0);
  const double target = f_peak + kTailDecades;
  const double r = outer_bound([&](double x) { return f(x) < target; }, 2.0 * x_peak);
  return first_crossing(f, target, x_peak, r);
}

NormalizedPotential normalize_potential(const RawPotential& raw, double quad_tol) {
  validate(raw);
  if (!(quad_tol > 0.0)) throw Error(ErrorKind::invalid_argument, "quad_tol must be positive");
  const EvenPolynomial phi(raw.coeffs);
  const double radius = truncation_radius(phi);
  const double shift = sampled_min(phi, radius);

  // integrands scaled by e^{shift} so that deep wells cannot overflow
  auto mass = [&](double x) { return std::exp(-(phi.value(x) - shift)); };
  auto curvature = [&](double x) { return phi.d2(x) * std::exp(-(phi.value(x) - shift)); };
  const double z = 2.0 * weddle_integrate_adaptive(mass, 0.0, radius, quad_tol).value;
  const double w = 2.0 * weddle_integrate_adaptive(curvature, 0.0, radius, quad_tol).value;
  if (!(z > 0.0) || !(w > 0.0) || !std::isfinite(z) || !std::isfinite(w))
    throw Error(ErrorKind::integration_failure, "normalization integrals are not finite and positive");

  const double log_z = std::log(z) - shift;
  const double log_w = std::log(w) - shift;
  const double scale = std::sqrt(z / w);
  const double log_c = 0.5 * (log_z + log_w);

  std::vector<double> coeffs(raw.coeffs.size());
  double s2 = 1.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    coeffs[i] = raw.coeffs[i] * s2;
    s2 *= scale * scale;
  }
  coeffs[0] += log_c;
  return NormalizedPotential(std::move(coeffs), scale, log_c);
}

NormalizedPotential harmonic_potential() {
  return NormalizedPotential({0.5 * std::log(2.0 * std::numbers::pi), 0.5}, 1.0, 0.0);
}

double eval_potential(const NormalizedPotential& p, double x) { return p.poly().value(x); }
double eval_dphi(const NormalizedPotential& p, double x) { return p.poly().d1(x); }
double eval_d2phi(const NormalizedPotential& p, double x) { return p.poly().d2(x); }
double eval_d3phi(const NormalizedPotential& p, double x) { return p.poly().d3(x); }

NormalizationResiduals normalization_residuals(const NormalizedPotential& p, double quad_tol) {
  const auto& phi = p.poly();
  const double radius = truncation_radius(phi);
  auto rho = [&](double x) { return std::exp(-phi.value(x)); };
  const double mass = 2.0 * weddle_integrate_adaptive(rho, 0.0, radius, quad_tol).value;
  const double curv =
      2.0 * weddle_integrate_adaptive([&](double x) { return phi.d2(x) * rho(x); }, 0.0, radius, quad_tol).value;
  // full-line first moment, evaluated without exploiting symmetry
  const double centering =
      weddle_integrate_adaptive([&](double x) { return x * rho(x); }, -radius, radius, quad_tol, 1e-15).value;
  return {std::abs(mass - 1.0), std::abs(curv - 1.0), std::abs(centering)};
}

}  // namespace specbgk
