#pragma once

#include <span>
#include <vector>

namespace specbgk {

/// Even polynomial sum_i coeffs[i] * x^(2i), evaluated by Horner in x^2.
class EvenPolynomial {
 public:
  EvenPolynomial() = default;
  explicit EvenPolynomial(std::vector<double> coeffs);

  std::span<const double> coeffs() const { return coeffs_; }
  int degree() const { return 2 * (static_cast<int>(coeffs_.size()) - 1); }

  double value(double x) const;
  double d1(double x) const;
  double d2(double x) const;
  double d3(double x) const;

 private:
  std::vector<double> coeffs_;
};

/// Potential as supplied by the user, before normalization.
struct RawPotential {
  std::vector<double> coeffs;  // gamma_0 .. gamma_m

  int degree() const { return 2 * (static_cast<int>(coeffs.size()) - 1); }
};

/// Throws ErrorKind::invalid_potential unless degree >= 2 and the leading coefficient is positive.
void validate(const RawPotential& raw);

/// Potential rescaled as phi~(x) = phi(scale * x) + log_shift, so that the weight
/// e^{-phi~} has unit mass and <phi~''> = 1.
class NormalizedPotential {
 public:
  NormalizedPotential(std::vector<double> coeffs, double scale, double log_shift);

  const EvenPolynomial& poly() const { return poly_; }
  std::span<const double> coeffs() const { return poly_.coeffs(); }
  int degree() const { return poly_.degree(); }
  double leading() const { return poly_.coeffs().back(); }
  double scale() const { return scale_; }
  double log_shift() const { return log_shift_; }
  bool harmonic() const { return degree() == 2; }

  double operator()(double x) const { return poly_.value(x); }
  double weight(double x) const;

 private:
  EvenPolynomial poly_;
  double scale_;
  double log_shift_;
};

NormalizedPotential normalize_potential(const RawPotential& raw, double quad_tol = 1e-12);

/// Harmonic potential (x^2 + ln 2pi)/2, built without quadrature.
NormalizedPotential harmonic_potential();

double eval_potential(const NormalizedPotential& p, double x);
double eval_dphi(const NormalizedPotential& p, double x);
double eval_d2phi(const NormalizedPotential& p, double x);
double eval_d3phi(const NormalizedPotential& p, double x);

/// Smallest L > 0 with phi(L) >= max(80, min phi + 80); the weight-integral truncation.
double truncation_radius(const EvenPolynomial& phi);

/// Radius beyond which (1+|x|)^degree e^{-phi(x)} has fallen e^{-80} below its peak.
/// With degree = 0 this reduces to the relative form of truncation_radius.
double envelope_radius(const EvenPolynomial& phi, int degree);

struct NormalizationResiduals {
  double mass;       // |<1> - 1|
  double curvature;  // |<phi''> - 1|
  double centering;  // |<x>|
};

NormalizationResiduals normalization_residuals(const NormalizedPotential& p, double quad_tol = 1e-12);

}  // namespace specbgk
