#pragma once

#include "christoffel/kernel.hpp"
#include "christoffel/quadrature.hpp"

#include <optional>
#include <span>
#include <utility>

namespace christoffel {

/// The constant q0 in D(lambda) ~ lambda^beta / q0, computed three ways.
struct Q0Report {
  /// Matern only: exact closed form of the homogeneous integral.
  std::optional<double> closed_form;
  /// (2 pi)^{-d} int dw / (1 + |w|^{2 s gamma} / c), c = lim r^{2 s gamma} q_hat(r), by quadrature.
  double homogeneous_quadrature;
  /// lambda^beta / D(lambda) at lambda = limit_lambda.
  double limit_estimate;
  double limit_lambda;
  /// Authoritative value (the quadrature).
  double value;
  /// Set when the closed form and the quadrature differ by more than 1%.
  bool disagreement;
};

struct OutsideEnvelope {
  double sqrt_scale;  // sqrt(lambda) D(sqrt(lambda))
  double linear;      // lambda
};

/// Population-level quantities of a translation-invariant kernel: the
/// Lebesgue-measure Christoffel function D(lambda), its extremal function
/// f_lambda, and for Sobolev-type kernels the exponent beta = d / (2 s gamma)
/// and the constant q0. Immutable; every query is thread-safe.
class SpectralProfile {
public:
  explicit SpectralProfile(KernelSpec kernel, QuadratureSettings settings = {});

  const KernelSpec& kernel() const { return kernel_; }
  int dimension() const { return kernel_.dimension(); }
  const QuadratureSettings& settings() const { return settings_; }

  bool has_power_law() const { return sobolev_.has_value(); }
  /// beta = d / (2 s gamma); throws std::logic_error for kernels without Sobolev parameters.
  double exponent() const;
  SobolevParams sobolev() const;
  double q0() const { return q0_report().value; }
  const Q0Report& q0_report() const;

  /// D(lambda) = (2 pi)^d / int q_hat / (lambda + q_hat).
  double compute_D(double lambda) const;
  QuadratureResult spectral_mass(double lambda) const;

  /// f_lambda(x) = D(lambda) (2 pi)^{-d} int q_hat(w) e^{i w.x} / (q_hat(w) + lambda) dw, d in {1, 2}.
  double eval_f_lambda(double lambda, std::span<const double> x) const;
  double eval_f_lambda(double lambda, double radius) const;

  /// (int_{|x| >= epsilon} f_lambda^2) / (lambda D(lambda)); d = 1 only.
  double tail_mass_ratio(double lambda, double epsilon) const;
  /// ell = 0.9 (1 - beta) / (8 ceil(s gamma)), so that epsilon(lambda) = lambda^ell.
  double default_tail_exponent() const;

  /// p D(lambda / p).
  double predict_inside(double lambda, double p_z) const;
  /// lambda^beta p^{1 - beta} / q0.
  double predict_asymptotic(double lambda, double p_z) const;
  OutsideEnvelope predict_outside(double lambda) const;

private:
  KernelSpec kernel_;
  QuadratureSettings settings_;
  std::optional<SobolevParams> sobolev_;
  std::optional<Q0Report> q0_;
};

/// Closed form of q0 for the Matern kernel in any dimension.
double matern_q0_closed_form(double nu, double length, int dimension);

/// The compact expression A^{1/(2nu+d)} / ((2nu+d) sin(d pi / (2nu+d))), A the
/// Matern spectral amplitude. Coincides with matern_q0_closed_form for d = 1 only.
double matern_q0_compact_form(double nu, double length, int dimension);

/// lim_{r -> inf} r^{2 s gamma} q_hat(r), by Richardson extrapolation over decades.
double spectral_tail_coefficient(const KernelSpec& kernel, double s, double gamma);

}  // namespace christoffel
