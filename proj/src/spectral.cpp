#include "christoffel/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace christoffel {

namespace {

constexpr double kLimitLambda = 1e-8;

double two_pi_pow(int d) { return std::pow(2.0 * std::numbers::pi, d); }

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument(std::string(what) + " must be positive and finite");
  }
}

}  // namespace

double matern_q0_closed_form(double nu, double length, int dimension) {
  const double d = dimension;
  const double m = 2.0 * nu + d;
  const double amplitude = matern_spectral_amplitude(nu, length, dimension);
  const double sphere = std::pow(2.0, 1.0 - d) * std::pow(std::numbers::pi, -0.5 * d) / std::tgamma(0.5 * d);
  return std::pow(amplitude, d / m) * sphere * std::numbers::pi / (m * std::sin(d * std::numbers::pi / m));
}

double matern_q0_compact_form(double nu, double length, int dimension) {
  const double d = dimension;
  const double m = 2.0 * nu + d;
  const double amplitude = matern_spectral_amplitude(nu, length, dimension);
  return std::pow(amplitude, 1.0 / m) / (m * std::sin(d * std::numbers::pi / m));
}

double spectral_tail_coefficient(const KernelSpec& kernel, double s, double gamma) {
  const double power = 2.0 * s * gamma;
  auto scaled = [&](double r) { return std::exp(power * std::log(r)) * kernel.q_hat_radial(r); };
  // Lower-order terms of the polynomial contribute relative corrections in r^{-2}.
  const double coarse = scaled(1e4);
  const double fine = scaled(1e5);
  const double extrapolated = (100.0 * fine - coarse) / 99.0;
  if (!(extrapolated > 0.0) || !std::isfinite(extrapolated)) {
    throw NumericalError("spectral tail coefficient is not positive and finite", extrapolated);
  }
  return extrapolated;
}

SpectralProfile::SpectralProfile(KernelSpec kernel, QuadratureSettings settings)
    : kernel_(std::move(kernel)), settings_(settings), sobolev_(kernel_.sobolev()) {
  if (!sobolev_) {
    return;
  }
  const int d = dimension();
  const double power = 2.0 * sobolev_->s * sobolev_->gamma;
  if (!(power > d)) {
    throw std::invalid_argument("SpectralProfile: need 2 s gamma > d");
  }

  Q0Report report{};
  double coefficient = 0.0;
  if (const auto* m = std::get_if<Matern>(&kernel_.family())) {
    coefficient = matern_spectral_amplitude(m->nu, m->length, d);
    report.closed_form = matern_q0_closed_form(m->nu, m->length, d);
  } else if (const auto* p = std::get_if<RadialProfile>(&kernel_.family()); p && p->leading_coefficient) {
    coefficient = *p->leading_coefficient;
  } else {
    coefficient = spectral_tail_coefficient(kernel_, sobolev_->s, sobolev_->gamma);
  }

  const double scale = std::pow(coefficient, 1.0 / power);
  const auto homogeneous = radial_integral(
      [coefficient, power](double r) { return 1.0 / (1.0 + std::exp(power * std::log(r)) / coefficient); }, d,
      scale, settings_);
  report.homogeneous_quadrature = homogeneous.value / two_pi_pow(d);
  report.limit_lambda = kLimitLambda;
  report.limit_estimate = std::pow(kLimitLambda, d / power) / compute_D(kLimitLambda);
  report.value = report.homogeneous_quadrature;
  report.disagreement =
      report.closed_form && std::abs(*report.closed_form - report.value) > 0.01 * std::abs(report.value);
  q0_ = report;
}

SobolevParams SpectralProfile::sobolev() const {
  if (!sobolev_) {
    throw std::logic_error("SpectralProfile: " + kernel_.describe() + " has no Sobolev parameters");
  }
  return *sobolev_;
}

double SpectralProfile::exponent() const {
  const auto params = sobolev();
  return dimension() / (2.0 * params.s * params.gamma);
}

const Q0Report& SpectralProfile::q0_report() const {
  if (!q0_) {
    throw std::logic_error("SpectralProfile: q0 is undefined for " + kernel_.describe());
  }
  return *q0_;
}

QuadratureResult SpectralProfile::spectral_mass(double lambda) const {
  require_positive(lambda, "lambda");
  auto h = [this, lambda](double rho) {
    const double q = kernel_.q_hat_radial(rho);
    return q / (lambda + q);
  };
  return radial_integral(h, dimension(), half_height_radius(h), settings_);
}

double SpectralProfile::compute_D(double lambda) const {
  return two_pi_pow(dimension()) / spectral_mass(lambda).value;
}

double SpectralProfile::eval_f_lambda(double lambda, std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dimension()) {
    throw std::invalid_argument("eval_f_lambda: point dimension mismatch");
  }
  double r2 = 0.0;
  for (double c : x) {
    if (!std::isfinite(c)) {
      throw std::domain_error("eval_f_lambda: non-finite coordinate");
    }
    r2 += c * c;
  }
  return eval_f_lambda(lambda, std::sqrt(r2));
}

double SpectralProfile::eval_f_lambda(double lambda, double radius) const {
  require_positive(lambda, "lambda");
  const int d = dimension();
  if (d > 2) {
    throw std::invalid_argument("eval_f_lambda: only d = 1 and d = 2 are supported");
  }
  auto h = [this, lambda](double rho) {
    const double q = kernel_.q_hat_radial(rho);
    return q / (lambda + q);
  };
  const double scale = half_height_radius(h);
  const double mass = radial_integral(h, d, scale, settings_).value;
  if (radius == 0.0) {
    return 1.0;
  }
  return radial_fourier(h, d, std::abs(radius), scale, settings_).value / mass;
}

double SpectralProfile::tail_mass_ratio(double lambda, double epsilon) const {
  require_positive(lambda, "lambda");
  require_positive(epsilon, "epsilon");
  if (dimension() != 1) {
    throw std::invalid_argument("tail_mass_ratio: only d = 1 is supported");
  }
  auto h = [this, lambda](double rho) {
    const double q = kernel_.q_hat_radial(rho);
    return q / (lambda + q);
  };
  const double scale = half_height_radius(h);
  const double mass = radial_integral(h, 1, scale, settings_).value;
  const double D = two_pi_pow(1) / mass;
  auto f_squared = [&](double x) {
    const double f = radial_fourier(h, 1, x, scale, settings_).value / mass;
    return f * f;
  };

  // March outward panel by panel until the contributions are negligible
  // against lambda D, the quantity the tail is compared with.
  // Panels span one oscillation of f_lambda; f^2 is smooth at that scale, so a
  // shallow rule suffices and avoids refining quadrature noise where f ~ 0.
  const double width = std::numbers::pi / scale;
  double total = 0.0;
  double left = epsilon;
  int quiet = 0;
  constexpr int kMaxPanels = 100000;
  for (int panel = 0; panel < kMaxPanels; ++panel) {
    const auto piece = integrate_interval(f_squared, left, left + width, 1e-8, 3);
    total += piece.value;
    left += width;
    quiet = (piece.value <= 1e-14 * (total + lambda * D)) ? quiet + 1 : 0;
    if (quiet >= 3) {
      return 2.0 * total / (lambda * D);
    }
  }
  throw NumericalError("tail_mass_ratio: f_lambda^2 did not decay within the panel budget", left);
}

double SpectralProfile::default_tail_exponent() const {
  const auto params = sobolev();
  const double beta = exponent();
  const double p = std::ceil(params.s * params.gamma);
  return 0.9 * (1.0 - beta) / (8.0 * p);
}

double SpectralProfile::predict_inside(double lambda, double p_z) const {
  require_positive(lambda, "lambda");
  require_positive(p_z, "p_z");
  return p_z * compute_D(lambda / p_z);
}

double SpectralProfile::predict_asymptotic(double lambda, double p_z) const {
  require_positive(lambda, "lambda");
  require_positive(p_z, "p_z");
  const double beta = exponent();
  return std::pow(lambda, beta) * std::pow(p_z, 1.0 - beta) / q0();
}

OutsideEnvelope SpectralProfile::predict_outside(double lambda) const {
  require_positive(lambda, "lambda");
  const double root = std::sqrt(lambda);
  return {root * compute_D(root), lambda};
}

}  // namespace christoffel
