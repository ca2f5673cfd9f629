#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace christoffel {

/// Sobolev-type parameters of a kernel whose spectral density decays like
/// ||w||^{-2 s gamma}. Only these kernels admit the power-law asymptotics.
struct SobolevParams {
  double s;
  double gamma;
};

struct Matern {
  double nu;
  double length;
};

/// q(x) = exp(-||x||^2 / length), q_hat(w) = (pi length)^{d/2} exp(-length ||w||^2 / 4).
struct Gaussian {
  double length;
};

/// Radial spectral density supplied by the caller, q_hat(w) = profile(||w||).
/// The profile is expected to behave like 1 / (kappa r^{2s})^gamma for large r;
/// `leading_coefficient` is lim r^{2 s gamma} q_hat(r) when known.
struct RadialProfile {
  std::function<double(double)> q_hat_of_r;
  double s;
  double gamma;
  std::optional<double> leading_coefficient;
};

class KernelSpec;

/// k + k' for two kernels of the same dimension.
struct KernelSum {
  std::shared_ptr<const KernelSpec> first;
  std::shared_ptr<const KernelSpec> second;
};

using KernelFamily = std::variant<Matern, Gaussian, RadialProfile, KernelSum>;

/// Translation-invariant kernel k(x, y) = q(x - y) on R^d together with its
/// spectral density q_hat. Immutable; all member functions are thread-safe.
class KernelSpec {
public:
  static KernelSpec matern(double nu, double length, int dimension);
  static KernelSpec gaussian(double length, int dimension);
  static KernelSpec radial_profile(std::function<double(double)> q_hat_of_r, double s, double gamma,
                                   int dimension, std::optional<double> leading_coefficient = {});
  static KernelSpec sum(const KernelSpec& a, const KernelSpec& b);

  int dimension() const { return dimension_; }
  const KernelFamily& family() const { return family_; }

  /// q(x) = k(x, 0).
  double q(std::span<const double> x) const;
  /// Radial profile of q, for r = ||x|| >= 0.
  double q_radial(double r) const;
  double q_at_zero() const { return q_zero_; }

  double q_hat(std::span<const double> omega) const;
  double q_hat_radial(double rho) const;

  /// (s, gamma) for Matern and radial profiles; empty for Gaussian and sums.
  std::optional<SobolevParams> sobolev() const;

  std::string describe() const;

private:
  KernelSpec(KernelFamily family, int dimension);

  KernelFamily family_;
  int dimension_;
  double q_zero_ = 1.0;
};

/// Modified Bessel function of the second kind K_nu(x), x > 0. Negative orders
/// are accepted through K_{-nu} = K_nu. Underflows gracefully to 0.
double bessel_k(double nu, double x);

/// Matern profile evaluated through the Bessel representation, without any
/// half-integer shortcut. Exposed so the closed forms can be checked against it.
double matern_bessel_form(double nu, double length, double r);

/// Leading constant of the Matern spectral density,
/// 2^d pi^{d/2} Gamma(nu + d/2) (2 nu)^nu / (Gamma(nu) l^{2 nu}).
double matern_spectral_amplitude(double nu, double length, int dimension);

struct RoundtripReport {
  double max_deviation;
  double achieved_tolerance;
};

/// Inverts q_hat numerically (radial Fourier quadrature) at each point and
/// returns the worst |q(x) - invFT[q_hat](x)|. Self-test only; d in {1, 2}.
RoundtripReport fourier_roundtrip_check(const KernelSpec& spec,
                                        const std::vector<std::vector<double>>& points);

}  // namespace christoffel
