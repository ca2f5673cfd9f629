#include "christoffel/kernel.hpp"

#include "christoffel/quadrature.hpp"

#include <boost/math/policies/policy.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace christoffel {

namespace {

using BesselPolicy = boost::math::policies::policy<
    boost::math::policies::overflow_error<boost::math::policies::ignore_error>,
    boost::math::policies::underflow_error<boost::math::policies::ignore_error>>;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

double euclidean_norm(std::span<const double> x) {
  double sum = 0.0;
  for (double v : x) {
    if (!std::isfinite(v)) {
      throw std::domain_error("kernel: non-finite coordinate");
    }
    sum += v * v;
  }
  return std::sqrt(sum);
}

double matern_q(const Matern& m, double r) {
  if (r == 0.0) {
    return 1.0;
  }
  const double z = std::sqrt(2.0 * m.nu) * r / m.length;
  if (m.nu == 0.5) {
    return std::exp(-z);
  }
  if (m.nu == 1.5) {
    return (1.0 + z) * std::exp(-z);
  }
  if (m.nu == 2.5) {
    return (1.0 + z + z * z / 3.0) * std::exp(-z);
  }
  return matern_bessel_form(m.nu, m.length, r);
}

double matern_q_hat(const Matern& m, int d, double rho) {
  const double gamma = m.nu + 0.5 * d;
  const double shift = 2.0 * m.nu / (m.length * m.length);
  return matern_spectral_amplitude(m.nu, m.length, d) * std::exp(-gamma * std::log(shift + rho * rho));
}

// Characteristic radius of a spectral density, used to split quadratures.
double spectral_scale(const KernelSpec& spec) {
  return half_height_radius([&spec](double rho) { return spec.q_hat_radial(rho); });
}

}  // namespace

double bessel_k(double nu, double x) {
  if (!std::isfinite(nu) || !std::isfinite(x)) {
    throw std::domain_error("bessel_k: non-finite argument");
  }
  if (x <= 0.0) {
    std::ostringstream msg;
    msg << "bessel_k: argument must be positive, got x = " << x;
    throw std::domain_error(msg.str());
  }
  return boost::math::cyl_bessel_k(std::abs(nu), x, BesselPolicy());
}

double matern_bessel_form(double nu, double length, double r) {
  if (r == 0.0) {
    return 1.0;
  }
  const double z = std::sqrt(2.0 * nu) * r / length;
  const double k = bessel_k(nu, z);
  if (k == 0.0) {
    return 0.0;
  }
  if (!std::isfinite(k)) {
    // z^nu K_nu(z) -> Gamma(nu) 2^{nu-1}; overflow only happens for z far below any resolvable scale.
    return 1.0;
  }
  const double log_q = (1.0 - nu) * std::numbers::ln2 - std::lgamma(nu) + nu * std::log(z) + std::log(k);
  return std::min(1.0, std::exp(log_q));
}

double matern_spectral_amplitude(double nu, double length, int dimension) {
  const double d = dimension;
  const double log_amp = d * std::numbers::ln2 + 0.5 * d * std::log(std::numbers::pi) +
                         std::lgamma(nu + 0.5 * d) + nu * std::log(2.0 * nu) - std::lgamma(nu) -
                         2.0 * nu * std::log(length);
  return std::exp(log_amp);
}

KernelSpec::KernelSpec(KernelFamily family, int dimension)
    : family_(std::move(family)), dimension_(dimension) {}

KernelSpec KernelSpec::matern(double nu, double length, int dimension) {
  if (!(nu > 0.0) || !std::isfinite(nu)) {
    throw std::invalid_argument("matern: nu must be positive");
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw std::invalid_argument("matern: length must be positive");
  }
  if (dimension < 1) {
    throw std::invalid_argument("matern: dimension must be positive");
  }
  return KernelSpec(Matern{nu, length}, dimension);
}

KernelSpec KernelSpec::gaussian(double length, int dimension) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw std::invalid_argument("gaussian: length must be positive");
  }
  if (dimension < 1) {
    throw std::invalid_argument("gaussian: dimension must be positive");
  }
  return KernelSpec(Gaussian{length}, dimension);
}

KernelSpec KernelSpec::radial_profile(std::function<double(double)> q_hat_of_r, double s, double gamma,
                                      int dimension, std::optional<double> leading_coefficient) {
  if (!q_hat_of_r) {
    throw std::invalid_argument("radial_profile: empty spectral profile");
  }
  if (!(s > 0.0) || !(gamma >= 1.0)) {
    throw std::invalid_argument("radial_profile: need s > 0 and gamma >= 1");
  }
  if (dimension < 1 || dimension > 2) {
    throw std::invalid_argument("radial_profile: only d = 1 and d = 2 are supported");
  }
  if (!(2.0 * s * gamma > dimension)) {
    throw std::invalid_argument("radial_profile: need 2 s gamma > d");
  }
  const double at_zero = q_hat_of_r(0.0);
  if (!(at_zero > 0.0) || !std::isfinite(at_zero)) {
    throw std::invalid_argument("radial_profile: q_hat(0) must be positive and finite");
  }
  KernelSpec spec(RadialProfile{std::move(q_hat_of_r), s, gamma, leading_coefficient}, dimension);
  const double total = radial_integral([&spec](double rho) { return spec.q_hat_radial(rho); }, dimension,
                                       spectral_scale(spec))
                           .value;
  spec.q_zero_ = total / std::pow(2.0 * std::numbers::pi, dimension);
  return spec;
}

KernelSpec KernelSpec::sum(const KernelSpec& a, const KernelSpec& b) {
  if (a.dimension() != b.dimension()) {
    throw std::invalid_argument("kernel sum: dimension mismatch");
  }
  KernelSpec spec(KernelSum{std::make_shared<const KernelSpec>(a), std::make_shared<const KernelSpec>(b)},
                  a.dimension());
  spec.q_zero_ = a.q_at_zero() + b.q_at_zero();
  return spec;
}

double KernelSpec::q(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dimension_) {
    throw std::invalid_argument("kernel: point dimension mismatch");
  }
  return q_radial(euclidean_norm(x));
}

double KernelSpec::q_radial(double r) const {
  if (!std::isfinite(r)) {
    throw std::domain_error("kernel: non-finite radius");
  }
  r = std::abs(r);
  return std::visit(
      Overloaded{
          [r](const Matern& m) { return matern_q(m, r); },
          [r](const Gaussian& g) { return std::exp(-r * r / g.length); },
          [this, r](const RadialProfile&) {
            if (r == 0.0) {
              return q_zero_;
            }
            const auto value = radial_fourier([this](double rho) { return q_hat_radial(rho); }, dimension_, r,
                                              spectral_scale(*this));
            return value.value / std::pow(2.0 * std::numbers::pi, dimension_);
          },
          [r](const KernelSum& s) { return s.first->q_radial(r) + s.second->q_radial(r); },
      },
      family_);
}

double KernelSpec::q_hat(std::span<const double> omega) const {
  if (static_cast<int>(omega.size()) != dimension_) {
    throw std::invalid_argument("kernel: frequency dimension mismatch");
  }
  return q_hat_radial(euclidean_norm(omega));
}

double KernelSpec::q_hat_radial(double rho) const {
  if (!std::isfinite(rho)) {
    throw std::domain_error("kernel: non-finite frequency");
  }
  rho = std::abs(rho);
  const int d = dimension_;
  return std::visit(
      Overloaded{
          [d, rho](const Matern& m) { return matern_q_hat(m, d, rho); },
          [d, rho](const Gaussian& g) {
            return std::pow(std::numbers::pi * g.length, 0.5 * d) * std::exp(-0.25 * g.length * rho * rho);
          },
          [rho](const RadialProfile& p) { return p.q_hat_of_r(rho); },
          [rho](const KernelSum& s) { return s.first->q_hat_radial(rho) + s.second->q_hat_radial(rho); },
      },
      family_);
}

std::optional<SobolevParams> KernelSpec::sobolev() const {
  const int d = dimension_;
  return std::visit(Overloaded{
                        [d](const Matern& m) -> std::optional<SobolevParams> {
                          return SobolevParams{1.0, m.nu + 0.5 * d};
                        },
                        [](const Gaussian&) -> std::optional<SobolevParams> { return std::nullopt; },
                        [](const RadialProfile& p) -> std::optional<SobolevParams> {
                          return SobolevParams{p.s, p.gamma};
                        },
                        [](const KernelSum&) -> std::optional<SobolevParams> { return std::nullopt; },
                    },
                    family_);
}

std::string KernelSpec::describe() const {
  std::ostringstream out;
  out.precision(17);
  std::visit(Overloaded{
                 [&out](const Matern& m) { out << "matern(nu=" << m.nu << ",length=" << m.length << ")"; },
                 [&out](const Gaussian& g) { out << "gaussian(length=" << g.length << ")"; },
                 [&out](const RadialProfile& p) {
                   out << "radial_profile(s=" << p.s << ",gamma=" << p.gamma << ")";
                 },
                 [&out](const KernelSum& s) {
                   out << "sum(" << s.first->describe() << "," << s.second->describe() << ")";
                 },
             },
             family_);
  out << "[d=" << dimension_ << "]";
  return out.str();
}

RoundtripReport fourier_roundtrip_check(const KernelSpec& spec,
                                        const std::vector<std::vector<double>>& points) {
  const int d = spec.dimension();
  if (d != 1 && d != 2) {
    throw std::invalid_argument("fourier_roundtrip_check: only d = 1 and d = 2 are supported");
  }
  const double scale = spectral_scale(spec);
  const double norm = std::pow(2.0 * std::numbers::pi, d);
  auto q_hat = [&spec](double rho) { return spec.q_hat_radial(rho); };
  RoundtripReport report{0.0, 0.0};
  for (const auto& x : points) {
    const double direct = spec.q(x);
    const auto inverted = radial_fourier(q_hat, d, euclidean_norm(x), scale);
    report.max_deviation = std::max(report.max_deviation, std::abs(direct - inverted.value / norm));
    report.achieved_tolerance = std::max(report.achieved_tolerance, inverted.error / norm);
  }
  return report;
}

}  // namespace christoffel
