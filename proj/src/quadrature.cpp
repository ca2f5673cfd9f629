#include "christoffel/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace christoffel {

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 31>;

// Zeros of the radial Fourier weight: cos(x) for d = 1, J_0(x) for d = 2.
std::vector<double> weight_zeros(int dimension, std::size_t count) {
  std::vector<double> zeros;
  zeros.reserve(count);
  if (dimension == 1) {
    for (std::size_t k = 0; k < count; ++k) {
      zeros.push_back((static_cast<double>(k) + 0.5) * std::numbers::pi);
    }
  } else {
    boost::math::cyl_bessel_j_zero(0.0, 1, static_cast<unsigned>(count), std::back_inserter(zeros));
  }
  return zeros;
}

}  // namespace

QuadratureResult integrate_interval(const RealFunction& f, double a, double b, double rel_tol,
                                    unsigned max_depth) {
  if (a == b) {
    return {0.0, 0.0};
  }
  double error = 0.0;
  const double value = Kronrod::integrate(f, a, b, max_depth, rel_tol, &error);
  return {value, error};
}

QuadratureResult integrate_semi_infinite(const RealFunction& g, double scale,
                                         const QuadratureSettings& settings) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("integrate_semi_infinite: scale must be positive and finite");
  }
  QuadratureResult total = integrate_interval(g, 0.0, scale, settings.rel_tol);

  auto log_integrand = [&g](double u) {
    const double r = std::exp(u);
    return g(r) * r;
  };

  double a = scale;
  double peak = std::abs(scale * g(scale));
  double last = peak;
  bool truncated = false;
  for (int decade = 0; decade < settings.max_decades; ++decade) {
    const double b = 10.0 * a;
    const auto piece = integrate_interval(log_integrand, std::log(a), std::log(b), settings.rel_tol);
    total.value += piece.value;
    total.error += piece.error;
    last = std::abs(b * g(b));
    peak = std::max(peak, last);
    a = b;
    if (last <= settings.cutoff_ratio * peak) {
      truncated = true;
      break;
    }
  }
  if (!truncated) {
    throw NumericalError("radial integrand does not decay within the decade budget",
                         peak > 0.0 ? last / peak : last);
  }

  // Power-law tail beyond the cutoff: g(r) ~ g(a) (r / a)^slope.
  const double g_end = g(a);
  if (g_end != 0.0) {
    const double g_half = g(0.5 * a);
    const double slope = (g_half == 0.0) ? -std::numeric_limits<double>::infinity()
                                         : std::log(std::abs(g_end / g_half)) / std::log(2.0);
    if (!(slope < -1.05)) {
      throw NumericalError("radial integrand tail is not integrable", slope);
    }
    if (std::isfinite(slope)) {
      const double tail = g_end * a / (-slope - 1.0);
      total.value += tail;
      total.error += 0.01 * std::abs(tail);
    }
  }
  return total;
}

double sphere_area(int dimension) {
  const double half = 0.5 * dimension;
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

QuadratureResult radial_integral(const RealFunction& h, int dimension, double scale,
                                 const QuadratureSettings& settings) {
  if (dimension < 1) {
    throw std::invalid_argument("radial_integral: dimension must be positive");
  }
  auto g = [&h, dimension](double r) {
    return dimension == 1 ? h(r) : h(r) * std::pow(r, dimension - 1);
  };
  auto result = integrate_semi_infinite(g, scale, settings);
  const double area = sphere_area(dimension);
  return {result.value * area, result.error * area};
}

double wynn_epsilon(const std::vector<double>& partial_sums) {
  if (partial_sums.empty()) {
    throw std::invalid_argument("wynn_epsilon: empty sequence");
  }
  std::vector<double> previous(partial_sums.size(), 0.0);
  std::vector<double> current = partial_sums;
  double best = partial_sums.back();
  for (std::size_t column = 0; current.size() > 1; ++column) {
    std::vector<double> next(current.size() - 1);
    for (std::size_t j = 0; j + 1 < current.size(); ++j) {
      const double diff = current[j + 1] - current[j];
      if (diff == 0.0) {
        return column % 2 == 0 ? current[j + 1] : best;
      }
      next[j] = previous[j + 1] + 1.0 / diff;
    }
    previous = std::move(current);
    current = std::move(next);
    if (column % 2 == 1) {
      best = current.back();
    }
  }
  return best;
}

QuadratureResult radial_fourier(const RealFunction& h, int dimension, double r, double scale,
                                const QuadratureSettings& settings) {
  if (dimension != 1 && dimension != 2) {
    throw std::invalid_argument("radial_fourier: only d = 1 and d = 2 are supported");
  }
  if (r == 0.0) {
    return radial_integral(h, dimension, scale, settings);
  }
  r = std::abs(r);

  // Substituting t = rho r maps the weight zeros to fixed positions.
  RealFunction integrand;
  double prefactor;
  if (dimension == 1) {
    integrand = [&h, r](double t) { return h(t / r) * std::cos(t); };
    prefactor = 2.0 / r;
  } else {
    integrand = [&h, r](double t) { return h(t / r) * t * boost::math::cyl_bessel_j(0, t); };
    prefactor = 2.0 * std::numbers::pi / (r * r);
  }

  const double bulk_end = 4.0 * scale * r;
  std::size_t bulk_count = 1;
  {
    // Number of zeros below bulk_end; zeros are spaced by about pi.
    const double estimate = bulk_end / std::numbers::pi + 2.0;
    if (estimate > settings.max_intervals) {
      throw NumericalError("radial_fourier: too many oscillations in the bulk of the integrand",
                           estimate);
    }
    bulk_count = static_cast<std::size_t>(estimate);
  }
  const std::size_t tail_budget = 400;
  const auto zeros = weight_zeros(dimension, bulk_count + tail_budget + 1);

  double sum = 0.0;
  double error = 0.0;
  double mass = 0.0;
  double left = 0.0;
  std::size_t k = 0;
  for (; k < bulk_count; ++k) {
    const auto piece = integrate_interval(integrand, left, zeros[k], settings.rel_tol);
    sum += piece.value;
    error += piece.error;
    mass += std::abs(piece.value);
    left = zeros[k];
  }

  std::vector<double> partial{sum};
  double estimate = sum;
  double previous_estimate = std::numeric_limits<double>::quiet_NaN();
  double change = std::numeric_limits<double>::infinity();
  bool converged = false;
  for (; k < zeros.size(); ++k) {
    const auto piece = integrate_interval(integrand, left, zeros[k], settings.rel_tol);
    left = zeros[k];
    error += piece.error;
    mass += std::abs(piece.value);
    partial.push_back(partial.back() + piece.value);
    if (std::abs(piece.value) <= 1e-17 * mass) {
      estimate = partial.back();
      converged = true;
      break;
    }
    if (partial.size() >= 6) {
      // A sliding window keeps the epsilon table well conditioned.
      const std::size_t window = std::min<std::size_t>(partial.size(), 24);
      std::vector<double> recent(partial.end() - static_cast<std::ptrdiff_t>(window), partial.end());
      estimate = wynn_epsilon(recent);
      if (std::isfinite(previous_estimate)) {
        change = std::abs(estimate - previous_estimate);
        if (change <= 1e-13 * mass) {
          converged = true;
          break;
        }
      }
      previous_estimate = estimate;
    }
  }
  if (!converged) {
    throw NumericalError("radial_fourier: tail acceleration did not converge",
                         mass > 0.0 ? change / mass : change);
  }
  return {prefactor * estimate, prefactor * (error + change + 1e-15 * mass)};
}

double half_height_radius(const RealFunction& h) {
  const double target = 0.5 * h(0.0);
  if (!(target > 0.0) || !std::isfinite(target)) {
    throw std::domain_error("half_height_radius: h(0) must be positive and finite");
  }
  double lo = 1.0;
  double hi = 1.0;
  if (h(1.0) > target) {
    while (h(hi) > target) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e300) {
        throw NumericalError("half_height_radius: function does not decay", hi);
      }
    }
  } else {
    while (h(lo) <= target) {
      hi = lo;
      lo *= 0.5;
      if (lo < 1e-300) {
        throw NumericalError("half_height_radius: function drops immediately", lo);
      }
    }
  }
  for (int it = 0; it < 200 && hi / lo > 1.0 + 1e-12; ++it) {
    const double mid = std::sqrt(lo * hi);
    (h(mid) > target ? lo : hi) = mid;
  }
  return std::sqrt(lo * hi);
}

}  // namespace christoffel
