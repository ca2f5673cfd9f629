#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace christoffel {

/// Raised when a numerical procedure cannot reach its target accuracy.
class NumericalError : public std::runtime_error {
public:
  NumericalError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved() const { return achieved_; }

private:
  double achieved_;
};

struct QuadratureSettings {
  double rel_tol = 1e-11;
  // Radial integrals are truncated once r g(r) drops below this fraction of its peak.
  double cutoff_ratio = 1e-12;
  int max_decades = 60;
  // Budget of half-period intervals for oscillatory integrals.
  int max_intervals = 400000;
};

struct QuadratureResult {
  double value;
  double error;
};

using RealFunction = std::function<double(double)>;

/// Adaptive Gauss-Kronrod on [a, b] with at most 2^max_depth subintervals.
QuadratureResult integrate_interval(const RealFunction& f, double a, double b, double rel_tol,
                                    unsigned max_depth = 15);

/// Integral of g over [0, inf). `scale` marks where g leaves its bulk; beyond
/// it the integral is taken decade by decade in log r and closed with a
/// power-law tail fitted at the cutoff.
QuadratureResult integrate_semi_infinite(const RealFunction& g, double scale,
                                         const QuadratureSettings& settings = {});

/// Surface area of the unit sphere in R^d, 2 pi^{d/2} / Gamma(d/2).
double sphere_area(int dimension);

/// Integral over R^d of the radial function h(||w||).
QuadratureResult radial_integral(const RealFunction& h, int dimension, double scale,
                                 const QuadratureSettings& settings = {});

/// Integral over R^d of h(||w||) exp(i w.x) at ||x|| = r, for d in {1, 2}.
/// Half-period pieces are summed up to the bulk of h; the alternating tail is
/// accelerated with the Wynn epsilon algorithm.
QuadratureResult radial_fourier(const RealFunction& h, int dimension, double r, double scale,
                                const QuadratureSettings& settings = {});

/// Radius where a decreasing radial function reaches half its value at zero.
double half_height_radius(const RealFunction& h);

/// Limit of the sequence of partial sums by Wynn's epsilon algorithm.
double wynn_epsilon(const std::vector<double>& partial_sums);

}  // namespace christoffel
