#include "christoffel/densities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace christoffel {

namespace {

bool in_box(std::span<const double> x, const std::vector<double>& lo, const std::vector<double>& hi) {
  for (std::size_t a = 0; a < x.size(); ++a) {
    if (x[a] < lo[a] || x[a] > hi[a]) {
      return false;
    }
  }
  return true;
}

std::vector<TestDensity> make_densities() {
  std::vector<TestDensity> out;
  out.push_back({"sinusoidal", 1,
                 [](std::span<const double> x) {
                   return std::abs(x[0]) <= 1.0 ? 0.5 * (1.0 + std::cos(std::numbers::pi * x[0])) : 0.0;
                 },
                 1.0, {-1.0}, {1.0}, {-1.0}, {1.0}});
  out.push_back({"piecewise", 1,
                 [](std::span<const double> x) {
                   if (x[0] < -1.0 || x[0] > 1.0) {
                     return 0.0;
                   }
                   return x[0] < 0.0 ? 0.7 : 0.3;
                 },
                 0.7, {-1.0}, {1.0}, {-1.0}, {1.0}});
  out.push_back({"ring2d", 2,
                 [](std::span<const double> x) {
                   if (std::abs(x[0]) > 1.0 || std::abs(x[1]) > 1.0) {
                     return 0.0;
                   }
                   return 3.0 / 16.0 * (2.0 - x[0] * x[0] - x[1] * x[1]);
                 },
                 3.0 / 8.0, {-1.0, -1.0}, {1.0, 1.0}, {-1.5, -1.5}, {1.5, 1.5}});
  return out;
}

const std::vector<TestDensity>& registry() {
  static const std::vector<TestDensity> densities = make_densities();
  return densities;
}

}  // namespace

double TestDensity::depth(std::span<const double> x) const {
  if (!in_box(x, support_lower, support_upper)) {
    return 0.0;
  }
  double depth = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < x.size(); ++a) {
    depth = std::min({depth, x[a] - support_lower[a], support_upper[a] - x[a]});
  }
  return depth;
}

const TestDensity& builtin_density(std::string_view name) {
  for (const auto& density : registry()) {
    if (density.name == name) {
      return density;
    }
  }
  throw std::invalid_argument("unknown density '" + std::string(name) + "'");
}

std::vector<std::string> builtin_density_names() {
  std::vector<std::string> names;
  for (const auto& density : registry()) {
    names.push_back(density.name);
  }
  return names;
}

PointMatrix sample_iid(const TestDensity& density, Eigen::Index n, std::uint64_t seed) {
  if (n < 1) {
    throw std::invalid_argument("sample_iid: need n >= 1");
  }
  std::mt19937_64 rng(seed);
  const int d = density.dimension;
  PointMatrix out(n, d);
  std::vector<double> x(d);
  for (Eigen::Index i = 0; i < n;) {
    for (int a = 0; a < d; ++a) {
      x[a] = density.support_lower[a] + (density.support_upper[a] - density.support_lower[a]) * uniform_unit(rng);
    }
    if (uniform_unit(rng) * density.max_value < density.p(x)) {
      for (int a = 0; a < d; ++a) {
        out(i, a) = x[a];
      }
      ++i;
    }
  }
  return out;
}

Lattice default_lattice(const TestDensity& density, Eigen::Index n) {
  const int d = density.dimension;
  const int per_axis = static_cast<int>(std::lround(std::pow(static_cast<double>(n), 1.0 / d)));
  Eigen::Index total = 1;
  for (int a = 0; a < d; ++a) {
    total *= per_axis;
  }
  if (total != n) {
    throw std::invalid_argument("default_lattice: n = " + std::to_string(n) + " is not a perfect power of d = " +
                                std::to_string(d));
  }
  return Lattice(density.grid_lower, density.grid_upper, std::vector<int>(d, per_axis));
}

}  // namespace christoffel
