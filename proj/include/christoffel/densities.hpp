#pragma once

#include "christoffel/measure.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace christoffel {

/// Reference densities used by the experiments.
///   sinusoidal  p(x) = (1 + cos(pi x)) / 2 on [-1, 1]
///   piecewise   p(x) = 0.7 on [-1, 0), 0.3 on [0, 1]
///   ring2d      p(x) = 3/16 (2 - |x|^2) on [-1, 1]^2; round level sets, square support
struct TestDensity {
  std::string name;
  int dimension;
  DensityFunction p;
  double max_value;
  std::vector<double> support_lower;
  std::vector<double> support_upper;
  // Box covered by the default Riemann grid.
  std::vector<double> grid_lower;
  std::vector<double> grid_upper;

  /// Euclidean distance from x to the complement of the support box (0 outside).
  double depth(std::span<const double> x) const;
};

const TestDensity& builtin_density(std::string_view name);
std::vector<std::string> builtin_density_names();

/// Uniform in [0, 1) from the top 53 bits, independent of the standard
/// library's distribution implementations.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Rejection sampling from the support box; reproducible across platforms for
/// a given seed.
PointMatrix sample_iid(const TestDensity& density, Eigen::Index n, std::uint64_t seed);

/// Riemann lattice with `n` nodes over the density's grid box (n must be a
/// perfect d-th power).
Lattice default_lattice(const TestDensity& density, Eigen::Index n);

}  // namespace christoffel
