#pragma once

#include <Eigen/Core>

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace christoffel {

/// n x d, one point per row.
using PointMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using DensityFunction = std::function<double(std::span<const double>)>;

class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, int line) : std::runtime_error(what), line_(line) {}
  int line() const { return line_; }

private:
  int line_;
};

/// Discrete measure sum_i eta_i delta_{x_i} on distinct points with
/// nonnegative weights. Duplicate rows are merged at construction by summing
/// their weights, keeping the first occurrence's position in the ordering.
class WeightedSample {
public:
  WeightedSample(PointMatrix points, Eigen::VectorXd weights);

  Eigen::Index size() const { return points_.rows(); }
  int dimension() const { return static_cast<int>(points_.cols()); }
  const PointMatrix& points() const { return points_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  std::span<const double> point(Eigen::Index i) const {
    return {points_.row(i).data(), static_cast<std::size_t>(points_.cols())};
  }
  double weight(Eigen::Index i) const { return weights_(i); }
  double total_weight() const { return weights_.sum(); }

private:
  PointMatrix points_;
  Eigen::VectorXd weights_;
};

/// Monte Carlo plug-in: eta_i = 1/n on the raw rows (before merging duplicates).
WeightedSample from_iid_sample(const PointMatrix& points);

/// Axis-aligned regular lattice of cell centres on the box [lower, upper].
class Lattice {
public:
  Lattice(std::vector<double> lower, std::vector<double> upper, std::vector<int> counts);

  int dimension() const { return static_cast<int>(counts_.size()); }
  Eigen::Index size() const;
  double cell_volume() const;
  double spacing(int axis) const { return (upper_[axis] - lower_[axis]) / counts_[axis]; }
  /// Nodes in row-major order, last axis fastest.
  PointMatrix nodes() const;

  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  const std::vector<int>& counts() const { return counts_; }

private:
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<int> counts_;
};

/// Riemann plug-in: eta_i = p(x_i) v on the lattice nodes; zero-density nodes
/// are kept with zero weight. Throws std::domain_error naming the node index
/// if p is negative or non-finite anywhere.
WeightedSample riemann_from_density(const Lattice& grid, const DensityFunction& density);

/// CSV with header x1..xd and an optional trailing `weight` column. Without
/// weights every row gets 1/n.
WeightedSample parse_csv(std::istream& in);
WeightedSample load_csv(const std::filesystem::path& path);

/// Point-only CSV (header x1..xd or z1..zd); a weight column is ignored.
PointMatrix parse_points_csv(std::istream& in);
PointMatrix load_points_csv(const std::filesystem::path& path);

}  // namespace christoffel
