#pragma once

#include "christoffel/kernel.hpp"
#include "christoffel/measure.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <memory>
#include <span>

namespace christoffel {

struct JitterPolicy {
  double initial = 1e-12;
  double factor = 10.0;
  double maximum = 1e-8;
};

/// Gram matrix K_ij = q(x_i - x_j) of a weighted sample together with a
/// Cholesky factorization of B = lambda I + S K S, S = diag(sqrt(eta)).
/// B is similar to lambda I + K diag(eta) and has spectrum bounded below by
/// lambda, so every query stays well conditioned even when K is numerically
/// singular. Immutable after construction; concurrent queries are safe.
///
/// For a query point z with v = (k(z, x_j))_j and w = L^{-1} S v,
///   C(z) = lambda / (k(z, z) - |w|^2),
/// which equals (K_i^T (K diag(eta) K + lambda K)^{-1} K_i)^{-1} when z = x_i.
class GramSystem {
public:
  static GramSystem assemble(const KernelSpec& kernel, const WeightedSample& sample, double lambda,
                             const JitterPolicy& policy = {});

  /// Same Gram matrix, new regularization; only the factorization is redone.
  GramSystem refit_lambda(double lambda_new) const;

  double christoffel_at_support(Eigen::Index i) const;
  Eigen::VectorXd christoffel_at_support(std::span<const Eigen::Index> indices) const;
  Eigen::VectorXd christoffel_at_support_all() const;

  double christoffel_at_point(std::span<const double> z) const;
  Eigen::VectorXd christoffel_at_points(const PointMatrix& queries) const;

  double leverage_score(std::span<const double> z) const { return 1.0 / christoffel_at_point(z); }

  /// eta_i / (K (K + lambda diag(eta)^{-1})^{-1})_ii through a separate LU
  /// factorization. Requires every weight to be positive.
  Eigen::VectorXd christoffel_smoothing_form(std::span<const Eigen::Index> indices) const;
  double christoffel_smoothing_form(Eigen::Index i) const;

  double lambda() const { return lambda_; }
  /// Relative jitter epsilon added as epsilon q(0) to the Gram diagonal (0 if none).
  double jitter() const { return jitter_; }
  double factorization_residual() const { return residual_; }
  const Eigen::MatrixXd& gram() const { return *gram_; }
  const KernelSpec& kernel() const { return *kernel_; }
  const WeightedSample& sample() const { return *sample_; }

private:
  GramSystem() = default;
  void factorize(const JitterPolicy& policy);
  Eigen::VectorXd kernel_column(std::span<const double> z) const;
  Eigen::VectorXd christoffel_from_columns(const Eigen::MatrixXd& columns, const Eigen::VectorXd& diagonal) const;

  std::shared_ptr<const KernelSpec> kernel_;
  std::shared_ptr<const WeightedSample> sample_;
  std::shared_ptr<const Eigen::MatrixXd> gram_;
  Eigen::VectorXd sqrt_weights_;
  Eigen::LLT<Eigen::MatrixXd> factor_;
  JitterPolicy policy_;
  double lambda_ = 0.0;
  double jitter_ = 0.0;
  double residual_ = 0.0;
};

/// Smallest admissible lambda for a system of n points: 1e-12 q(0) n.
double minimum_lambda(const KernelSpec& kernel, Eigen::Index n);

}  // namespace christoffel
