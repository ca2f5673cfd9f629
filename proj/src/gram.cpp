#include "christoffel/gram.hpp"

#include "christoffel/quadrature.hpp"

#include <Eigen/LU>

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace christoffel {

namespace {

void check_lambda(const KernelSpec& kernel, Eigen::Index n, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("gram: lambda must be positive and finite");
  }
  if (lambda < minimum_lambda(kernel, n)) {
    std::ostringstream msg;
    msg << "gram: lambda = " << lambda << " is below the numerical floor " << minimum_lambda(kernel, n);
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

double minimum_lambda(const KernelSpec& kernel, Eigen::Index n) {
  return 1e-12 * kernel.q_at_zero() * static_cast<double>(n);
}

GramSystem GramSystem::assemble(const KernelSpec& kernel, const WeightedSample& sample, double lambda,
                                const JitterPolicy& policy) {
  if (kernel.dimension() != sample.dimension()) {
    throw std::invalid_argument("gram: kernel and sample dimensions differ");
  }
  check_lambda(kernel, sample.size(), lambda);

  GramSystem sys;
  sys.kernel_ = std::make_shared<const KernelSpec>(kernel);
  sys.sample_ = std::make_shared<const WeightedSample>(sample);
  sys.lambda_ = lambda;
  sys.policy_ = policy;

  const Eigen::Index n = sample.size();
  const int d = sample.dimension();
  const auto& x = sample.points();
  auto gram = std::make_shared<Eigen::MatrixXd>(n, n);
  const double q0 = kernel.q_at_zero();
  for (Eigen::Index j = 0; j < n; ++j) {
    (*gram)(j, j) = q0;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double r2 = 0.0;
      for (int a = 0; a < d; ++a) {
        const double diff = x(i, a) - x(j, a);
        r2 += diff * diff;
      }
      const double value = kernel.q_radial(std::sqrt(r2));
      (*gram)(i, j) = value;
      (*gram)(j, i) = value;
    }
  }
  sys.gram_ = std::move(gram);
  sys.sqrt_weights_ = sample.weights().cwiseSqrt();
  sys.factorize(policy);
  return sys;
}

GramSystem GramSystem::refit_lambda(double lambda_new) const {
  check_lambda(*kernel_, sample_->size(), lambda_new);
  GramSystem sys;
  sys.kernel_ = kernel_;
  sys.sample_ = sample_;
  sys.gram_ = gram_;
  sys.sqrt_weights_ = sqrt_weights_;
  sys.lambda_ = lambda_new;
  sys.policy_ = policy_;
  sys.factorize(policy_);
  return sys;
}

void GramSystem::factorize(const JitterPolicy& policy) {
  const Eigen::Index n = gram_->rows();
  const double q0 = kernel_->q_at_zero();
  const Eigen::MatrixXd scaled = sqrt_weights_.asDiagonal() * (*gram_) * sqrt_weights_.asDiagonal();

  Eigen::VectorXd probe(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    probe(i) = std::sin(static_cast<double>(i) + 1.0);
  }

  double epsilon = 0.0;
  while (true) {
    Eigen::MatrixXd system = scaled;
    // Jitter enters K, so S (eps q0 I) S = eps q0 diag(eta).
    system.diagonal().array() += lambda_ + epsilon * q0 * sqrt_weights_.array().square();
    factor_.compute(system);
    if (factor_.info() == Eigen::Success) {
      const Eigen::VectorXd exact = system.selfadjointView<Eigen::Lower>() * probe;
      const Eigen::VectorXd rebuilt = factor_.matrixL() * (factor_.matrixU() * probe);
      residual_ = (exact - rebuilt).norm() / exact.norm();
      if (residual_ <= 1e-8) {
        jitter_ = epsilon;
        return;
      }
    }
    epsilon = (epsilon == 0.0) ? policy.initial : epsilon * policy.factor;
    if (epsilon > policy.maximum * (1.0 + 1e-9)) {
      std::ostringstream msg;
      msg << "gram: factorization failed after jitter escalation up to " << epsilon / policy.factor;
      throw NumericalError(msg.str(), epsilon / policy.factor);
    }
  }
}

Eigen::VectorXd GramSystem::kernel_column(std::span<const double> z) const {
  const int d = sample_->dimension();
  if (static_cast<int>(z.size()) != d) {
    throw std::invalid_argument("gram: query dimension mismatch");
  }
  for (double c : z) {
    if (!std::isfinite(c)) {
      throw std::domain_error("gram: non-finite query coordinate");
    }
  }
  const auto& x = sample_->points();
  Eigen::VectorXd v(x.rows());
  for (Eigen::Index j = 0; j < x.rows(); ++j) {
    double r2 = 0.0;
    for (int a = 0; a < d; ++a) {
      const double diff = z[a] - x(j, a);
      r2 += diff * diff;
    }
    v(j) = kernel_->q_radial(std::sqrt(r2));
  }
  return v;
}

Eigen::VectorXd GramSystem::christoffel_from_columns(const Eigen::MatrixXd& columns,
                                                     const Eigen::VectorXd& diagonal) const {
  Eigen::MatrixXd w = sqrt_weights_.asDiagonal() * columns;
  factor_.matrixL().solveInPlace(w);
  const Eigen::VectorXd quadratic = w.colwise().squaredNorm().transpose();
  Eigen::VectorXd out(columns.cols());
  for (Eigen::Index c = 0; c < columns.cols(); ++c) {
    const double denominator = diagonal(c) - quadratic(c);
    if (!(denominator > 0.0)) {
      throw NumericalError("gram: leverage denominator lost all precision; increase lambda", denominator);
    }
    out(c) = lambda_ / denominator;
  }
  return out;
}

double GramSystem::christoffel_at_support(Eigen::Index i) const {
  const Eigen::Index index[] = {i};
  return christoffel_at_support(index)(0);
}

Eigen::VectorXd GramSystem::christoffel_at_support(std::span<const Eigen::Index> indices) const {
  const Eigen::Index n = gram_->rows();
  Eigen::MatrixXd columns(n, static_cast<Eigen::Index>(indices.size()));
  Eigen::VectorXd diagonal(columns.cols());
  const double jitter = jitter_ * kernel_->q_at_zero();
  for (std::size_t c = 0; c < indices.size(); ++c) {
    const Eigen::Index i = indices[c];
    if (i < 0 || i >= n) {
      throw std::out_of_range("gram: support index out of range");
    }
    columns.col(static_cast<Eigen::Index>(c)) = gram_->col(i);
    columns(i, static_cast<Eigen::Index>(c)) += jitter;
    diagonal(static_cast<Eigen::Index>(c)) = (*gram_)(i, i) + jitter;
  }
  return christoffel_from_columns(columns, diagonal);
}

Eigen::VectorXd GramSystem::christoffel_at_support_all() const {
  std::vector<Eigen::Index> all(static_cast<std::size_t>(gram_->rows()));
  for (std::size_t i = 0; i < all.size(); ++i) {
    all[i] = static_cast<Eigen::Index>(i);
  }
  return christoffel_at_support(all);
}

double GramSystem::christoffel_at_point(std::span<const double> z) const {
  Eigen::MatrixXd column = kernel_column(z);
  return christoffel_from_columns(column, Eigen::VectorXd::Constant(1, kernel_->q_at_zero()))(0);
}

Eigen::VectorXd GramSystem::christoffel_at_points(const PointMatrix& queries) const {
  if (queries.rows() == 0) {
    return Eigen::VectorXd(0);
  }
  Eigen::MatrixXd columns(gram_->rows(), queries.rows());
  for (Eigen::Index c = 0; c < queries.rows(); ++c) {
    columns.col(c) = kernel_column({queries.row(c).data(), static_cast<std::size_t>(queries.cols())});
  }
  return christoffel_from_columns(columns, Eigen::VectorXd::Constant(queries.rows(), kernel_->q_at_zero()));
}

Eigen::VectorXd GramSystem::christoffel_smoothing_form(std::span<const Eigen::Index> indices) const {
  const auto& eta = sample_->weights();
  if ((eta.array() <= 0.0).any()) {
    throw std::domain_error("gram: the smoothing-matrix form needs every weight to be positive");
  }
  Eigen::MatrixXd system = *gram_;
  system.diagonal().array() += jitter_ * kernel_->q_at_zero() + lambda_ / eta.array();
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
  Eigen::VectorXd out(static_cast<Eigen::Index>(indices.size()));
  for (std::size_t c = 0; c < indices.size(); ++c) {
    const Eigen::Index i = indices[c];
    if (i < 0 || i >= gram_->rows()) {
      throw std::out_of_range("gram: support index out of range");
    }
    Eigen::VectorXd column = gram_->col(i);
    column(i) += jitter_ * kernel_->q_at_zero();
    // (K M^{-1})_ii = (M^{-1} K)_ii since K and M are symmetric.
    const Eigen::VectorXd solved = lu.solve(column);
    out(static_cast<Eigen::Index>(c)) = eta(i) / solved(i);
  }
  return out;
}

double GramSystem::christoffel_smoothing_form(Eigen::Index i) const {
  const Eigen::Index index[] = {i};
  return christoffel_smoothing_form(index)(0);
}

}  // namespace christoffel
