#include "christoffel/density.hpp"

#include <cmath>
#include <stdexcept>

namespace christoffel {

namespace {

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument(std::string(what) + " must be positive and finite");
  }
}

ChristoffelEstimate make_estimate(const SpectralProfile& profile, double lambda, std::vector<double> z,
                                  double c_value, const SupportThresholds& thresholds) {
  ChristoffelEstimate out{std::move(z), c_value, 1.0 / c_value, std::nullopt,
                          support_indicator(profile, lambda, c_value, thresholds)};
  if (out.label == SupportLabel::inside) {
    out.p_hat = estimate_density(profile, lambda, c_value);
  }
  return out;
}

}  // namespace

std::string_view to_string(SupportLabel label) {
  switch (label) {
    case SupportLabel::inside:
      return "inside";
    case SupportLabel::outside:
      return "outside";
    case SupportLabel::boundary_uncertain:
      return "boundary_uncertain";
  }
  return "boundary_uncertain";
}

double estimate_density(const SpectralProfile& profile, double lambda, double c_value) {
  require_positive(lambda, "lambda");
  require_positive(c_value, "c_value");
  const double beta = profile.exponent();
  return std::pow(c_value * profile.q0() / std::pow(lambda, beta), 1.0 / (1.0 - beta));
}

double rate_diagnostic(const SpectralProfile& profile, double lambda, double c_value, double p_true) {
  require_positive(lambda, "lambda");
  require_positive(c_value, "c_value");
  require_positive(p_true, "p_true");
  const double beta = profile.exponent();
  return std::pow(c_value * profile.q0() / std::pow(p_true, 1.0 - beta), 1.0 / beta);
}

SupportLabel support_indicator(const SpectralProfile& profile, double lambda, double c_value,
                               const SupportThresholds& thresholds) {
  require_positive(lambda, "lambda");
  require_positive(c_value, "c_value");
  if (!(thresholds.margin > 1.0)) {
    throw std::invalid_argument("support_indicator: margin must exceed 1");
  }
  require_positive(thresholds.p_min, "p_min");
  if (c_value < thresholds.margin * lambda) {
    return SupportLabel::outside;
  }
  if (!profile.has_power_law()) {
    return SupportLabel::boundary_uncertain;
  }
  const double beta = profile.exponent();
  const double inside_floor =
      std::pow(lambda, beta) * std::pow(thresholds.p_min, 1.0 - beta) / (profile.q0() * thresholds.margin);
  return c_value > inside_floor ? SupportLabel::inside : SupportLabel::boundary_uncertain;
}

std::vector<ChristoffelEstimate> evaluate_field(const GramSystem& system, const SpectralProfile& profile,
                                                const PointMatrix& queries, const SupportThresholds& thresholds) {
  if (queries.rows() > 0 && queries.cols() != system.sample().dimension()) {
    throw std::invalid_argument("evaluate_field: query dimension mismatch");
  }
  const Eigen::VectorXd values = system.christoffel_at_points(queries);
  std::vector<ChristoffelEstimate> out;
  out.reserve(static_cast<std::size_t>(queries.rows()));
  for (Eigen::Index i = 0; i < queries.rows(); ++i) {
    std::vector<double> z(queries.row(i).data(), queries.row(i).data() + queries.cols());
    out.push_back(make_estimate(profile, system.lambda(), std::move(z), values(i), thresholds));
  }
  return out;
}

std::vector<ChristoffelEstimate> evaluate_at_support(const GramSystem& system, const SpectralProfile& profile,
                                                     const SupportThresholds& thresholds) {
  const Eigen::VectorXd values = system.christoffel_at_support_all();
  const auto& points = system.sample().points();
  std::vector<ChristoffelEstimate> out;
  out.reserve(static_cast<std::size_t>(points.rows()));
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    std::vector<double> z(points.row(i).data(), points.row(i).data() + points.cols());
    out.push_back(make_estimate(profile, system.lambda(), std::move(z), values(i), thresholds));
  }
  return out;
}

}  // namespace christoffel
