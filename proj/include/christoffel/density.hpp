#pragma once

#include "christoffel/gram.hpp"
#include "christoffel/spectral.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace christoffel {

enum class SupportLabel { inside, outside, boundary_uncertain };

std::string_view to_string(SupportLabel label);

struct SupportThresholds {
  double margin = 10.0;
  double p_min = 1e-2;
};

struct ChristoffelEstimate {
  std::vector<double> z;
  double c_value;
  double leverage;
  std::optional<double> p_hat;  // present iff label == inside
  SupportLabel label;
};

/// Inverse of the asymptotic predictor: (C q0 / lambda^beta)^{1 / (1 - beta)}.
double estimate_density(const SpectralProfile& profile, double lambda, double c_value);

/// (C q0 / p^{1 - beta})^{1 / beta}; tracks lambda when C follows the asymptotic regime.
double rate_diagnostic(const SpectralProfile& profile, double lambda, double c_value, double p_true);

/// outside if C < margin lambda, inside if C > lambda^beta p_min^{1-beta} / (margin q0),
/// boundary_uncertain otherwise. The outside test takes precedence. Kernels
/// without a power law can only be labeled outside or boundary_uncertain.
SupportLabel support_indicator(const SpectralProfile& profile, double lambda, double c_value,
                               const SupportThresholds& thresholds = {});

/// Batch query: Christoffel values, leverage, support label and (for inside
/// points) the density estimate, in input order.
std::vector<ChristoffelEstimate> evaluate_field(const GramSystem& system, const SpectralProfile& profile,
                                                const PointMatrix& queries,
                                                const SupportThresholds& thresholds = {});

/// Same, at the support points of the system (uses the support formula).
std::vector<ChristoffelEstimate> evaluate_at_support(const GramSystem& system, const SpectralProfile& profile,
                                                     const SupportThresholds& thresholds = {});

}  // namespace christoffel
