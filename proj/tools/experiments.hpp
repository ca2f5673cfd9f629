#pragma once

#include "christoffel/christoffel.hpp"

#include <string>
#include <vector>

namespace christoffel::experiments {

std::vector<double> geometric_sweep(double start, double stop, int count);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// Density recovery on the sinusoidal test density (Riemann plug-in).

struct Fig2Options {
  std::vector<double> nus{0.5, 1.0, 1.5};
  double length = 0.5;
  Eigen::Index n = 2000;
  double lambda = 1e-4;
  std::vector<double> sweep = geometric_sweep(1e-5, 1e-2, 10);
  // Query points are every `stride`-th grid node; only those with p >= p_floor are scored.
  int stride = 20;
  double p_floor = 0.1;
};

struct Fig2Left {
  double nu;
  double x;
  double p_true;
  double christoffel;
  double p_hat;
  bool scored;
};

struct Fig2Right {
  double nu;
  double x;
  double p_true;
  double lambda;
  double christoffel;
  double diagnostic;
};

struct Fig2Summary {
  double nu;
  double worst_relative_error;
  double min_slope;
  double max_slope;
  double jitter;
};

struct Fig2Result {
  std::vector<Fig2Left> left;
  std::vector<Fig2Right> right;
  std::vector<Fig2Summary> summary;
};

Fig2Result run_fig2(const Fig2Options& options);

// Overfitting at small n: a handful of well-separated points, tiny length scale.

struct OverfitOptions {
  std::string density = "piecewise";
  int n = 15;
  double nu = 0.5;
  double length = 0.01;
  double lambda = 1e-3;
  // Extra evaluation points spread over the grid box, besides support points and midpoints.
  int profile_points = 401;
};

struct OverfitRow {
  double z;
  double christoffel;
  double eta_nearest;
  enum class Kind { support, midpoint, profile } kind;
};

struct OverfitResult {
  std::vector<OverfitRow> rows;  // sorted by z
  double q_zero;
  double min_eta;
  // max over support points of (C_i - eta_i) / (lambda / q(0)); the one-point bound says <= 1.
  double max_support_excess;
  // min over support points of C_i - eta_i; should be >= 0.
  double min_support_gap;
  // max over midpoints of C / min eta.
  double max_midpoint_ratio;
};

OverfitResult run_overfit(const OverfitOptions& options);

// Matern against Gaussian on the piecewise-constant density.

struct CompareOptions {
  Eigen::Index n = 2000;
  double lambda = 1e-3;
  double matern_nu = 0.5;
  double matern_length = 0.5;
  double gaussian_length = 0.1;
  int profile_points = 201;
  std::vector<double> tail_sweep = geometric_sweep(1e-2, 1e-6, 5);
  double tail_exponent = 0.05;
};

struct CompareProfileRow {
  std::string kernel;
  double z;
  double p_true;
  double christoffel;
  // C / (p D(lambda / p)): how far the local prediction is off (empty outside the support).
  double relative_to_local;
};

struct TailRow {
  std::string kernel;
  double lambda;
  double epsilon;
  double ratio;
};

struct CompareResult {
  std::vector<CompareProfileRow> profile;
  std::vector<TailRow> tail;
};

CompareResult run_gaussian_compare(const CompareOptions& options);

// Population-level spectral table.

struct SpectralRow {
  double lambda;
  double d_value;
  double lower_bound;  // lambda / q(0)
  double asymptotic;   // lambda^beta / q0 (NaN without a power law)
  double predict_inside;
  double bound_i;
  double bound_ii;
};

std::vector<SpectralRow> spectral_table(const SpectralProfile& profile, const std::vector<double>& lambdas,
                                        double p_z);

}  // namespace christoffel::experiments
