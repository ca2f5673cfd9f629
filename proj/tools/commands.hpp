#pragma once

#include "christoffel/christoffel.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace christoffel::cli {

struct KernelChoice {
  std::string family = "matern";  // matern | gaussian
  std::vector<double> nus{0.5};
  double length = 1.0;
  int dimension = 1;  // spectral only; other commands take d from the measure
};

struct MeasureSpec {
  enum class Kind { csv, riemann, iid } kind = Kind::riemann;
  std::filesystem::path path;
  std::string density = "sinusoidal";
  Eigen::Index n = 2000;
  std::optional<std::uint64_t> seed;  // iid only; falls back to RunConfig::seed
};

struct QuerySpec {
  enum class Kind { csv, grid, at_support } kind = Kind::at_support;
  std::filesystem::path path;
  double lower = -1.0;
  double upper = 1.0;
  int count = 0;  // per axis
};

struct RunConfig {
  KernelChoice kernel;
  double lambda = 1e-4;
  // Geometric sweep; when non-empty it replaces `lambda` wherever a list is used.
  std::vector<double> sweep;
  MeasureSpec measure;
  QuerySpec queries;
  SupportThresholds thresholds;
  std::filesystem::path out = "out";
  std::uint64_t seed = 0;
  double gaussian_length = 0.1;  // gaussian-compare only
  double p_z = 0.5;              // spectral: density value fed to predict_inside
};

/// The sweep if one was given, otherwise the single lambda.
std::vector<double> lambda_values(const RunConfig& config);

MeasureSpec parse_measure(const std::string& text);
QuerySpec parse_queries(const std::string& text);
/// "a:b:count" geometric sweep.
std::vector<double> parse_sweep(const std::string& text);

WeightedSample build_measure(const MeasureSpec& spec, std::uint64_t default_seed);
PointMatrix build_queries(const QuerySpec& spec, int dimension);

/// 17 significant digits, locale independent; NaN is written as an empty cell.
std::string format_number(double value);

// Each command writes its CSVs and run.json into config.out. All files are
// staged and renamed into place only after every output has been produced.
// Errors propagate as exceptions; run_command turns them into exit codes.
void cmd_estimate(const RunConfig& config);
void cmd_fig2(const RunConfig& config);
void cmd_overfit(const RunConfig& config);
void cmd_gaussian_compare(const RunConfig& config);
void cmd_spectral(const RunConfig& config);

/// Runs a command by name; prints the error to `err` and returns 1 on failure.
int run_command(const std::string& name, const RunConfig& config, std::ostream& err);

}  // namespace christoffel::cli
