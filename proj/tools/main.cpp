#include "commands.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

using christoffel::cli::RunConfig;

namespace {

struct Flags {
  RunConfig config;
  std::string sweep;
  std::string measure;
  std::string queries;
};

void add_common(CLI::App* app, Flags& flags) {
  auto& c = flags.config;
  app->add_option("--kernel", c.kernel.family, "Kernel family")
      ->check(CLI::IsMember({"matern", "gaussian"}))
      ->capture_default_str();
  app->add_option("--nu", c.kernel.nus, "Matern smoothness (repeatable where a command accepts several)")
      ->capture_default_str();
  app->add_option("--length", c.kernel.length, "Kernel length scale l")->capture_default_str();
  app->add_option("--lambda", c.lambda, "Regularization lambda")->capture_default_str();
  app->add_option("--lambda-sweep", flags.sweep, "Geometric sweep start:stop:count")->capture_default_str();
  app->add_option("--measure", flags.measure, "csv:PATH | riemann:DENSITY:n | iid:DENSITY:n:SEED")
      ->capture_default_str();
  app->add_option("--queries", flags.queries, "csv:PATH | grid:a:b:m | at-support")->capture_default_str();
  app->add_option("--margin", c.thresholds.margin, "Support-label margin (> 1)")->capture_default_str();
  app->add_option("--p-min", c.thresholds.p_min, "Floor density for the inside label")->capture_default_str();
  app->add_option("--seed", c.seed, "Seed for iid measures without an explicit seed")->capture_default_str();
  app->add_option("--out", c.out, "Output directory")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regularized Christoffel functions: estimation and experiments"};
  app.require_subcommand(1);

  std::map<std::string, Flags> flags;

  auto& estimate = flags["estimate"];
  estimate.measure = "riemann:sinusoidal:2000";
  estimate.queries = "at-support";
  add_common(app.add_subcommand("estimate", "Christoffel values, leverage, density and support labels"), estimate);

  auto& fig2 = flags["fig2"];
  fig2.config.kernel.nus = {0.5, 1.0, 1.5};
  fig2.config.kernel.length = 0.5;
  fig2.sweep = "1e-5:1e-2:10";
  fig2.measure = "riemann:sinusoidal:2000";
  fig2.queries = "at-support";
  add_common(app.add_subcommand("fig2", "Density recovery and rate diagnostic on the sinusoidal density"), fig2);

  auto& overfit = flags["overfit"];
  overfit.config.kernel.length = 0.01;
  overfit.config.lambda = 1e-3;
  overfit.measure = "riemann:piecewise:15";
  overfit.queries = "at-support";
  add_common(app.add_subcommand("overfit", "Small-n overfitting demonstration"), overfit);

  auto& compare = flags["gaussian-compare"];
  compare.config.kernel.length = 0.5;
  compare.config.lambda = 1e-3;
  compare.sweep = "1e-2:1e-6:5";
  compare.measure = "riemann:piecewise:2000";
  compare.queries = "at-support";
  auto* compare_app = app.add_subcommand("gaussian-compare", "Matern against Gaussian on a piecewise density");
  add_common(compare_app, compare);
  compare_app->add_option("--gaussian-length", compare.config.gaussian_length, "Gaussian kernel length")
      ->capture_default_str();

  auto& spectral = flags["spectral"];
  spectral.sweep = "1e-8:10:20";
  spectral.measure = "riemann:sinusoidal:2000";
  spectral.queries = "at-support";
  auto* spectral_app = app.add_subcommand("spectral", "D(lambda), q0 and the asymptotic predictors");
  add_common(spectral_app, spectral);
  spectral_app->add_option("--dim", spectral.config.kernel.dimension, "Dimension")
      ->check(CLI::Range(1, 2))
      ->capture_default_str();
  spectral_app->add_option("--p-z", spectral.config.p_z, "Density value for predict_inside")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  const std::string name = app.get_subcommands().front()->get_name();
  Flags& chosen = flags.at(name);
  RunConfig config = chosen.config;
  try {
    // spectral tabulates a sweep by default; an explicit --lambda alone means a single row.
    auto* sub = app.get_subcommands().front();
    if (name == "spectral" && sub->count("--lambda") > 0 && sub->count("--lambda-sweep") == 0) {
      chosen.sweep.clear();
    }
    if (!chosen.sweep.empty()) {
      config.sweep = christoffel::cli::parse_sweep(chosen.sweep);
    }
    config.measure = christoffel::cli::parse_measure(chosen.measure);
    config.queries = christoffel::cli::parse_queries(chosen.queries);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return christoffel::cli::run_command(name, config, std::cerr);
}
