#include "commands.hpp"

#include "experiments.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace christoffel::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream stream(text);
  while (std::getline(stream, part, sep)) {
    parts.push_back(part);
  }
  if (!text.empty() && text.back() == sep) {
    parts.emplace_back();
  }
  return parts;
}

double to_double(const std::string& text, const std::string& context) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw std::invalid_argument(context + ": '" + text + "' is not a finite number");
  }
  return value;
}

template <class Int>
Int to_integer(const std::string& text, const std::string& context) {
  Int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::invalid_argument(context + ": '" + text + "' is not an integer");
  }
  return value;
}

/// Files are written under a hidden partial name and renamed once all of them exist.
class StagedOutput {
public:
  explicit StagedOutput(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }
  StagedOutput(const StagedOutput&) = delete;
  StagedOutput& operator=(const StagedOutput&) = delete;

  ~StagedOutput() {
    for (const auto& [partial, final_path] : files_) {
      std::error_code ignored;
      fs::remove(partial, ignored);
    }
  }

  void add(const std::string& name, const std::string& content) {
    const fs::path partial = dir_ / ("." + name + ".partial");
    files_.emplace_back(partial, dir_ / name);
    std::ofstream out(partial, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    if (!out) {
      throw std::runtime_error("cannot write " + partial.string());
    }
  }

  void commit() {
    for (const auto& [partial, final_path] : files_) {
      fs::rename(partial, final_path);
    }
    files_.clear();
  }

private:
  fs::path dir_;
  std::vector<std::pair<fs::path, fs::path>> files_;
};

KernelSpec make_kernel(const RunConfig& config, double nu, int dimension) {
  if (config.kernel.family == "matern") {
    return KernelSpec::matern(nu, config.kernel.length, dimension);
  }
  if (config.kernel.family == "gaussian") {
    return KernelSpec::gaussian(config.kernel.length, dimension);
  }
  throw std::invalid_argument("unknown kernel family '" + config.kernel.family + "'");
}

double single_nu(const RunConfig& config) {
  if (config.kernel.family == "matern" && config.kernel.nus.size() != 1) {
    throw std::invalid_argument("this command takes exactly one --nu");
  }
  return config.kernel.nus.empty() ? 0.0 : config.kernel.nus.front();
}

std::uint64_t effective_seed(const RunConfig& config) {
  if (config.measure.kind == MeasureSpec::Kind::iid && config.measure.seed) {
    return *config.measure.seed;
  }
  return config.seed;
}

Json numbers(const std::vector<double>& values) {
  Json out = Json::array();
  for (double v : values) {
    out.push_back(v);
  }
  return out;
}

Json describe_config(const std::string& command, const RunConfig& config) {
  Json j;
  j["command"] = command;
  j["kernel"] = {{"family", config.kernel.family},
                 {"nu", numbers(config.kernel.nus)},
                 {"length", config.kernel.length}};
  j["lambda"] = config.lambda;
  j["lambda_sweep"] = numbers(config.sweep);
  const auto& m = config.measure;
  Json measure;
  switch (m.kind) {
    case MeasureSpec::Kind::csv:
      measure = {{"kind", "csv"}, {"path", m.path.string()}};
      break;
    case MeasureSpec::Kind::riemann:
      measure = {{"kind", "riemann"}, {"density", m.density}, {"n", m.n}};
      break;
    case MeasureSpec::Kind::iid:
      measure = {{"kind", "iid"}, {"density", m.density}, {"n", m.n}};
      break;
  }
  j["measure"] = measure;
  const auto& q = config.queries;
  switch (q.kind) {
    case QuerySpec::Kind::csv:
      j["queries"] = {{"kind", "csv"}, {"path", q.path.string()}};
      break;
    case QuerySpec::Kind::grid:
      j["queries"] = {{"kind", "grid"}, {"lower", q.lower}, {"upper", q.upper}, {"per_axis", q.count}};
      break;
    case QuerySpec::Kind::at_support:
      j["queries"] = {{"kind", "at-support"}};
      break;
  }
  j["thresholds"] = {{"margin", config.thresholds.margin}, {"p_min", config.thresholds.p_min}};
  j["seed"] = effective_seed(config);
  const QuadratureSettings quad;
  j["quadrature"] = {{"rel_tol", quad.rel_tol},
                     {"cutoff_ratio", quad.cutoff_ratio},
                     {"max_decades", quad.max_decades},
                     {"max_intervals", quad.max_intervals}};
  const JitterPolicy jitter;
  j["jitter_policy"] = {{"initial", jitter.initial}, {"factor", jitter.factor}, {"maximum", jitter.maximum}};
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void append_row(std::string& csv, std::initializer_list<std::string> cells) {
  bool first = true;
  for (const auto& cell : cells) {
    if (!first) {
      csv += ',';
    }
    csv += cell;
    first = false;
  }
  csv += '\n';
}

}  // namespace

std::vector<double> lambda_values(const RunConfig& config) {
  return config.sweep.empty() ? std::vector<double>{config.lambda} : config.sweep;
}

MeasureSpec parse_measure(const std::string& text) {
  const auto parts = split(text, ':');
  MeasureSpec spec;
  if (parts.size() >= 2 && parts[0] == "csv") {
    spec.kind = MeasureSpec::Kind::csv;
    spec.path = text.substr(4);
    return spec;
  }
  if (parts.size() == 3 && parts[0] == "riemann") {
    spec.kind = MeasureSpec::Kind::riemann;
    spec.density = parts[1];
    spec.n = to_integer<Eigen::Index>(parts[2], "--measure");
    builtin_density(spec.density);
    return spec;
  }
  if ((parts.size() == 3 || parts.size() == 4) && parts[0] == "iid") {
    spec.kind = MeasureSpec::Kind::iid;
    spec.density = parts[1];
    spec.n = to_integer<Eigen::Index>(parts[2], "--measure");
    if (parts.size() == 4) {
      spec.seed = to_integer<std::uint64_t>(parts[3], "--measure");
    }
    builtin_density(spec.density);
    return spec;
  }
  throw std::invalid_argument("--measure: expected csv:PATH, riemann:DENSITY:n or iid:DENSITY:n:SEED, got '" +
                              text + "'");
}

QuerySpec parse_queries(const std::string& text) {
  QuerySpec spec;
  if (text == "at-support") {
    spec.kind = QuerySpec::Kind::at_support;
    return spec;
  }
  const auto parts = split(text, ':');
  if (parts.size() >= 2 && parts[0] == "csv") {
    spec.kind = QuerySpec::Kind::csv;
    spec.path = text.substr(4);
    return spec;
  }
  if (parts.size() == 4 && parts[0] == "grid") {
    spec.kind = QuerySpec::Kind::grid;
    spec.lower = to_double(parts[1], "--queries");
    spec.upper = to_double(parts[2], "--queries");
    spec.count = to_integer<int>(parts[3], "--queries");
    if (spec.count < 1 || !(spec.upper >= spec.lower)) {
      throw std::invalid_argument("--queries: grid needs a <= b and m >= 1");
    }
    return spec;
  }
  throw std::invalid_argument("--queries: expected csv:PATH, grid:a:b:m or at-support, got '" + text + "'");
}

std::vector<double> parse_sweep(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) {
    throw std::invalid_argument("--lambda-sweep: expected start:stop:count, got '" + text + "'");
  }
  const double start = to_double(parts[0], "--lambda-sweep");
  const double stop = to_double(parts[1], "--lambda-sweep");
  const int count = to_integer<int>(parts[2], "--lambda-sweep");
  return experiments::geometric_sweep(start, stop, count);
}

WeightedSample build_measure(const MeasureSpec& spec, std::uint64_t default_seed) {
  switch (spec.kind) {
    case MeasureSpec::Kind::csv:
      return load_csv(spec.path);
    case MeasureSpec::Kind::riemann: {
      const auto& density = builtin_density(spec.density);
      return riemann_from_density(default_lattice(density, spec.n), density.p);
    }
    case MeasureSpec::Kind::iid:
      return from_iid_sample(sample_iid(builtin_density(spec.density), spec.n, spec.seed.value_or(default_seed)));
  }
  throw std::logic_error("unreachable measure kind");
}

PointMatrix build_queries(const QuerySpec& spec, int dimension) {
  switch (spec.kind) {
    case QuerySpec::Kind::csv: {
      PointMatrix points = load_points_csv(spec.path);
      if (points.cols() != dimension) {
        throw std::invalid_argument("query file has dimension " + std::to_string(points.cols()) +
                                    ", measure has " + std::to_string(dimension));
      }
      return points;
    }
    case QuerySpec::Kind::grid: {
      Eigen::Index total = 1;
      for (int a = 0; a < dimension; ++a) {
        total *= spec.count;
      }
      PointMatrix points(total, dimension);
      const double step = spec.count > 1 ? (spec.upper - spec.lower) / (spec.count - 1) : 0.0;
      for (Eigen::Index row = 0; row < total; ++row) {
        Eigen::Index rest = row;
        for (int a = dimension - 1; a >= 0; --a) {
          points(row, a) = spec.lower + step * static_cast<double>(rest % spec.count);
          rest /= spec.count;
        }
      }
      return points;
    }
    case QuerySpec::Kind::at_support:
      break;
  }
  throw std::logic_error("build_queries: at-support has no explicit query points");
}

std::string format_number(double value) {
  if (std::isnan(value)) {
    return {};
  }
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value, std::chars_format::general, 17);
  if (ec != std::errc()) {
    throw std::runtime_error("format_number: conversion failed");
  }
  return {buffer, ptr};
}

void cmd_estimate(const RunConfig& config) {
  const WeightedSample sample = build_measure(config.measure, config.seed);
  const int d = sample.dimension();
  const KernelSpec kernel = make_kernel(config, single_nu(config), d);
  const SpectralProfile profile(kernel);
  const std::vector<double> lambdas = lambda_values(config);
  const bool at_support = config.queries.kind == QuerySpec::Kind::at_support;
  const PointMatrix queries = at_support ? PointMatrix() : build_queries(config.queries, d);

  std::string csv;
  for (int a = 1; a <= d; ++a) {
    csv += "z" + std::to_string(a) + ",";
  }
  csv += "lambda,christoffel,leverage,p_hat,label\n";

  Json jitters = Json::array();
  const GramSystem base = GramSystem::assemble(kernel, sample, lambdas.front());
  for (double lambda : lambdas) {
    const GramSystem system = lambda == base.lambda() ? base : base.refit_lambda(lambda);
    jitters.push_back({{"lambda", lambda}, {"jitter", system.jitter()}});
    const auto estimates = at_support ? evaluate_at_support(system, profile, config.thresholds)
                                      : evaluate_field(system, profile, queries, config.thresholds);
    for (const auto& e : estimates) {
      if (!(e.c_value > 0.0) || std::abs(e.c_value * e.leverage - 1.0) > 1e-12) {
        throw NumericalError("estimate: Christoffel value failed the positivity/leverage check", e.c_value);
      }
      for (double coordinate : e.z) {
        csv += format_number(coordinate) + ",";
      }
      append_row(csv, {format_number(lambda), format_number(e.c_value), format_number(e.leverage),
                       e.p_hat ? format_number(*e.p_hat) : std::string(), std::string(to_string(e.label))});
    }
  }

  Json meta = describe_config("estimate", config);
  meta["kernel"]["description"] = kernel.describe();
  meta["kernel"]["dimension"] = d;
  meta["points"] = sample.size();
  meta["jitter"] = jitters;
  meta["outputs"] = {"estimates.csv"};

  StagedOutput out(config.out);
  out.add("estimates.csv", csv);
  out.add("run.json", dump(meta));
  out.commit();
}

void cmd_fig2(const RunConfig& config) {
  if (config.kernel.family != "matern") {
    throw std::invalid_argument("fig2 needs the Matern family");
  }
  if (config.measure.kind != MeasureSpec::Kind::riemann || config.measure.density != "sinusoidal") {
    throw std::invalid_argument("fig2 runs on the measure riemann:sinusoidal:n");
  }
  experiments::Fig2Options options;
  options.nus = config.kernel.nus;
  options.length = config.kernel.length;
  options.n = config.measure.n;
  options.lambda = config.lambda;
  if (!config.sweep.empty()) {
    options.sweep = config.sweep;
  }
  const auto result = experiments::run_fig2(options);

  std::string left = "nu,x,p_true,christoffel,p_hat,relative_error,scored\n";
  for (const auto& row : result.left) {
    append_row(left, {format_number(row.nu), format_number(row.x), format_number(row.p_true),
                      format_number(row.christoffel), format_number(row.p_hat),
                      format_number(std::abs(row.p_hat - row.p_true) / row.p_true), row.scored ? "1" : "0"});
  }
  std::string right = "nu,x,p_true,lambda,christoffel,diagnostic\n";
  for (const auto& row : result.right) {
    append_row(right, {format_number(row.nu), format_number(row.x), format_number(row.p_true),
                       format_number(row.lambda), format_number(row.christoffel), format_number(row.diagnostic)});
  }

  Json meta = describe_config("fig2", config);
  meta["lambda_sweep"] = numbers(options.sweep);
  meta["p_floor"] = options.p_floor;
  Json summary = Json::array();
  for (const auto& s : result.summary) {
    summary.push_back({{"nu", s.nu},
                       {"worst_relative_error", s.worst_relative_error},
                       {"min_slope", s.min_slope},
                       {"max_slope", s.max_slope},
                       {"jitter", s.jitter}});
    std::cout << "nu " << format_number(s.nu) << ": worst relative error " << s.worst_relative_error
              << ", diagnostic slope in [" << s.min_slope << ", " << s.max_slope << "]\n";
  }
  meta["summary"] = summary;
  meta["outputs"] = {"fig2_left.csv", "fig2_right.csv"};

  StagedOutput out(config.out);
  out.add("fig2_left.csv", left);
  out.add("fig2_right.csv", right);
  out.add("run.json", dump(meta));
  out.commit();
}

void cmd_overfit(const RunConfig& config) {
  if (config.kernel.family != "matern") {
    throw std::invalid_argument("overfit needs the Matern family");
  }
  if (config.measure.kind != MeasureSpec::Kind::riemann) {
    throw std::invalid_argument("overfit places its points on a grid: use --measure riemann:DENSITY:n");
  }
  experiments::OverfitOptions options;
  options.density = config.measure.density;
  options.n = static_cast<int>(config.measure.n);
  options.nu = single_nu(config);
  options.length = config.kernel.length;
  options.lambda = config.lambda;
  const auto result = experiments::run_overfit(options);

  std::string csv = "z,christoffel,eta_nearest\n";
  for (const auto& row : result.rows) {
    append_row(csv, {format_number(row.z), format_number(row.christoffel), format_number(row.eta_nearest)});
  }
  Json meta = describe_config("overfit", config);
  meta["summary"] = {{"min_eta", result.min_eta},
                     {"max_support_excess_over_lambda_floor", result.max_support_excess},
                     {"min_support_gap", result.min_support_gap},
                     {"max_midpoint_over_min_eta", result.max_midpoint_ratio}};
  meta["outputs"] = {"overfit.csv"};
  std::cout << "support points: C - eta in [" << result.min_support_gap << ", "
            << result.max_support_excess * options.lambda / result.q_zero << "]; midpoints: max C / min eta = "
            << result.max_midpoint_ratio << "\n";

  StagedOutput out(config.out);
  out.add("overfit.csv", csv);
  out.add("run.json", dump(meta));
  out.commit();
}

void cmd_gaussian_compare(const RunConfig& config) {
  if (config.measure.kind != MeasureSpec::Kind::riemann || config.measure.density != "piecewise") {
    throw std::invalid_argument("gaussian-compare runs on the measure riemann:piecewise:n");
  }
  experiments::CompareOptions options;
  options.n = config.measure.n;
  options.lambda = config.lambda;
  options.matern_nu = single_nu(config);
  options.matern_length = config.kernel.length;
  options.gaussian_length = config.gaussian_length;
  if (!config.sweep.empty()) {
    options.tail_sweep = config.sweep;
  }
  const auto result = experiments::run_gaussian_compare(options);

  std::string profile = "kernel,z,p_true,christoffel,relative_to_local\n";
  for (const auto& row : result.profile) {
    append_row(profile, {row.kernel, format_number(row.z), format_number(row.p_true),
                         format_number(row.christoffel), format_number(row.relative_to_local)});
  }
  std::string tail = "kernel,lambda,epsilon,ratio\n";
  for (const auto& row : result.tail) {
    append_row(tail, {row.kernel, format_number(row.lambda), format_number(row.epsilon), format_number(row.ratio)});
    std::cout << row.kernel << " lambda " << row.lambda << ": tail ratio " << row.ratio << "\n";
  }
  Json meta = describe_config("gaussian-compare", config);
  meta["gaussian_length"] = options.gaussian_length;
  meta["lambda_sweep"] = numbers(options.tail_sweep);
  meta["tail_exponent"] = options.tail_exponent;
  meta["outputs"] = {"compare_profile.csv", "tail_ratio.csv"};

  StagedOutput out(config.out);
  out.add("compare_profile.csv", profile);
  out.add("tail_ratio.csv", tail);
  out.add("run.json", dump(meta));
  out.commit();
}

void cmd_spectral(const RunConfig& config) {
  const KernelSpec kernel = make_kernel(config, single_nu(config), config.kernel.dimension);
  const SpectralProfile profile(kernel);
  const auto rows = experiments::spectral_table(profile, lambda_values(config), config.p_z);

  std::string csv = "lambda,D,lower_bound,asymptotic,ratio,predict_inside,bound_i,bound_ii\n";
  for (const auto& row : rows) {
    if (row.d_value < row.lower_bound * (1.0 - 1e-12)) {
      throw NumericalError("spectral: D(lambda) fell below lambda / q(0)", row.d_value);
    }
    append_row(csv, {format_number(row.lambda), format_number(row.d_value), format_number(row.lower_bound),
                     format_number(row.asymptotic), format_number(row.d_value / row.asymptotic),
                     format_number(row.predict_inside), format_number(row.bound_i), format_number(row.bound_ii)});
  }
  Json meta = describe_config("spectral", config);
  meta["kernel"]["description"] = kernel.describe();
  meta["kernel"]["dimension"] = config.kernel.dimension;
  meta["p_z"] = config.p_z;
  if (profile.has_power_law()) {
    const auto& q0 = profile.q0_report();
    meta["q0"] = {{"value", q0.value},
                  {"homogeneous_quadrature", q0.homogeneous_quadrature},
                  {"limit_estimate", q0.limit_estimate},
                  {"limit_lambda", q0.limit_lambda},
                  {"disagreement", q0.disagreement}};
    if (q0.closed_form) {
      meta["q0"]["closed_form"] = *q0.closed_form;
    }
    meta["beta"] = profile.exponent();
  }
  meta["outputs"] = {"spectral.csv"};

  StagedOutput out(config.out);
  out.add("spectral.csv", csv);
  out.add("run.json", dump(meta));
  out.commit();
}

int run_command(const std::string& name, const RunConfig& config, std::ostream& err) {
  try {
    if (name == "estimate") {
      cmd_estimate(config);
    } else if (name == "fig2") {
      cmd_fig2(config);
    } else if (name == "overfit") {
      cmd_overfit(config);
    } else if (name == "gaussian-compare") {
      cmd_gaussian_compare(config);
    } else if (name == "spectral") {
      cmd_spectral(config);
    } else {
      throw std::invalid_argument("unknown command '" + name + "'");
    }
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << " (achieved " << e.achieved() << ")\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace christoffel::cli
