// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "commands.hpp"
#include "experiments.hpp"
#include "oracles.hpp"

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace christoffel;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buffer[256];
  std::snprintf(buffer, sizeof buffer, format, a, b, c, d);
  return buffer;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::vector<oracle::Instance> random_instances(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<oracle::Instance> out;
  for (int i = 0; i < count; ++i) {
    out.push_back(oracle::random_instance(rng));
  }
  return out;
}

GramSystem system_for(const oracle::Instance& inst) {
  PointMatrix points = inst.points;
  return GramSystem::assemble(KernelSpec::matern(inst.nu, inst.length, static_cast<int>(inst.points.cols())),
                              WeightedSample(points, inst.weights), inst.lambda);
}

std::vector<double> as_vector(const Eigen::VectorXd& z) { return {z.data(), z.data() + z.size()}; }

// 1
Outcome closed_form_d() {
  const SpectralProfile profile(KernelSpec::matern(0.5, 1.0, 1));
  double worst = 0.0;
  for (double lambda : oracle::geometric_sweep(1e-8, 10.0, 20)) {
    worst = std::max(worst, rel(profile.compute_D(lambda), std::sqrt(lambda * (lambda + 2.0))));
  }
  return {worst <= 1e-6, fmt("max relative error %.2e over 20 lambdas", worst)};
}

// 2
Outcome q0_dual() {
  const double pairs[][2] = {{0.5, 1}, {1.0, 1}, {1.5, 1}, {1.0, 2}};
  bool pass = true;
  std::string detail;
  for (const auto& pair : pairs) {
    const SpectralProfile profile(KernelSpec::matern(pair[0], 1.0, static_cast<int>(pair[1])));
    const auto& report = profile.q0_report();
    const double gap = rel(report.limit_estimate, *report.closed_form);
    pass = pass && gap <= 1e-2 && !report.disagreement;
    detail += fmt("(%.1f,%.0f) closed %.6f limit %.6f; ", pair[0], pair[1], *report.closed_form,
                  report.limit_estimate);
    if (pair[0] == 0.5 && pair[1] == 1) {
      const double target = 1.0 / std::sqrt(2.0);
      pass = pass && std::abs(*report.closed_form - target) <= 1e-6 && std::abs(report.limit_estimate - target) <= 1e-6;
    }
  }
  detail += fmt("compact expression at (1,2) = %.6f differs from the closed form by %.1f%%",
                matern_q0_compact_form(1.0, 1.0, 2),
                100.0 * rel(matern_q0_compact_form(1.0, 1.0, 2), matern_q0_closed_form(1.0, 1.0, 2)));
  return {pass, detail};
}

// 3
Outcome variational_oracle() {
  double worst = 0.0;
  int queries = 0;
  for (const auto& inst : random_instances(50, 3)) {
    const auto sys = system_for(inst);
    for (Eigen::Index i = 0; i < inst.points.rows(); ++i) {
      const Eigen::VectorXd z = inst.points.row(i).transpose();
      const double expected = oracle::representer_christoffel(inst, z);
      worst = std::max({worst, rel(sys.christoffel_at_support(i), expected),
                        rel(sys.christoffel_at_point(as_vector(z)), expected)});
      queries += 2;
    }
    for (Eigen::Index j = 0; j < inst.queries.rows(); ++j) {
      const Eigen::VectorXd z = inst.queries.row(j).transpose();
      worst = std::max(worst, rel(sys.christoffel_at_point(as_vector(z)), oracle::representer_christoffel(inst, z)));
      ++queries;
    }
  }
  return {worst <= 1e-8, fmt("%.0f queries on 50 instances, max relative error %.2e", queries, worst)};
}

// 4
Outcome dual_formula() {
  double worst = 0.0;
  for (const auto& inst : random_instances(50, 3)) {
    const auto sys = system_for(inst);
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(inst.points.rows()));
    std::iota(idx.begin(), idx.end(), 0);
    const Eigen::VectorXd smooth = sys.christoffel_smoothing_form(idx);
    const Eigen::VectorXd direct = sys.christoffel_at_support(idx);
    for (Eigen::Index i = 0; i < direct.size(); ++i) {
      worst = std::max(worst, rel(smooth(i), direct(i)));
    }
  }
  return {worst <= 1e-8, fmt("max relative gap %.2e", worst)};
}

// 5
Outcome kernel_reductions() {
  const double l = 0.7;
  const auto laplace = KernelSpec::matern(0.5, l, 1);
  const auto m32 = KernelSpec::matern(1.5, l, 1);
  double worst_half = 0.0, worst_three_halves = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double r = 6.0 * i / 99.0;
    const double expected = std::exp(-r / l);
    worst_half = std::max({worst_half, std::abs(laplace.q_radial(r) - expected),
                           std::abs(matern_bessel_form(0.5, l, r) - expected)});
    const double z = std::sqrt(3.0) * r / l;
    const double closed = (1.0 + z) * std::exp(-z);
    worst_three_halves = std::max({worst_three_halves, std::abs(m32.q_radial(r) - closed),
                                   std::abs(matern_bessel_form(1.5, l, r) - closed)});
  }
  const double roundtrip =
      std::max({fourier_roundtrip_check(KernelSpec::matern(0.5, 1.0, 1), {{0.0}, {0.5}, {1.0}, {2.0}}).max_deviation,
                fourier_roundtrip_check(KernelSpec::gaussian(0.5, 1), {{0.0}, {0.5}, {1.0}, {2.0}}).max_deviation,
                fourier_roundtrip_check(KernelSpec::gaussian(0.5, 2), {{0.0, 0.0}, {0.5, 0.5}, {1.0, -1.0}})
                    .max_deviation});
  return {worst_half <= 1e-10 && worst_three_halves <= 1e-8 && roundtrip <= 1e-6,
          fmt("nu=1/2 dev %.1e, nu=3/2 dev %.1e, round trip %.1e", worst_half, worst_three_halves, roundtrip)};
}

// 6
Outcome f_lambda_oracle() {
  const SpectralProfile profile(KernelSpec::matern(0.5, 1.0, 1));
  double worst = 0.0;
  for (double lambda : {1.0, 1e-2, 1e-4}) {
    const double a = std::sqrt((2.0 + lambda) / lambda);
    for (double x : {0.0, 0.25, 0.5, 1.0}) {
      worst = std::max(worst, std::abs(profile.eval_f_lambda(lambda, x) - std::exp(-a * x)));
    }
  }
  return {worst <= 1e-5, fmt("max absolute error %.2e", worst)};
}

// 7
Outcome figure2() {
  experiments::Fig2Options options;
  options.nus = {0.5, 1.0};
  const auto result = experiments::run_fig2(options);
  bool pass = true;
  std::string detail = fmt("n=%.0f, l=%.2f: ", static_cast<double>(options.n), options.length);
  for (const auto& s : result.summary) {
    pass = pass && s.worst_relative_error <= 0.15 && s.min_slope >= 0.9 && s.max_slope <= 1.1;
    detail += fmt("nu=%.1f err %.3f slopes [%.3f, %.3f]; ", s.nu, s.worst_relative_error, s.min_slope, s.max_slope);
  }
  return {pass, detail};
}

// 8
Outcome outside_envelope() {
  const auto& density = builtin_density("sinusoidal");
  const auto sample = riemann_from_density(default_lattice(density, 2000), density.p);
  PointMatrix outside(4, 1);
  outside << -2.5, -1.5, 1.5, 2.0;
  PointMatrix inside(1, 1);
  inside << 0.0;
  const auto lambdas = oracle::geometric_sweep(1e-5, 1e-2, 10);
  bool pass = true;
  double min_slope = 1e9, max_slope = -1e9;
  for (double nu : {0.5, 1.0}) {
    const auto base = GramSystem::assemble(KernelSpec::matern(nu, 0.5, 1), sample, lambdas.back());
    std::vector<std::vector<double>> c_out(4);
    std::vector<double> c_in;
    for (double lambda : lambdas) {
      const auto sys = base.refit_lambda(lambda);
      const Eigen::VectorXd values = sys.christoffel_at_points(outside);
      for (int j = 0; j < 4; ++j) {
        c_out[j].push_back(values(j));
      }
      c_in.push_back(sys.christoffel_at_points(inside)(0));
    }
    for (int j = 0; j < 4; ++j) {
      const double slope = oracle::loglog_slope(lambdas, c_out[j]);
      min_slope = std::min(min_slope, slope);
      max_slope = std::max(max_slope, slope);
      pass = pass && slope >= 0.85 && slope <= 1.15;
      // Ascending lambda, so the ratio must strictly increase here.
      for (std::size_t t = 1; t < lambdas.size(); ++t) {
        pass = pass && c_out[j][t] / c_in[t] > c_out[j][t - 1] / c_in[t - 1];
      }
    }
  }
  return {pass, fmt("outside slopes in [%.3f, %.3f]; ratio to interior monotone", min_slope, max_slope)};
}

// 9
Outcome monotonicity() {
  int violations = 0;
  int checks = 0;
  std::mt19937_64 rng(909);
  for (const auto& inst : random_instances(20, 9)) {
    const int d = static_cast<int>(inst.points.cols());
    const auto kernel = KernelSpec::matern(inst.nu, inst.length, d);
    PointMatrix points = inst.points;
    const WeightedSample sample(points, inst.weights);
    PointMatrix queries(inst.queries.rows() + points.rows(), d);
    queries << PointMatrix(inst.queries), points;
    const auto base = GramSystem::assemble(kernel, sample, inst.lambda);
    const Eigen::VectorXd c0 = base.christoffel_at_points(queries);

    // lambda: increasing, and midpoint concave on each consecutive pair.
    const auto lams = oracle::geometric_sweep(inst.lambda, 10.0 * inst.lambda, 5);
    std::vector<Eigen::VectorXd> c;
    for (double lam : lams) {
      c.push_back(base.refit_lambda(lam).christoffel_at_points(queries));
    }
    for (std::size_t t = 1; t < lams.size(); ++t) {
      const Eigen::VectorXd mid = base.refit_lambda(0.5 * (lams[t - 1] + lams[t])).christoffel_at_points(queries);
      for (Eigen::Index i = 0; i < queries.rows(); ++i) {
        violations += c[t](i) > c[t - 1](i) ? 0 : 1;
        violations += mid(i) >= 0.5 * (c[t](i) + c[t - 1](i)) * (1.0 - 1e-12) ? 0 : 1;
        checks += 2;
      }
    }

    // measure: an extra point with positive weight, and a heavier existing point.
    PointMatrix extended(points.rows() + 1, d);
    extended << points, PointMatrix::Constant(1, d, 0.0);
    for (int a = 0; a < d; ++a) {
      extended(points.rows(), a) = 2.0 * oracle::uniform01(rng) - 1.0;
    }
    Eigen::VectorXd extended_w(inst.weights.size() + 1);
    extended_w << inst.weights, 0.05;
    Eigen::VectorXd heavier = inst.weights;
    heavier(0) *= 2.0;
    const Eigen::VectorXd added =
        GramSystem::assemble(kernel, WeightedSample(extended, extended_w), inst.lambda).christoffel_at_points(queries);
    const Eigen::VectorXd heavy =
        GramSystem::assemble(kernel, WeightedSample(points, heavier), inst.lambda).christoffel_at_points(queries);

    // kernel: k + k'.
    const Eigen::VectorXd summed =
        GramSystem::assemble(KernelSpec::sum(kernel, KernelSpec::matern(2.5, 0.3, d)), sample, inst.lambda)
            .christoffel_at_points(queries);
    for (Eigen::Index i = 0; i < queries.rows(); ++i) {
      violations += added(i) >= c0(i) * (1.0 - 1e-10) ? 0 : 1;
      violations += heavy(i) >= c0(i) * (1.0 - 1e-10) ? 0 : 1;
      violations += summed(i) <= c0(i) * (1.0 + 1e-10) ? 0 : 1;
      checks += 3;
    }
  }
  return {violations == 0, fmt("%.0f violations in %.0f checks", violations, checks)};
}

// 10
double operator_norm_estimate(const Eigen::MatrixXd& gram, const Eigen::VectorXd& a) {
  // Largest |eigenvalue| of diag(a) K, which is self-adjoint for <x, y>_K, by power iteration.
  Eigen::VectorXd x = Eigen::VectorXd::Ones(a.size());
  Eigen::VectorXd kx = gram * x;
  x /= std::sqrt(x.dot(kx));
  kx = gram * x;
  double estimate = 0.0;
  for (int it = 0; it < 400; ++it) {
    const Eigen::VectorXd y = a.cwiseProduct(kx);
    const Eigen::VectorXd ky = gram * y;
    const double norm = std::sqrt(std::max(y.dot(ky), 0.0));
    if (norm == 0.0) {
      return 0.0;
    }
    const double previous = estimate;
    estimate = norm;
    x = y / norm;
    kx = ky / norm;
    if (it > 20 && std::abs(estimate - previous) <= 1e-9 * estimate) {
      break;
    }
  }
  return estimate;
}

Outcome refinement_bound() {
  const auto& density = builtin_density("sinusoidal");
  const Lattice fine_grid(density.grid_lower, density.grid_upper, {4000});
  const WeightedSample fine = riemann_from_density(fine_grid, density.p);
  const auto kernel = KernelSpec::matern(0.5, 0.5, 1);
  const double lambda = 1e-2;
  const auto fine_sys = GramSystem::assemble(kernel, fine, lambda);
  PointMatrix queries(10, 1);
  for (int i = 0; i < 10; ++i) {
    queries(i, 0) = -0.9 + 1.8 * i / 9.0;
  }
  const Eigen::VectorXd c_fine = fine_sys.christoffel_at_points(queries);
  const double h = fine_grid.spacing(0);

  bool pass = true;
  std::string detail;
  for (int n : {250, 500, 1000}) {
    const int stride = 4000 / n;
    PointMatrix sub_points(n, 1);
    Eigen::VectorXd sub_weights(n);
    Eigen::VectorXd discrepancy = fine.weights();
    for (int j = 0; j < n; ++j) {
      const Eigen::Index i = static_cast<Eigen::Index>(j) * stride + stride / 2;
      sub_points(j, 0) = fine.points()(i, 0);
      sub_weights(j) = density.p(fine.point(i)) * stride * h;
      discrepancy(i) -= sub_weights(j);
    }
    const auto sub_sys = GramSystem::assemble(kernel, WeightedSample(sub_points, sub_weights), lambda);
    const Eigen::VectorXd c_sub = sub_sys.christoffel_at_points(queries);
    const double s_hat = operator_norm_estimate(fine_sys.gram(), discrepancy);
    const double bound = kernel.q_at_zero() * s_hat / (lambda * lambda);
    double worst = 0.0;
    for (Eigen::Index q = 0; q < queries.rows(); ++q) {
      worst = std::max(worst, std::abs(1.0 / c_sub(q) - 1.0 / c_fine(q)) / bound);
    }
    pass = pass && worst <= 1.0;
    detail += fmt("n=%.0f: max |dC^-1| / bound = %.2e (s_hat %.2e); ", n, worst, s_hat);
  }
  return {pass, detail};
}

// 11
Outcome overfitting() {
  const auto result = experiments::run_overfit({});
  const bool pass = result.min_support_gap >= 0.0 && result.max_support_excess <= 1.01 &&
                    result.max_midpoint_ratio < 0.1;
  return {pass, fmt("support: C - eta >= %.2e, (C - eta) q(0)/lambda <= %.6f; midpoint C / min eta <= %.4f",
                    result.min_support_gap, result.max_support_excess, result.max_midpoint_ratio)};
}

// 12
Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / ("christoffel_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  cli::RunConfig config;
  config.measure = cli::parse_measure("iid:sinusoidal:300:17");
  config.queries = cli::parse_queries("grid:-1.5:1.5:61");
  config.sweep = cli::parse_sweep("1e-4:1e-2:3");
  std::ostringstream err;
  config.out = dir / "first";
  const int a = cli::run_command("estimate", config, err);
  config.out = dir / "second";
  const int b = cli::run_command("estimate", config, err);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  };
  const std::string first = slurp(dir / "first" / "estimates.csv");
  const bool same = a == 0 && b == 0 && !first.empty() && first == slurp(dir / "second" / "estimates.csv");
  const auto bytes = static_cast<double>(first.size());
  fs::remove_all(dir);
  return {same, fmt("two runs, %.0f bytes each, identical: %.0f", bytes, same ? 1.0 : 0.0) + err.str()};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_seconds;  // 0 means no runtime limit
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "closed-form D oracle", 1.0, closed_form_d},
      {2, "q0 closed form vs quadrature limit", 10.0, q0_dual},
      {3, "variational oracle equivalence", 5.0, variational_oracle},
      {4, "dual-formula identity", 0.0, dual_formula},
      {5, "kernel reductions and round trip", 0.0, kernel_reductions},
      {6, "f_lambda oracle", 0.0, f_lambda_oracle},
      {7, "density recovery and rate diagnostic", 120.0, figure2},
      {8, "outside-support O(lambda) envelope", 0.0, outside_envelope},
      {9, "monotonicity suite", 0.0, monotonicity},
      {10, "refinement bound", 0.0, refinement_bound},
      {11, "overfitting demonstration", 0.0, overfitting},
      {12, "determinism of estimate", 0.0, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome{false, ""};
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    while (!outcome.detail.empty() && (outcome.detail.back() == ' ' || outcome.detail.back() == ';')) {
      outcome.detail.pop_back();
    }
    bool pass = outcome.pass;
    if (c.budget_seconds > 0.0 && seconds > c.budget_seconds) {
      pass = false;
      outcome.detail += fmt(" [over the %.0f s budget]", c.budget_seconds);
    }
    failures += pass ? 0 : 1;
    std::printf("%s criterion %2d: %s (%.2f s) - %s\n", pass ? "PASS" : "FAIL", c.id, c.name, seconds,
                outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
