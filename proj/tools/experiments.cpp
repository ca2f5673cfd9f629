#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace christoffel::experiments {

std::vector<double> geometric_sweep(double start, double stop, int count) {
  if (count < 1 || !(start > 0.0) || !(stop > 0.0)) {
    throw std::invalid_argument("lambda sweep needs count >= 1 and positive endpoints");
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    if (count == 1) {
      out.push_back(start);
    } else {
      out.push_back(start * std::pow(stop / start, static_cast<double>(i) / (count - 1)));
    }
  }
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("loglog_slope: need two or more paired values");
  }
  const auto m = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

Fig2Result run_fig2(const Fig2Options& options) {
  const auto& density = builtin_density("sinusoidal");
  const WeightedSample sample = riemann_from_density(default_lattice(density, options.n), density.p);
  std::vector<Eigen::Index> queries;
  for (Eigen::Index i = options.stride / 2; i < sample.size(); i += options.stride) {
    queries.push_back(i);
  }

  Fig2Result result;
  for (double nu : options.nus) {
    const KernelSpec kernel = KernelSpec::matern(nu, options.length, 1);
    const SpectralProfile profile(kernel);
    const GramSystem system = GramSystem::assemble(kernel, sample, options.lambda);
    const Eigen::VectorXd values = system.christoffel_at_support(queries);

    Fig2Summary summary{nu, 0.0, std::numeric_limits<double>::infinity(),
                        -std::numeric_limits<double>::infinity(), system.jitter()};
    for (std::size_t j = 0; j < queries.size(); ++j) {
      const auto x = sample.point(queries[j]);
      const double p = density.p(x);
      const double p_hat = estimate_density(profile, options.lambda, values(static_cast<Eigen::Index>(j)));
      const bool scored = p >= options.p_floor;
      result.left.push_back({nu, x[0], p, values(static_cast<Eigen::Index>(j)), p_hat, scored});
      if (scored) {
        summary.worst_relative_error = std::max(summary.worst_relative_error, std::abs(p_hat - p) / p);
      }
    }

    // diagnostics[j][t]: rate diagnostic of query j at sweep value t.
    std::vector<std::vector<double>> diagnostics(queries.size());
    for (double lambda : options.sweep) {
      const GramSystem refit = system.refit_lambda(lambda);
      const Eigen::VectorXd c = refit.christoffel_at_support(queries);
      for (std::size_t j = 0; j < queries.size(); ++j) {
        const auto x = sample.point(queries[j]);
        const double p = density.p(x);
        if (p < options.p_floor) {
          continue;
        }
        const double diag = rate_diagnostic(profile, lambda, c(static_cast<Eigen::Index>(j)), p);
        diagnostics[j].push_back(diag);
        result.right.push_back({nu, x[0], p, lambda, c(static_cast<Eigen::Index>(j)), diag});
      }
    }
    if (options.sweep.size() >= 2) {
      for (const auto& series : diagnostics) {
        if (series.empty()) {
          continue;
        }
        const double slope = loglog_slope(options.sweep, series);
        summary.min_slope = std::min(summary.min_slope, slope);
        summary.max_slope = std::max(summary.max_slope, slope);
      }
    }
    result.summary.push_back(summary);
  }
  return result;
}

OverfitResult run_overfit(const OverfitOptions& options) {
  const auto& density = builtin_density(options.density);
  if (density.dimension != 1) {
    throw std::invalid_argument("overfit: the demonstration is one-dimensional");
  }
  const Lattice grid(density.support_lower, density.support_upper, {options.n});
  const WeightedSample sample = riemann_from_density(grid, density.p);
  const KernelSpec kernel = KernelSpec::matern(options.nu, options.length, 1);
  const GramSystem system = GramSystem::assemble(kernel, sample, options.lambda);

  OverfitResult result{};
  result.q_zero = kernel.q_at_zero();
  result.min_eta = sample.weights().minCoeff();
  result.max_support_excess = -std::numeric_limits<double>::infinity();
  result.min_support_gap = std::numeric_limits<double>::infinity();
  const double floor = options.lambda / result.q_zero;

  auto eta_nearest = [&](double z) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < sample.size(); ++i) {
      if (std::abs(sample.points()(i, 0) - z) < std::abs(sample.points()(best, 0) - z)) {
        best = i;
      }
    }
    return sample.weight(best);
  };

  const Eigen::VectorXd at_support = system.christoffel_at_support_all();
  for (Eigen::Index i = 0; i < sample.size(); ++i) {
    const double eta = sample.weight(i);
    result.rows.push_back({sample.points()(i, 0), at_support(i), eta, OverfitRow::Kind::support});
    result.max_support_excess = std::max(result.max_support_excess, (at_support(i) - eta) / floor);
    result.min_support_gap = std::min(result.min_support_gap, at_support(i) - eta);
  }

  PointMatrix midpoints(sample.size() - 1, 1);
  for (Eigen::Index i = 0; i + 1 < sample.size(); ++i) {
    midpoints(i, 0) = 0.5 * (sample.points()(i, 0) + sample.points()(i + 1, 0));
  }
  const Eigen::VectorXd at_mid = system.christoffel_at_points(midpoints);
  for (Eigen::Index i = 0; i < midpoints.rows(); ++i) {
    result.rows.push_back({midpoints(i, 0), at_mid(i), eta_nearest(midpoints(i, 0)), OverfitRow::Kind::midpoint});
    result.max_midpoint_ratio = std::max(result.max_midpoint_ratio, at_mid(i) / result.min_eta);
  }

  const double lo = density.grid_lower[0] - 0.2;
  const double hi = density.grid_upper[0] + 0.2;
  PointMatrix profile(options.profile_points, 1);
  for (int i = 0; i < options.profile_points; ++i) {
    profile(i, 0) = options.profile_points == 1 ? lo : lo + (hi - lo) * i / (options.profile_points - 1);
  }
  const Eigen::VectorXd at_profile = system.christoffel_at_points(profile);
  for (Eigen::Index i = 0; i < profile.rows(); ++i) {
    result.rows.push_back({profile(i, 0), at_profile(i), eta_nearest(profile(i, 0)), OverfitRow::Kind::profile});
  }
  std::stable_sort(result.rows.begin(), result.rows.end(),
                   [](const OverfitRow& a, const OverfitRow& b) { return a.z < b.z; });
  return result;
}

CompareResult run_gaussian_compare(const CompareOptions& options) {
  const auto& density = builtin_density("piecewise");
  const WeightedSample sample = riemann_from_density(default_lattice(density, options.n), density.p);
  const std::vector<std::pair<std::string, KernelSpec>> kernels{
      {"matern", KernelSpec::matern(options.matern_nu, options.matern_length, 1)},
      {"gaussian", KernelSpec::gaussian(options.gaussian_length, 1)}};

  PointMatrix queries(options.profile_points, 1);
  const double lo = density.grid_lower[0] - 0.2;
  const double hi = density.grid_upper[0] + 0.2;
  for (int i = 0; i < options.profile_points; ++i) {
    queries(i, 0) = options.profile_points == 1 ? lo : lo + (hi - lo) * i / (options.profile_points - 1);
  }

  CompareResult result;
  for (const auto& [name, kernel] : kernels) {
    const SpectralProfile profile(kernel);
    const GramSystem system = GramSystem::assemble(kernel, sample, options.lambda);
    const Eigen::VectorXd values = system.christoffel_at_points(queries);
    for (Eigen::Index i = 0; i < queries.rows(); ++i) {
      const double z = queries(i, 0);
      const double p = density.p(std::span<const double>(&z, 1));
      const double local = p > 0.0 ? values(i) / profile.predict_inside(options.lambda, p)
                                   : std::numeric_limits<double>::quiet_NaN();
      result.profile.push_back({name, z, p, values(i), local});
    }
    for (double lambda : options.tail_sweep) {
      const double epsilon = std::pow(lambda, options.tail_exponent);
      result.tail.push_back({name, lambda, epsilon, profile.tail_mass_ratio(lambda, epsilon)});
    }
  }
  return result;
}

std::vector<SpectralRow> spectral_table(const SpectralProfile& profile, const std::vector<double>& lambdas,
                                        double p_z) {
  std::vector<SpectralRow> rows;
  const double q_zero = profile.kernel().q_at_zero();
  for (double lambda : lambdas) {
    const auto envelope = profile.predict_outside(lambda);
    rows.push_back({lambda, profile.compute_D(lambda), lambda / q_zero,
                    profile.has_power_law() ? profile.predict_asymptotic(lambda, 1.0)
                                            : std::numeric_limits<double>::quiet_NaN(),
                    profile.predict_inside(lambda, p_z), envelope.sqrt_scale, envelope.linear});
  }
  return rows;
}

}  // namespace christoffel::experiments
