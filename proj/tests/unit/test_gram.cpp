#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "christoffel/gram.hpp"
#include "oracles.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

using namespace christoffel;

namespace {

WeightedSample to_sample(const oracle::Instance& inst) {
  PointMatrix pts = inst.points;
  return WeightedSample(pts, inst.weights);
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("one-point systems") {
  const auto k = KernelSpec::matern(1.3, 0.4, 1);
  PointMatrix x(1, 1);
  x << 0.2;
  const WeightedSample unit(x, Eigen::VectorXd::Ones(1));
  for (double lambda : {1e-3, 0.5, 4.0}) {
    const auto sys = GramSystem::assemble(k, unit, lambda);
    CHECK(sys.gram()(0, 0) == 1.0);
    // k(z, z) - |w|^2 = lambda / (1 + lambda) cancels about log10(1 / lambda) digits.
    CHECK(sys.christoffel_at_support(0) == doctest::Approx(1.0 + lambda).epsilon(1e-12));
  }
  const auto one = GramSystem::assemble(k, unit, 1.0);
  CHECK(one.leverage_score(std::vector<double>{0.2}) == doctest::Approx(0.5));
  const WeightedSample empty(x, Eigen::VectorXd::Zero(1));
  CHECK(GramSystem::assemble(k, empty, 0.3).christoffel_at_support(0) == doctest::Approx(0.3).epsilon(1e-14));
}

TEST_CASE("two-point Gram matrix") {
  PointMatrix x(2, 1);
  x << 0.0, 1.0;
  const auto sys = GramSystem::assemble(KernelSpec::matern(0.5, 1.0, 1), from_iid_sample(x), 0.1);
  CHECK(sys.gram()(0, 0) == 1.0);
  CHECK(sys.gram()(1, 1) == 1.0);
  CHECK(sys.gram()(0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(sys.gram()(1, 0) == sys.gram()(0, 1));
  CHECK(sys.jitter() == 0.0);
  CHECK(sys.factorization_residual() <= 1e-8);
}

TEST_CASE("support and point queries match the representer oracle on random n = 10 instances") {
  std::mt19937_64 rng(2024);
  int checked = 0;
  while (checked < 10) {
    auto inst = oracle::random_instance(rng);
    if (inst.points.rows() != 10) {
      continue;
    }
    ++checked;
    const auto sample = to_sample(inst);
    const auto kernel = KernelSpec::matern(inst.nu, inst.length, static_cast<int>(inst.points.cols()));
    const auto sys = GramSystem::assemble(kernel, sample, inst.lambda);
    for (Eigen::Index i = 0; i < sample.size(); ++i) {
      const Eigen::VectorXd z = inst.points.row(i).transpose();
      CHECK(rel(sys.christoffel_at_support(i), oracle::representer_christoffel(inst, z)) <= 1e-8);
      const std::vector<double> zv(z.data(), z.data() + z.size());
      CHECK(rel(sys.christoffel_at_point(zv), sys.christoffel_at_support(i)) <= 1e-8);
    }
    for (Eigen::Index j = 0; j < inst.queries.rows(); ++j) {
      const Eigen::VectorXd z = inst.queries.row(j).transpose();
      const std::vector<double> zv(z.data(), z.data() + z.size());
      CHECK(rel(sys.christoffel_at_point(zv), oracle::representer_christoffel(inst, z)) <= 1e-8);
    }
  }
}

TEST_CASE("far-away queries fall to lambda / q(0)") {
  PointMatrix x(3, 1);
  x << -0.5, 0.0, 0.5;
  const auto sys = GramSystem::assemble(KernelSpec::matern(0.5, 0.1, 1), from_iid_sample(x), 0.02);
  CHECK(sys.christoffel_at_point(std::vector<double>{1e3}) == doctest::Approx(0.02).epsilon(1e-14));
}

TEST_CASE("dual formula and batch queries") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = oracle::random_instance(rng);
    const auto sample = to_sample(inst);
    const auto sys = GramSystem::assemble(
        KernelSpec::matern(inst.nu, inst.length, static_cast<int>(inst.points.cols())), sample, inst.lambda);
    const Eigen::VectorXd all = sys.christoffel_at_support_all();
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(sample.size()));
    std::iota(idx.begin(), idx.end(), 0);
    const Eigen::VectorXd smooth = sys.christoffel_smoothing_form(idx);
    const Eigen::VectorXd batch = sys.christoffel_at_points(sample.points());
    for (Eigen::Index i = 0; i < sample.size(); ++i) {
      CHECK(rel(smooth(i), all(i)) <= 1e-8);
      CHECK(rel(batch(i), all(i)) <= 1e-8);
      CHECK(all(i) == sys.christoffel_at_support(i));
    }
  }
}

TEST_CASE("permutation equivariance") {
  PointMatrix x(5, 2);
  x << 0.1, 0.2, -0.3, 0.5, 0.7, -0.1, 0.0, 0.0, -0.6, -0.6;
  Eigen::VectorXd w(5);
  w << 0.1, 0.3, 0.2, 0.25, 0.15;
  const auto kernel = KernelSpec::matern(1.5, 0.5, 2);
  const auto a = GramSystem::assemble(kernel, WeightedSample(x, w), 0.01);
  const std::vector<int> perm{3, 0, 4, 1, 2};
  PointMatrix xp(5, 2);
  Eigen::VectorXd wp(5);
  for (int i = 0; i < 5; ++i) {
    xp.row(i) = x.row(perm[i]);
    wp(i) = w(perm[i]);
  }
  const auto b = GramSystem::assemble(kernel, WeightedSample(xp, wp), 0.01);
  for (int i = 0; i < 5; ++i) {
    CHECK(rel(b.christoffel_at_support(i), a.christoffel_at_support(perm[i])) <= 1e-12);
  }
  CHECK(rel(a.christoffel_at_point(std::vector<double>{0.3, 0.3}), b.christoffel_at_point(std::vector<double>{0.3, 0.3})) <=
        1e-12);
}

TEST_CASE("refit reuses the Gram matrix") {
  PointMatrix x(4, 1);
  x << -1.0, -0.2, 0.4, 0.9;
  const auto sys = GramSystem::assemble(KernelSpec::matern(1.0, 0.5, 1), from_iid_sample(x), 1e-3);
  const auto same = sys.refit_lambda(1e-3);
  CHECK(&same.gram() == &sys.gram());
  for (Eigen::Index i = 0; i < 4; ++i) {
    CHECK(same.christoffel_at_support(i) == sys.christoffel_at_support(i));
  }
  const auto fresh = GramSystem::assemble(KernelSpec::matern(1.0, 0.5, 1), from_iid_sample(x), 1e-2);
  const auto refit = sys.refit_lambda(1e-2);
  for (Eigen::Index i = 0; i < 4; ++i) {
    CHECK(refit.christoffel_at_support(i) == fresh.christoffel_at_support(i));
    CHECK(refit.christoffel_at_support(i) > sys.christoffel_at_support(i));
  }
  const std::vector<double> z{0.1};
  CHECK(refit.leverage_score(z) < sys.leverage_score(z));
}

TEST_CASE("monotonicity and concavity in lambda, measure and kernel") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = oracle::random_instance(rng);
    const int d = static_cast<int>(inst.points.cols());
    const auto kernel = KernelSpec::matern(inst.nu, inst.length, d);
    const auto sample = to_sample(inst);
    PointMatrix queries(inst.queries.rows() + sample.size(), d);
    queries << PointMatrix(inst.queries), sample.points();

    const auto base = GramSystem::assemble(kernel, sample, inst.lambda);
    const auto lams = oracle::geometric_sweep(inst.lambda, 4.0 * inst.lambda, 3);
    const Eigen::VectorXd c1 = base.refit_lambda(lams[0]).christoffel_at_points(queries);
    const Eigen::VectorXd c2 = base.refit_lambda(lams[1]).christoffel_at_points(queries);
    const Eigen::VectorXd c3 = base.refit_lambda(lams[2]).christoffel_at_points(queries);
    const double t = (lams[1] - lams[0]) / (lams[2] - lams[0]);
    for (Eigen::Index i = 0; i < queries.rows(); ++i) {
      CHECK(c1(i) < c2(i));
      CHECK(c2(i) < c3(i));
      CHECK(c2(i) >= ((1.0 - t) * c1(i) + t * c3(i)) * (1.0 - 1e-12));
    }

    Eigen::VectorXd heavier = inst.weights;
    heavier(0) *= 3.0;
    const Eigen::VectorXd more_mass =
        GramSystem::assemble(kernel, WeightedSample(PointMatrix(inst.points), heavier), inst.lambda)
            .christoffel_at_points(queries);
    const auto with_sum = KernelSpec::sum(kernel, KernelSpec::matern(2.5, 0.3, d));
    const Eigen::VectorXd summed = GramSystem::assemble(with_sum, sample, inst.lambda).christoffel_at_points(queries);
    const Eigen::VectorXd c0 = base.christoffel_at_points(queries);
    for (Eigen::Index i = 0; i < queries.rows(); ++i) {
      CHECK(more_mass(i) >= c0(i) * (1.0 - 1e-10));
      CHECK(summed(i) <= c0(i) * (1.0 + 1e-10));
    }
  }
}

TEST_CASE("input validation") {
  PointMatrix x(2, 1);
  x << 0.0, 1.0;
  const auto sample = from_iid_sample(x);
  const auto k1 = KernelSpec::matern(0.5, 1.0, 1);
  CHECK_THROWS_AS(GramSystem::assemble(k1, sample, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(GramSystem::assemble(k1, sample, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(GramSystem::assemble(k1, sample, 1e-13), std::invalid_argument);
  CHECK(minimum_lambda(k1, 2) == doctest::Approx(2e-12));
  CHECK_THROWS_AS(GramSystem::assemble(KernelSpec::matern(0.5, 1.0, 2), sample, 0.1), std::invalid_argument);
  const auto sys = GramSystem::assemble(k1, sample, 0.1);
  CHECK_THROWS_AS(sys.christoffel_at_support(2), std::out_of_range);
  CHECK_THROWS_AS(sys.christoffel_at_point(std::vector<double>{NAN}), std::domain_error);
  CHECK_THROWS_AS(sys.christoffel_at_point(std::vector<double>{0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(sys.refit_lambda(0.0), std::invalid_argument);
  Eigen::VectorXd w(2);
  w << 0.0, 1.0;
  const auto zero = GramSystem::assemble(k1, WeightedSample(x, w), 0.1);
  CHECK_THROWS_AS(zero.christoffel_smoothing_form(0), std::domain_error);
}
