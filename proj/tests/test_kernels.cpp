#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "dpmk/combinatorics.hpp"
#include "dpmk/error.hpp"
#include "dpmk/kernels.hpp"
#include "dpmk/quadrature.hpp"

using namespace dpmk;

namespace {

double integrate_single(const KernelModel& model, double lo, double hi) {
  QuadratureOptions opts;
  opts.rel_tol = 1e-10;
  opts.initial_subdivisions = 64;
  return integrate([&](double x) { return std::exp(block_log_marginal(model, std::vector<double>{x})); }, lo, hi, opts)
      .value;
}

}  // namespace

TEST_CASE("uniform marginal examples") {
  const KernelModel u = UniformLocation{0.0, 1.0, std::nullopt};
  for (int n : {1, 3, 9}) CHECK(block_log_marginal(u, std::vector<double>(n, 0.0)) == doctest::Approx(-n * std::log(2.0)));
  CHECK(block_log_marginal(u, std::vector<double>{-0.5, 0.25}) == doctest::Approx(std::log(0.15625)));
  CHECK(block_log_marginal(u, std::vector<double>{-0.9, 0.9, 0.95}) == doctest::Approx(std::log(0.15 / 16)));
  CHECK(block_log_marginal(u, std::vector<double>{-0.9, 1.5}) == -INFINITY);
  CHECK_THROWS_AS(block_log_marginal(u, std::vector<double>{}), DomainError);
  CHECK_THROWS_AS(block_log_marginal(u, std::vector<double>{NAN}), DomainError);
}

TEST_CASE("gaussian marginal examples") {
  const KernelModel g = GaussianConjugate{};
  CHECK(block_log_marginal(g, std::vector<double>{0.0}) ==
        doctest::Approx(-0.5 * std::log(2.0) - 0.5 * std::log(2 * M_PI)));
  const GaussianConjugate gc;
  CHECK(constant_data_size_log_marginal(gc, 1, 0.0) == doctest::Approx(std::log(std::sqrt(0.5) / std::sqrt(2 * M_PI))));
  const double ratio = constant_data_size_log_marginal(gc, 1, 0.0) * 2 - constant_data_size_log_marginal(gc, 2, 0.0);
  CHECK(std::exp(ratio) == doctest::Approx(std::sqrt(0.75)));
  for (double theta : {0.0, 0.7, -2.0})
    for (int a : {1, 4, 30}) {
      const double log_q0 = -0.5 * std::log(2 * M_PI) - 0.5 * theta * theta;
      const double bound = -0.5 * std::log(a + 1.0) + a * log_q0 + 0.5 * theta * theta * a;
      // a^2/(a+1) < a, so the inequality is strict unless theta = 0.
      if (theta == 0.0) CHECK(constant_data_size_log_marginal(gc, a, theta) <= bound + 1e-12);
      else CHECK(constant_data_size_log_marginal(gc, a, theta) < bound);
    }
}

TEST_CASE("constant-block closed form matches the general marginal") {
  const GaussianConjugate gc;
  const KernelModel g = gc;
  for (double theta : {0.0, 1.0, -0.3})
    for (int a = 1; a <= 1000; a += (a < 20 ? 1 : 37)) {
      const double general = block_log_marginal(g, std::vector<double>(a, theta));
      CHECK(constant_data_size_log_marginal(gc, a, theta) == doctest::Approx(general).epsilon(1e-12));
      CHECK(constant_block_log_marginal(g, theta, a) == doctest::Approx(general).epsilon(1e-12));
    }
}

TEST_CASE("partition ratio on constant data stays below the size bound") {
  const GaussianConjugate gc;
  for (double theta : {0.0, 1.0})
    for (int n = 2; n <= 10; ++n)
      for (const auto& p : enumerate_set_partitions(n)) {
        if (p.block_count() < 2) continue;
        double log_ratio = -constant_data_size_log_marginal(gc, n, theta), log_bound = std::log(n);
        for (const auto& b : p.blocks) {
          const auto a = static_cast<std::int64_t>(b.size());
          log_ratio += constant_data_size_log_marginal(gc, a, theta);
          log_bound -= std::log(static_cast<double>(a));
        }
        CHECK(log_ratio < 0.5 * log_bound);
      }
}

TEST_CASE("single-point marginals integrate to one") {
  CHECK(integrate_single(UniformLocation{0.3, 1.0, std::nullopt}, -2.0, 2.6) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(integrate_single(UniformLocation{0.0, 0.5, std::pair{-1.0, 2.0}}, -2.0, 3.0) ==
        doctest::Approx(1.0).epsilon(1e-6));
  CHECK(integrate_single(GaussianConjugate{}, -14.0, 14.0) == doctest::Approx(1.0).epsilon(1e-6));
  const KernelModel b = BoundedLocation{TabulatedDensity::truncated_normal(0.0, 0.4, -1.0, 1.0),
                                        TabulatedDensity::uniform(0.0, 2.0)};
  CHECK(integrate_single(b, -1.0, 3.0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("bounded kernel with uniform tables reproduces the uniform closed form") {
  const double theta = 0.2, c = 0.75;
  const KernelModel u = UniformLocation{theta, c, std::nullopt};
  const KernelModel b = BoundedLocation{TabulatedDensity::uniform(-c, c), TabulatedDensity::uniform(theta - c, theta + c)};
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> x(theta - c, theta + c);
  std::uniform_int_distribution<int> size(1, 8);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> block(size(gen));
    for (auto& v : block) v = x(gen);
    const double exact = block_log_marginal(u, block);
    const double quad = block_log_marginal(b, block);
    if (std::isinf(exact)) {
      CHECK(std::isinf(quad));
    } else {
      CHECK(std::abs(std::exp(quad - exact) - 1.0) <= 1e-8);
    }
  }
}

TEST_CASE("incremental block statistics") {
  const std::vector<KernelModel> models = {GaussianConjugate{}, UniformLocation{0.0, 1.0, std::pair{-1.0, 2.0}}};
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> x(-0.2, 0.8);
  for (const auto& m : models) {
    BlockStats stats(m);
    std::vector<double> held;
    for (int i = 0; i < 40; ++i) {
      const double v = x(gen);
      const double predicted = stats.log_marginal_with(v);
      stats.add(v);
      held.push_back(v);
      CHECK(stats.log_marginal() == doctest::Approx(predicted).epsilon(1e-12));
      CHECK(stats.log_marginal() == doctest::Approx(block_log_marginal(m, held)).epsilon(1e-10));
      if (i % 3 == 2) {
        stats.remove(held.front());
        held.erase(held.begin());
        CHECK(stats.log_marginal() == doctest::Approx(block_log_marginal(m, held)).epsilon(1e-10));
      }
    }
    CHECK(stats.size() == static_cast<std::int64_t>(held.size()));
  }
  BlockStats empty(models[0]);
  CHECK_THROWS_AS(empty.remove(0.0), UsageError);
}

TEST_CASE("model and truth validation") {
  CHECK_THROWS_AS(validate(KernelModel{UniformLocation{0.0, 0.0, std::nullopt}}), DomainError);
  CHECK_THROWS_AS(validate(KernelModel{UniformLocation{0.0, 1.0, std::pair{1.0, 0.0}}}), DomainError);
  CHECK_NOTHROW(validate(KernelModel{GaussianConjugate{}}));
  CHECK_THROWS_AS(TabulatedDensity({0.0, 1.0}, {-1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(TabulatedDensity({0.0, 0.0}, {1.0, 1.0}), DomainError);
  MixtureTruth t;
  t.weights = {0.5, 0.4};
  t.locations = {0.0, 1.0};
  CHECK_THROWS_AS(validate(t), DomainError);
  t.weights = {0.5, 0.5};
  t.locations = {1.0, 1.0};
  CHECK_THROWS_AS(validate(t), DomainError);
  t.locations = {0.0, 1.5};
  t.kernel = TruthKernel::Uniform;
  t.c = 1.0;
  t.completely_separated = true;
  CHECK_THROWS_AS(validate(t), DomainError);
  t.locations = {0.0, 2.5};
  CHECK_NOTHROW(validate(t));
}

TEST_CASE("tabulated density") {
  const auto d = TabulatedDensity({0.0, 1.0, 2.0}, {0.0, 2.0, 0.0});
  CHECK(d(1.0) == doctest::Approx(1.0));
  CHECK(d(3.0) == 0.0);
  CHECK(d.quantile(0.5) == doctest::Approx(1.0));
  CHECK(d.quantile(0.125) == doctest::Approx(0.5));
  CHECK(d.sup() == doctest::Approx(1.0));
  const auto tn = TabulatedDensity::truncated_normal(0.0, 1.0, -1.0, 1.0);
  const double z = std::erf(1.0 / std::sqrt(2.0));
  CHECK(tn(0.0) == doctest::Approx(1.0 / std::sqrt(2 * M_PI) / z).epsilon(1e-6));
}

TEST_CASE("truth sampling") {
  MixtureTruth deg;
  deg.weights = {1.0};
  deg.locations = {1.0};
  deg.degenerate = true;
  CHECK(sample_truth(deg, 3, 1).x == std::vector<double>{1.0, 1.0, 1.0});

  MixtureTruth u;
  u.weights = {1.0};
  u.locations = {0.4};
  u.kernel = TruthKernel::Uniform;
  u.c = 1.0;
  const auto s = sample_truth(u, 20'000, 8);
  const double mean = std::accumulate(s.x.begin(), s.x.end(), 0.0) / s.x.size();
  CHECK(std::abs(mean - 0.4) <= 3.0 * (1.0 / std::sqrt(3.0)) / std::sqrt(20'000.0));
  CHECK(sample_truth(u, 50, 8).x == sample_truth(u, 50, 8).x);
  CHECK(sample_truth(u, 50, 8).x != sample_truth(u, 50, 9).x);
  CHECK(sample_truth(u, 50, 8, 1).x != sample_truth(u, 50, 8, 2).x);

  MixtureTruth sep;
  sep.weights = {0.3, 0.7};
  sep.locations = {0.0, 3.0};
  sep.kernel = TruthKernel::Uniform;
  sep.c = 1.0;
  sep.completely_separated = true;
  const auto d = sample_truth(sep, 2000, 4);
  for (std::size_t i = 0; i < d.x.size(); ++i) {
    const bool in0 = std::abs(d.x[i] - 0.0) <= 1.0, in1 = std::abs(d.x[i] - 3.0) <= 1.0;
    CHECK(in0 != in1);
    CHECK(d.labels[i] == (in0 ? 0 : 1));
  }
}

TEST_CASE("scaled range statistic and its law") {
  const UniformLocation m{0.0, 1.0, std::nullopt};
  CHECK(scaled_range_statistic(m, std::vector<double>{-1.0, 1.0}) == doctest::Approx(0.0).scale(1.0));
  CHECK(scaled_range_statistic(m, std::vector<double>{0.3, 0.3, 0.3}) == 1.0);
  CHECK_THROWS_AS(scaled_range_statistic(m, std::vector<double>{0.1}), DomainError);
  CHECK(beta2_cdf(0.0, 9.0) == 0.0);
  CHECK(beta2_cdf(1.0, 9.0) == 1.0);
  // Beta(2, 1) has CDF x^2.
  CHECK(beta2_cdf(0.6, 1.0) == doctest::Approx(0.36));

  MixtureTruth truth;
  truth.weights = {1.0};
  truth.locations = {0.0};
  truth.kernel = TruthKernel::Uniform;
  truth.c = 1.0;
  std::vector<double> stats;
  for (int r = 0; r < 10'000; ++r) stats.push_back(scaled_range_statistic(m, sample_truth(truth, 10, 21, r).x));
  CHECK(ks_test(stats, [](double v) { return beta2_cdf(v, 9.0); }).p_value >= 0.01);
  // The wrong law is rejected.
  CHECK(ks_test(stats, [](double v) { return beta2_cdf(v, 5.0); }).p_value < 1e-6);
}

TEST_CASE("Kolmogorov p-values") {
  CHECK(kolmogorov_p_value(0.0, 100) == doctest::Approx(1.0));
  // Asymptotic critical value 1.358 at level 0.05.
  CHECK(kolmogorov_p_value(1.358 / std::sqrt(1e6), 1'000'000) == doctest::Approx(0.05).epsilon(0.01));
}
