#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "dpmk/combinatorics.hpp"
#include "dpmk/error.hpp"
#include "dpmk/numerics.hpp"
#include "dpmk/posterior.hpp"

using namespace dpmk;

namespace {

double total_mass(const PosteriorKnTable& t) {
  double sum = 0.0;
  for (int s = 1; s <= t.s_max(); ++s) sum += t.probability(s);
  return sum;
}

MixtureTruth separated_uniform() {
  MixtureTruth t;
  t.weights = {0.5, 0.5};
  t.locations = {0.0, 4.0};
  t.kernel = TruthKernel::Uniform;
  t.c = 1.0;
  t.completely_separated = true;
  return t;
}

}  // namespace

TEST_CASE("brute-force table basics") {
  const KernelModel g = GaussianConjugate{};
  const auto prior = AlphaPrior::gamma(1.0, 1.0);
  const auto one = posterior_kn_bruteforce(g, prior, std::vector<double>{0.3});
  CHECK(one.s_max() == 1);
  CHECK(one.probability(1) == doctest::Approx(1.0));
  CHECK(one.tail_mass_bound() == 0.0);
  const auto t = posterior_kn_bruteforce(g, prior, std::vector<double>{0.3, -1.0, 2.0, 0.1, 0.0, 1.7});
  CHECK(std::abs(total_mass(t) - 1.0) <= 1e-12);
  for (double lp : t.log_posterior) CHECK(lp <= 0.0);
  CHECK(t.method == PosteriorMethod::Brute);
  CHECK_THROWS_AS(posterior_kn_bruteforce(g, prior, std::vector<double>(14, 0.0)), ResourceError);
}

TEST_CASE("two points under a fixed alpha") {
  const auto prior = AlphaPrior::point_mass(1.0);
  const std::vector<KernelModel> models = {GaussianConjugate{}, UniformLocation{0.0, 1.0, std::nullopt}};
  const std::vector<double> x = {0.2, -0.4};
  for (const auto& m : models) {
    const auto t = posterior_kn_bruteforce(m, prior, x);
    const double expected = block_log_marginal(m, std::vector<double>{x[0]}) +
                            block_log_marginal(m, std::vector<double>{x[1]}) - block_log_marginal(m, x);
    CHECK(t.log_posterior[1] - t.log_posterior[0] == doctest::Approx(expected));
  }
}

TEST_CASE("size-only engine matches enumeration on constant data") {
  const std::vector<std::pair<KernelModel, double>> cases = {{GaussianConjugate{}, 1.0},
                                                             {UniformLocation{0.0, 1.0, std::nullopt}, 0.0}};
  const std::vector<AlphaPrior> priors = {AlphaPrior::gamma(1.0, 1.0), AlphaPrior::bounded_poly(1.0, 0.0),
                                          AlphaPrior::point_mass(2.0)};
  for (const auto& [m, v] : cases)
    for (const auto& p : priors)
      for (int n = 1; n <= 10; ++n) {
        const auto brute = posterior_kn_bruteforce(m, p, std::vector<double>(n, v));
        const auto fast = posterior_kn_sizeonly(size_log_marginals(m, v, n), p, n, n);
        CHECK(fast.tail_mass_bound() == 0.0);
        for (int s = 1; s <= n; ++s) {
          CHECK(fast.log_joint[s - 1] == doctest::Approx(brute.log_joint[s - 1]).epsilon(1e-10));
          CHECK(fast.probability(s) == doctest::Approx(brute.probability(s)).epsilon(1e-9));
        }
      }
}

TEST_CASE("size-only weights of the uniform model on constant data") {
  // m_a = (2c)^{-a}: each block of a copies has full range slack.
  const KernelModel u = UniformLocation{0.0, 1.0, std::nullopt};
  const auto log_m = size_log_marginals(u, 0.0, 6);
  for (int a = 1; a <= 6; ++a) CHECK(log_m[a - 1] == doctest::Approx(-a * std::log(2.0)));
}

TEST_CASE("truncated tables and s_max clamping") {
  const KernelModel g = GaussianConjugate{};
  const auto log_m = size_log_marginals(g, 1.0, 2000);
  const auto prior = AlphaPrior::gamma(1.0, 20.0);
  const auto full = posterior_kn_sizeonly(log_m, prior, 200, 200);
  const auto cut = posterior_kn_sizeonly(log_m, prior, 200, 16);
  CHECK(cut.method == PosteriorMethod::Truncated);
  CHECK(cut.tail_mass_bound() >= 0.0);
  double true_tail = 0.0;
  for (int s = cut.s_max() + 1; s <= 200; ++s) true_tail += full.probability(s);
  CHECK(cut.tail_mass_bound() >= true_tail);
  CHECK(total_mass(cut) + cut.tail_mass_bound() == doctest::Approx(1.0).epsilon(1e-10));
  for (int s = 1; s <= cut.s_max(); ++s) CHECK(cut.probability(s) == doctest::Approx(full.probability(s)).epsilon(1e-8));
  const auto clamped = posterior_kn_sizeonly(log_m, prior, 5, 64);
  CHECK(clamped.s_max() == 5);
  CHECK(!clamped.warnings.empty());
}

TEST_CASE("ratio decomposition") {
  const KernelModel g = GaussianConjugate{};
  const auto x = std::vector<double>{0.1, 1.9, 2.2, -0.4, 0.0, 2.0, 1.1};
  for (const auto& p : {AlphaPrior::gamma(2.0, 1.0), AlphaPrior::point_mass(0.4)}) {
    const auto sums = partition_log_sums(g, x);
    const auto table = posterior_from_log_sums(sums, p, 7, PosteriorMethod::Brute);
    for (int t = 1; t <= 3; ++t) {
      const auto r = ratio_report(sums, table, p, t);
      CHECK(r.entries.size() == 6);
      for (const auto& e : r.entries) CHECK(e.log_c + e.log_r == doctest::Approx(e.log_direct).epsilon(1e-10));
      // pr(K = t) = 1 / (1 + sum of ratios).
      CHECK(table.probability(t) == doctest::Approx(1.0 / (1.0 + std::exp(r.log_sum_ratio))).epsilon(1e-10));
      if (p.is_degenerate())
        for (const auto& e : r.entries) CHECK(e.log_c == doctest::Approx((e.s - t) * std::log(0.4)));
    }
  }
}

TEST_CASE("constant gaussian data: R(n,1,s) below the composition constant") {
  const KernelModel g = GaussianConjugate{};
  const double c = std::pow(2.0, 1.5) * riemann_zeta(1.5);
  const auto prior = AlphaPrior::gamma(1.0, 20.0);
  for (int n : {10, 50, 400}) {
    const auto log_m = size_log_marginals(g, 1.0, n);
    auto bell = size_only_table(log_m, n, 8);
    const auto table = posterior_kn_sizeonly(bell, prior, n, 8);
    const auto sums = size_only_log_sums(bell, n, 8);
    const auto r = ratio_report(sums, table, prior, 1);
    for (const auto& e : r.entries) CHECK(e.log_r < (e.s - 1) * std::log(c) - std::lgamma(e.s + 1.0));
  }
}

TEST_CASE("alpha posterior cdf") {
  const KernelModel g = GaussianConjugate{};
  const auto prior = AlphaPrior::gamma(1.0, 20.0);
  const std::vector<double> grid = {0.001, 0.01, 0.05, 0.1, 0.3, 1.0};
  const auto t1 = posterior_kn_bruteforce(g, prior, std::vector<double>{0.7});
  const auto c1 = posterior_alpha_cdf(t1, prior, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(c1[i].cdf == doctest::Approx(prior_cdf(prior, grid[i])));
  const auto bp = AlphaPrior::bounded_poly(0.5, 1.0);
  const auto tb = posterior_kn_bruteforce(g, bp, std::vector<double>{0.7, 0.2, -1.0});
  const auto cb = posterior_alpha_cdf(tb, bp, std::vector<double>{0.1, 0.4, 0.6, 2.0});
  CHECK(cb[2].cdf == doctest::Approx(1.0));
  CHECK(cb[3].cdf == doctest::Approx(1.0));
  for (std::size_t i = 1; i < cb.size(); ++i) CHECK(cb[i].cdf >= cb[i - 1].cdf);

  const auto log_m = size_log_marginals(g, 1.0, 1000);
  auto bell = size_only_table(log_m, 1000, 64);
  double prev = 0.0;
  for (int n : {10, 100, 1000}) {
    const auto t = posterior_kn_sizeonly(bell, prior, n);
    const double v = posterior_alpha_cdf(t, prior, std::vector<double>{0.1}).front().cdf;
    CHECK(v > prev);
    prev = v;
  }
  CHECK_THROWS_AS(posterior_alpha_cdf(t1, prior, std::vector<double>{0.5, 0.1}), DomainError);
}

TEST_CASE("separation forces at least t clusters") {
  const KernelModel u = UniformLocation{2.0, 1.0, std::pair{-1.0, 5.0}};
  const auto truth = separated_uniform();
  const auto prior = AlphaPrior::gamma(1.0, 1.0);
  for (int n = 2; n <= 10; ++n) {
    const auto s = sample_truth(truth, n, 17);
    const int ones = std::accumulate(s.labels.begin(), s.labels.end(), 0);
    if (ones == 0 || ones == n) continue;
    const auto t = posterior_kn_bruteforce(u, prior, s.x);
    CHECK(t.log_joint[0] == -INFINITY);
    CHECK(t.probability(1) == 0.0);
  }
}

TEST_CASE("fixed alpha: splitting a component keeps positive odds") {
  const KernelModel u = UniformLocation{2.0, 1.0, std::pair{-1.0, 5.0}};
  const auto truth = separated_uniform();
  const double alpha = 0.8;
  const auto prior = AlphaPrior::point_mass(alpha);
  int checked = 0;
  for (int n = 4; n <= 12; ++n) {
    const auto s = sample_truth(truth, n, 29, n);
    std::vector<double> c1;
    for (int i = 0; i < n; ++i)
      if (s.labels[i] == 0) c1.push_back(s.x[i]);
    if (c1.size() < 2 || static_cast<int>(c1.size()) == n) continue;
    const auto t = posterior_kn_bruteforce(u, prior, s.x);
    const double n1 = static_cast<double>(c1.size());
    LogAccumulator acc;
    for (std::size_t i = 0; i < c1.size(); ++i) {
      std::vector<double> rest = c1;
      rest.erase(rest.begin() + i);
      acc.add(block_log_marginal(u, std::vector<double>{c1[i]}) + block_log_marginal(u, rest));
    }
    const double bound = std::log(alpha) + acc.value() - std::log(n1 - 1) - block_log_marginal(u, c1);
    CHECK(t.log_posterior[2] - t.log_posterior[1] >= bound - 1e-12);
    ++checked;
  }
  CHECK(checked > 3);
}

TEST_CASE("expected partition-ratio identity") {
  const UniformLocation u{0.0, 1.0, std::nullopt};
  MixtureTruth truth;
  truth.weights = {1.0};
  truth.locations = {0.0};
  truth.kernel = TruthKernel::Uniform;
  truth.c = 1.0;
  const auto s1 = mc_expected_r(u, truth, 5, 1, 1000, 200, 3);
  CHECK(s1.lhs == doctest::Approx(1.0));
  CHECK(s1.rhs == doctest::Approx(1.0));
  const auto e = mc_expected_r(u, truth, 4, 4, 1000, 20'000, 5);
  CHECK(std::abs(e.lhs - e.rhs) <= 3.0 * e.combined_se);
  const auto partial = mc_expected_r(u, truth, 6, 3, 4, 10, 5);
  CHECK(partial.partial);
}

TEST_CASE("composition-sum bound") {
  const std::vector<double> ps = {1.5, 2.0};
  const auto r = composition_bound_check(12, 6, ps);
  CHECK(r.all_strict);
  CHECK(r.worst_log_slack > 0.0);
  for (const auto& row : r.rows) {
    if (row.s == row.n) CHECK(row.log_sum == doctest::Approx(row.p * std::log(row.n)));
    if (row.n == 3 && row.s == 2 && row.p == 2.0) {
      CHECK(std::exp(row.log_sum) == doctest::Approx(4.5));
      CHECK(std::exp(row.log_bound) == doctest::Approx(4.0 * M_PI * M_PI / 6));
    }
  }
  CHECK_THROWS_AS(composition_bound_check(26, 3, ps), DomainError);
}
