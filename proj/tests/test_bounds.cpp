#include <doctest.h>

#include <cmath>
#include <vector>

#include "dpmk/bounds.hpp"
#include "dpmk/error.hpp"
#include "dpmk/prior.hpp"

using namespace dpmk;

TEST_CASE("origin certificate") {
  const auto uni = fit_origin_certificate(AlphaPrior::bounded_poly(1.0, 0.0), 0.5);
  CHECK(uni.epsilon == 0.5);
  CHECK(uni.delta == doctest::Approx(1.0));
  CHECK(uni.beta == 0.0);
  // Gamma(1, rho) on (0, 0.1): density rho e^{-rho a} lies in [rho e^{-0.1 rho}, rho].
  const double rho = 20.0;
  const auto g = fit_origin_certificate(AlphaPrior::gamma(1.0, rho), 0.1);
  CHECK(g.beta == 0.0);
  CHECK(g.delta >= std::max(rho, std::exp(0.1 * rho) / rho));
  for (double a = 1e-6; a < 0.1; a *= 1.5) {
    const double dens = std::exp(prior_log_density(AlphaPrior::gamma(1.0, rho), a));
    CHECK(dens <= g.delta);
    CHECK(dens >= 1.0 / g.delta);
  }
  CHECK_THROWS_AS(fit_origin_certificate(AlphaPrior::point_mass(1.0), 0.5), CertificationFailure);
  CHECK_THROWS_AS(fit_origin_certificate(AlphaPrior::gamma(1.0, 1.0), 0.99, 1.01), CertificationFailure);
  CHECK(default_epsilon(AlphaPrior::bounded_poly(0.4, 0.0)) == doctest::Approx(0.2));
  CHECK(default_epsilon(AlphaPrior::gamma(2.0, 1.0)) == 0.5);
}

TEST_CASE("moment growth certificate") {
  const auto bp = verify_moment_growth(AlphaPrior::bounded_poly(1.0, 0.0), 38.0, 50);
  CHECK(bp.s_checked == 50);
  const auto g = verify_moment_growth(AlphaPrior::gamma(1.0, 20.0), 20.0, 50);
  CHECK(g.D <= 1.0);
  for (int s = 1; s <= 50; ++s)
    CHECK(prior_moment(AlphaPrior::gamma(1.0, 20.0), s) < std::log(g.D) - s * std::log(20.0) + std::lgamma(g.nu + s + 1));
  CHECK_THROWS_AS(verify_moment_growth(AlphaPrior::gamma(1.0, 1.0), 100.0, 50), CertificationFailure);
}

TEST_CASE("upper bound dominates c_ratio") {
  const std::vector<AlphaPrior> priors = {AlphaPrior::gamma(1.0, 1.0), AlphaPrior::gamma(2.0, 5.0),
                                          AlphaPrior::bounded_poly(1.0, 0.0), AlphaPrior::bounded_poly(3.0, 1.0),
                                          AlphaPrior::generalized_gamma(1.5, 1.0, 2.0)};
  for (const auto& p : priors) {
    const auto cert = fit_origin_certificate(p, default_epsilon(p));
    for (std::int64_t n : {4LL, 10LL, 100LL, 10'000LL, 1'000'000LL})
      for (int t : {1, 2})
        for (int s : {1, 2, 5}) {
          const double c = c_ratio(p, n, t, t + s, 1e-8);
          CHECK(c_ratio_upper_bound(cert, p, n, t, s) >= c - 1e-8);
          const double tr = truncated_ratio(cert, p, n, t, s, 1e-8);
          const auto [lo, up] = truncated_ratio_bounds(cert, n, t, s);
          CHECK(lo <= tr + 1e-8);
          CHECK(tr <= up + 1e-8);
        }
  }
}

TEST_CASE("bound shapes") {
  const auto p = AlphaPrior::gamma(1.0, 1.0);
  const auto cert = fit_origin_certificate(p, 0.5);
  const double v = c_ratio_upper_bound(cert, p, 10'000, 1, 1);
  CHECK(std::isfinite(v));
  // Both truncated-ratio bounds decrease in s for fixed n.
  for (std::int64_t n : {100LL, 10'000LL}) {
    auto prev = truncated_ratio_bounds(cert, n, 1, 1);
    for (int s = 2; s <= 6; ++s) {
      const auto cur = truncated_ratio_bounds(cert, n, 1, s);
      CHECK(cur.first < prev.first);
      CHECK(cur.second < prev.second);
      prev = cur;
    }
  }
  const auto small = truncated_ratio_bounds(cert, 2, 1, 1);
  CHECK(std::isfinite(small.first));
  CHECK(std::isfinite(small.second));
  // bound (log n)^s settles toward a constant as n grows.
  double prev_scaled = 0.0;
  for (int e = 4; e <= 8; e += 2) {
    const std::int64_t n = static_cast<std::int64_t>(std::pow(10, e));
    const double scaled = c_ratio_upper_bound(cert, p, n, 1, 2) + 2 * std::log(std::log(static_cast<double>(n)));
    if (e > 4) CHECK(std::abs(scaled - prev_scaled) < 0.5);
    prev_scaled = scaled;
  }
  CHECK_THROWS_AS(c_ratio_upper_bound(cert, p, 1, 1, 1), DomainError);
}

TEST_CASE("tail domination constant") {
  const auto inside = tail_domination_constant(AlphaPrior::bounded_poly(0.5, 0.0), 1, 0.5);
  CHECK(inside.M == 1.0);
  CHECK(inside.verified);
  const auto p = AlphaPrior::gamma(1.0, 1.0);
  const auto tc = tail_domination_constant(p, 1, 0.5, 1e-8);
  CHECK(tc.M >= 1.0);
  CHECK(std::isfinite(tc.M));
  CHECK(tc.verified);
  const auto cert = fit_origin_certificate(p, 0.5);
  for (std::int64_t n : {100LL, 10'000LL})
    for (int s : {1, 2, 5}) CHECK(c_ratio_lower_bound(cert, n, 1, s, tc.M) <= c_ratio(p, n, 1, 1 + s, 1e-8) + 1e-8);
}
