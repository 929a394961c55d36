#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace dpmk {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log(sum(exp(xs))) with max shift. Throws UsageError on empty input.
double log_sum_exp(std::span<const double> xs);

/// log(exp(a) + exp(b)).
double log_add(double a, double b) noexcept;

/// Streaming log-sum-exp. Rescales when a larger term arrives, so the
/// result depends only on the order in which terms are added.
class LogAccumulator {
 public:
  void add(double x) noexcept;
  double value() const noexcept;
  bool empty() const noexcept { return max_ == kNegInf; }

 private:
  double max_ = kNegInf;
  double sum_ = 0.0;
};

/// log(alpha * (alpha+1) * ... * (alpha+n-1)); n = 0 gives 0.
double log_ascending_factorial(double alpha, std::int64_t n);

/// log_ascending_factorial(alpha, n) - lgamma(n) for n >= 1.
///
/// For large n the ascending factorial is dominated by (n-1)!, which carries
/// no information about alpha; dropping it keeps integrands over alpha at
/// O(alpha log n) magnitude so quadrature and differences stay accurate.
double log_ascending_factorial_reduced(double alpha, std::int64_t n);

/// log(n!).
double log_factorial(std::int64_t n);

/// log C(n, k); -inf when k < 0 or k > n.
double log_binomial(std::int64_t n, std::int64_t k);

/// Lower incomplete gamma gamma(x, y) = int_0^y t^{x-1} e^{-t} dt.
double lower_incomplete_gamma(double x, double y);
double log_lower_incomplete_gamma(double x, double y);

/// Regularized P(x, y) = gamma(x, y) / Gamma(x).
double regularized_lower_gamma(double x, double y);

/// Riemann zeta for p > 1.
double riemann_zeta(double p);

/// log(1 + x) - x, accurate for small |x|.
double log1pmx(double x);

}  // namespace dpmk
