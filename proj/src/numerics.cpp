#include "dpmk/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dpmk/error.hpp"

namespace dpmk {

double log_sum_exp(std::span<const double> xs) {
  if (xs.empty()) throw UsageError("log_sum_exp: empty input");
  const double m = *std::max_element(xs.begin(), xs.end());
  if (m == kNegInf) return kNegInf;
  if (xs.size() == 1) return xs[0];
  double sum = 0.0;
  for (double x : xs) sum += std::exp(x - m);
  return m + std::log(sum);
}

double log_add(double a, double b) noexcept {
  if (a < b) std::swap(a, b);
  if (b == kNegInf) return a;
  return a + std::log1p(std::exp(b - a));
}

void LogAccumulator::add(double x) noexcept {
  if (x == kNegInf) return;
  if (x <= max_) {
    sum_ += std::exp(x - max_);
  } else {
    sum_ = sum_ * std::exp(max_ - x) + 1.0;
    max_ = x;
  }
}

double LogAccumulator::value() const noexcept {
  if (max_ == kNegInf) return kNegInf;
  return max_ + std::log(sum_);
}

double log1pmx(double x) {
  if (std::abs(x) < 0.01) {
    // -x^2/2 + x^3/3 - ...
    double term = -x * x;
    double sum = 0.0;
    for (int k = 2; k < 14; ++k) {
      sum += term / k;
      term *= -x;
    }
    return sum;
  }
  return std::log1p(x) - x;
}

namespace {

void check_alpha(double alpha, std::int64_t n) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw DomainError("ascending factorial: alpha must be positive and finite");
  if (n < 0) throw DomainError("ascending factorial: n must be nonnegative");
}

// lgamma(n + alpha) - lgamma(n) without cancellation for alpha << n.
double lgamma_shift(double alpha, double n) {
  if (n < 16.0 || alpha > 0.25 * n) return std::lgamma(n + alpha) - std::lgamma(n);
  static constexpr double kStirling[] = {1.0 / 12.0,   -1.0 / 360.0,       1.0 / 1260.0,
                                         -1.0 / 1680.0, 1.0 / 1188.0,       -691.0 / 360360.0,
                                         1.0 / 156.0};
  const double x = alpha / n;
  const double lx = std::log1p(x);
  double value = alpha * std::log(n) + n * log1pmx(x) + (alpha - 0.5) * lx;
  double npow = n;  // n^{2j-1}
  for (int j = 1; j <= 7; ++j) {
    value += kStirling[j - 1] / npow * std::expm1((1.0 - 2.0 * j) * lx);
    npow *= n * n;
  }
  return value;
}

}  // namespace

double log_ascending_factorial(double alpha, std::int64_t n) {
  check_alpha(alpha, n);
  if (n == 0) return 0.0;
  if (n <= 16) {
    double s = 0.0;
    for (std::int64_t i = 0; i < n; ++i) s += std::log(alpha + static_cast<double>(i));
    return s;
  }
  return std::lgamma(static_cast<double>(n)) + log_ascending_factorial_reduced(alpha, n);
}

double log_ascending_factorial_reduced(double alpha, std::int64_t n) {
  check_alpha(alpha, n);
  if (n == 0) throw DomainError("reduced ascending factorial requires n >= 1");
  if (n <= 16) {
    double s = std::log(alpha);
    for (std::int64_t i = 1; i < n; ++i)
      s += std::log1p(alpha / static_cast<double>(i));
    return s;
  }
  return std::log(alpha) + lgamma_shift(alpha, static_cast<double>(n)) - std::lgamma(alpha + 1.0);
}

double log_factorial(std::int64_t n) {
  if (n < 0) throw DomainError("log_factorial: negative argument");
  return std::lgamma(static_cast<double>(n) + 1.0);
}

double log_binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return kNegInf;
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

double log_lower_incomplete_gamma(double x, double y) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("lower_incomplete_gamma: x must be positive");
  if (!(y >= 0.0)) throw DomainError("lower_incomplete_gamma: y must be nonnegative");
  if (y == 0.0) return kNegInf;
  if (std::isinf(y)) return std::lgamma(x);
  const double log_prefix = x * std::log(y) - y;
  if (y < x + 1.0) {
    double term = 1.0 / x;
    double sum = term;
    for (int k = 1; k < 100000; ++k) {
      term *= y / (x + k);
      sum += term;
      if (term < sum * 1e-17) break;
    }
    return log_prefix + std::log(sum);
  }
  // Upper gamma by modified Lentz continued fraction, then complement.
  constexpr double tiny = 1e-300;
  double b = y + 1.0 - x;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -i * (i - x);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  const double log_upper = log_prefix + std::log(h);
  const double lg = std::lgamma(x);
  return lg + std::log1p(-std::exp(log_upper - lg));
}

double lower_incomplete_gamma(double x, double y) {
  return std::exp(log_lower_incomplete_gamma(x, y));
}

double regularized_lower_gamma(double x, double y) {
  return std::exp(log_lower_incomplete_gamma(x, y) - std::lgamma(x));
}

double riemann_zeta(double p) {
  if (!(p > 1.0)) throw DomainError("riemann_zeta: requires p > 1");
  constexpr int N = 20;
  double sum = 0.0;
  for (int k = N - 1; k >= 1; --k) sum += std::pow(static_cast<double>(k), -p);
  const double n = N;
  sum += std::pow(n, 1.0 - p) / (p - 1.0) + 0.5 * std::pow(n, -p);
  // Euler-Maclaurin tail: B_{2j}/(2j)! * p(p+1)...(p+2j-2) * N^{-p-2j+1}
  static constexpr double kB[] = {1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0,
                                  5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0};
  double rising = p;  // p (p+1) ... (p+2j-2)
  double fact = 2.0;  // (2j)!
  double npow = std::pow(n, -p - 1.0);
  for (int j = 1; j <= 7; ++j) {
    sum += kB[j - 1] / fact * rising * npow;
    rising *= (p + 2.0 * j - 1.0) * (p + 2.0 * j);
    fact *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
    npow /= n * n;
  }
  return sum;
}

}  // namespace dpmk
