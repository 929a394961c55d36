#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <variant>

namespace dpmk {

/// Gamma(shape, rate).
struct GammaPrior {
  double shape;
  double rate;
};

/// Density proportional to alpha^{d-1} exp(-(alpha/a)^p); requires p > 1.
struct GeneralizedGammaPrior {
  double d;
  double a;
  double p;
};

/// Density proportional to alpha^beta on (0, c).
struct BoundedPolyPrior {
  double c;
  double beta;
};

/// Fixed concentration parameter.
struct PointMassPrior {
  double value;
};

/// Prior on the Dirichlet process concentration parameter.
class AlphaPrior {
 public:
  using Family = std::variant<GammaPrior, GeneralizedGammaPrior, BoundedPolyPrior, PointMassPrior>;

  /// Validates parameters; throws DomainError naming the violated condition.
  explicit AlphaPrior(Family family);

  static AlphaPrior gamma(double shape, double rate) { return AlphaPrior(GammaPrior{shape, rate}); }
  static AlphaPrior generalized_gamma(double d, double a, double p) {
    return AlphaPrior(GeneralizedGammaPrior{d, a, p});
  }
  static AlphaPrior bounded_poly(double c, double beta) { return AlphaPrior(BoundedPolyPrior{c, beta}); }
  static AlphaPrior point_mass(double value) { return AlphaPrior(PointMassPrior{value}); }

  const Family& family() const { return family_; }
  bool is_degenerate() const { return std::holds_alternative<PointMassPrior>(family_); }
  double log_normalizer() const { return log_norm_; }

  /// Right end of the support (+inf for unbounded families).
  double support_upper() const;

  /// Exponent beta with pi(alpha) ~ alpha^beta near 0. Throws for point mass.
  double origin_exponent() const;

  std::string describe() const;

 private:
  Family family_;
  double log_norm_ = 0.0;  // log of the density's normalizing constant
};

/// log pi(alpha); -inf outside the support. Throws UnsupportedOperation for a point mass.
double prior_log_density(const AlphaPrior& prior, double alpha);

/// log E(alpha^s) in closed form.
double prior_moment(const AlphaPrior& prior, double s);

/// Prior CDF pr(alpha <= x), closed form where available, quadrature otherwise.
double prior_cdf(const AlphaPrior& prior, double x, double tol = 1e-10);

inline constexpr double kDefaultTol = 1e-10;

struct WeightIntegral {
  double log_value;
  double rel_error;
  bool beyond_regime;  // k > n
};

/// log int_{lo}^{hi} alpha^k / alpha^{(n)} pi(alpha) d alpha.
///
/// n = 0 drops the ascending factorial (plain truncated moment). Integration
/// runs in u = log alpha. Throws DomainError when the integrand is not
/// integrable at the origin (k + beta <= 0 for n >= 1), NumericError when
/// the quadrature budget runs out.
WeightIntegral weight_integral_detail(const AlphaPrior& prior, std::int64_t n, int k, double tol,
                                      double alpha_lo = 0.0,
                                      double alpha_hi = std::numeric_limits<double>::infinity());

/// log I(n, k) = log int alpha^k / alpha^{(n)} pi(alpha) d alpha.
double weight_integral(const AlphaPrior& prior, std::int64_t n, int k, double tol = kDefaultTol);

/// Same integral restricted to (alpha_lo, alpha_hi).
double truncated_weight_integral(const AlphaPrior& prior, std::int64_t n, int k, double alpha_lo,
                                 double alpha_hi, double tol = kDefaultTol);

/// log C(n, t, s) = log I(n, s) - log I(n, t).
double c_ratio(const AlphaPrior& prior, std::int64_t n, int t, int s, double tol = kDefaultTol);

/// log of the ratio of the (alpha_lo, alpha_hi)-restricted integrals with powers s
/// and t. The (n-1)! factor cancels exactly instead of through subtraction.
double truncated_c_ratio(const AlphaPrior& prior, std::int64_t n, int t, int s, double alpha_lo,
                         double alpha_hi, double tol = kDefaultTol);

/// log E(alpha^s | K_n = t); the same number as c_ratio(prior, n, t, t + s).
double conditional_alpha_moment(const AlphaPrior& prior, std::int64_t n, int t, int s,
                                double tol = kDefaultTol);

}  // namespace dpmk
