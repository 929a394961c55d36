#include "dpmk/prior.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dpmk/error.hpp"
#include "dpmk/numerics.hpp"
#include "dpmk/quadrature.hpp"

namespace dpmk {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool positive_finite(double x) { return x > 0.0 && std::isfinite(x); }

constexpr double kAlphaFloor = 1e-300;

// Upper integration limit beyond which alpha^k pi(alpha) is negligible.
double integration_ceiling(const AlphaPrior& prior, int k) {
  return std::visit(overloaded{
                        [&](const GammaPrior& g) { return 20.0 * (g.shape + k + 50.0) / g.rate; },
                        [&](const GeneralizedGammaPrior& g) {
                          return g.a * std::pow(20.0 * ((g.d + k) / g.p + 50.0), 1.0 / g.p);
                        },
                        [&](const BoundedPolyPrior& b) { return b.c; },
                        [&](const PointMassPrior& p) { return p.value; },
                    },
                    prior.family());
}

// log int alpha^k exp(-reduced(alpha, n)) pi(alpha) d alpha over (lo, hi); for n = 0
// the factorial term is absent. For n >= 1 this equals log I(n, k) + lgamma(n).
WeightIntegral reduced_log_integral(const AlphaPrior& prior, std::int64_t n, int k, double tol,
                                    double alpha_lo, double alpha_hi) {
  if (n < 0) throw DomainError("weight integral: n must be nonnegative");
  if (k < 0) throw DomainError("weight integral: k must be nonnegative");
  if (!(alpha_lo >= 0.0) || !(alpha_hi >= alpha_lo)) throw DomainError("weight integral: bad alpha range");
  const bool beyond = n > 0 && k > n;
  if (const auto* pm = std::get_if<PointMassPrior>(&prior.family())) {
    const double a = pm->value;
    if (!(a > alpha_lo && a <= alpha_hi)) return {kNegInf, 0.0, beyond};
    const double lf = n == 0 ? 0.0 : log_ascending_factorial_reduced(a, n);
    return {k * std::log(a) - lf, 0.0, beyond};
  }
  const double beta = prior.origin_exponent();
  const double origin_power = (n == 0 ? k + beta + 1.0 : k + beta);
  if (alpha_lo == 0.0 && !(origin_power > 0.0))
    throw DomainError("weight integral: integrand not integrable at alpha = 0 (k + beta <= 0)");
  const double hi = std::min(alpha_hi, integration_ceiling(prior, k));
  const double lo = std::max(alpha_lo, kAlphaFloor);
  if (!(hi > lo)) return {kNegInf, 0.0, beyond};
  auto log_f = [&](double u) {
    const double alpha = std::exp(u);
    const double lp = prior_log_density(prior, alpha);
    if (lp == kNegInf) return kNegInf;
    const double lf = n == 0 ? 0.0 : log_ascending_factorial_reduced(alpha, n);
    return (k + 1.0) * u - lf + lp;
  };
  QuadratureOptions opts;
  opts.rel_tol = tol;
  // Keep the Bounded support edge exactly at the upper limit.
  const double u_hi = std::log(hi);
  const double u_lo = std::log(lo);
  auto r = log_integrate_unimodal(log_f, u_lo, u_hi, opts);
  return {r.log_value, r.rel_error, beyond};
}

}  // namespace

AlphaPrior::AlphaPrior(Family family) : family_(family) {
  std::visit(overloaded{
                 [&](const GammaPrior& g) {
                   if (!positive_finite(g.shape) || !positive_finite(g.rate))
                     throw DomainError("Gamma prior requires shape > 0 and rate > 0");
                   log_norm_ = g.shape * std::log(g.rate) - std::lgamma(g.shape);
                 },
                 [&](const GeneralizedGammaPrior& g) {
                   if (!positive_finite(g.d) || !positive_finite(g.a))
                     throw DomainError("generalized Gamma prior requires d > 0 and a > 0");
                   if (!(g.p > 1.0) || !std::isfinite(g.p))
                     throw DomainError("generalized Gamma prior requires p > 1 for subfactorial moments");
                   log_norm_ = std::log(g.p) - g.d * std::log(g.a) - std::lgamma(g.d / g.p);
                 },
                 [&](const BoundedPolyPrior& b) {
                   if (!positive_finite(b.c)) throw DomainError("bounded polynomial prior requires c > 0");
                   if (!(b.beta > -1.0) || !std::isfinite(b.beta))
                     throw DomainError("bounded polynomial prior requires beta > -1");
                   log_norm_ = std::log1p(b.beta) - (b.beta + 1.0) * std::log(b.c);
                 },
                 [&](const PointMassPrior& p) {
                   if (!positive_finite(p.value)) throw DomainError("point mass prior requires alpha* > 0");
                   log_norm_ = 0.0;
                 },
             },
             family_);
}

double AlphaPrior::support_upper() const {
  if (const auto* b = std::get_if<BoundedPolyPrior>(&family_)) return b->c;
  if (const auto* p = std::get_if<PointMassPrior>(&family_)) return p->value;
  return std::numeric_limits<double>::infinity();
}

double AlphaPrior::origin_exponent() const {
  return std::visit(overloaded{
                        [](const GammaPrior& g) { return g.shape - 1.0; },
                        [](const GeneralizedGammaPrior& g) { return g.d - 1.0; },
                        [](const BoundedPolyPrior& b) { return b.beta; },
                        [](const PointMassPrior&) -> double {
                          throw UnsupportedOperation("point mass prior has no density near the origin");
                        },
                    },
                    family_);
}

std::string AlphaPrior::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(overloaded{
                 [&](const GammaPrior& g) { os << "Gamma(shape=" << g.shape << ", rate=" << g.rate << ")"; },
                 [&](const GeneralizedGammaPrior& g) {
                   os << "GeneralizedGamma(d=" << g.d << ", a=" << g.a << ", p=" << g.p << ")";
                 },
                 [&](const BoundedPolyPrior& b) { os << "BoundedPoly(c=" << b.c << ", beta=" << b.beta << ")"; },
                 [&](const PointMassPrior& p) { os << "PointMass(" << p.value << ")"; },
             },
             family_);
  return os.str();
}

double prior_log_density(const AlphaPrior& prior, double alpha) {
  if (!(alpha > 0.0)) throw DomainError("prior_log_density: alpha must be positive");
  const double ln = prior.log_normalizer();
  return std::visit(overloaded{
                        [&](const GammaPrior& g) {
                          if (std::isinf(alpha)) return kNegInf;
                          return ln + (g.shape - 1.0) * std::log(alpha) - g.rate * alpha;
                        },
                        [&](const GeneralizedGammaPrior& g) {
                          if (std::isinf(alpha)) return kNegInf;
                          return ln + (g.d - 1.0) * std::log(alpha) - std::pow(alpha / g.a, g.p);
                        },
                        [&](const BoundedPolyPrior& b) {
                          if (alpha >= b.c) return kNegInf;
                          return ln + b.beta * std::log(alpha);
                        },
                        [&](const PointMassPrior&) -> double {
                          throw UnsupportedOperation("point mass prior has no density");
                        },
                    },
                    prior.family());
}

double prior_moment(const AlphaPrior& prior, double s) {
  if (!(s >= 0.0)) throw DomainError("prior_moment: s must be nonnegative");
  if (s == 0.0) return 0.0;
  return std::visit(overloaded{
                        [&](const GammaPrior& g) {
                          return std::lgamma(g.shape + s) - std::lgamma(g.shape) - s * std::log(g.rate);
                        },
                        [&](const GeneralizedGammaPrior& g) {
                          return s * std::log(g.a) + std::lgamma((g.d + s) / g.p) - std::lgamma(g.d / g.p);
                        },
                        [&](const BoundedPolyPrior& b) {
                          return s * std::log(b.c) + std::log1p(b.beta) - std::log(s + b.beta + 1.0);
                        },
                        [&](const PointMassPrior& p) { return s * std::log(p.value); },
                    },
                    prior.family());
}

double prior_cdf(const AlphaPrior& prior, double x, double tol) {
  if (!(x > 0.0)) return 0.0;
  (void)tol;
  return std::visit(overloaded{
                        [&](const GammaPrior& g) { return regularized_lower_gamma(g.shape, g.rate * x); },
                        [&](const GeneralizedGammaPrior& g) {
                          return regularized_lower_gamma(g.d / g.p, std::pow(x / g.a, g.p));
                        },
                        [&](const BoundedPolyPrior& b) {
                          return x >= b.c ? 1.0 : std::pow(x / b.c, b.beta + 1.0);
                        },
                        [&](const PointMassPrior& p) { return x >= p.value ? 1.0 : 0.0; },
                    },
                    prior.family());
}

WeightIntegral weight_integral_detail(const AlphaPrior& prior, std::int64_t n, int k, double tol,
                                      double alpha_lo, double alpha_hi) {
  WeightIntegral r = reduced_log_integral(prior, n, k, tol, alpha_lo, alpha_hi);
  if (n > 0 && r.log_value != kNegInf) r.log_value -= std::lgamma(static_cast<double>(n));
  return r;
}

double weight_integral(const AlphaPrior& prior, std::int64_t n, int k, double tol) {
  return weight_integral_detail(prior, n, k, tol).log_value;
}

double truncated_weight_integral(const AlphaPrior& prior, std::int64_t n, int k, double alpha_lo,
                                 double alpha_hi, double tol) {
  return weight_integral_detail(prior, n, k, tol, alpha_lo, alpha_hi).log_value;
}

double c_ratio(const AlphaPrior& prior, std::int64_t n, int t, int s, double tol) {
  if (n < 1 || t < 1 || s < 1) throw DomainError("c_ratio: n, t, s must be positive");
  if (s == t) return 0.0;
  if (const auto* pm = std::get_if<PointMassPrior>(&prior.family()))
    return (s - t) * std::log(pm->value);
  const double inf = std::numeric_limits<double>::infinity();
  const double num = reduced_log_integral(prior, n, s, tol, 0.0, inf).log_value;
  const double den = reduced_log_integral(prior, n, t, tol, 0.0, inf).log_value;
  return num - den;
}

double truncated_c_ratio(const AlphaPrior& prior, std::int64_t n, int t, int s, double alpha_lo,
                         double alpha_hi, double tol) {
  const double num = reduced_log_integral(prior, n, s, tol, alpha_lo, alpha_hi).log_value;
  const double den = reduced_log_integral(prior, n, t, tol, alpha_lo, alpha_hi).log_value;
  if (den == kNegInf) throw DomainError("truncated_c_ratio: reference integral is zero");
  return num - den;
}

double conditional_alpha_moment(const AlphaPrior& prior, std::int64_t n, int t, int s, double tol) {
  if (s < 0) throw DomainError("conditional_alpha_moment: s must be nonnegative");
  return c_ratio(prior, n, t, t + s, tol);
}

}  // namespace dpmk
