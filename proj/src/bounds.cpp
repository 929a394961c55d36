#include "dpmk/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dpmk/error.hpp"
#include "dpmk/numerics.hpp"

namespace dpmk {

namespace {

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
}

void check_indices(std::int64_t n, int t, int s) {
  if (t < 1 || s < 1) throw DomainError("t and s must be positive");
  if (n < 2) throw DomainError("n must be at least 2");
}

// log(n / (1 + eps)), the effective log n of the upper comparison density.
double shrunk_log_n(std::int64_t n, double epsilon) {
  const double v = std::log(static_cast<double>(n)) - std::log1p(epsilon);
  if (!(v > 0.0)) throw DomainError("log(n/(1+epsilon)) must be positive");
  return v;
}

double log_g_constant(const OriginCertificate& c, int t) {
  const double x = t + c.beta;
  return std::log(4.0) + 2.0 * std::log(c.delta) - x * std::log(c.epsilon) -
         log_lower_incomplete_gamma(x, c.epsilon * std::log(2.0));
}

std::string num(double v) { return std::to_string(v); }

}  // namespace

double default_epsilon(const AlphaPrior& prior) {
  if (const auto* b = std::get_if<BoundedPolyPrior>(&prior.family())) return std::min(b->c / 2.0, 0.5);
  return 0.5;
}

OriginCertificate fit_origin_certificate(const AlphaPrior& prior, double epsilon, double delta_max) {
  check_epsilon(epsilon);
  if (prior.is_degenerate()) throw CertificationFailure("polynomial behaviour near zero: a point mass prior has no density");
  const double beta = prior.origin_exponent();
  const int half = kOriginGridPoints / 2;
  double worst = 0.0;
  auto visit = [&](double alpha) {
    const double lp = prior_log_density(prior, alpha);
    const double dev = std::abs(lp - beta * std::log(alpha));
    if (!(dev <= worst)) worst = dev;  // also catches -inf and NaN
  };
  for (int i = 1; i <= half; ++i) visit(epsilon * i / (half + 1.0));
  const double log_lo = std::log(epsilon * 1e-12);
  const double log_hi = std::log(epsilon);
  for (int i = 0; i < half; ++i) visit(std::exp(log_lo + (log_hi - log_lo) * i / half));
  const double log_delta = 1.1 * worst;
  if (!std::isfinite(log_delta) || log_delta > std::log(delta_max))
    throw CertificationFailure("polynomial behaviour near zero: sandwich on (0, " + num(epsilon) + ") needs delta above " +
                               num(delta_max));
  return {epsilon, std::exp(log_delta), beta};
}

MomentCertificate verify_moment_growth(const AlphaPrior& prior, double rho, int s_max) {
  if (!(rho > 0.0)) throw DomainError("moment growth check: rho must be positive");
  if (s_max < 1) throw DomainError("moment growth check: s_max must be at least 1");
  auto max_gap = [&](double nu) {
    double worst = -std::numeric_limits<double>::infinity();
    for (int s = 1; s <= s_max; ++s)
      worst = std::max(worst, prior_moment(prior, s) + s * std::log(rho) - std::lgamma(nu + s + 1.0));
    return worst;
  };
  auto gap_rising = [&](double nu) {
    if (s_max < 2) return false;
    auto g = [&](int s) { return prior_moment(prior, s) + s * std::log(rho) - std::lgamma(nu + s + 1.0); };
    return g(s_max) > g(s_max - 1);
  };
  const double log_d_max = std::log(kMomentDMax);
  if (const auto* g = std::get_if<GammaPrior>(&prior.family())) {
    if (rho > g->rate)
      throw CertificationFailure("subfactorial moments: Gamma moments grow like rate^{-s}; rho = " + num(rho) +
                                 " exceeds the rate " + num(g->rate));
    const double nu = g->shape > 1.0 ? g->shape - 1.0 : g->shape;
    const double gap = max_gap(nu);
    if (gap > log_d_max) throw CertificationFailure("subfactorial moments: required D exceeds 1e9");
    return {1.000001 * std::exp(gap), nu, rho, s_max};
  }
  for (double nu : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
    if (gap_rising(nu)) continue;
    const double gap = max_gap(nu);
    if (gap <= log_d_max) return {1.000001 * std::exp(gap), nu, rho, s_max};
  }
  throw CertificationFailure("subfactorial moments: no (D, nu) with D <= 1e9 and nu <= 16 bounds the moments at rho = " +
                             num(rho));
}

double c_ratio_upper_bound(const OriginCertificate& cert, const AlphaPrior& prior, std::int64_t n, int t, int s,
                         UpperBoundForm form) {
  check_indices(n, t, s);
  const double eps = cert.epsilon;
  const double beta = cert.beta;
  const double log_n = std::log(static_cast<double>(n));
  const double ln_shrunk = shrunk_log_n(n, eps);
  const double log_moment = prior_moment(prior, t + s - 1.0);
  switch (form) {
    case UpperBoundForm::Explicit: {
      const double x = t + s + beta;
      const double tail = std::log(cert.delta) + log_moment + std::log(x) - x * std::log(eps);
      return 2.0 * std::log(cert.delta) + log_add(0.0, tail) + log_lower_incomplete_gamma(x, eps * log_n) -
             log_lower_incomplete_gamma(t + beta, eps * log_n) - s * std::log(ln_shrunk);
    }
    case UpperBoundForm::GConstant:
      return log_g_constant(cert, t) + std::log(static_cast<double>(s)) - s * std::log(eps) + log_moment +
             log_lower_incomplete_gamma(t + s + beta, eps * log_n) - s * std::log(ln_shrunk);
    case UpperBoundForm::LogRate:
      if (n < 4) throw DomainError("the log-rate form needs n >= 4");
      return log_g_constant(cert, t) + std::lgamma(t + beta + 1.0) + s * std::log(2.0) +
             std::log(static_cast<double>(s)) - std::log(eps) + log_moment - std::log(ln_shrunk);
  }
  throw UsageError("unknown bound form");
}

std::pair<double, double> truncated_ratio_bounds(const OriginCertificate& cert, std::int64_t n, int t, int s) {
  check_indices(n, t, s);
  const double eps = cert.epsilon;
  const double beta = cert.beta;
  const double log_delta = std::log(cert.delta);
  const double log_n = std::log(static_cast<double>(n));
  const double l1 = log_n + 1.0;
  const double lower = log_lower_incomplete_gamma(t + s + beta, eps * l1) - 2.0 * log_delta -
                       log_lower_incomplete_gamma(t + beta, eps * l1) - s * std::log(l1);
  // gamma(x+s, y)/gamma(x, y) increases in y, so evaluating it at eps log n
  // instead of eps log(n/(1+eps)) keeps the bound valid.
  const double upper = 2.0 * log_delta + log_lower_incomplete_gamma(t + s + beta, eps * log_n) -
                       log_lower_incomplete_gamma(t + beta, eps * log_n) - s * std::log(shrunk_log_n(n, eps));
  return {lower, upper};
}

double c_ratio_lower_bound(const OriginCertificate& cert, std::int64_t n, int t, int s, double M) {
  if (!(M >= 1.0)) throw DomainError("tail constant M must be at least 1");
  return -std::log1p(M) + truncated_ratio_bounds(cert, n, t, s).first;
}

double truncated_ratio(const OriginCertificate& cert, const AlphaPrior& prior, std::int64_t n, int t, int s,
                       double tol) {
  check_indices(n, t, s);
  return truncated_c_ratio(prior, n, t, t + s, 0.0, cert.epsilon, tol);
}

TailConstant tail_domination_constant(const AlphaPrior& prior, int t, double epsilon, double tol,
                               std::int64_t m_cap) {
  check_epsilon(epsilon);
  if (prior.is_degenerate()) throw UnsupportedOperation("tail constant needs a prior density");
  if (t < 1) throw DomainError("t must be positive");
  const double inf = std::numeric_limits<double>::infinity();
  const double log_tail0 = truncated_weight_integral(prior, 0, t, epsilon, inf, tol);
  if (log_tail0 == kNegInf) return {1.0, 0.0, 0, 0.0, true, inf};
  const double log_head0 = truncated_weight_integral(prior, 0, t, 0.0, epsilon / 2.0, tol);
  const double log_p = log_tail0 - log_head0;

  // Smallest m with log (eps/2)^{(m)} - log eps^{(m)} < -log p.
  std::int64_t m = 1;
  double gap = std::log(0.5);
  while (!(gap < -log_p)) {
    if (m >= m_cap) throw ResourceError("tail constant: index m exceeds " + std::to_string(m_cap));
    gap += std::log((epsilon / 2.0 + m) / (epsilon + m));
    ++m;
  }

  auto log_ratio = [&](std::int64_t i) {
    const double tail = truncated_weight_integral(prior, i, t, epsilon, inf, tol);
    const double head = truncated_weight_integral(prior, i, t, 0.0, epsilon, tol);
    return tail - head;
  };
  std::vector<double> ratios;
  ratios.reserve(static_cast<std::size_t>(m));
  for (std::int64_t i = 1; i <= m; ++i) ratios.push_back(log_ratio(i));
  const double log_P = *std::max_element(ratios.begin(), ratios.end());
  const double log_M = std::max(log_P, 0.0);
  double worst = log_M - log_ratio(1000);
  for (double r : ratios) worst = std::min(worst, log_M - r);
  const bool ok = worst >= -10.0 * tol;
  return {std::exp(log_M), std::exp(log_p), m, std::exp(log_P), ok, worst};
}

}  // namespace dpmk
