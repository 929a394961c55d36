#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dpmk/prior.hpp"

namespace dpmk {

/// Grid-verified constants with alpha^beta / delta <= pi(alpha) <= delta alpha^beta on (0, epsilon).
struct OriginCertificate {
  double epsilon;
  double delta;
  double beta;
};

/// E(alpha^s) < D rho^{-s} Gamma(nu + s + 1) for all 1 <= s <= s_checked.
struct MomentCertificate {
  double D;
  double nu;
  double rho;
  int s_checked;
};

inline constexpr int kOriginGridPoints = 10'000;
inline constexpr double kOriginDeltaMax = 1e6;
inline constexpr double kMomentDMax = 1e9;

/// Default epsilon used when a config leaves it unset: 0.5, or min(c/2, 0.5)
/// for the bounded polynomial family.
double default_epsilon(const AlphaPrior& prior);

/// beta is taken from the family; delta is the grid maximum of
/// |log pi(alpha) - beta log alpha| inflated by 10% in log scale.
/// Throws CertificationFailure for a point mass or when delta > delta_max.
OriginCertificate fit_origin_certificate(const AlphaPrior& prior, double epsilon, double delta_max = kOriginDeltaMax);

/// Throws CertificationFailure when no (D, nu) with D <= 1e9 passes.
MomentCertificate verify_moment_growth(const AlphaPrior& prior, double rho, int s_max);

enum class UpperBoundForm {
  Explicit,       // delta^2 {1 + delta E(.)(t+s+beta)/eps^{t+s+beta}} gamma-ratio (log(n/(1+eps)))^{-s}
  GConstant,      // G s eps^{-s} E(alpha^{t+s-1}) gamma(t+s+beta, eps log n) (log(n/(1+eps)))^{-s}
  LogRate,        // G Gamma(t+beta+1) 2^s s / eps E(alpha^{t+s-1}) / log(n/(1+eps)), n >= 4
};

/// Log upper bound on C(n, t, t+s). Throws DomainError when log(n/(1+eps)) <= 0.
double c_ratio_upper_bound(const OriginCertificate& cert, const AlphaPrior& prior, std::int64_t n, int t, int s,
                         UpperBoundForm form = UpperBoundForm::Explicit);

/// Log lower bound on C(n, t, t+s): -log(M+1) plus the lower truncated-ratio bound.
double c_ratio_lower_bound(const OriginCertificate& cert, std::int64_t n, int t, int s, double M);

/// log of int_0^eps alpha^{t+s}/alpha^{(n)} pi / int_0^eps alpha^t/alpha^{(n)} pi.
double truncated_ratio(const OriginCertificate& cert, const AlphaPrior& prior, std::int64_t n, int t, int s,
                       double tol = kDefaultTol);

/// (lower, upper) log bounds on truncated_ratio.
std::pair<double, double> truncated_ratio_bounds(const OriginCertificate& cert, std::int64_t n, int t, int s);

struct TailConstant {
  double M;          // max(P, 1)
  double p;          // int_eps^inf alpha^t pi / int_0^{eps/2} alpha^t pi
  std::int64_t m;    // index after which the head dominates the tail
  double P;          // max over i <= m of tail_i / head_i
  bool verified;     // M head_n >= tail_n on {1..m} and n = 1000
  double worst_log_slack;  // min over the grid of log(M head_n) - log(tail_n)
};

/// Constant M with M int_0^eps alpha^t/alpha^{(n)} pi >= int_eps^inf alpha^t/alpha^{(n)} pi for all n.
TailConstant tail_domination_constant(const AlphaPrior& prior, int t, double epsilon, double tol = 1e-8,
                               std::int64_t m_cap = 2'000'000);

}  // namespace dpmk
