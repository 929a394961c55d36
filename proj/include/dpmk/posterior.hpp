#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dpmk/combinatorics.hpp"
#include "dpmk/kernels.hpp"
#include "dpmk/prior.hpp"

namespace dpmk {

enum class PosteriorMethod { Brute, SizeOnly, Truncated };

std::string to_string(PosteriorMethod method);

/// pr(K_n = s | x) for s = 1..s_max, plus a bound on the mass beyond s_max.
struct PosteriorKnTable {
  std::int64_t n = 0;
  std::vector<double> log_joint;      // index s-1: log pr(X = x, K_n = s)
  std::vector<double> log_posterior;  // index s-1
  double tail_log_mass_bound = -std::numeric_limits<double>::infinity();
  PosteriorMethod method = PosteriorMethod::Brute;
  std::vector<std::string> warnings;

  int s_max() const { return static_cast<int>(log_joint.size()); }
  /// pr(K_n = s | x); 0 for s beyond s_max.
  double probability(int s) const;
  double tail_mass_bound() const;
};

inline constexpr int kDefaultSMax = 64;
inline constexpr std::int64_t kSizeOnlyCap = 100'000;
inline constexpr std::int64_t kSizeOnlyPracticalCap = 20'000;

/// log sum_{A in tau_s(n)} prod_j (a_j - 1)! m(x_{A_j}) for s = 1..n by full
/// enumeration. Throws ResourceError above 13 points.
std::vector<double> partition_log_sums(const KernelModel& model, std::span<const double> x);

/// Table from precomputed partition sums (index s-1), joint = log I(n, s) + log S_s.
PosteriorKnTable posterior_from_log_sums(std::span<const double> log_s, const AlphaPrior& prior, std::int64_t n,
                                         PosteriorMethod method, double tol = kDefaultTol);

PosteriorKnTable posterior_kn_bruteforce(const KernelModel& model, const AlphaPrior& prior,
                                         std::span<const double> x, double tol = kDefaultTol);

/// log m_a for blocks of a copies of value, a = 1..n_max.
std::vector<double> size_log_marginals(const KernelModel& model, double value, std::int64_t n_max);

/// Partial Bell table for weights w_a = (a-1)! m_a. One table serves every
/// n <= n_max on the same size-only weights.
PartialBellTable size_only_table(std::span<const double> log_m, int n_max, int s_max);

/// Size-only posterior. When s_max < n the tail beyond s_max is bounded by
/// a geometric envelope of the last five log_joint values; s_max doubles
/// (up to n) until the envelope decays at least by a factor of 2 per step.
PosteriorKnTable posterior_kn_sizeonly(PartialBellTable& table, const AlphaPrior& prior, std::int64_t n,
                                       int s_max = kDefaultSMax, double tol = kDefaultTol);

PosteriorKnTable posterior_kn_sizeonly(std::span<const double> log_m, const AlphaPrior& prior, std::int64_t n,
                                       int s_max = kDefaultSMax, double tol = kDefaultTol);

struct RatioEntry {
  int s;
  double log_c;       // log C(n, t, s)
  double log_r;       // log R(n, t, s)
  double log_direct;  // log pr(K=s|x) - log pr(K=t|x) from the table
};

struct RatioReport {
  std::int64_t n;
  int t;
  std::vector<RatioEntry> entries;  // s = 1..s_max, s != t
  double log_sum_ratio;             // log sum_{s != t} C R over the entries
  bool truncated;                   // the table did not cover every s
};

/// Decomposition of the posterior odds against K = t. log_s holds the
/// partition sums (index s-1) that built the table.
RatioReport ratio_report(std::span<const double> log_s, const PosteriorKnTable& table, const AlphaPrior& prior,
                         int t, double tol = kDefaultTol);

/// log R(n, t, s) = log S_s - log S_t for the size-only sums held in a table.
std::vector<double> size_only_log_sums(const PartialBellTable& table, std::int64_t n, int s_max);

struct AlphaCdfPoint {
  double alpha;
  double cdf;        // mass from s <= s_max
  double cdf_upper;  // cdf plus the tail bound
};

/// Posterior CDF of alpha as a mixture of pr(alpha <= a | K_n = s) over the table.
std::vector<AlphaCdfPoint> posterior_alpha_cdf(const PosteriorKnTable& table, const AlphaPrior& prior,
                                               std::span<const double> alpha_grid, double tol = kDefaultTol);

struct ExpectedRatioEstimate {
  double lhs;
  double lhs_se;
  double rhs;
  double rhs_se;
  double combined_se;   // sqrt(lhs_se^2 + rhs_se^2)
  double diff_se;       // standard error of the paired differences
  std::int64_t compositions;
  bool partial;         // composition budget ran out
};

/// Both sides of the expected partition-ratio identity, estimated on shared
/// data draws: the set-partition sum (by enumeration) and the composition
/// sum over canonical blocks.
ExpectedRatioEstimate mc_expected_r(const KernelModel& model, const MixtureTruth& truth, int n, int s,
                                    std::int64_t composition_budget, int mc_reps, std::uint64_t seed);

struct CompositionBoundRow {
  int n;
  int s;
  double p;
  double log_sum;    // log sum_{a in F_s(n)} (n / prod a_j)^p
  double log_bound;  // (s - 1) log(2^p zeta(p))
};

struct CompositionBoundReport {
  std::vector<CompositionBoundRow> rows;
  double worst_log_slack;  // min of log_bound - log_sum
  bool all_strict;
};

/// Exhaustive check of sum_{F_s(n)} (n / prod a_j)^p < (2^p zeta(p))^{s-1}
/// for 2 <= s <= s_max, s <= n <= n_max. Throws DomainError for n_max > 25.
CompositionBoundReport composition_bound_check(int n_max, int s_max, std::span<const double> p_list);

}  // namespace dpmk
