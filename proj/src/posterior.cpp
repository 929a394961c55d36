#include "dpmk/posterior.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "dpmk/error.hpp"
#include "dpmk/numerics.hpp"

namespace dpmk {

namespace {

// Rescale log_joint into a normalized table with the given log tail mass.
void normalize(PosteriorKnTable& table, double log_tail) {
  std::vector<double> terms = table.log_joint;
  terms.push_back(log_tail);
  const double z = log_sum_exp(terms);
  if (z == kNegInf) throw DomainError("posterior: every partition has zero marginal likelihood");
  table.log_posterior.resize(table.log_joint.size());
  for (std::size_t i = 0; i < table.log_joint.size(); ++i)
    table.log_posterior[i] = std::min(table.log_joint[i] - z, 0.0);
  table.tail_log_mass_bound = log_tail == kNegInf ? kNegInf : log_tail - z;
}

// Log bound on sum_{s > s_max} joint(s) from the least steep of the last four
// successive decrements, or NaN when that envelope does not decay by at least
// a factor of 2 per step.
double geometric_tail(const std::vector<double>& log_joint) {
  const int k = static_cast<int>(log_joint.size());
  const int first = std::max(0, k - 5);
  if (k - first < 2) return std::numeric_limits<double>::quiet_NaN();
  if (log_joint.back() == kNegInf) {
    bool all_zero = true;
    for (int i = first; i < k; ++i) all_zero = all_zero && log_joint[i] == kNegInf;
    if (all_zero) return std::numeric_limits<double>::quiet_NaN();
  }
  double slope = kNegInf;
  for (int i = first + 1; i < k; ++i) {
    if (log_joint[i - 1] == kNegInf) return std::numeric_limits<double>::quiet_NaN();
    slope = std::max(slope, log_joint[i] - log_joint[i - 1]);
  }
  if (!(slope <= -std::log(2.0))) return std::numeric_limits<double>::quiet_NaN();
  if (slope == kNegInf || log_joint.back() == kNegInf) return kNegInf;
  // sum_{j >= 1} r^j = r / (1 - r)
  return log_joint.back() + slope - std::log(-std::expm1(slope));
}

}  // namespace

std::string to_string(PosteriorMethod method) {
  switch (method) {
    case PosteriorMethod::Brute: return "brute";
    case PosteriorMethod::SizeOnly: return "size-only";
    case PosteriorMethod::Truncated: return "truncated";
  }
  return "unknown";
}

double PosteriorKnTable::probability(int s) const {
  if (s < 1 || s > s_max()) return 0.0;
  return std::exp(log_posterior[s - 1]);
}

double PosteriorKnTable::tail_mass_bound() const { return std::exp(tail_log_mass_bound); }

std::vector<double> partition_log_sums(const KernelModel& model, std::span<const double> x) {
  const int n = static_cast<int>(x.size());
  if (n < 1) throw DomainError("partition sums need at least one observation");
  if (n > kMaxEnumeratedPartitionSize)
    throw ResourceError("exhaustive partition sums are capped at n = " +
                        std::to_string(kMaxEnumeratedPartitionSize));
  const std::uint32_t full = (1u << n) - 1u;
  // Per-subset weight log((|A|-1)! m(x_A)).
  std::vector<double> log_weight(full + 1u, kNegInf);
  std::vector<double> block;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    block.clear();
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) block.push_back(x[i]);
    const double lm = block_log_marginal(model, block);
    log_weight[mask] = lm == kNegInf ? kNegInf : std::lgamma(static_cast<double>(block.size())) + lm;
  }
  std::vector<LogAccumulator> acc(n);
  for_each_set_partition(n, [&](std::span<const std::uint32_t> blocks) {
    double term = 0.0;
    for (std::uint32_t b : blocks) {
      term += log_weight[b];
      if (term == kNegInf) return;
    }
    acc[blocks.size() - 1].add(term);
  });
  std::vector<double> out(n);
  for (int s = 0; s < n; ++s) out[s] = acc[s].value();
  return out;
}

PosteriorKnTable posterior_from_log_sums(std::span<const double> log_s, const AlphaPrior& prior, std::int64_t n,
                                         PosteriorMethod method, double tol) {
  PosteriorKnTable table;
  table.n = n;
  table.method = method;
  table.log_joint.resize(log_s.size());
  for (std::size_t s = 1; s <= log_s.size(); ++s)
    table.log_joint[s - 1] =
        log_s[s - 1] == kNegInf ? kNegInf : weight_integral(prior, n, static_cast<int>(s), tol) + log_s[s - 1];
  normalize(table, kNegInf);
  return table;
}

PosteriorKnTable posterior_kn_bruteforce(const KernelModel& model, const AlphaPrior& prior,
                                         std::span<const double> x, double tol) {
  const auto sums = partition_log_sums(model, x);
  return posterior_from_log_sums(sums, prior, static_cast<std::int64_t>(x.size()), PosteriorMethod::Brute, tol);
}

std::vector<double> size_log_marginals(const KernelModel& model, double value, std::int64_t n_max) {
  if (n_max < 1) throw DomainError("size marginals need n_max >= 1");
  std::vector<double> out(static_cast<std::size_t>(n_max));
  for (std::int64_t a = 1; a <= n_max; ++a) out[a - 1] = constant_block_log_marginal(model, value, a);
  return out;
}

PartialBellTable size_only_table(std::span<const double> log_m, int n_max, int s_max) {
  if (n_max < 1 || static_cast<int>(log_m.size()) < n_max)
    throw DomainError("size-only table: need a marginal for every block size up to n");
  if (n_max > kSizeOnlyCap) throw ResourceError("size-only engine is capped at n = 100000");
  std::vector<double> log_w(n_max);
  for (int a = 1; a <= n_max; ++a)
    log_w[a - 1] = log_m[a - 1] == kNegInf ? kNegInf : std::lgamma(static_cast<double>(a)) + log_m[a - 1];
  return PartialBellTable(std::move(log_w), n_max, std::max(1, std::min(s_max, n_max)));
}

PosteriorKnTable posterior_kn_sizeonly(PartialBellTable& table, const AlphaPrior& prior, std::int64_t n,
                                       int s_max, double tol) {
  if (n < 1 || n > table.n_max()) throw DomainError("size-only posterior: n outside the table");
  PosteriorKnTable out;
  out.n = n;
  if (s_max < 1) throw DomainError("size-only posterior: s_max must be positive");
  if (s_max > n) {
    out.warnings.push_back("s_max " + std::to_string(s_max) + " clamped to n = " + std::to_string(n));
    s_max = static_cast<int>(n);
  }
  if (n > kSizeOnlyPracticalCap)
    out.warnings.push_back("n above 20000: the O(n^2 s_max) table fill is slow");
  const int ni = static_cast<int>(n);
  auto joint = [&](int s) {
    const double b = table.log_value(ni, s);
    return b == kNegInf ? kNegInf : weight_integral(prior, n, s, tol) + b;
  };
  while (true) {
    table.extend(s_max);
    for (int s = static_cast<int>(out.log_joint.size()) + 1; s <= s_max; ++s) out.log_joint.push_back(joint(s));
    if (s_max == ni) {
      out.method = PosteriorMethod::SizeOnly;
      normalize(out, kNegInf);
      return out;
    }
    const double tail = geometric_tail(out.log_joint);
    if (!std::isnan(tail)) {
      out.method = PosteriorMethod::Truncated;
      normalize(out, tail);
      return out;
    }
    const int next = static_cast<int>(std::min<std::int64_t>(2 * static_cast<std::int64_t>(s_max), n));
    out.warnings.push_back("tail envelope not geometric at s_max = " + std::to_string(s_max) + "; raised to " +
                           std::to_string(next));
    s_max = next;
  }
}

PosteriorKnTable posterior_kn_sizeonly(std::span<const double> log_m, const AlphaPrior& prior, std::int64_t n,
                                       int s_max, double tol) {
  if (n < 1 || n > static_cast<std::int64_t>(log_m.size()))
    throw DomainError("size-only posterior: need a marginal for every block size up to n");
  auto table = size_only_table(log_m, static_cast<int>(n), std::min<std::int64_t>(s_max, n));
  return posterior_kn_sizeonly(table, prior, n, s_max, tol);
}

std::vector<double> size_only_log_sums(const PartialBellTable& table, std::int64_t n, int s_max) {
  std::vector<double> out(static_cast<std::size_t>(s_max));
  for (int s = 1; s <= s_max; ++s) out[s - 1] = table.log_value(static_cast<int>(n), s);
  return out;
}

RatioReport ratio_report(std::span<const double> log_s, const PosteriorKnTable& table, const AlphaPrior& prior,
                         int t, double tol) {
  const int s_max = table.s_max();
  if (t < 1 || t > s_max) throw DomainError("ratio report: t outside the table");
  if (static_cast<int>(log_s.size()) < s_max) throw DomainError("ratio report: partition sums shorter than table");
  if (table.log_joint[t - 1] == kNegInf || log_s[t - 1] == kNegInf)
    throw DomainError("ratio report: pr(K_n = t | x) is zero");
  RatioReport report{table.n, t, {}, kNegInf, table.method == PosteriorMethod::Truncated};
  LogAccumulator total;
  for (int s = 1; s <= s_max; ++s) {
    if (s == t) continue;
    RatioEntry e;
    e.s = s;
    e.log_c = c_ratio(prior, table.n, t, s, tol);
    e.log_r = log_s[s - 1] - log_s[t - 1];
    e.log_direct = table.log_posterior[s - 1] - table.log_posterior[t - 1];
    total.add(e.log_c + e.log_r);
    report.entries.push_back(e);
  }
  report.log_sum_ratio = total.value();
  return report;
}

std::vector<AlphaCdfPoint> posterior_alpha_cdf(const PosteriorKnTable& table, const AlphaPrior& prior,
                                               std::span<const double> alpha_grid, double tol) {
  for (std::size_t i = 1; i < alpha_grid.size(); ++i)
    if (!(alpha_grid[i] > alpha_grid[i - 1])) throw DomainError("alpha grid must be strictly increasing");
  const int s_max = table.s_max();
  std::vector<double> log_full(s_max, kNegInf);
  for (int s = 1; s <= s_max; ++s)
    if (table.log_posterior[s - 1] != kNegInf) log_full[s - 1] = weight_integral(prior, table.n, s, tol);
  const double tail = table.tail_mass_bound();
  std::vector<AlphaCdfPoint> out;
  out.reserve(alpha_grid.size());
  double previous = 0.0;
  for (double a : alpha_grid) {
    double cdf = 0.0;
    if (a > 0.0) {
      for (int s = 1; s <= s_max; ++s) {
        if (log_full[s - 1] == kNegInf) continue;
        const double part = weight_integral_detail(prior, table.n, s, tol, 0.0, a).log_value;
        cdf += std::exp(table.log_posterior[s - 1] + std::min(part - log_full[s - 1], 0.0));
      }
    }
    // Quadrature noise must not break monotonicity.
    cdf = std::clamp(std::max(cdf, previous), 0.0, 1.0);
    previous = cdf;
    out.push_back({a, cdf, std::min(cdf + tail, 1.0)});
  }
  return out;
}

ExpectedRatioEstimate mc_expected_r(const KernelModel& model, const MixtureTruth& truth, int n, int s,
                                    std::int64_t composition_budget, int mc_reps, std::uint64_t seed) {
  if (n < 1 || s < 1 || s > n) throw DomainError("expected ratio: need 1 <= s <= n");
  if (n > kMaxEnumeratedPartitionSize)
    throw ResourceError("expected ratio: the set-partition side is capped at n = 13");
  if (mc_reps < 2) throw DomainError("expected ratio: need at least two replicates");
  std::vector<std::vector<int>> comps;
  bool partial = false;
  for_each_composition(n, s, [&](std::span<const int> parts) {
    if (static_cast<std::int64_t>(comps.size()) >= composition_budget) {
      partial = true;
      return;
    }
    comps.emplace_back(parts.begin(), parts.end());
  });
  // Coefficient n / (s! prod a_j) of each composition.
  std::vector<double> log_coeff;
  for (const auto& c : comps) {
    double v = std::log(static_cast<double>(n)) - std::lgamma(s + 1.0);
    for (int a : c) v -= std::log(static_cast<double>(a));
    log_coeff.push_back(v);
  }
  const double log_norm = std::lgamma(static_cast<double>(n));
  double sum_l = 0.0, sum_l2 = 0.0, sum_r = 0.0, sum_r2 = 0.0, sum_d = 0.0, sum_d2 = 0.0;
  for (int rep = 0; rep < mc_reps; ++rep) {
    const auto data = sample_truth(truth, n, seed, static_cast<std::uint32_t>(rep));
    const double log_total = block_log_marginal(model, data.x);
    const auto sums = partition_log_sums(model, data.x);
    const double lhs = std::exp(sums[s - 1] - log_norm - log_total);
    LogAccumulator rhs_acc;
    for (std::size_t k = 0; k < comps.size(); ++k) {
      double term = log_coeff[k] - log_total;
      int start = 0;
      for (int a : comps[k]) {
        term += block_log_marginal(model, std::span<const double>(data.x).subspan(start, a));
        start += a;
      }
      rhs_acc.add(term);
    }
    const double rhs = std::exp(rhs_acc.value());
    sum_l += lhs;
    sum_l2 += lhs * lhs;
    sum_r += rhs;
    sum_r2 += rhs * rhs;
    sum_d += lhs - rhs;
    sum_d2 += (lhs - rhs) * (lhs - rhs);
  }
  const double m = mc_reps;
  auto se = [m](double s1, double s2) { return std::sqrt(std::max(s2 / m - (s1 / m) * (s1 / m), 0.0) / (m - 1.0)); };
  ExpectedRatioEstimate out;
  out.lhs = sum_l / m;
  out.rhs = sum_r / m;
  out.lhs_se = se(sum_l, sum_l2);
  out.rhs_se = se(sum_r, sum_r2);
  out.combined_se = std::hypot(out.lhs_se, out.rhs_se);
  out.diff_se = se(sum_d, sum_d2);
  out.compositions = static_cast<std::int64_t>(comps.size());
  out.partial = partial;
  return out;
}

CompositionBoundReport composition_bound_check(int n_max, int s_max, std::span<const double> p_list) {
  if (n_max > 25) throw DomainError("composition bound check is capped at n_max = 25");
  if (n_max < 2 || s_max < 2) throw DomainError("composition bound check needs n_max, s_max >= 2");
  CompositionBoundReport report{{}, std::numeric_limits<double>::infinity(), true};
  for (double p : p_list) {
    if (!(p > 1.0)) throw DomainError("composition bound needs p > 1");
    const double log_cp = p * std::log(2.0) + std::log(riemann_zeta(p));
    for (int s = 2; s <= s_max; ++s) {
      for (int n = s; n <= n_max; ++n) {
        LogAccumulator acc;
        const double log_n = std::log(static_cast<double>(n));
        for_each_composition(n, s, [&](std::span<const int> parts) {
          double v = log_n;
          for (int a : parts) v -= std::log(static_cast<double>(a));
          acc.add(p * v);
        });
        CompositionBoundRow row{n, s, p, acc.value(), (s - 1) * log_cp};
        const double slack = row.log_bound - row.log_sum;
        report.worst_log_slack = std::min(report.worst_log_slack, slack);
        report.all_strict = report.all_strict && slack > 0.0;
        report.rows.push_back(row);
      }
    }
  }
  return report;
}

}  // namespace dpmk
