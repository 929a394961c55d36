#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "dpmk/kernels.hpp"
#include "dpmk/prior.hpp"
#include "dpmk/rng.hpp"

namespace dpmk {

/// Proposal scale and counters of the random-walk step on log alpha.
struct MetropolisState {
  double log_step = 0.0;
  std::int64_t proposed = 0;
  std::int64_t accepted = 0;
  double acceptance_rate() const { return proposed ? static_cast<double>(accepted) / proposed : 0.0; }
};

/// Sampler state. Cluster ids index slots in blocks; emptied slots are reused.
struct ChainState {
  std::vector<int> labels;
  std::vector<BlockStats> blocks;
  std::vector<double> block_log_marginal;  // cached log m per slot
  std::vector<int> free_slots;
  double alpha = 1.0;
  std::int64_t iteration = 0;
  std::uint64_t seed = 0;
  std::uint32_t chain = 0;
  MetropolisState metropolis;

  int cluster_count() const;
  /// Nonempty cluster sizes in slot order.
  std::vector<std::int64_t> sizes() const;
};

/// Sequential predictive initialization: data enter one at a time with the
/// same weights a sweep uses, so the start always has positive probability.
ChainState initial_state(const KernelModel& model, std::span<const double> x, double alpha, std::uint64_t seed,
                         std::uint32_t chain);

/// One pass reassigning every datum given the current alpha. Throws
/// DomainError when a datum has zero weight under every choice.
void gibbs_sweep(ChainState& state, const KernelModel& model, std::span<const double> x);

/// log of the Metropolis acceptance ratio for moving log alpha from a to b
/// when the chain has k clusters among n points.
double alpha_log_acceptance(const AlphaPrior& prior, std::int64_t n, int k, double from, double to);

/// Draw alpha from its full conditional given k clusters: Escobar-West
/// augmentation for Gamma, one random-walk Metropolis step on log alpha
/// otherwise (adapting the step toward 0.44 acceptance when adapt is set),
/// no change for a point mass.
double draw_alpha(const AlphaPrior& prior, double alpha, std::int64_t n, int k, PhiloxStream& rng,
                  MetropolisState& mh, bool adapt);

void alpha_update(ChainState& state, const AlphaPrior& prior, bool adapt);

struct SamplerOptions {
  std::int64_t sweeps = 10'000;
  std::int64_t burn_in = 2'000;
  std::int64_t thin = 1;
  double initial_alpha = 1.0;
};

struct ChainTrace {
  std::vector<std::int64_t> iteration;
  std::vector<int> k;
  std::vector<double> alpha;
  double acceptance_rate = 0.0;
};

ChainTrace run_chain(const KernelModel& model, const AlphaPrior& prior, std::span<const double> x,
                     const SamplerOptions& options, std::uint64_t seed, std::uint32_t chain = 0);

/// Independent chains on up to threads workers; results are in chain order
/// and do not depend on the thread count.
std::vector<ChainTrace> run_chains(const KernelModel& model, const AlphaPrior& prior, std::span<const double> x,
                                   const SamplerOptions& options, std::uint64_t seed, int chains, int threads);

inline constexpr int kBatchCount = 50;

struct Estimate {
  double mean;
  double se;
};

/// Mean with a batch-means standard error; batches never straddle chains.
Estimate batch_means(const std::vector<std::vector<double>>& series, int batches = kBatchCount);

struct ChainSummary {
  std::int64_t draws = 0;
  Estimate k_mean{};
  std::map<int, Estimate> k_probability;
  Estimate alpha_mean{};
  std::map<double, Estimate> alpha_below;  // pr(alpha < eps)
  double k_ess = 0.0;
  double acceptance_rate = 0.0;
  int k_mode = 0;
};

ChainSummary summarize(const std::vector<ChainTrace>& traces, std::span<const double> epsilons);

}  // namespace dpmk
