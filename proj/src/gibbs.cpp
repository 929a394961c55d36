#include "dpmk/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <thread>

#include "dpmk/error.hpp"
#include "dpmk/numerics.hpp"

namespace dpmk {

namespace {

// Counter words reserved for updates that are not tied to a datum.
constexpr std::uint32_t kAlphaDatum = 0xFFFFFFFFu;
constexpr std::uint32_t kInitSweep = 0xFFFFFFFFu;

constexpr double kTargetAcceptance = 0.44;

int open_slot(ChainState& st, const KernelModel& model) {
  if (!st.free_slots.empty()) {
    const int slot = st.free_slots.back();
    st.free_slots.pop_back();
    return slot;
  }
  st.blocks.emplace_back(model);
  st.block_log_marginal.push_back(0.0);
  return static_cast<int>(st.blocks.size()) - 1;
}

// Choose a cluster for x (removed from the state) and insert it.
void place(ChainState& st, const KernelModel& model, int i, double x, PhiloxStream& rng) {
  std::vector<int> slots;
  std::vector<double> log_w;
  slots.reserve(st.blocks.size() + 1);
  log_w.reserve(st.blocks.size() + 1);
  for (std::size_t j = 0; j < st.blocks.size(); ++j) {
    const auto& b = st.blocks[j];
    if (b.size() == 0) continue;
    const double with = b.log_marginal_with(x);
    if (with == kNegInf) continue;
    slots.push_back(static_cast<int>(j));
    log_w.push_back(std::log(static_cast<double>(b.size())) + with - st.block_log_marginal[j]);
  }
  const double single = BlockStats(model).log_marginal_with(x);
  if (single != kNegInf) {
    slots.push_back(-1);
    log_w.push_back(std::log(st.alpha) + single);
  }
  if (slots.empty()) throw DomainError("datum has zero marginal likelihood under every cluster choice");
  const double mx = *std::max_element(log_w.begin(), log_w.end());
  double total = 0.0;
  for (double& w : log_w) {
    w = std::exp(w - mx);
    total += w;
  }
  const double u = rng.uniform() * total;
  std::size_t pick = 0;
  double acc = log_w[0];
  while (u >= acc && pick + 1 < log_w.size()) acc += log_w[++pick];
  int slot = slots[pick];
  if (slot < 0) slot = open_slot(st, model);
  st.blocks[slot].add(x);
  st.block_log_marginal[slot] = st.blocks[slot].log_marginal();
  st.labels[i] = slot;
}

double log_alpha_target(const AlphaPrior& prior, std::int64_t n, int k, double alpha) {
  const double lp = prior_log_density(prior, alpha);
  if (lp == kNegInf) return kNegInf;
  return lp + (k + 1.0) * std::log(alpha) - log_ascending_factorial(alpha, n);
}

double gamma_draw(double shape, double rate, PhiloxStream& rng) {
  return std::gamma_distribution<double>(shape, 1.0 / rate)(rng);
}

}  // namespace

int ChainState::cluster_count() const {
  return static_cast<int>(blocks.size() - free_slots.size());
}

std::vector<std::int64_t> ChainState::sizes() const {
  std::vector<std::int64_t> out;
  for (const auto& b : blocks)
    if (b.size() > 0) out.push_back(b.size());
  return out;
}

ChainState initial_state(const KernelModel& model, std::span<const double> x, double alpha, std::uint64_t seed,
                         std::uint32_t chain) {
  if (x.empty()) throw DomainError("sampler needs at least one observation");
  if (!(alpha > 0.0)) throw DomainError("sampler needs alpha > 0");
  ChainState st;
  st.labels.assign(x.size(), -1);
  st.alpha = alpha;
  st.seed = seed;
  st.chain = chain;
  st.metropolis.log_step = std::log(0.5);
  for (std::size_t i = 0; i < x.size(); ++i) {
    PhiloxStream rng(seed, chain, kInitSweep, static_cast<std::uint32_t>(i));
    place(st, model, static_cast<int>(i), x[i], rng);
  }
  return st;
}

void gibbs_sweep(ChainState& st, const KernelModel& model, std::span<const double> x) {
  const auto sweep = static_cast<std::uint32_t>(st.iteration);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const int slot = st.labels[i];
    st.blocks[slot].remove(x[i]);
    if (st.blocks[slot].size() == 0) {
      st.block_log_marginal[slot] = 0.0;
      st.free_slots.push_back(slot);
    } else {
      st.block_log_marginal[slot] = st.blocks[slot].log_marginal();
    }
    PhiloxStream rng(st.seed, st.chain, sweep, static_cast<std::uint32_t>(i));
    place(st, model, static_cast<int>(i), x[i], rng);
  }
}

double alpha_log_acceptance(const AlphaPrior& prior, std::int64_t n, int k, double from, double to) {
  const double a = log_alpha_target(prior, n, k, from);
  const double b = log_alpha_target(prior, n, k, to);
  if (b == kNegInf) return kNegInf;
  return b - a;
}

double draw_alpha(const AlphaPrior& prior, double alpha, std::int64_t n, int k, PhiloxStream& rng,
                  MetropolisState& mh, bool adapt) {
  if (prior.is_degenerate()) return alpha;
  if (const auto* g = std::get_if<GammaPrior>(&prior.family())) {
    const double x = gamma_draw(alpha + 1.0, 1.0, rng);
    const double y = gamma_draw(static_cast<double>(n), 1.0, rng);
    const double eta = x / (x + y);
    const double rate = g->rate - std::log(eta);
    const double odds = (g->shape + k - 1.0) / (static_cast<double>(n) * rate);
    const double w = odds / (1.0 + odds);
    const double shape = rng.uniform() < w ? g->shape + k : g->shape + k - 1.0;
    return gamma_draw(shape, rate, rng);
  }
  const double step = std::exp(mh.log_step);
  const double z = std::normal_distribution<double>(0.0, 1.0)(rng);
  const double proposal = alpha * std::exp(step * z);
  const double log_ratio = alpha_log_acceptance(prior, n, k, alpha, proposal);
  const bool accept = std::log(rng.uniform_open()) < log_ratio;
  ++mh.proposed;
  if (accept) ++mh.accepted;
  if (adapt) {
    const double gain = std::min(0.5, 1.0 / std::sqrt(static_cast<double>(mh.proposed)));
    mh.log_step += gain * ((accept ? 1.0 : 0.0) - kTargetAcceptance);
  }
  return accept ? proposal : alpha;
}

void alpha_update(ChainState& st, const AlphaPrior& prior, bool adapt) {
  PhiloxStream rng(st.seed, st.chain, static_cast<std::uint32_t>(st.iteration), kAlphaDatum);
  st.alpha = draw_alpha(prior, st.alpha, static_cast<std::int64_t>(st.labels.size()), st.cluster_count(), rng,
                        st.metropolis, adapt);
}

ChainTrace run_chain(const KernelModel& model, const AlphaPrior& prior, std::span<const double> x,
                     const SamplerOptions& options, std::uint64_t seed, std::uint32_t chain) {
  if (!(options.sweeps > options.burn_in) || options.burn_in < 0 || options.thin < 1)
    throw DomainError("sampler needs sweeps > burn_in >= 0 and thin >= 1");
  double alpha0 = options.initial_alpha;
  if (const auto* pm = std::get_if<PointMassPrior>(&prior.family())) alpha0 = pm->value;
  ChainState st = initial_state(model, x, alpha0, seed, chain);
  ChainTrace trace;
  const auto kept = (options.sweeps - options.burn_in + options.thin - 1) / options.thin;
  trace.iteration.reserve(kept);
  trace.k.reserve(kept);
  trace.alpha.reserve(kept);
  MetropolisState after_burn_in;
  for (st.iteration = 0; st.iteration < options.sweeps; ++st.iteration) {
    gibbs_sweep(st, model, x);
    const bool burning = st.iteration < options.burn_in;
    const auto before = st.metropolis;
    alpha_update(st, prior, burning);
    if (!burning) {
      after_burn_in.proposed += st.metropolis.proposed - before.proposed;
      after_burn_in.accepted += st.metropolis.accepted - before.accepted;
      if ((st.iteration - options.burn_in) % options.thin == 0) {
        trace.iteration.push_back(st.iteration);
        trace.k.push_back(st.cluster_count());
        trace.alpha.push_back(st.alpha);
      }
    }
  }
  trace.acceptance_rate = after_burn_in.acceptance_rate();
  return trace;
}

std::vector<ChainTrace> run_chains(const KernelModel& model, const AlphaPrior& prior, std::span<const double> x,
                                   const SamplerOptions& options, std::uint64_t seed, int chains, int threads) {
  if (chains < 1) throw DomainError("need at least one chain");
  threads = std::clamp(threads, 1, chains);
  std::vector<ChainTrace> out(chains);
  std::vector<std::exception_ptr> errors(chains);
  auto work = [&](int first) {
    for (int c = first; c < chains; c += threads) {
      try {
        out[c] = run_chain(model, prior, x, options, seed, static_cast<std::uint32_t>(c));
      } catch (...) {
        errors[c] = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(work, w);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

Estimate batch_means(const std::vector<std::vector<double>>& series, int batches) {
  std::vector<double> means;
  double total = 0.0;
  std::size_t count = 0;
  for (const auto& s : series) {
    for (double v : s) total += v;
    count += s.size();
    const std::size_t size = s.size() / static_cast<std::size_t>(batches);
    if (size == 0) continue;
    for (int b = 0; b < batches; ++b) {
      double acc = 0.0;
      for (std::size_t i = b * size; i < (b + 1) * size; ++i) acc += s[i];
      means.push_back(acc / size);
    }
  }
  if (count == 0) throw DomainError("batch means of an empty series");
  const double mean = total / count;
  if (means.size() < 2) return {mean, std::numeric_limits<double>::infinity()};
  double bm = 0.0;
  for (double m : means) bm += m;
  bm /= means.size();
  double var = 0.0;
  for (double m : means) var += (m - bm) * (m - bm);
  var /= (means.size() - 1.0);
  return {mean, std::sqrt(var / means.size())};
}

ChainSummary summarize(const std::vector<ChainTrace>& traces, std::span<const double> epsilons) {
  ChainSummary out;
  std::vector<std::vector<double>> k_series, a_series;
  std::set<int> seen;
  double accept = 0.0;
  for (const auto& t : traces) {
    k_series.emplace_back(t.k.begin(), t.k.end());
    a_series.push_back(t.alpha);
    seen.insert(t.k.begin(), t.k.end());
    out.draws += static_cast<std::int64_t>(t.k.size());
    accept += t.acceptance_rate;
  }
  if (out.draws == 0) throw DomainError("summary of an empty trace");
  out.acceptance_rate = accept / traces.size();
  out.k_mean = batch_means(k_series);
  out.alpha_mean = batch_means(a_series);
  double best = -1.0;
  for (int s = 1; s <= *seen.rbegin(); ++s) {
    std::vector<std::vector<double>> ind;
    for (const auto& t : traces) {
      std::vector<double> v(t.k.size());
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = t.k[i] == s ? 1.0 : 0.0;
      ind.push_back(std::move(v));
    }
    out.k_probability[s] = batch_means(ind);
    if (out.k_probability[s].mean > best) {
      best = out.k_probability[s].mean;
      out.k_mode = s;
    }
  }
  for (double eps : epsilons) {
    std::vector<std::vector<double>> ind;
    for (const auto& t : traces) {
      std::vector<double> v(t.alpha.size());
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = t.alpha[i] < eps ? 1.0 : 0.0;
      ind.push_back(std::move(v));
    }
    out.alpha_below[eps] = batch_means(ind);
  }
  double var = 0.0, mean = out.k_mean.mean;
  for (const auto& s : k_series)
    for (double v : s) var += (v - mean) * (v - mean);
  var /= std::max<std::int64_t>(out.draws - 1, 1);
  const double se2 = out.k_mean.se * out.k_mean.se;
  out.k_ess = se2 > 0.0 ? var / se2 : static_cast<double>(out.draws);
  return out;
}

}  // namespace dpmk
