#include "dpmk/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <limits>
#include <memory>
#include <sstream>

#include "dpmk/bounds.hpp"
#include "dpmk/combinatorics.hpp"
#include "dpmk/error.hpp"
#include "dpmk/io.hpp"
#include "dpmk/numerics.hpp"
#include "dpmk/posterior.hpp"

namespace dpmk {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

json jnum(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

struct Context {
  const ExperimentConfig& config;
  const RunOptions& options;
  std::ostream& log;
  std::uint64_t seed;
  double tol;

  Context(const ExperimentConfig& c, const RunOptions& o, std::ostream& l)
      : config(c), options(o), log(l), seed(o.seed.value_or(c.seed)), tol(o.tol.value_or(c.tol)) {}

  const AlphaPrior& prior() const {
    if (!config.prior) throw ConfigError("config: a prior is required for this command");
    return *config.prior;
  }

  fs::path path(const std::string& name) const { return options.out_dir / name; }

  void echo_config(const std::string& command) const {
    json echo = config.raw;
    echo["experiment"] = command;
    echo["seed"] = seed;
    echo["tol"] = tol;
    write_file_atomic(path("config.json"), echo.dump(2) + "\n");
  }

  void write_summary(json summary, const std::string& command) const {
    summary["command"] = command;
    summary["seed"] = seed;
    summary["tol"] = tol;
    summary["generated_at"] = timestamp();
    if (config.prior) summary["prior"] = config.prior->describe();
    summary["model"] = describe(config.model);
    write_file_atomic(path("summary.json"), summary.dump(2) + "\n");
  }
};

std::vector<std::int64_t> resolved_grid(const ExperimentConfig& c, const std::vector<double>* file_data) {
  if (!c.n_grid.empty()) return c.n_grid;
  if (file_data) return {static_cast<std::int64_t>(file_data->size())};
  throw ConfigError("n_grid is required for this data source");
}

/// Data for one grid point; truth draws also get a data file and sidecar.
class DataSource {
 public:
  explicit DataSource(const Context& ctx) : ctx_(ctx) {
    if (ctx.config.data.kind == DataSpec::Kind::File) file_ = read_data_file(ctx.config.data.path);
  }

  bool constant() const { return ctx_.config.data.kind == DataSpec::Kind::Constant; }
  double value() const { return ctx_.config.data.value; }
  const std::vector<double>* file() const { return file_.empty() ? nullptr : &file_; }

  std::vector<double> at(std::int64_t n) const {
    const auto& spec = ctx_.config.data;
    switch (spec.kind) {
      case DataSpec::Kind::Constant: return std::vector<double>(static_cast<std::size_t>(n), spec.value);
      case DataSpec::Kind::File:
        if (n > static_cast<std::int64_t>(file_.size()))
          throw ConfigError("n = " + std::to_string(n) + " exceeds the data file length");
        return {file_.begin(), file_.begin() + n};
      case DataSpec::Kind::Truth: {
        auto sample = sample_truth(spec.truth, n, ctx_.seed);
        const std::string stem = "data_n" + std::to_string(n);
        write_file_atomic(ctx_.path(stem + ".txt"), format_data(sample.x));
        json meta = {{"n", n},
                     {"seed", ctx_.seed},
                     {"weights", spec.truth.weights},
                     {"locations", spec.truth.locations},
                     {"degenerate", spec.truth.degenerate},
                     {"completely_separated", spec.truth.completely_separated},
                     {"labels", sample.labels}};
        write_file_atomic(ctx_.path(stem + ".json"), meta.dump(2) + "\n");
        return sample.x;
      }
    }
    throw UsageError("unknown data source");
  }

 private:
  const Context& ctx_;
  std::vector<double> file_;
};

struct ExactResult {
  PosteriorKnTable table;
  std::vector<double> log_sums;  // partition sums backing the table, index s-1
};

/// Exact posterior tables along the grid, sharing one Bell table for constant data.
class ExactEngine {
 public:
  ExactEngine(const Context& ctx, const DataSource& data, std::int64_t n_max) : ctx_(ctx), data_(data) {
    if (data.constant()) {
      if (n_max > kSizeOnlyCap) throw ResourceError("size-only engine is capped at n = 100000");
      const int s0 = static_cast<int>(std::min<std::int64_t>(ctx.config.s_max, n_max));
      log_m_ = size_log_marginals(ctx.config.model, data.value(), n_max);
      table_ = std::make_unique<PartialBellTable>(size_only_table(log_m_, static_cast<int>(n_max), s0));
    }
  }

  ExactResult at(std::int64_t n) {
    if (table_) {
      auto t = posterior_kn_sizeonly(*table_, ctx_.prior(), n, ctx_.config.s_max, ctx_.tol);
      auto sums = size_only_log_sums(*table_, n, t.s_max());
      return {std::move(t), std::move(sums)};
    }
    if (n > kMaxEnumeratedPartitionSize)
      throw ResourceError("exact posterior for non-constant data is capped at n = 13 (use sample)");
    const auto x = data_.at(n);
    auto sums = partition_log_sums(ctx_.config.model, x);
    auto t = posterior_from_log_sums(sums, ctx_.prior(), n, PosteriorMethod::Brute, ctx_.tol);
    return {std::move(t), std::move(sums)};
  }

 private:
  const Context& ctx_;
  const DataSource& data_;
  std::vector<double> log_m_;
  std::unique_ptr<PartialBellTable> table_;
};

void write_table(const Context& ctx, const PosteriorKnTable& t) {
  CsvTable csv({"s", "log_joint", "posterior", "method", "tail_bound"});
  const double tail = t.tail_mass_bound();
  for (int s = 1; s <= t.s_max(); ++s)
    csv.add_row(s, t.log_joint[s - 1], t.probability(s), to_string(t.method), tail);
  csv.write(ctx.path("posterior_n" + std::to_string(t.n) + ".csv"));
}

json table_json(const PosteriorKnTable& t) {
  json probs = json::array();
  for (int s = 1; s <= t.s_max(); ++s) probs.push_back(jnum(t.probability(s)));
  return {{"n", t.n},
          {"method", to_string(t.method)},
          {"s_max", t.s_max()},
          {"posterior", probs},
          {"tail_mass_bound", jnum(t.tail_mass_bound())},
          {"warnings", t.warnings}};
}

// Threshold 2C of the geometric series that must converge for the kernel,
// with C the composition-sum constant for the kernel's ratio exponent.
std::optional<double> series_threshold(const KernelModel& model) {
  if (std::holds_alternative<GaussianConjugate>(model))
    return 2.0 * std::pow(2.0, 1.5) * riemann_zeta(1.5);
  if (std::holds_alternative<UniformLocation>(model))
    return 2.0 * 4.0 * riemann_zeta(2.0) * std::cbrt(24.0);
  return std::nullopt;
}

struct Check {
  std::string name;
  bool pass;
  std::string detail;
};

std::string fmt(double v) { return format_double(v); }

}  // namespace

int cmd_exact(const ExperimentConfig& config, const RunOptions& options, std::ostream& log) {
  Context ctx(config, options, log);
  ctx.echo_config("exact");
  DataSource data(ctx);
  const auto grid = resolved_grid(config, data.file());
  ExactEngine engine(ctx, data, grid.back());
  CsvTable long_csv({"n", "quantity", "value"});
  json per_n = json::array();
  for (auto n : grid) {
    auto r = engine.at(n);
    write_table(ctx, r.table);
    for (int s = 1; s <= r.table.s_max(); ++s)
      long_csv.add_row(n, "pr_K_" + std::to_string(s), r.table.probability(s));
    long_csv.add_row(n, "tail_mass_bound", r.table.tail_mass_bound());
    per_n.push_back(table_json(r.table));
    log << "exact n=" << n << " method=" << to_string(r.table.method) << " pr(K=" << config.t
        << ")=" << fmt(r.table.probability(config.t)) << "\n";
  }
  long_csv.write(ctx.path("long.csv"));
  ctx.write_summary({{"grid", per_n}}, "exact");
  return kExitOk;
}

int cmd_alpha_posterior(const ExperimentConfig& config, const RunOptions& options, std::ostream& log) {
  Context ctx(config, options, log);
  if (ctx.prior().is_degenerate()) {
    log << "alpha-posterior: a point mass prior has no posterior density to report\n";
    return kExitConfig;
  }
  ctx.echo_config("alpha-posterior");
  DataSource data(ctx);
  const auto grid = resolved_grid(config, data.file());
  ExactEngine engine(ctx, data, grid.back());
  std::vector<double> epsilons = config.epsilons;
  std::sort(epsilons.begin(), epsilons.end());
  epsilons.erase(std::unique(epsilons.begin(), epsilons.end()), epsilons.end());
  CsvTable long_csv({"n", "quantity", "value"});
  json per_n = json::array();
  for (auto n : grid) {
    auto r = engine.at(n);
    const auto cdf = posterior_alpha_cdf(r.table, ctx.prior(), config.alpha_grid, ctx.tol);
    CsvTable csv({"alpha", "cdf", "cdf_upper"});
    for (const auto& p : cdf) csv.add_row(p.alpha, p.cdf, p.cdf_upper);
    csv.write(ctx.path("alpha_cdf_n" + std::to_string(n) + ".csv"));
    const auto below = posterior_alpha_cdf(r.table, ctx.prior(), epsilons, ctx.tol);
    json eps = json::array();
    for (const auto& p : below) {
      eps.push_back({{"epsilon", p.alpha}, {"pr_alpha_below", p.cdf}, {"upper", p.cdf_upper}});
      long_csv.add_row(n, "pr_alpha_below_" + fmt(p.alpha), p.cdf);
    }
    per_n.push_back({{"n", n}, {"method", to_string(r.table.method)}, {"epsilon", eps}});
    log << "alpha-posterior n=" << n << " pr(alpha<" << fmt(below.front().alpha)
        << ")=" << fmt(below.front().cdf) << "\n";
  }
  long_csv.write(ctx.path("long.csv"));
  ctx.write_summary({{"grid", per_n}}, "alpha-posterior");
  return kExitOk;
}

int cmd_consistency_curve(const ExperimentConfig& config, const RunOptions& options, std::ostream& log) {
  Context ctx(config, options, log);
  const auto& prior = ctx.prior();
  if (!config.moments.rho)
    throw ConfigError("consistency-curve needs moment_check.rho (the rho of the subfactorial moment condition)");
  const double rho = *config.moments.rho;
  MomentCertificate cert{};
  try {
    cert = verify_moment_growth(prior, rho, config.moments.s_max);
  } catch (const CertificationFailure& e) {
    log << "consistency-curve refused: the prior fails the subfactorial moment condition (" << e.what() << ")\n";
    return kExitConfig;
  }
  ctx.echo_config("consistency-curve");
  DataSource data(ctx);
  const auto grid = resolved_grid(config, data.file());
  const int t = config.t;
  const bool exact_all = data.constant() || grid.back() <= kMaxEnumeratedPartitionSize;
  std::unique_ptr<ExactEngine> engine;
  if (data.constant()) engine = std::make_unique<ExactEngine>(ctx, data, grid.back());
  else engine = std::make_unique<ExactEngine>(ctx, data, std::min<std::int64_t>(grid.back(), 1));

  CsvTable curve({"n", "method", "pr_K_eq_t", "pr_K_below_t", "sum_ratio", "sum_ratio_log_n"});
  CsvTable long_csv({"n", "quantity", "value"});
  std::vector<double> products;
  json per_n = json::array();
  for (auto n : grid) {
    std::string method;
    double p_t = 0.0, p_below = 0.0, sum_ratio = 0.0;
    if (data.constant() || n <= kMaxEnumeratedPartitionSize) {
      auto r = engine->at(n);
      method = to_string(r.table.method);
      p_t = r.table.probability(t);
      for (int s = 1; s < t; ++s) p_below += r.table.probability(s);
      const auto report = ratio_report(r.log_sums, r.table, prior, t, ctx.tol);
      sum_ratio = std::exp(report.log_sum_ratio);
    } else {
      method = "gibbs";
      const auto x = data.at(n);
      const auto traces = run_chains(config.model, prior, x, config.sampler, ctx.seed, config.chains,
                                     options.threads);
      const auto summary = summarize(traces, {});
      p_t = summary.k_probability.count(t) ? summary.k_probability.at(t).mean : 0.0;
      for (int s = 1; s < t; ++s)
        if (summary.k_probability.count(s)) p_below += summary.k_probability.at(s).mean;
      sum_ratio = p_t > 0.0 ? (1.0 - p_t) / p_t : std::numeric_limits<double>::infinity();
    }
    const double product = sum_ratio * std::log(static_cast<double>(n));
    products.push_back(product);
    curve.add_row(n, method, p_t, p_below, sum_ratio, product);
    long_csv.add_row(n, "pr_K_eq_t", p_t);
    long_csv.add_row(n, "pr_K_below_t", p_below);
    long_csv.add_row(n, "sum_ratio", sum_ratio);
    long_csv.add_row(n, "sum_ratio_log_n", product);
    per_n.push_back({{"n", n}, {"method", method}, {"pr_K_eq_t", jnum(p_t)}, {"pr_K_below_t", jnum(p_below)},
                     {"sum_ratio", jnum(sum_ratio)}, {"sum_ratio_log_n", jnum(product)}});
    log << "consistency n=" << n << " " << method << " pr(K=" << t << ")=" << fmt(p_t)
        << " sum_ratio*log n=" << fmt(product) << "\n";
  }
  bool nonincreasing = true;
  for (std::size_t i = 2; i < products.size(); ++i) nonincreasing = nonincreasing && products[i] <= products[i - 1];
  curve.write(ctx.path("curve.csv"));
  long_csv.write(ctx.path("long.csv"));
  json summary = {{"grid", per_n},
                  {"t", t},
                  {"exact_everywhere", exact_all},
                  {"product_nonincreasing_after_first", nonincreasing},
                  {"moment_certificate", {{"D", cert.D}, {"nu", cert.nu}, {"rho", cert.rho}, {"s_checked", cert.s_checked}}}};
  if (auto thr = series_threshold(config.model)) {
    summary["series_threshold"] = *thr;
    summary["series_ratio"] = *thr / rho;
  }
  ctx.write_summary(summary, "consistency-curve");
  return kExitOk;
}

int cmd_sample(const ExperimentConfig& config, const RunOptions& options, std::ostream& log) {
  Context ctx(config, options, log);
  const auto& prior = ctx.prior();
  ctx.echo_config("sample");
  DataSource data(ctx);
  const auto grid = resolved_grid(config, data.file());
  CsvTable long_csv({"n", "quantity", "value"});
  json per_n = json::array();
  for (auto n : grid) {
    const auto x = data.at(n);
    const auto traces = run_chains(config.model, prior, x, config.sampler, ctx.seed, config.chains, options.threads);
    for (std::size_t c = 0; c < traces.size(); ++c) {
      CsvTable csv({"iteration", "K_n", "alpha"});
      for (std::size_t i = 0; i < traces[c].k.size(); ++i)
        csv.add_row(traces[c].iteration[i], traces[c].k[i], traces[c].alpha[i]);
      csv.write(ctx.path("trace_n" + std::to_string(n) + "_chain" + std::to_string(c) + ".csv"));
    }
    const auto summary = summarize(traces, config.epsilons);
    json hist = json::object();
    for (const auto& [s, e] : summary.k_probability) {
      hist[std::to_string(s)] = {{"mean", e.mean}, {"se", jnum(e.se)}};
      long_csv.add_row(n, "pr_K_" + std::to_string(s), e.mean);
    }
    json below = json::array();
    for (const auto& [eps, e] : summary.alpha_below) {
      below.push_back({{"epsilon", eps}, {"mean", e.mean}, {"se", jnum(e.se)}});
      long_csv.add_row(n, "pr_alpha_below_" + fmt(eps), e.mean);
    }
    long_csv.add_row(n, "K_mean", summary.k_mean.mean);
    json entry = {{"n", n},
                  {"draws", summary.draws},
                  {"K_mean", {{"mean", summary.k_mean.mean}, {"se", jnum(summary.k_mean.se)}}},
                  {"K_mode", summary.k_mode},
                  {"K_histogram", hist},
                  {"K_ess", summary.k_ess},
                  {"alpha_mean", {{"mean", summary.alpha_mean.mean}, {"se", jnum(summary.alpha_mean.se)}}},
                  {"pr_alpha_below", below},
                  {"metropolis_acceptance", summary.acceptance_rate}};
    if (n <= kMaxEnumeratedPartitionSize) {
      const auto exact = posterior_kn_bruteforce(config.model, prior, x, ctx.tol);
      double worst_z = 0.0, worst_abs = 0.0;
      for (int s = 1; s <= exact.s_max(); ++s) {
        const double p = exact.probability(s);
        if (p < 1e-3) continue;
        const auto it = summary.k_probability.find(s);
        const Estimate e = it == summary.k_probability.end() ? Estimate{0.0, 0.0} : it->second;
        const double diff = std::abs(e.mean - p);
        worst_abs = std::max(worst_abs, diff);
        worst_z = std::max(worst_z, e.se > 0.0 ? diff / e.se : (diff > 0.0 ? INFINITY : 0.0));
      }
      entry["exact_comparison"] = {{"max_abs_diff", worst_abs}, {"max_diff_in_se", jnum(worst_z)},
                                   {"within_3_se", worst_z <= 3.0}, {"exact", table_json(exact)}};
    }
    per_n.push_back(entry);
    log << "sample n=" << n << " K mode=" << summary.k_mode << " mean K=" << fmt(summary.k_mean.mean) << "\n";
  }
  long_csv.write(ctx.path("long.csv"));
  ctx.write_summary({{"grid", per_n}, {"chains", config.chains}}, "sample");
  return kExitOk;
}

int cmd_verify_bounds(const ExperimentConfig& config, const RunOptions& options, std::ostream& log) {
  Context ctx(config, options, log);
  const AlphaPrior prior = config.prior.value_or(AlphaPrior::gamma(1.0, 1.0));
  ctx.echo_config("verify-bounds");
  const auto& B = config.bounds;
  std::vector<Check> checks;
  std::vector<std::string> info;
  auto finish = [&](bool skipped) {
    std::string report;
    CsvTable csv({"check", "status", "detail"});
    for (const auto& c : checks) {
      report += std::string(c.pass ? "PASS " : "FAIL ") + c.name + " " + c.detail + "\n";
      csv.add_row(c.name, c.pass ? "PASS" : "FAIL", c.detail);
    }
    for (const auto& line : info) report += "INFO " + line + "\n";
    if (skipped) report += "SKIP remaining checks: no origin certificate\n";
    log << report;
    write_file_atomic(ctx.path("verify_bounds.txt"), report);
    csv.write(ctx.path("checks.csv"));
    const bool ok = !skipped && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
    json s = {{"passed", ok}, {"checks", checks.size()}, {"skipped", skipped}};
    ctx.write_summary(s, "verify-bounds");
    return ok ? kExitOk : kExitVerification;
  };

  const double eps = config.origin.epsilon.value_or(default_epsilon(prior));
  OriginCertificate cert{};
  try {
    cert = fit_origin_certificate(prior, eps, config.origin.delta_max);
  } catch (const CertificationFailure& e) {
    checks.push_back({"origin-certificate", false, e.what()});
    return finish(true);
  }
  checks.push_back({"origin-certificate", true,
                    "epsilon=" + fmt(cert.epsilon) + " delta=" + fmt(cert.delta) + " beta=" + fmt(cert.beta)});

  const int t = B.t;
  std::optional<double> M;
  if (B.tail_constant) {
    const auto tc = tail_domination_constant(prior, t, cert.epsilon, B.tol);
    M = tc.M;
    checks.push_back({"tail-domination-constant", tc.verified,
                      "M=" + fmt(tc.M) + " m=" + std::to_string(tc.m) + " worst_log_slack=" + fmt(tc.worst_log_slack)});
  }
  for (auto n : B.n_grid) {
    for (int s : B.s_values) {
      if (!(s >= 1 && t + s < n)) continue;
      const std::string at = "n=" + std::to_string(n) + " t=" + std::to_string(t) + " s=" + std::to_string(s);
      const double c = c_ratio(prior, n, t, t + s, B.tol);
      const double ub = c_ratio_upper_bound(cert, prior, n, t, s, UpperBoundForm::Explicit);
      checks.push_back({"c-ratio-upper " + at, ub - c >= -B.tol, "log_slack=" + fmt(ub - c)});
      const double tr = truncated_ratio(cert, prior, n, t, s, B.tol);
      const auto [lo, up] = truncated_ratio_bounds(cert, n, t, s);
      checks.push_back({"truncated-ratio-sandwich " + at, tr - lo >= -B.tol && up - tr >= -B.tol,
                        "log_slack_lower=" + fmt(tr - lo) + " log_slack_upper=" + fmt(up - tr)});
      if (M) {
        const double lb = c_ratio_lower_bound(cert, n, t, s, *M);
        checks.push_back({"c-ratio-lower " + at, c - lb >= -B.tol, "log_slack=" + fmt(c - lb)});
      }
      const double g_form = c_ratio_upper_bound(cert, prior, n, t, s, UpperBoundForm::GConstant);
      info.push_back("c-ratio-upper-g-constant " + at + " log_slack=" + fmt(g_form - c));
      if (n >= 4) {
        const double lr = c_ratio_upper_bound(cert, prior, n, t, s, UpperBoundForm::LogRate);
        info.push_back("c-ratio-upper-log-rate " + at + " log_slack=" + fmt(lr - c));
      }
    }
  }

  const auto comp = composition_bound_check(B.composition_n_max, B.composition_s_max, B.composition_p);
  checks.push_back({"composition-bound", comp.all_strict,
                    "rows=" + std::to_string(comp.rows.size()) + " worst_log_slack=" + fmt(comp.worst_log_slack)});

  const UniformLocation ukernel = std::holds_alternative<UniformLocation>(config.model)
                                      ? std::get<UniformLocation>(config.model)
                                      : UniformLocation{0.0, 1.0, std::nullopt};
  MixtureTruth utruth;
  utruth.weights = {1.0};
  utruth.locations = {ukernel.theta_star};
  utruth.kernel = TruthKernel::Uniform;
  utruth.c = ukernel.c;
  const auto est = mc_expected_r(ukernel, utruth, B.identity_n, B.identity_s, 1'000'000, B.identity_reps, ctx.seed);
  const double gap = std::abs(est.lhs - est.rhs);
  checks.push_back({"expected-ratio-identity n=" + std::to_string(B.identity_n) + " s=" + std::to_string(B.identity_s),
                    !est.partial && gap <= 3.0 * est.combined_se,
                    "lhs=" + fmt(est.lhs) + " rhs=" + fmt(est.rhs) + " gap=" + fmt(gap) +
                        " combined_se=" + fmt(est.combined_se)});

  for (int a : B.range_sizes) {
    std::vector<double> stats;
    stats.reserve(B.range_samples);
    for (int r = 0; r < B.range_samples; ++r) {
      const auto x = sample_truth(utruth, a, ctx.seed + 1, static_cast<std::uint32_t>(r));
      stats.push_back(scaled_range_statistic(ukernel, x.x));
    }
    const auto ks = ks_test(stats, [a](double v) { return beta2_cdf(v, a - 1.0); });
    checks.push_back({"range-law a=" + std::to_string(a), ks.p_value >= B.range_level,
                      "D=" + fmt(ks.statistic) + " p=" + fmt(ks.p_value)});
  }
  return finish(false);
}

int run_command(const std::string& name, const ExperimentConfig& config, const RunOptions& options,
                std::ostream& log) {
  try {
    if (!config.experiment.empty() && config.experiment != name)
      throw ConfigError("config is for '" + config.experiment + "', not '" + name + "'");
    if (name == "exact") return cmd_exact(config, options, log);
    if (name == "sample") return cmd_sample(config, options, log);
    if (name == "verify-bounds") return cmd_verify_bounds(config, options, log);
    if (name == "consistency-curve") return cmd_consistency_curve(config, options, log);
    if (name == "alpha-posterior") return cmd_alpha_posterior(config, options, log);
    throw ConfigError("unknown command '" + name + "'");
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ResourceError& e) {
    log << "resource cap: " << e.what() << "\n";
    return kExitResource;
  } catch (const NumericError& e) {
    log << "numeric failure: " << e.what() << "\n";
    return kExitResource;
  } catch (const CertificationFailure& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const UnsupportedOperation& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace dpmk
