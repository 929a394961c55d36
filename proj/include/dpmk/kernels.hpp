#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace dpmk {

/// Piecewise-linear density on a grid, zero outside [front, back], rescaled
/// to integrate to exactly 1.
class TabulatedDensity {
 public:
  TabulatedDensity(std::vector<double> xs, std::vector<double> ys);

  static TabulatedDensity uniform(double lo, double hi);
  static TabulatedDensity truncated_normal(double mean, double sd, double lo, double hi, int points = 2001);

  double lower() const { return xs_.front(); }
  double upper() const { return xs_.back(); }
  double operator()(double x) const;
  double log_density(double x) const;
  double sup() const;
  /// Inverse CDF; u in [0, 1].
  double quantile(double u) const;
  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& ys() const { return ys_; }

 private:
  std::vector<double> xs_;
  std::vector<double> ys_;
  std::vector<double> cdf_;
};

/// Kernel Unif(theta - c, theta + c) with base Unif(lo, hi); the base
/// defaults to (theta* - c, theta* + c).
struct UniformLocation {
  double theta_star;
  double c;
  std::optional<std::pair<double, double>> base;

  std::pair<double, double> base_interval() const;
};

/// Kernel N(theta, 1) with base N(0, 1).
struct GaussianConjugate {};

/// Kernel g(x - theta) with tabulated g and tabulated base density q0.
struct BoundedLocation {
  TabulatedDensity g;
  TabulatedDensity q0;
};

using KernelModel = std::variant<UniformLocation, GaussianConjugate, BoundedLocation>;

/// Throws DomainError naming the violated condition.
void validate(const KernelModel& model);

std::string describe(const KernelModel& model);

/// log m(x_A). Throws DomainError for an empty block or non-finite data;
/// -inf when no single parameter value explains the whole block.
double block_log_marginal(const KernelModel& model, std::span<const double> x_block);

/// log m for a block of a copies of value.
double constant_block_log_marginal(const KernelModel& model, double value, std::int64_t a);

/// Closed-form log m for a block of a copies of theta* under the Gaussian model.
double constant_data_size_log_marginal(const GaussianConjugate& model, std::int64_t a, double theta_star);

/// Sufficient statistics of one cluster, with O(1) or O(log a) add/remove
/// for the closed-form kernels.
class BlockStats {
 public:
  explicit BlockStats(const KernelModel& model) : model_(&model) {}

  void add(double x);
  void remove(double x);
  std::int64_t size() const { return count_; }
  double log_marginal() const;
  double log_marginal_with(double x) const;

 private:
  const KernelModel* model_;
  std::int64_t count_ = 0;
  double sum_ = 0.0;
  double sumsq_ = 0.0;
  std::multiset<double> values_;
};

enum class TruthKernel { Uniform, Gaussian, Bounded };

/// Finite mixture generating the data.
struct MixtureTruth {
  std::vector<double> weights;
  std::vector<double> locations;
  TruthKernel kernel = TruthKernel::Gaussian;
  double c = 1.0;                       // half-width for the uniform kernel
  std::optional<TabulatedDensity> g;    // density for the bounded kernel
  bool degenerate = false;              // point masses at the locations
  bool completely_separated = false;

  /// Width of the kernel support, +inf for the Gaussian kernel, 0 when degenerate.
  double support_width() const;
};

/// Throws DomainError naming the violated condition.
void validate(const MixtureTruth& truth);

struct Sample {
  std::vector<double> x;
  std::vector<int> labels;
};

/// Draws n points; replicate selects an independent data set under the same seed.
Sample sample_truth(const MixtureTruth& truth, std::int64_t n, std::uint64_t seed, std::uint32_t replicate = 0);

/// (2c - range(x)) / (2c). Throws DomainError for blocks of size < 2.
double scaled_range_statistic(const UniformLocation& model, std::span<const double> x_block);

/// CDF of Beta(2, b): 1 - (1-x)^b (1 + b x).
double beta2_cdf(double x, double b);

struct KsResult {
  double statistic;
  double p_value;
};

/// Two-sided one-sample Kolmogorov-Smirnov test.
template <class Cdf>
KsResult ks_test(std::vector<double> samples, Cdf cdf);

/// Asymptotic Kolmogorov tail probability with the small-sample correction.
double kolmogorov_p_value(double statistic, std::size_t n);

template <class Cdf>
KsResult ks_test(std::vector<double> samples, Cdf cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return {d, kolmogorov_p_value(d, samples.size())};
}

}  // namespace dpmk
