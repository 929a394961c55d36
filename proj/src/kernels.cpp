#include "dpmk/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "dpmk/error.hpp"
#include "dpmk/numerics.hpp"
#include "dpmk/quadrature.hpp"
#include "dpmk/rng.hpp"

namespace dpmk {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const double kLogTwoPi = std::log(2.0 * std::numbers::pi);

// Above this many kinks the piecewise-exact rule gives way to adaptive quadrature.
constexpr std::size_t kMaxExactPieces = 256;

// Stream tag for data generation, distinct from sampler chain ids.
constexpr std::uint32_t kTruthStream = 0x7275u;

double gaussian_log_marginal(std::int64_t a, double sum, double sumsq) {
  const double ad = static_cast<double>(a);
  return -0.5 * ad * kLogTwoPi - 0.5 * std::log1p(ad) - 0.5 * sumsq + sum * sum / (2.0 * (ad + 1.0));
}

double uniform_log_marginal(const UniformLocation& u, std::int64_t a, double lo_x, double hi_x) {
  const auto [lo_b, hi_b] = u.base_interval();
  const double len = std::min(lo_x + u.c, hi_b) - std::max(hi_x - u.c, lo_b);
  if (!(len > 0.0)) return kNegInf;
  return std::log(len) - static_cast<double>(a) * std::log(2.0 * u.c) - std::log(hi_b - lo_b);
}

// log int prod_i g(x_i - theta) q0(theta) dtheta. Both densities are
// piecewise linear, so between kinks the integrand is a polynomial of degree
// at most a + 1 and Gauss-Kronrod on each piece is exact up to rounding when
// a is small.
double bounded_log_marginal(const BoundedLocation& b, std::span<const double> x) {
  const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
  const double lo = std::max(*mx - b.g.upper(), b.q0.lower());
  const double hi = std::min(*mn - b.g.lower(), b.q0.upper());
  if (!(hi > lo)) return kNegInf;
  auto log_f = [&](double theta) {
    double acc = b.q0.log_density(theta);
    for (double xi : x) {
      if (acc == kNegInf) break;
      acc += b.g.log_density(xi - theta);
    }
    return acc;
  };
  std::vector<double> cuts = {lo, hi};
  auto add_cuts = [&](const std::vector<double>& nodes, double shift, double sign) {
    for (double node : nodes) {
      const double v = shift + sign * node;
      if (v > lo && v < hi) cuts.push_back(v);
    }
  };
  add_cuts(b.q0.xs(), 0.0, 1.0);
  for (double xi : x) {
    if (cuts.size() > 4 * kMaxExactPieces) break;
    add_cuts(b.g.xs(), xi, -1.0);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  QuadratureOptions opts;
  opts.rel_tol = 1e-12;
  if (cuts.size() - 1 > kMaxExactPieces) {
    opts.rel_tol = 1e-10;
    opts.initial_subdivisions = 64;
    return log_integrate(log_f, lo, hi, opts).log_value;
  }
  double shift = kNegInf;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) shift = std::max(shift, log_f(0.5 * (cuts[i] + cuts[i + 1])));
  if (shift == kNegInf) return kNegInf;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    total += integrate([&](double th) { return std::exp(log_f(th) - shift); }, cuts[i], cuts[i + 1], opts).value;
  return total > 0.0 ? shift + std::log(total) : kNegInf;
}

}  // namespace

TabulatedDensity::TabulatedDensity(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
  if (xs_.size() < 2 || xs_.size() != ys_.size())
    throw DomainError("tabulated density needs matching grids of at least two points");
  for (std::size_t i = 0; i < xs_.size(); ++i) {
    if (!std::isfinite(xs_[i]) || !std::isfinite(ys_[i]) || ys_[i] < 0.0)
      throw DomainError("tabulated density values must be finite and nonnegative");
    if (i > 0 && !(xs_[i] > xs_[i - 1])) throw DomainError("tabulated density grid must be strictly increasing");
  }
  cdf_.assign(xs_.size(), 0.0);
  for (std::size_t i = 1; i < xs_.size(); ++i)
    cdf_[i] = cdf_[i - 1] + 0.5 * (ys_[i] + ys_[i - 1]) * (xs_[i] - xs_[i - 1]);
  const double area = cdf_.back();
  if (!(area > 0.0)) throw DomainError("tabulated density has zero mass");
  for (double& y : ys_) y /= area;
  for (double& f : cdf_) f /= area;
}

TabulatedDensity TabulatedDensity::uniform(double lo, double hi) {
  if (!(hi > lo)) throw DomainError("uniform density needs lo < hi");
  return TabulatedDensity({lo, hi}, {1.0, 1.0});
}

TabulatedDensity TabulatedDensity::truncated_normal(double mean, double sd, double lo, double hi, int points) {
  if (!(sd > 0.0) || !(hi > lo) || points < 2) throw DomainError("truncated normal needs sd > 0, lo < hi");
  std::vector<double> xs(points), ys(points);
  for (int i = 0; i < points; ++i) {
    xs[i] = lo + (hi - lo) * i / (points - 1.0);
    const double z = (xs[i] - mean) / sd;
    ys[i] = std::exp(-0.5 * z * z);
  }
  xs.back() = hi;
  return TabulatedDensity(std::move(xs), std::move(ys));
}

double TabulatedDensity::operator()(double x) const {
  if (!(x >= xs_.front() && x <= xs_.back())) return 0.0;
  auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  if (it == xs_.end()) return ys_.back();
  const auto i = static_cast<std::size_t>(it - xs_.begin());
  const double w = (x - xs_[i - 1]) / (xs_[i] - xs_[i - 1]);
  return ys_[i - 1] + w * (ys_[i] - ys_[i - 1]);
}

double TabulatedDensity::log_density(double x) const {
  const double v = (*this)(x);
  return v > 0.0 ? std::log(v) : kNegInf;
}

double TabulatedDensity::sup() const { return *std::max_element(ys_.begin(), ys_.end()); }

double TabulatedDensity::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("quantile needs u in [0, 1]");
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) return xs_.back();
  const auto i = static_cast<std::size_t>(it - cdf_.begin());
  const double h = xs_[i] - xs_[i - 1];
  const double y0 = ys_[i - 1];
  const double k = (ys_[i] - y0) / h;
  const double r = u - cdf_[i - 1];
  const double disc = std::max(y0 * y0 + 2.0 * k * r, 0.0);
  const double denom = y0 + std::sqrt(disc);
  const double d = denom > 0.0 ? 2.0 * r / denom : 0.0;
  return std::min(xs_[i - 1] + d, xs_[i]);
}

std::pair<double, double> UniformLocation::base_interval() const {
  if (base) return *base;
  return {theta_star - c, theta_star + c};
}

void validate(const KernelModel& model) {
  std::visit(overloaded{
                 [](const UniformLocation& u) {
                   if (!(u.c > 0.0) || !std::isfinite(u.c)) throw DomainError("uniform kernel needs c > 0");
                   if (!std::isfinite(u.theta_star)) throw DomainError("uniform kernel needs a finite theta*");
                   const auto [lo, hi] = u.base_interval();
                   if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi))
                     throw DomainError("uniform base interval needs finite lo < hi");
                 },
                 [](const GaussianConjugate&) {},
                 [](const BoundedLocation& b) {
                   const auto& ys = b.g.ys();
                   for (std::size_t i = 1; i + 1 < ys.size(); ++i)
                     if (!(ys[i] > 0.0)) throw DomainError("kernel density g must be positive inside its support");
                 },
             },
             model);
}

std::string describe(const KernelModel& model) {
  std::ostringstream os;
  os.precision(17);
  std::visit(overloaded{
                 [&](const UniformLocation& u) {
                   const auto [lo, hi] = u.base_interval();
                   os << "UniformLocation(theta*=" << u.theta_star << ", c=" << u.c << ", base=[" << lo << ", "
                      << hi << "])";
                 },
                 [&](const GaussianConjugate&) { os << "GaussianConjugate"; },
                 [&](const BoundedLocation& b) {
                   os << "BoundedLocation(g on [" << b.g.lower() << ", " << b.g.upper() << "], q0 on ["
                      << b.q0.lower() << ", " << b.q0.upper() << "])";
                 },
             },
             model);
  return os.str();
}

double block_log_marginal(const KernelModel& model, std::span<const double> x) {
  if (x.empty()) throw DomainError("block marginal of an empty block");
  for (double v : x)
    if (!std::isfinite(v)) throw DomainError("block marginal: non-finite datum");
  const auto a = static_cast<std::int64_t>(x.size());
  return std::visit(overloaded{
                        [&](const UniformLocation& u) {
                          const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
                          return uniform_log_marginal(u, a, *mn, *mx);
                        },
                        [&](const GaussianConjugate&) {
                          double s = 0.0, q = 0.0;
                          for (double v : x) {
                            s += v;
                            q += v * v;
                          }
                          return gaussian_log_marginal(a, s, q);
                        },
                        [&](const BoundedLocation& b) { return bounded_log_marginal(b, x); },
                    },
                    model);
}

double constant_block_log_marginal(const KernelModel& model, double value, std::int64_t a) {
  if (a < 1) throw DomainError("block size must be positive");
  if (!std::isfinite(value)) throw DomainError("block marginal: non-finite datum");
  return std::visit(overloaded{
                        [&](const UniformLocation& u) { return uniform_log_marginal(u, a, value, value); },
                        [&](const GaussianConjugate& g) { return constant_data_size_log_marginal(g, a, value); },
                        [&](const BoundedLocation& b) {
                          std::vector<double> block(static_cast<std::size_t>(a), value);
                          return bounded_log_marginal(b, block);
                        },
                    },
                    model);
}

double constant_data_size_log_marginal(const GaussianConjugate&, std::int64_t a, double theta_star) {
  if (a < 1) throw DomainError("block size must be positive");
  const double ad = static_cast<double>(a);
  const double log_q0 = -0.5 * kLogTwoPi - 0.5 * theta_star * theta_star;
  return -0.5 * std::log1p(ad) + ad * log_q0 + theta_star * theta_star * ad * ad / (2.0 * (ad + 1.0));
}

void BlockStats::add(double x) {
  ++count_;
  sum_ += x;
  sumsq_ += x * x;
  if (!std::holds_alternative<GaussianConjugate>(*model_)) values_.insert(x);
}

void BlockStats::remove(double x) {
  if (count_ == 0) throw UsageError("remove from an empty block");
  --count_;
  if (count_ == 0) {
    sum_ = sumsq_ = 0.0;
  } else {
    sum_ -= x;
    sumsq_ -= x * x;
  }
  if (!std::holds_alternative<GaussianConjugate>(*model_)) {
    auto it = values_.find(x);
    if (it == values_.end()) throw UsageError("remove of a value not in the block");
    values_.erase(it);
  }
}

double BlockStats::log_marginal() const {
  if (count_ == 0) return 0.0;
  return std::visit(overloaded{
                        [&](const UniformLocation& u) {
                          return uniform_log_marginal(u, count_, *values_.begin(), *values_.rbegin());
                        },
                        [&](const GaussianConjugate&) { return gaussian_log_marginal(count_, sum_, sumsq_); },
                        [&](const BoundedLocation& b) {
                          std::vector<double> block(values_.begin(), values_.end());
                          return bounded_log_marginal(b, block);
                        },
                    },
                    *model_);
}

double BlockStats::log_marginal_with(double x) const {
  return std::visit(overloaded{
                        [&](const UniformLocation& u) {
                          const double lo = count_ == 0 ? x : std::min(x, *values_.begin());
                          const double hi = count_ == 0 ? x : std::max(x, *values_.rbegin());
                          return uniform_log_marginal(u, count_ + 1, lo, hi);
                        },
                        [&](const GaussianConjugate&) {
                          return gaussian_log_marginal(count_ + 1, sum_ + x, sumsq_ + x * x);
                        },
                        [&](const BoundedLocation& b) {
                          std::vector<double> block(values_.begin(), values_.end());
                          block.push_back(x);
                          return bounded_log_marginal(b, block);
                        },
                    },
                    *model_);
}

double MixtureTruth::support_width() const {
  if (degenerate) return 0.0;
  switch (kernel) {
    case TruthKernel::Uniform: return 2.0 * c;
    case TruthKernel::Bounded: return g ? g->upper() - g->lower() : 0.0;
    case TruthKernel::Gaussian: return std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

void validate(const MixtureTruth& truth) {
  const auto t = truth.weights.size();
  if (t == 0 || truth.locations.size() != t) throw DomainError("truth needs as many locations as weights");
  double total = 0.0;
  for (double w : truth.weights) {
    if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("truth weights must be positive");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("truth weights must sum to 1");
  for (std::size_t i = 0; i < t; ++i) {
    if (!std::isfinite(truth.locations[i])) throw DomainError("truth locations must be finite");
    for (std::size_t j = 0; j < i; ++j)
      if (truth.locations[i] == truth.locations[j]) throw DomainError("truth locations must be distinct");
  }
  if (!truth.degenerate) {
    if (truth.kernel == TruthKernel::Uniform && !(truth.c > 0.0)) throw DomainError("uniform truth needs c > 0");
    if (truth.kernel == TruthKernel::Bounded && !truth.g) throw DomainError("bounded truth needs a density g");
  }
  if (truth.completely_separated) {
    const double width = truth.support_width();
    for (std::size_t i = 0; i < t; ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (!(std::abs(truth.locations[i] - truth.locations[j]) > width))
          throw DomainError("complete separation violated: locations closer than the kernel support width");
  }
}

Sample sample_truth(const MixtureTruth& truth, std::int64_t n, std::uint64_t seed, std::uint32_t replicate) {
  if (n < 1) throw DomainError("sample size must be positive");
  validate(truth);
  Sample out;
  out.x.reserve(static_cast<std::size_t>(n));
  out.labels.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    PhiloxStream rng(seed, kTruthStream, replicate, static_cast<std::uint32_t>(i));
    const double u = rng.uniform();
    std::size_t j = 0;
    double acc = truth.weights[0];
    while (u >= acc && j + 1 < truth.weights.size()) acc += truth.weights[++j];
    const double theta = truth.locations[j];
    double x = theta;
    if (!truth.degenerate) {
      switch (truth.kernel) {
        case TruthKernel::Uniform: x = theta + truth.c * (2.0 * rng.uniform() - 1.0); break;
        case TruthKernel::Gaussian: x = theta + std::normal_distribution<double>(0.0, 1.0)(rng); break;
        case TruthKernel::Bounded: x = theta + truth.g->quantile(rng.uniform()); break;
      }
    }
    out.x.push_back(x);
    out.labels.push_back(static_cast<int>(j));
  }
  return out;
}

double scaled_range_statistic(const UniformLocation& model, std::span<const double> x) {
  if (x.size() < 2) throw DomainError("scaled range needs at least two points");
  const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
  return (2.0 * model.c - (*mx - *mn)) / (2.0 * model.c);
}

double beta2_cdf(double x, double b) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return 1.0 - std::pow(1.0 - x, b) * (1.0 + b * x);
}

double kolmogorov_p_value(double d, std::size_t n) {
  if (n == 0) throw DomainError("KS test needs samples");
  const double rn = std::sqrt(static_cast<double>(n));
  const double lambda = (rn + 0.12 + 0.11 / rn) * d;
  if (!(lambda > 0.0)) return 1.0;
  const double pi = std::numbers::pi;
  double p;
  if (lambda < 1.18) {
    double s = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double j = 2.0 * k - 1.0;
      s += std::exp(-j * j * pi * pi / (8.0 * lambda * lambda));
    }
    p = 1.0 - std::sqrt(2.0 * pi) / lambda * s;
  } else {
    double s = 0.0;
    for (int k = 1; k <= 100; ++k) s += (k % 2 ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
    p = 2.0 * s;
  }
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace dpmk
