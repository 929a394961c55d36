#include "dpmk/combinatorics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "dpmk/error.hpp"
#include "dpmk/numerics.hpp"

namespace dpmk {

int Composition::total() const { return std::accumulate(parts.begin(), parts.end(), 0); }

void for_each_composition(int n, int s, const std::function<void(std::span<const int>)>& visit) {
  if (n < 1 || s < 1) throw DomainError("compositions: n and s must be positive");
  if (s > n) throw DomainError("compositions: s > n");
  std::vector<int> parts(s, 1);
  parts[s - 1] = n - (s - 1);
  // Lexicographic successor: bump the rightmost part whose suffix has slack.
  while (true) {
    visit(parts);
    int i = s - 2;
    int suffix = parts[s - 1];
    while (i >= 0 && suffix == s - 1 - i) {
      suffix += parts[i];
      --i;
    }
    if (i < 0) return;
    ++parts[i];
    --suffix;
    for (int j = i + 1; j < s - 1; ++j) parts[j] = 1;
    parts[s - 1] = suffix - (s - 2 - i);
  }
}

std::vector<Composition> enumerate_compositions(int n, int s) {
  std::vector<Composition> out;
  for_each_composition(n, s, [&](std::span<const int> p) { out.push_back({{p.begin(), p.end()}}); });
  return out;
}

namespace {

void partition_recurse(int i, int n, std::vector<std::uint32_t>& masks,
                       const std::function<void(std::span<const std::uint32_t>)>& visit) {
  if (i == n) {
    visit(masks);
    return;
  }
  const std::uint32_t bit = 1u << i;
  for (std::size_t b = 0; b < masks.size(); ++b) {
    masks[b] |= bit;
    partition_recurse(i + 1, n, masks, visit);
    masks[b] &= ~bit;
  }
  masks.push_back(bit);
  partition_recurse(i + 1, n, masks, visit);
  masks.pop_back();
}

}  // namespace

void for_each_set_partition(int n, const std::function<void(std::span<const std::uint32_t>)>& visit) {
  if (n < 1) throw DomainError("set partitions: n must be positive");
  if (n > kMaxEnumeratedPartitionSize)
    throw ResourceError("set partitions: n = " + std::to_string(n) + " exceeds enumeration cap " +
                        std::to_string(kMaxEnumeratedPartitionSize));
  std::vector<std::uint32_t> masks;
  masks.reserve(n);
  partition_recurse(0, n, masks, visit);
}

std::vector<SetPartition> enumerate_set_partitions(int n, int blocks) {
  std::vector<SetPartition> out;
  for_each_set_partition(n, [&](std::span<const std::uint32_t> masks) {
    if (blocks > 0 && static_cast<int>(masks.size()) != blocks) return;
    SetPartition p;
    for (auto m : masks) {
      std::vector<int> block;
      for (int i = 0; i < n; ++i)
        if (m & (1u << i)) block.push_back(i);
      p.blocks.push_back(std::move(block));
    }
    out.push_back(std::move(p));
  });
  return out;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

std::uint64_t bell_number(int n) {
  // Bell triangle.
  std::vector<std::uint64_t> row{1};
  for (int i = 1; i <= n; ++i) {
    std::vector<std::uint64_t> next{row.back()};
    for (auto v : row) next.push_back(next.back() + v);
    row = std::move(next);
  }
  return row.front();
}

PartialBellTable::PartialBellTable(std::vector<double> log_w, int n_max, int s_max) : n_max_(n_max) {
  if (n_max < 1) throw DomainError("partial Bell table: n_max must be positive");
  if (static_cast<int>(log_w.size()) < n_max) throw DomainError("partial Bell table: weight vector shorter than n");
  log_coeff_.assign(n_max + 1, kNegInf);
  log_inv_m_.assign(n_max + 1, 0.0);
  for (int i = 1; i <= n_max; ++i) {
    const double lw = log_w[i - 1];
    if (std::isnan(lw) || lw == std::numeric_limits<double>::infinity())
      throw DomainError("partial Bell table: weights must be finite or -inf in log domain");
    log_coeff_[i] = lw - std::lgamma(static_cast<double>(i));
    log_inv_m_[i] = -std::log(static_cast<double>(i));
  }
  extend(s_max);
}

void PartialBellTable::extend(int s_max) {
  s_max = std::min(s_max, n_max_);
  while (static_cast<int>(egf_.size()) < s_max) add_column();
}

void PartialBellTable::add_column() {
  const int k = static_cast<int>(egf_.size()) + 1;
  std::vector<double> col(n_max_ + 1, kNegInf);
  if (k == 1) {
    for (int m = 1; m <= n_max_; ++m) col[m] = log_coeff_[m] + log_inv_m_[m];
  } else {
    const std::vector<double>& prev = egf_.back();
    const double* coeff = log_coeff_.data();
    std::vector<double> terms(n_max_ + 1);
    for (int m = k; m <= n_max_; ++m) {
      // E_{m,k} = (1/m) sum_{i=1}^{m-k+1} c_i E_{m-i,k-1}
      const int top = m - k + 1;
      const double* p = prev.data() + m;
      double* t = terms.data();
      double mx = kNegInf;
      for (int i = 1; i <= top; ++i) {
        const double v = coeff[i] + p[-i];
        t[i] = v;
        mx = v > mx ? v : mx;
      }
      if (mx == kNegInf) continue;
      double sum = 0.0;
      for (int i = 1; i <= top; ++i) sum += std::exp(t[i] - mx);
      col[m] = mx + std::log(sum) + log_inv_m_[m];
    }
  }
  egf_.push_back(std::move(col));
}

double PartialBellTable::log_value(int m, int k) const {
  if (m < 1 || m > n_max_) throw DomainError("partial Bell table: m out of range");
  if (k < 1) throw DomainError("partial Bell table: k must be positive");
  if (k > m) return kNegInf;
  if (k > s_max()) throw DomainError("partial Bell table: k beyond computed columns");
  return egf_[k - 1][m] + std::lgamma(static_cast<double>(m) + 1.0);
}

double partial_bell_log_sum(std::span<const double> log_w, int n, int s) {
  if (s < 1 || n < 1) throw DomainError("partial_bell_log_sum: n and s must be positive");
  if (s > n) throw DomainError("partial_bell_log_sum: s > n");
  if (static_cast<int>(log_w.size()) < n) throw DomainError("partial_bell_log_sum: weight vector shorter than n");
  PartialBellTable table({log_w.begin(), log_w.begin() + n}, n, s);
  return table.log_value(n, s);
}

}  // namespace dpmk
