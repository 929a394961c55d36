#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace dpmk {

/// Ordered tuple of positive parts; an element of F_s(n).
struct Composition {
  std::vector<int> parts;
  int total() const;
};

/// Partition of {0..n-1}; blocks sorted internally and ordered by smallest element.
struct SetPartition {
  std::vector<std::vector<int>> blocks;
  int block_count() const { return static_cast<int>(blocks.size()); }
};

inline constexpr int kMaxEnumeratedPartitionSize = 13;

/// Visit every composition of n into s positive parts (lexicographic).
void for_each_composition(int n, int s, const std::function<void(std::span<const int>)>& visit);
std::vector<Composition> enumerate_compositions(int n, int s);

/// Visit every set partition of {0..n-1} as a list of block bitmasks in
/// canonical order. Throws ResourceError above kMaxEnumeratedPartitionSize.
void for_each_set_partition(int n, const std::function<void(std::span<const std::uint32_t>)>& visit);

/// All set partitions of {0..n-1}; when blocks > 0 only those with that many blocks.
std::vector<SetPartition> enumerate_set_partitions(int n, int blocks = 0);

std::uint64_t binomial(int n, int k);
std::uint64_t bell_number(int n);

/// Table of log partial Bell sums
///   log B_{m,k} = log sum_{A in tau_k(m)} prod_j w_{|A_j|}
/// for all m <= n_max and k <= s_max. Columns depend only on the previous
/// column, so extend() appends more block counts without recomputation.
class PartialBellTable {
 public:
  /// log_w[a-1] = log w_a, a = 1..n_max.
  PartialBellTable(std::vector<double> log_w, int n_max, int s_max);

  void extend(int s_max);

  /// log B_{m,k}; -inf for k > m. Requires 1 <= m <= n_max, 1 <= k <= s_max.
  double log_value(int m, int k) const;

  int n_max() const { return n_max_; }
  int s_max() const { return static_cast<int>(egf_.size()); }

 private:
  void add_column();

  int n_max_;
  std::vector<double> log_coeff_;           // log(w_i / (i-1)!), index i
  std::vector<double> log_inv_m_;           // -log m, index m
  std::vector<std::vector<double>> egf_;    // egf_[k-1][m] = log(B_{m,k}/m!)
};

/// log B_{n,s} for size-only weights. Requires log_w.size() >= n.
double partial_bell_log_sum(std::span<const double> log_w, int n, int s);

}  // namespace dpmk
