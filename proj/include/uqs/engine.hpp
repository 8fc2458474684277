#pragma once

#include "uqs/kernels.hpp"

#include <span>
#include <vector>

namespace uqs {

// Probability level of the quantile; 0 < p < 1 strictly.
class QuantileSpec {
public:
  explicit QuantileSpec(double p);
  double p() const { return p_; }

  // k = ceil(p * N), clamped to [1, N].
  Index rank(Index total) const;

private:
  double p_;
};

enum class Backend { exact, fast, automatic };

Backend parse_backend(std::string_view name);

struct UQuantileEstimate {
  double value = 0.0;      // k-th smallest kernel value
  Index  total_count = 0;  // N = C(n, m)
  Index  selected_rank = 0; // k
  Index  tie_count = 0;    // kernel values exactly equal to `value`
};

struct EngineConfig {
  Index materialization_cap = 50'000'000;
};

/// Calls `f(std::span<const Index>)` for every strictly increasing m-tuple of
/// {0, ..., n-1} in lexicographic order.
template <typename F> void for_each_subset(Index n, Index m, F &&f)
{
  if (m < 0 || m > n) { return; }
  std::vector<Index> idx(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) { idx[static_cast<std::size_t>(i)] = i; }
  while (true) {
    f(std::span<const Index>(idx));
    Index i = m - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - m + i) { --i; }
    if (i < 0) { return; }
    ++idx[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < m; ++j) { idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1; }
  }
}

// All C(n, m) kernel values in lexicographic index-tuple order.
std::vector<double> enumerate_kernel_values(SampleRef sample, Kernel const &kernel, EngineConfig const &config = {});

// Number of index tuples whose kernel value is <= threshold.
Index count_leq(SampleRef sample, Kernel const &kernel, double threshold);

/// Sample p-quantile of the C(n, m) kernel values: the ceil(pN)-th smallest.
///
/// For p = 1/2 and even N this is the lower median, not the midpoint of the two
/// central values. `automatic` picks the pair fast path when the kernel has one
/// for the sample, otherwise enumeration.
UQuantileEstimate u_quantile(SampleRef sample, Kernel const &kernel, QuantileSpec spec,
                             Backend backend = Backend::automatic, EngineConfig const &config = {});

/// Selection over pair values without materializing them: the smallest
/// threshold t with count_leq(t) >= k, found by bisection over the ordered
/// bit patterns of doubles. The result is always a realized kernel value and
/// equals the exact backend bit for bit.
UQuantileEstimate u_quantile_fast_pairsum(SampleRef sample, Kernel const &kernel, QuantileSpec spec);

/// Sorted scalar sample with O(n) threshold counting for a pair-ordered kernel.
class SortedPairCounter {
public:
  SortedPairCounter(SampleRef sample, Kernel const &kernel);

  Index  size() const { return static_cast<Index>(sorted_.size()); }
  Index  total() const { return size() * (size() - 1) / 2; }
  double min_value() const;
  double max_value() const;

  Index count_leq(double threshold) const;

  // Number of j != i with h(x_i, x_j) <= threshold, for the point with value x.
  Index count_partners_leq(double x, double threshold) const;

  std::span<const double> sorted() const { return sorted_; }

private:
  std::vector<double> sorted_;
  PairOrder           order_;
  Kernel::PairFn      pair_;
};

} // namespace uqs
