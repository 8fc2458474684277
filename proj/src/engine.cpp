#include "uqs/engine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

namespace uqs {

QuantileSpec::QuantileSpec(double p)
  : p_(p)
{
  if (!(p > 0.0 && p < 1.0)) {
    throw InvalidArgument("quantile level p must lie strictly between 0 and 1 (p = 0 and p = 1 are extremes, "
                          "not quantiles), got " + std::to_string(p));
  }
}

Index QuantileSpec::rank(Index total) const
{
  auto const k = static_cast<Index>(std::ceil(p_ * static_cast<double>(total)));
  return std::clamp<Index>(k, 1, total);
}

Backend parse_backend(std::string_view name)
{
  if (name == "exact") { return Backend::exact; }
  if (name == "fast") { return Backend::fast; }
  if (name == "auto") { return Backend::automatic; }
  throw InvalidArgument("unknown backend '" + std::string(name) + "' (expected exact, fast or auto)");
}

namespace {

void check_inputs(SampleRef sample, Kernel const &kernel)
{
  kernel.check_sample(sample);
  require_finite(sample);
}

// Signed zeros compare equal; report +0 so both backends agree on the bit pattern.
double canonical(double v) { return v + 0.0; }

// Monotone map from doubles (excluding NaN) to unsigned integers.
std::uint64_t ordered_key(double x)
{
  auto const u = std::bit_cast<std::uint64_t>(x);
  return (u >> 63) ? ~u : (u | (std::uint64_t{1} << 63));
}

double from_ordered_key(std::uint64_t k)
{
  auto const u = (k >> 63) ? (k & ~(std::uint64_t{1} << 63)) : ~k;
  return std::bit_cast<double>(u);
}

} // namespace

std::vector<double> enumerate_kernel_values(SampleRef sample, Kernel const &kernel, EngineConfig const &config)
{
  check_inputs(sample, kernel);
  Index const total = binomial(sample.rows(), kernel.degree());
  if (total > config.materialization_cap) {
    throw CapExceeded("C(" + std::to_string(sample.rows()) + ", " + std::to_string(kernel.degree()) + ") = " +
                      std::to_string(total) + " kernel values exceed the materialization cap of " +
                      std::to_string(config.materialization_cap) + "; use the fast backend");
  }
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(total));
  for_each_subset(sample.rows(), kernel.degree(), [&](std::span<const Index> idx) { values.push_back(kernel(sample, idx)); });
  return values;
}

SortedPairCounter::SortedPairCounter(SampleRef sample, Kernel const &kernel)
  : order_(kernel.pair_order())
  , pair_(kernel.pair_fn())
{
  if (!kernel.has_fast_path(sample)) {
    throw InvalidArgument("kernel '" + kernel.name() + "' has no pair fast path for samples of dimension " +
                          std::to_string(sample.cols()));
  }
  sorted_.assign(sample.col(0).begin(), sample.col(0).end());
  std::sort(sorted_.begin(), sorted_.end());
}

double SortedPairCounter::min_value() const
{
  auto const &s = sorted_;
  if (order_ == PairOrder::sum) { return pair_(s[0], s[1]); }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < s.size(); ++i) { best = std::min(best, pair_(s[i], s[i + 1])); }
  return best;
}

double SortedPairCounter::max_value() const
{
  auto const &s = sorted_;
  if (order_ == PairOrder::sum) { return pair_(s[s.size() - 2], s[s.size() - 1]); }
  return pair_(s.front(), s.back());
}

Index SortedPairCounter::count_leq(double threshold) const
{
  auto const &s = sorted_;
  auto const  n = static_cast<Index>(s.size());
  Index       count = 0;
  if (order_ == PairOrder::sum) {
    // For each i the admissible partners form a prefix whose end only moves left as i grows.
    Index j = n - 1;
    for (Index i = 0; i < n; ++i) {
      while (j > i && !(pair_(s[i], s[j]) <= threshold)) { --j; }
      if (j <= i) { break; }
      count += j - i;
    }
  } else {
    // For each j the admissible partners i < j form a suffix whose start only moves right.
    Index i = 0;
    for (Index j = 1; j < n; ++j) {
      while (i < j && !(pair_(s[i], s[j]) <= threshold)) { ++i; }
      count += j - i;
    }
  }
  return count;
}

Index SortedPairCounter::count_partners_leq(double x, double threshold) const
{
  auto const &s = sorted_;
  Index       within = 0;
  if (order_ == PairOrder::sum) {
    auto it = std::partition_point(s.begin(), s.end(), [&](double v) { return pair_(x, v) <= threshold; });
    within = it - s.begin();
  } else {
    auto lo = std::partition_point(s.begin(), s.end(), [&](double v) { return v < x && !(pair_(x, v) <= threshold); });
    auto hi = std::partition_point(s.begin(), s.end(), [&](double v) { return v < x || pair_(x, v) <= threshold; });
    within = hi - lo;
  }
  if (pair_(x, x) <= threshold) { --within; }
  return within;
}

Index count_leq(SampleRef sample, Kernel const &kernel, double threshold)
{
  check_inputs(sample, kernel);
  if (kernel.has_fast_path(sample)) { return SortedPairCounter(sample, kernel).count_leq(threshold); }
  Index count = 0;
  for_each_subset(sample.rows(), kernel.degree(), [&](std::span<const Index> idx) {
    if (kernel(sample, idx) <= threshold) { ++count; }
  });
  return count;
}

UQuantileEstimate u_quantile_fast_pairsum(SampleRef sample, Kernel const &kernel, QuantileSpec spec)
{
  check_inputs(sample, kernel);
  SortedPairCounter const counter(sample, kernel);

  UQuantileEstimate est;
  est.total_count = counter.total();
  est.selected_rank = spec.rank(est.total_count);
  Index const k = est.selected_rank;

  double const lo_value = counter.min_value();
  double       result = lo_value;
  if (counter.count_leq(lo_value) < k) {
    std::uint64_t lo = ordered_key(lo_value);
    std::uint64_t hi = ordered_key(counter.max_value());
    // count_leq(from_key(lo)) < k <= count_leq(from_key(hi))
    while (hi - lo > 1) {
      std::uint64_t const mid = lo + (hi - lo) / 2;
      if (counter.count_leq(from_ordered_key(mid)) >= k) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    result = from_ordered_key(hi);
  }
  est.value = canonical(result);
  double const below = std::nextafter(est.value, -std::numeric_limits<double>::infinity());
  est.tie_count = counter.count_leq(est.value) - counter.count_leq(below);
  return est;
}

UQuantileEstimate u_quantile(SampleRef sample, Kernel const &kernel, QuantileSpec spec, Backend backend,
                             EngineConfig const &config)
{
  check_inputs(sample, kernel);
  bool const fast_ok = kernel.has_fast_path(sample);
  if (backend == Backend::fast && !fast_ok) {
    throw InvalidArgument("backend 'fast' is not available for kernel '" + kernel.name() + "' on " +
                          std::to_string(sample.cols()) + "-dimensional points");
  }
  if (backend == Backend::fast || (backend == Backend::automatic && fast_ok)) {
    return u_quantile_fast_pairsum(sample, kernel, spec);
  }

  auto values = enumerate_kernel_values(sample, kernel, config);
  UQuantileEstimate est;
  est.total_count = static_cast<Index>(values.size());
  est.selected_rank = spec.rank(est.total_count);
  auto const nth = values.begin() + (est.selected_rank - 1);
  std::nth_element(values.begin(), nth, values.end());
  est.value = canonical(*nth);
  est.tie_count = std::count(values.begin(), values.end(), est.value);
  return est;
}

} // namespace uqs
