#include "uqs/kernels.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <mutex>

namespace uqs {

void require_finite(SampleRef sample)
{
  if (!sample.allFinite()) { throw InvalidArgument("sample contains non-finite coordinates"); }
}

Index binomial(Index n, Index k)
{
  if (k < 0 || n < 0 || k > n) { return 0; }
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (Index i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned __int128>(n - k + i) / static_cast<unsigned __int128>(i);
    if (r > static_cast<unsigned __int128>(std::numeric_limits<Index>::max())) {
      throw std::overflow_error("binomial coefficient C(" + std::to_string(n) + ", " + std::to_string(k) +
                                ") overflows");
    }
  }
  return static_cast<Index>(r);
}

NormSpec parse_norm(std::string_view name)
{
  if (name == "euclidean") { return NormSpec::euclidean; }
  if (name == "manhattan") { return NormSpec::manhattan; }
  if (name == "chebyshev") { return NormSpec::chebyshev; }
  throw InvalidArgument("unknown norm '" + std::string(name) + "' (expected euclidean, manhattan or chebyshev)");
}

std::string_view norm_name(NormSpec norm)
{
  switch (norm) {
  case NormSpec::euclidean: return "euclidean";
  case NormSpec::manhattan: return "manhattan";
  case NormSpec::chebyshev: return "chebyshev";
  }
  return "?";
}

Kernel::Kernel(std::string name, int degree, Fn fn, Index dimension)
  : name_(std::move(name))
  , degree_(degree)
  , fn_(std::move(fn))
  , dimension_(dimension)
{
  if (degree_ < 1) { throw InvalidArgument("kernel degree must be >= 1"); }
  if (!fn_) { throw InvalidArgument("kernel '" + name_ + "' has no evaluation function"); }
}

Kernel::Kernel(std::string name, int degree, Fn fn, Index dimension, PairOrder order, PairFn pair)
  : Kernel(std::move(name), degree, std::move(fn), dimension)
{
  if (order != PairOrder::none && (degree != 2 || pair == nullptr)) {
    throw InvalidArgument("pair fast path requires a degree-2 kernel with a pair function");
  }
  order_ = order;
  pair_ = pair;
}

bool Kernel::has_fast_path(SampleRef sample) const
{
  return order_ != PairOrder::none && sample.cols() == 1;
}

void Kernel::check_sample(SampleRef sample) const
{
  if (dimension_ != 0 && sample.cols() != dimension_) {
    throw InvalidArgument("kernel '" + name_ + "' requires points of dimension " + std::to_string(dimension_) +
                          ", got " + std::to_string(sample.cols()));
  }
  if (sample.cols() < 1) { throw InvalidArgument("sample points must have dimension >= 1"); }
  if (sample.rows() < degree_) {
    throw InvalidArgument("sample size n = " + std::to_string(sample.rows()) + " is smaller than kernel degree m = " +
                          std::to_string(degree_));
  }
}

double Kernel::evaluate(SampleRef points) const
{
  if (points.rows() < degree_) { throw InvalidArgument("kernel '" + name_ + "' needs " + std::to_string(degree_) + " points"); }
  check_sample(points);
  std::vector<Index> idx(static_cast<std::size_t>(degree_));
  for (int i = 0; i < degree_; ++i) { idx[static_cast<std::size_t>(i)] = i; }
  return fn_(points, idx);
}

double Kernel::evaluate(std::vector<Point> const &points) const
{
  if (points.size() != static_cast<std::size_t>(degree_)) {
    throw InvalidArgument("kernel '" + name_ + "' takes " + std::to_string(degree_) + " points, got " +
                          std::to_string(points.size()));
  }
  Index const d = points.front().size();
  Sample rows(degree_, d);
  for (int i = 0; i < degree_; ++i) {
    if (points[static_cast<std::size_t>(i)].size() != d) {
      throw InvalidArgument("kernel '" + name_ + "': points have mismatched dimensions");
    }
    rows.row(i) = points[static_cast<std::size_t>(i)].transpose();
  }
  return evaluate(rows);
}

namespace {

double walsh_pair(double a, double b) { return (a + b) / 2.0; }

// All three norms reduce to |a - b| on the line.
double abs_diff_pair(double a, double b) { return std::abs(a - b); }

} // namespace

Kernel walsh_average_kernel()
{
  return Kernel(
    "walsh", 2,
    [](SampleRef const &s, std::span<const Index> idx) { return walsh_pair(s(idx[0], 0), s(idx[1], 0)); }, 1,
    PairOrder::sum, &walsh_pair);
}

Kernel mwise_mean_kernel(int m)
{
  if (m < 1) { throw InvalidArgument("mean kernel degree must be >= 1"); }
  if (m == 2) {
    // Sorting two values before adding them is the same as adding them: reuse the pair path.
    return Kernel("mean:2", 2,
                  [](SampleRef const &s, std::span<const Index> idx) { return walsh_pair(s(idx[0], 0), s(idx[1], 0)); },
                  1, PairOrder::sum, &walsh_pair);
  }
  auto fn = [m](SampleRef const &s, std::span<const Index> idx) {
    // Summation in sorted order makes the result independent of argument order.
    constexpr int small = 16;
    std::array<double, small> buf;
    std::vector<double>       heap;
    double                   *v = buf.data();
    if (m > small) {
      heap.resize(static_cast<std::size_t>(m));
      v = heap.data();
    }
    for (int i = 0; i < m; ++i) { v[i] = s(idx[static_cast<std::size_t>(i)], 0); }
    std::sort(v, v + m);
    double sum = 0.0;
    for (int i = 0; i < m; ++i) { sum += v[i]; }
    return sum / m;
  };
  return Kernel("mean:" + std::to_string(m), m, fn, 1);
}

Kernel distance_kernel(NormSpec norm)
{
  auto fn = [norm](SampleRef const &s, std::span<const Index> idx) {
    if (s.cols() == 1) { return abs_diff_pair(s(idx[0], 0), s(idx[1], 0)); }
    return norm_of(norm, s.row(idx[0]) - s.row(idx[1]));
  };
  return Kernel("dist:" + std::string(norm_name(norm)), 2, fn, 0, PairOrder::abs_difference, &abs_diff_pair);
}

Kernel constant_kernel(double c, int degree)
{
  return Kernel("const", degree, [c](SampleRef const &, std::span<const Index>) { return c; }, 0);
}

namespace {

struct Registry {
  std::mutex                                                     mutex;
  std::map<std::string, std::function<Kernel(std::string_view)>, std::less<>> factories;
};

Registry &registry()
{
  static Registry r;
  return r;
}

} // namespace

void register_kernel(std::string prefix, std::function<Kernel(std::string_view)> factory)
{
  auto &r = registry();
  std::lock_guard lock(r.mutex);
  r.factories[std::move(prefix)] = std::move(factory);
}

Kernel kernel_from_name(std::string_view name)
{
  auto const       colon = name.find(':');
  std::string_view head = name.substr(0, colon);
  std::string_view arg = colon == std::string_view::npos ? std::string_view{} : name.substr(colon + 1);

  if (head == "walsh" && colon == std::string_view::npos) { return walsh_average_kernel(); }
  if (head == "mean") {
    int m = 0;
    auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), m);
    if (ec != std::errc{} || ptr != arg.data() + arg.size() || m < 1) {
      throw InvalidArgument("kernel '" + std::string(name) + "': expected mean:<m> with integer m >= 1");
    }
    return mwise_mean_kernel(m);
  }
  if (head == "dist") { return distance_kernel(parse_norm(arg)); }

  auto &r = registry();
  std::lock_guard lock(r.mutex);
  if (auto it = r.factories.find(head); it != r.factories.end()) { return it->second(arg); }
  throw InvalidArgument("unknown kernel '" + std::string(name) + "' (expected walsh, mean:<m>, dist:<norm>)");
}

} // namespace uqs
