#include "uqs/asymptotics.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

namespace uqs {

namespace {

std::string num(double v)
{
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Uniform random k-subset of {0, ..., n-1}, sorted (Floyd's algorithm).
void random_subset(Index n, Index k, Rng &rng, std::vector<Index> &out)
{
  out.clear();
  for (Index j = n - k; j < n; ++j) {
    std::uniform_int_distribution<Index> pick(0, j);
    Index const t = pick(rng);
    if (std::find(out.begin(), out.end(), t) == out.end()) {
      out.push_back(t);
    } else {
      out.push_back(j);
    }
  }
  std::sort(out.begin(), out.end());
}

// Index tuple for point i together with `others`, given as positions among the n-1 points other than i.
void with_point(Index i, std::span<const Index> others, std::vector<Index> &tuple)
{
  tuple.clear();
  bool placed = false;
  for (Index o : others) {
    Index const j = o < i ? o : o + 1;
    if (!placed && j > i) {
      tuple.push_back(i);
      placed = true;
    }
    tuple.push_back(j);
  }
  if (!placed) { tuple.push_back(i); }
}

constexpr std::uint64_t density_stream = 0xde'5171'7900ULL;

} // namespace

ZetaEstimate zeta_plugin_at(SampleRef sample, Kernel const &kernel, UQuantileEstimate const &estimate,
                            AsymptoticConfig const &config)
{
  kernel.check_sample(sample);
  Index const n = sample.rows();
  Index const m = kernel.degree();
  if (n < 2 * m - 1) {
    throw InvalidArgument("zeta estimation needs n >= 2m - 1 = " + std::to_string(2 * m - 1) + " points, got " +
                          std::to_string(n));
  }
  double const threshold = estimate.value;
  ZetaEstimate z;

  if (kernel.has_fast_path(sample)) {
    SortedPairCounter const counter(sample, kernel);
    double                  sum_sq = 0.0;
    for (Index i = 0; i < n; ++i) {
      double const g = static_cast<double>(counter.count_partners_leq(sample(i, 0), threshold)) / static_cast<double>(n - 1);
      sum_sq += g * g;
    }
    z.p_hat = static_cast<double>(counter.count_leq(threshold)) / static_cast<double>(counter.total());
    z.value = sum_sq / static_cast<double>(n) - z.p_hat * z.p_hat;
    return z;
  }

  Index const per_point = binomial(n - 1, m - 1);
  z.subsampled = per_point > config.zeta_subset_budget;
  Index const draws = z.subsampled ? config.zeta_subset_budget : per_point;

  std::vector<Index> tuple;
  std::vector<Index> subset;
  double             sum_sq = 0.0;
  double             sum_g = 0.0;
  Index              hits_total = 0;
  for (Index i = 0; i < n; ++i) {
    Index hits = 0;
    auto  visit = [&](std::span<const Index> others) {
      with_point(i, others, tuple);
      if (kernel(sample, tuple) <= threshold) { ++hits; }
    };
    if (z.subsampled) {
      Rng rng = stream_rng(config.seed, static_cast<std::uint64_t>(i));
      for (Index r = 0; r < draws; ++r) {
        random_subset(n - 1, m - 1, rng, subset);
        visit(subset);
      }
    } else {
      for_each_subset(n - 1, m - 1, visit);
    }
    double const g = static_cast<double>(hits) / static_cast<double>(draws);
    sum_sq += g * g;
    sum_g += g;
    hits_total += hits;
  }

  Index const total = estimate.total_count > 0 ? estimate.total_count : binomial(n, m);
  if (!z.subsampled) {
    // Every m-tuple is seen once from each of its members.
    z.p_hat = static_cast<double>(hits_total / m) / static_cast<double>(total);
  } else if (total <= config.engine.materialization_cap) {
    z.p_hat = static_cast<double>(count_leq(sample, kernel, threshold)) / static_cast<double>(total);
  } else {
    z.p_hat = sum_g / static_cast<double>(n);
  }
  z.value = sum_sq / static_cast<double>(n) - z.p_hat * z.p_hat;
  return z;
}

ZetaEstimate zeta_plugin(SampleRef sample, Kernel const &kernel, QuantileSpec spec, AsymptoticConfig const &config)
{
  return zeta_plugin_at(sample, kernel, u_quantile(sample, kernel, spec, config.backend, config.engine), config);
}

double silverman_bandwidth(std::span<const double> values)
{
  auto const n = static_cast<Index>(values.size());
  if (n < 2) { throw DegenerateDistribution("bandwidth selection needs at least two kernel values"); }
  std::vector<double> v(values.begin(), values.end());
  auto quantile7 = [&](double q) {
    double const      h = q * static_cast<double>(n - 1);
    auto const        lo = static_cast<Index>(std::floor(h));
    std::nth_element(v.begin(), v.begin() + lo, v.end());
    double const a = v[static_cast<std::size_t>(lo)];
    if (lo + 1 >= n) { return a; }
    double const b = *std::min_element(v.begin() + lo + 1, v.end());
    return a + (h - static_cast<double>(lo)) * (b - a);
  };
  double const iqr = quantile7(0.75) - quantile7(0.25);
  if (!(iqr > 0.0)) {
    throw DegenerateDistribution("kernel values have zero interquartile range; the density F'(H_p) cannot be "
                                 "estimated (theorem hypothesis F'(H̃_p) > 0)");
  }
  double const mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
  double       ss = 0.0;
  for (double x : values) { ss += (x - mean) * (x - mean); }
  double const sd = std::sqrt(ss / static_cast<double>(n - 1));
  return 0.9 * std::min(sd, iqr / 1.34) * std::pow(static_cast<double>(n), -0.2);
}

double gaussian_kde(std::span<const double> values, double at, double bandwidth)
{
  if (!(bandwidth > 0.0)) { throw InvalidArgument("KDE bandwidth must be positive"); }
  if (values.empty()) { throw InvalidArgument("KDE needs at least one value"); }
  double sum = 0.0;
  for (double x : values) {
    double const z = (at - x) / bandwidth;
    sum += std::exp(-0.5 * z * z);
  }
  return sum / (static_cast<double>(values.size()) * bandwidth * std::sqrt(2.0 * std::numbers::pi));
}

DensityEstimate density_at_value(SampleRef sample, Kernel const &kernel, double at, std::optional<double> bandwidth,
                                 AsymptoticConfig const &config)
{
  kernel.check_sample(sample);
  require_finite(sample);
  Index const n = sample.rows();
  Index const m = kernel.degree();
  Index const total = binomial(n, m);

  DensityEstimate     out;
  std::vector<double> values;
  if (total <= config.engine.materialization_cap) {
    values = enumerate_kernel_values(sample, kernel, config.engine);
  } else {
    out.subsampled = true;
    Rng                rng = stream_rng(config.seed, density_stream);
    std::vector<Index> idx;
    values.reserve(static_cast<std::size_t>(config.density_subsample));
    for (Index r = 0; r < config.density_subsample; ++r) {
      random_subset(n, m, rng, idx);
      values.push_back(kernel(sample, idx));
    }
  }
  out.bandwidth = bandwidth ? *bandwidth : silverman_bandwidth(values);
  out.value = gaussian_kde(values, at, out.bandwidth);
  return out;
}

DensityEstimate density_at_quantile(SampleRef sample, Kernel const &kernel, QuantileSpec spec,
                                    std::optional<double> bandwidth, AsymptoticConfig const &config)
{
  auto const est = u_quantile(sample, kernel, spec, config.backend, config.engine);
  return density_at_value(sample, kernel, est.value, bandwidth, config);
}

double normal_quantile(double q) { return boost::math::quantile(boost::math::normal_distribution<double>(), q); }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double standard_error(int degree, double zeta, double density, Index n)
{
  return static_cast<double>(degree) * std::sqrt(zeta) / (density * std::sqrt(static_cast<double>(n)));
}

namespace {

double two_sided_z(double level)
{
  if (!(level >= 0.0 && level < 1.0)) { throw InvalidArgument("confidence level must lie in [0, 1)"); }
  return level == 0.0 ? 0.0 : normal_quantile(0.5 * (1.0 + level));
}

} // namespace

AsymptoticSummary asymptotic_summary(SampleRef sample, Kernel const &kernel, QuantileSpec spec, double confidence_level,
                                     AsymptoticConfig const &config, std::optional<double> bandwidth)
{
  double const z = two_sided_z(confidence_level);
  auto const   est = u_quantile(sample, kernel, spec, config.backend, config.engine);

  AsymptoticSummary s;
  s.point = est.value;
  s.n = sample.rows();
  s.degree = kernel.degree();
  s.total_count = est.total_count;
  s.selected_rank = est.selected_rank;
  s.tie_count = est.tie_count;
  s.confidence_level = confidence_level;

  auto const zeta = zeta_plugin_at(sample, kernel, est, config);
  s.zeta_hat = zeta.value;
  if (!zeta.positive()) {
    throw HypothesisViolation("theorem hypothesis violated: ζ > 0 (plug-in ζ̂ = " + num(zeta.value) + ")");
  }
  auto const density = density_at_value(sample, kernel, est.value, bandwidth, config);
  s.density_hat = density.value;
  s.bandwidth = density.bandwidth;
  if (!(density.value > 0.0)) {
    throw HypothesisViolation("theorem hypothesis violated: F'(H̃_p) > 0 (density estimate f̂ = " + num(density.value) +
                              ")");
  }

  s.std_error = standard_error(s.degree, s.zeta_hat, s.density_hat, s.n);
  s.ci_lower = s.point - z * s.std_error;
  s.ci_upper = s.point + z * s.std_error;

  if (est.tie_count > 1) {
    s.warnings.push_back(std::to_string(est.tie_count) + " kernel values tie at the point estimate");
  }
  if (zeta.subsampled) {
    s.warnings.push_back("zeta_hat uses " + std::to_string(config.zeta_subset_budget) +
                         " random (m-1)-subsets per point instead of all of them");
  }
  if (density.subsampled) {
    s.warnings.push_back("density_hat uses a random subsample of " + std::to_string(config.density_subsample) +
                         " kernel values");
  }
  return s;
}

AsymmetricInterval asymmetric_interval(double point, double zeta, int degree, Index n, OnesidedConstants constants,
                                       double confidence_level)
{
  if (!(zeta > 0.0)) { throw HypothesisViolation("theorem hypothesis violated: ζ > 0 (ζ = " + num(zeta) + ")"); }
  if (!(constants.left_derivative > 0.0)) {
    throw HypothesisViolation("theorem hypothesis violated: F'(H̃_p-) > 0");
  }
  if (!(constants.right_derivative > 0.0)) {
    throw HypothesisViolation("theorem hypothesis violated: F'(H̃_p+) > 0");
  }
  double const       z = two_sided_z(confidence_level);
  AsymmetricInterval out;
  out.lower_std_error = standard_error(degree, zeta, constants.right_derivative, n);
  out.upper_std_error = standard_error(degree, zeta, constants.left_derivative, n);
  out.lower = point - z * out.lower_std_error;
  out.upper = point + z * out.upper_std_error;
  return out;
}

double efficiency(EfficiencyInput const &input)
{
  if (!(input.zeta1 > 0.0) || !(input.zeta > 0.0) || !(input.density_at_mu > 0.0)) {
    throw InvalidArgument("efficiency needs zeta1 > 0, zeta > 0 and f(mu) > 0");
  }
  return input.density_at_mu * input.density_at_mu * input.zeta1 / input.zeta;
}

} // namespace uqs
