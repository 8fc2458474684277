#pragma once

#include "uqs/engine.hpp"
#include "uqs/random.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace uqs {

struct AsymptoticConfig {
  EngineConfig  engine;
  Backend       backend = Backend::automatic;
  // Per-point conditional probabilities use every (m-1)-subset up to this many,
  // otherwise a uniform random subsample of this size.
  Index         zeta_subset_budget = 100'000;
  // Kernel values used by the density estimate when C(n, m) exceeds the cap.
  Index         density_subsample = 1'000'000;
  std::uint64_t seed = default_seed;
};

struct ZetaEstimate {
  double value = 0.0;
  double p_hat = 0.0;       // count_leq(H_pn) / N
  bool   subsampled = false;
  bool   positive() const { return value > 0.0; }
};

/// Plug-in estimate of zeta at the sample quantile H_pn:
///
///   zeta_hat = mean_i g(i)^2 - p_hat^2,
///   g(i)     = fraction of (m-1)-subsets J of the other points with h(x_i, J) <= H_pn.
///
/// Requires n >= 2m - 1. A nonpositive result is returned as is; callers that
/// need zeta > 0 check positive().
ZetaEstimate zeta_plugin(SampleRef sample, Kernel const &kernel, QuantileSpec spec, AsymptoticConfig const &config = {});

// Same, at a precomputed quantile estimate.
ZetaEstimate zeta_plugin_at(SampleRef sample, Kernel const &kernel, UQuantileEstimate const &estimate,
                            AsymptoticConfig const &config = {});

// 0.9 * min(sd, IQR / 1.34) * N^(-1/5). Throws DegenerateDistribution on zero IQR.
double silverman_bandwidth(std::span<const double> values);

// Gaussian kernel density estimate at `at`.
double gaussian_kde(std::span<const double> values, double at, double bandwidth);

struct DensityEstimate {
  double value = 0.0;
  double bandwidth = 0.0;
  bool   subsampled = false;
};

/// Gaussian KDE of the kernel-value distribution evaluated at H_pn. Uses all
/// C(n, m) values, or a uniform random subsample of m-subsets above the
/// materialization cap. Bandwidth defaults to Silverman's rule on the values.
DensityEstimate density_at_quantile(SampleRef sample, Kernel const &kernel, QuantileSpec spec,
                                    std::optional<double> bandwidth = std::nullopt,
                                    AsymptoticConfig const &config = {});

DensityEstimate density_at_value(SampleRef sample, Kernel const &kernel, double at,
                                 std::optional<double> bandwidth = std::nullopt, AsymptoticConfig const &config = {});

// Standard normal quantile z with Phi(z) = q.
double normal_quantile(double q);
double normal_cdf(double z);

// m * sqrt(zeta) / (density * sqrt(n)).
double standard_error(int degree, double zeta, double density, Index n);

struct AsymptoticSummary {
  double point = 0.0;
  Index  n = 0;
  int    degree = 0;
  Index  total_count = 0;
  Index  selected_rank = 0;
  Index  tie_count = 0;
  double zeta_hat = 0.0;
  double density_hat = 0.0;
  double bandwidth = 0.0;
  double std_error = 0.0;
  double confidence_level = 0.0;
  double ci_lower = 0.0;
  double ci_upper = 0.0;
  std::vector<std::string> warnings;
};

/// Point estimate with plug-in normal-approximation interval
/// point +/- z_{(1+level)/2} * m sqrt(zeta_hat) / (f_hat sqrt(n)).
///
/// Throws HypothesisViolation naming "zeta > 0" or "F'(H_p) > 0" when the
/// plug-in constants cannot support the interval.
AsymptoticSummary asymptotic_summary(SampleRef sample, Kernel const &kernel, QuantileSpec spec, double confidence_level,
                                     AsymptoticConfig const &config = {}, std::optional<double> bandwidth = std::nullopt);

// Left and right derivatives of F at the population quantile; both > 0.
struct OnesidedConstants {
  double left_derivative = 0.0;
  double right_derivative = 0.0;
};

struct AsymmetricInterval {
  double lower = 0.0;
  double upper = 0.0;
  double lower_std_error = 0.0; // scale of positive deviations, from the right derivative
  double upper_std_error = 0.0; // scale of negative deviations, from the left derivative
};

/// Interval when F has distinct one-sided derivatives at the quantile. Positive
/// deviations of the estimate are scaled by the right derivative and negative
/// ones by the left, so the lower endpoint uses F'(H_p+) and the upper F'(H_p-).
AsymmetricInterval asymmetric_interval(double point, double zeta, int degree, Index n, OnesidedConstants constants,
                                       double confidence_level);

struct EfficiencyInput {
  double zeta1 = 0.0;
  double zeta = 0.0;
  double density_at_mu = 0.0;
  double mu = 0.0;
};

// Asymptotic relative efficiency of the median-type statistic against the U-statistic: f(mu)^2 zeta1 / zeta.
double efficiency(EfficiencyInput const &input);

} // namespace uqs
