#pragma once

#include "uqs/asymptotics.hpp"
#include "uqs/distributions.hpp"
#include "uqs/oracles.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace uqs {

enum class ScenarioMode { scenario, onesided, efficiency, coverage };

ScenarioMode      parse_mode(std::string_view name);
std::string_view  mode_name(ScenarioMode mode);

struct ScenarioSpec {
  Distribution  distribution = Distribution::normal();
  std::string   kernel_name = "walsh";
  double        p = 0.5;
  Index         n = 100;
  Index         replicates = 1000;
  std::uint64_t master_seed = default_seed;
  ScenarioMode  mode = ScenarioMode::scenario;
  double        level = 0.95;  // coverage mode
  // Oracle constants are cached here as JSON when set.
  std::optional<std::filesystem::path> oracle_cache;
  std::uint64_t    oracle_seed = default_seed;
  Index            quantile_draws = 10'000'000;
  QuadratureBudget quadrature;

  // Throws InvalidArgument on violated invariants (replicates >= 1, n >= degree, 0 < p < 1).
  void validate() const;
};

/// Reads the key = value scenario format; '#' starts a comment. Keys:
/// distribution, kernel, p, n, replicates, seed, mode, level, oracle_cache,
/// oracle_seed, quantile_draws, quadrature_outer, quadrature_inner,
/// quadrature_surface. Unknown keys are rejected, all of them named at once.
ScenarioSpec parse_scenario(std::istream &in);
ScenarioSpec load_scenario(std::filesystem::path const &path);

// Population constants used to standardize H_pn.
struct OracleConstants {
  double quantile = 0.0;         // H_p
  double quantile_se = 0.0;
  double zeta = 0.0;
  double zeta_se = 0.0;
  double density_left = 0.0;     // F'(H_p-)
  double density_right = 0.0;    // F'(H_p+)
  double density_se = 0.0;
  int    degree = 0;
  std::string source;

  double asymptotic_variance() const; // m^2 zeta / f^2 (symmetric case)
};

/// Closed forms for walsh / mean:1 / mean:m scenarios on scalar data, Monte
/// Carlo quadrature for dist:<norm> on point clouds. Quadrature results go
/// through the on-disk cache when the scenario names one. Throws
/// OracleUnavailable otherwise, including for heavy-tailed data where the
/// density hypotheses of the limit theorem are not established by any oracle.
OracleConstants scenario_oracle(ScenarioSpec const &spec);

struct EfficiencySummary {
  double ratio = 0.0;                 // Var(U_n) / Var(H_pn)
  double variance_u_statistic = 0.0;  // of sqrt(n) U_n
  double variance_u_quantile = 0.0;   // of sqrt(n) H_pn
};

struct CoverageSummary {
  double coverage = 0.0;   // over replicates with a valid interval
  Index  covered = 0;
  Index  valid = 0;
  Index  refused = 0;      // replicates where zeta_hat <= 0 or f_hat <= 0
  double mean_width = 0.0;
};

struct SimulationReport {
  ScenarioSpec        spec;
  OracleConstants     oracle;
  std::vector<double> estimates;            // H_pn per replicate
  std::vector<double> standardized_values;  // per replicate; NaN for refused coverage replicates
  double ks_distance = 0.0;
  double ks_critical_01 = 0.0;   // alpha = 0.01 asymptotic critical value for `replicates` points
  double empirical_variance = 0.0; // of sqrt(n) (H_pn - H_p)
  double standardized_mean = 0.0;
  double standardized_sd = 0.0;
  double coverage = 0.0;         // oracle-standardized |T| <= z_{0.975}
  double left_tail_ks = 0.0;
  double right_tail_ks = 0.0;
  Index  left_count = 0;
  Index  right_count = 0;
  std::optional<EfficiencySummary> efficiency;
  std::optional<CoverageSummary>   plugin_coverage;
};

SimulationReport run_scenario(ScenarioSpec const &spec, unsigned workers = 1);

/// Limit check with distinct one-sided derivatives: negative deviations are
/// standardized with F'(H_p-), positive ones with F'(H_p+). Each tail is tested
/// against the matching conditional tail of Phi. Requires the kink of a
/// twopiece distribution at the p-quantile, or a density without kink.
SimulationReport run_onesided(ScenarioSpec const &spec, unsigned workers = 1);

// Var(U_n) / Var(H_pn) over replicates, with both statistics computed on each sample.
SimulationReport run_efficiency(ScenarioSpec const &spec, unsigned workers = 1);

// Fraction of plug-in intervals (estimated zeta and f) that contain H_p.
SimulationReport run_coverage(ScenarioSpec const &spec, double level, unsigned workers = 1);

// Dispatches on spec.mode.
SimulationReport run(ScenarioSpec const &spec, unsigned workers = 1);

// sup_t |F_R(t) - Phi(t)|.
double ks_distance_normal(std::vector<double> values);

// sqrt(-ln(alpha / 2) / 2) / sqrt(count).
double ks_critical_value(double alpha, Index count);

struct TailKs {
  double left = 0.0;
  double right = 0.0;
  Index  left_count = 0;
  Index  right_count = 0;
};

// KS distances of the negative values to Phi conditioned on t < 0 and of the
// positive values to Phi conditioned on t > 0. Zeros belong to neither tail.
TailKs tail_ks_normal(std::vector<double> const &values);

} // namespace uqs
