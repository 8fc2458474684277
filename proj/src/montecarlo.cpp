#include "uqs/montecarlo.hpp"

#include "uqs/parallel.hpp"

#include "json.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

namespace uqs {

ScenarioMode parse_mode(std::string_view name)
{
  if (name == "scenario") { return ScenarioMode::scenario; }
  if (name == "onesided") { return ScenarioMode::onesided; }
  if (name == "efficiency") { return ScenarioMode::efficiency; }
  if (name == "coverage") { return ScenarioMode::coverage; }
  throw InvalidArgument("unknown mode '" + std::string(name) + "' (expected scenario, onesided, efficiency, coverage)");
}

std::string_view mode_name(ScenarioMode mode)
{
  switch (mode) {
  case ScenarioMode::scenario: return "scenario";
  case ScenarioMode::onesided: return "onesided";
  case ScenarioMode::efficiency: return "efficiency";
  case ScenarioMode::coverage: return "coverage";
  }
  return "?";
}

void ScenarioSpec::validate() const
{
  if (replicates < 1) { throw InvalidArgument("replicates must be >= 1"); }
  if (!(p > 0.0 && p < 1.0)) { throw InvalidArgument("p must lie strictly between 0 and 1"); }
  if (!(level >= 0.0 && level < 1.0)) { throw InvalidArgument("level must lie in [0, 1)"); }
  auto const kernel = kernel_from_name(kernel_name);
  if (n < kernel.degree()) {
    throw InvalidArgument("n = " + std::to_string(n) + " is smaller than the kernel degree " +
                          std::to_string(kernel.degree()));
  }
  if (kernel.dimension() != 0 && kernel.dimension() != distribution.dimension()) {
    throw InvalidArgument("kernel '" + kernel_name + "' does not accept " + std::to_string(distribution.dimension()) +
                          "-dimensional points from " + distribution.describe());
  }
}

namespace {

std::string_view trim(std::string_view s)
{
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) { s.remove_prefix(1); }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) { s.remove_suffix(1); }
  return s;
}

template <typename T> T parse_number(std::string_view key, std::string_view text)
{
  T v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw InvalidArgument("scenario key '" + std::string(key) + "': cannot parse '" + std::string(text) + "'");
  }
  return v;
}

} // namespace

ScenarioSpec parse_scenario(std::istream &in)
{
  ScenarioSpec                       spec;
  std::map<std::string, std::string> entries;
  std::vector<std::string>           unknown;
  static constexpr std::array known{"distribution",     "kernel",           "p",
                                    "n",                "replicates",       "seed",
                                    "mode",             "level",            "oracle_cache",
                                    "oracle_seed",      "quantile_draws",   "quadrature_outer",
                                    "quadrature_inner", "quadrature_surface"};

  std::string line;
  int         lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view text = line;
    if (auto const hash = text.find('#'); hash != std::string_view::npos) { text = text.substr(0, hash); }
    text = trim(text);
    if (text.empty()) { continue; }
    auto const eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw InvalidArgument("scenario line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    std::string key(trim(text.substr(0, eq)));
    std::string value(trim(text.substr(eq + 1)));
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      unknown.push_back(key);
      continue;
    }
    if (entries.contains(key)) {
      throw InvalidArgument("scenario line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
    entries[key] = value;
  }
  if (!unknown.empty()) {
    std::string msg = "unrecognized scenario keys:";
    for (auto const &k : unknown) { msg += " " + k; }
    throw InvalidArgument(msg);
  }

  for (auto const &[key, value] : entries) {
    if (key == "distribution") {
      spec.distribution = Distribution::parse(value);
    } else if (key == "kernel") {
      spec.kernel_name = value;
    } else if (key == "p") {
      spec.p = parse_number<double>(key, value);
    } else if (key == "n") {
      spec.n = parse_number<Index>(key, value);
    } else if (key == "replicates") {
      spec.replicates = parse_number<Index>(key, value);
    } else if (key == "seed") {
      spec.master_seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "mode") {
      spec.mode = parse_mode(value);
    } else if (key == "level") {
      spec.level = parse_number<double>(key, value);
    } else if (key == "oracle_cache") {
      spec.oracle_cache = std::filesystem::path(value);
    } else if (key == "oracle_seed") {
      spec.oracle_seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "quantile_draws") {
      spec.quantile_draws = parse_number<Index>(key, value);
    } else if (key == "quadrature_outer") {
      spec.quadrature.outer = parse_number<Index>(key, value);
    } else if (key == "quadrature_inner") {
      spec.quadrature.inner = parse_number<Index>(key, value);
    } else if (key == "quadrature_surface") {
      spec.quadrature.surface = parse_number<Index>(key, value);
    }
  }
  spec.validate();
  return spec;
}

ScenarioSpec load_scenario(std::filesystem::path const &path)
{
  std::ifstream in(path);
  if (!in) { throw InvalidArgument("cannot open scenario file '" + path.string() + "'"); }
  return parse_scenario(in);
}

double OracleConstants::asymptotic_variance() const
{
  double const f = 0.5 * (density_left + density_right);
  return static_cast<double>(degree * degree) * zeta / (f * f);
}

namespace {

std::uint64_t fnv1a(std::string_view s)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string exact(double v)
{
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

OracleConstants interpoint_constants(ScenarioSpec const &spec, NormSpec norm)
{
  std::string const key = "interpoint|" + spec.distribution.describe() + "|" + std::string(norm_name(norm)) +
                          "|p=" + exact(spec.p) + "|draws=" + std::to_string(spec.quantile_draws) +
                          "|outer=" + std::to_string(spec.quadrature.outer) +
                          "|inner=" + std::to_string(spec.quadrature.inner) +
                          "|surface=" + std::to_string(spec.quadrature.surface) +
                          "|seed=" + std::to_string(spec.oracle_seed);

  std::optional<std::filesystem::path> file;
  if (spec.oracle_cache) {
    std::ostringstream name;
    name << "oracle-" << std::hex << std::setw(16) << std::setfill('0') << fnv1a(key) << ".json";
    file = *spec.oracle_cache / name.str();
    if (std::ifstream in(*file); in) {
      try {
        auto const j = nlohmann::json::parse(in);
        if (j.at("key").get<std::string>() == key) {
          OracleConstants c;
          c.quantile = j.at("quantile");
          c.quantile_se = j.at("quantile_se");
          c.zeta = j.at("zeta");
          c.zeta_se = j.at("zeta_se");
          c.density_left = c.density_right = j.at("density");
          c.density_se = j.at("density_se");
          c.degree = 2;
          c.source = "Monte Carlo quadrature (cached)";
          return c;
        }
      } catch (nlohmann::json::exception const &) {
        // Unreadable cache entries are recomputed and overwritten.
      }
    }
  }

  auto const theta = interpoint_quantile(spec.distribution, spec.p, norm, spec.quantile_draws, spec.oracle_seed);
  auto const quad = oracle_interpoint(spec.distribution, theta.value, norm, spec.p, spec.quadrature, spec.oracle_seed);
  OracleConstants c;
  c.quantile = theta.value;
  c.quantile_se = theta.std_error;
  c.zeta = quad.zeta;
  c.zeta_se = quad.zeta_se;
  c.density_left = c.density_right = quad.f_theta;
  c.density_se = quad.f_theta_se;
  c.degree = 2;
  c.source = "Monte Carlo quadrature";

  if (file) {
    std::filesystem::create_directories(*spec.oracle_cache);
    nlohmann::json j{{"key", key},          {"quantile", c.quantile}, {"quantile_se", c.quantile_se},
                     {"zeta", c.zeta},      {"zeta_se", c.zeta_se},   {"density", c.density_left},
                     {"density_se", c.density_se}};
    std::ofstream out(*file);
    out << std::setprecision(17) << j.dump(2) << "\n";
  }
  return c;
}

void require_median(ScenarioSpec const &spec)
{
  if (spec.p != 0.5) {
    throw OracleUnavailable("closed-form constants for kernel '" + spec.kernel_name + "' exist only at p = 0.5");
  }
}

} // namespace

OracleConstants scenario_oracle(ScenarioSpec const &spec)
{
  spec.validate();
  auto const  kernel = kernel_from_name(spec.kernel_name);
  auto const &g = spec.distribution;
  std::string_view const name = spec.kernel_name;

  if (name.starts_with("dist:")) { return interpoint_constants(spec, parse_norm(name.substr(5))); }

  OracleConstants c;
  c.degree = kernel.degree();
  if (name == "walsh" || name == "mean:2") {
    require_median(spec);
    auto const hl = oracle_hl(g);
    c.quantile = hl.center;
    c.zeta = hl.zeta;
    c.density_left = c.density_right = hl.density_at_center;
    c.source = "closed form (Walsh average)";
    return c;
  }
  if (name == "mean:1") {
    if (!g.is_scalar() || g.family() == Distribution::Family::cube || g.family() == Distribution::Family::mvnormal) {
      throw OracleUnavailable("identity-kernel oracle needs a scalar distribution");
    }
    c.quantile = g.quantile(spec.p);
    c.zeta = spec.p * (1.0 - spec.p);
    c.density_left = g.pdf_left(c.quantile);
    c.density_right = g.pdf_right(c.quantile);
    c.source = "closed form (sample quantile)";
    if (!(c.density_left > 0.0 && c.density_right > 0.0)) {
      throw OracleUnavailable("density of " + g.describe() + " vanishes at its " + exact(spec.p) + "-quantile");
    }
    return c;
  }
  if (name.starts_with("mean:")) {
    require_median(spec);
    auto const o = oracle_mwise_mean(g, kernel.degree());
    c.quantile = o.center;
    c.zeta = o.zeta;
    c.density_left = c.density_right = o.density_at_center;
    c.source = "quadrature (m-wise mean)";
    return c;
  }
  throw OracleUnavailable("no oracle constants for kernel '" + spec.kernel_name + "' on " + g.describe());
}

double ks_distance_normal(std::vector<double> values)
{
  std::erase_if(values, [](double v) { return std::isnan(v); });
  if (values.empty()) { return 0.0; }
  std::sort(values.begin(), values.end());
  auto const r = static_cast<double>(values.size());
  double     d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    double const phi = normal_cdf(values[i]);
    d = std::max({d, static_cast<double>(i + 1) / r - phi, phi - static_cast<double>(i) / r});
  }
  return d;
}

double ks_critical_value(double alpha, Index count)
{
  return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(static_cast<double>(count));
}

TailKs tail_ks_normal(std::vector<double> const &values)
{
  std::vector<double> left;
  std::vector<double> right;
  for (double v : values) {
    if (v < 0.0) { left.push_back(v); }
    if (v > 0.0) { right.push_back(v); }
  }
  auto ks = [](std::vector<double> &xs, auto cdf) {
    std::sort(xs.begin(), xs.end());
    auto const r = static_cast<double>(xs.size());
    double     d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      double const c = cdf(xs[i]);
      d = std::max({d, static_cast<double>(i + 1) / r - c, c - static_cast<double>(i) / r});
    }
    return d;
  };
  TailKs out;
  out.left_count = static_cast<Index>(left.size());
  out.right_count = static_cast<Index>(right.size());
  out.left = ks(left, [](double t) { return 2.0 * normal_cdf(t); });
  out.right = ks(right, [](double t) { return 2.0 * normal_cdf(t) - 1.0; });
  return out;
}

namespace {

double sample_variance(std::vector<double> const &xs)
{
  if (xs.size() < 2) { return 0.0; }
  double const mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  double       ss = 0.0;
  for (double x : xs) { ss += (x - mean) * (x - mean); }
  return ss / static_cast<double>(xs.size() - 1);
}

constexpr std::uint64_t sample_stream_tag = 0x5a3b'1e00'0000'0000ULL;

Sample replicate_sample(ScenarioSpec const &spec, Index r)
{
  Rng rng = stream_rng(spec.master_seed, sample_stream_tag ^ static_cast<std::uint64_t>(r));
  return spec.distribution.draw(spec.n, rng);
}

// Standardized deviation using the one-sided density on the side of the deviation.
double standardize(OracleConstants const &c, double estimate, Index n)
{
  double const dev = std::sqrt(static_cast<double>(n)) * (estimate - c.quantile);
  double const f = dev < 0.0 ? c.density_left : c.density_right;
  return dev * f / (static_cast<double>(c.degree) * std::sqrt(c.zeta));
}

void summarize(SimulationReport &rep)
{
  auto const          n = rep.spec.n;
  std::vector<double> dev;
  std::vector<double> valid;
  dev.reserve(rep.estimates.size());
  for (double e : rep.estimates) { dev.push_back(std::sqrt(static_cast<double>(n)) * (e - rep.oracle.quantile)); }
  for (double t : rep.standardized_values) {
    if (!std::isnan(t)) { valid.push_back(t); }
  }
  rep.empirical_variance = sample_variance(dev);
  rep.ks_distance = ks_distance_normal(valid);
  rep.ks_critical_01 = valid.empty() ? 0.0 : ks_critical_value(0.01, static_cast<Index>(valid.size()));
  if (!valid.empty()) {
    rep.standardized_mean = std::accumulate(valid.begin(), valid.end(), 0.0) / static_cast<double>(valid.size());
    rep.standardized_sd = std::sqrt(sample_variance(valid));
    double const z = normal_quantile(0.975);
    auto const   inside = std::count_if(valid.begin(), valid.end(), [z](double t) { return std::abs(t) <= z; });
    rep.coverage = static_cast<double>(inside) / static_cast<double>(valid.size());
  }
  auto const tails = tail_ks_normal(valid);
  rep.left_tail_ks = tails.left;
  rep.right_tail_ks = tails.right;
  rep.left_count = tails.left_count;
  rep.right_count = tails.right_count;
}

SimulationReport oracle_run(ScenarioSpec const &spec, unsigned workers)
{
  spec.validate();
  SimulationReport rep;
  rep.spec = spec;
  rep.oracle = scenario_oracle(spec);
  auto const   kernel = kernel_from_name(spec.kernel_name);
  QuantileSpec const q(spec.p);

  rep.estimates.assign(static_cast<std::size_t>(spec.replicates), 0.0);
  parallel_for(spec.replicates, workers, [&](Index r) {
    Sample const sample = replicate_sample(spec, r);
    rep.estimates[static_cast<std::size_t>(r)] = u_quantile(sample, kernel, q).value;
  });
  rep.standardized_values.reserve(rep.estimates.size());
  for (double e : rep.estimates) { rep.standardized_values.push_back(standardize(rep.oracle, e, spec.n)); }
  summarize(rep);
  return rep;
}

} // namespace

SimulationReport run_scenario(ScenarioSpec const &spec, unsigned workers) { return oracle_run(spec, workers); }

SimulationReport run_onesided(ScenarioSpec const &spec, unsigned workers)
{
  auto const &g = spec.distribution;
  if (g.family() == Distribution::Family::twopiece && g.param(2) != spec.p) {
    throw InvalidArgument("kink location is not at the p-quantile: " + g.describe() + " has its kink at level " +
                          exact(g.param(2)) + ", scenario p = " + exact(spec.p));
  }
  return oracle_run(spec, workers);
}

SimulationReport run_efficiency(ScenarioSpec const &spec, unsigned workers)
{
  spec.validate();
  auto const &g = spec.distribution;
  if (!g.is_scalar() || !g.symmetry_center()) {
    throw InvalidArgument("efficiency needs a symmetric scalar distribution with known center");
  }
  if (spec.p != 0.5) { throw InvalidArgument("efficiency compares medians with means: p must be 0.5"); }
  if (!g.has_finite_variance()) {
    throw InvalidArgument("kernel values have infinite variance under " + g.describe() +
                          "; the U-statistic arm has no finite variance to compare");
  }
  SimulationReport rep;
  rep.spec = spec;
  rep.oracle = scenario_oracle(spec);
  auto const         kernel = kernel_from_name(spec.kernel_name);
  QuantileSpec const q(spec.p);

  std::vector<double> ustat(static_cast<std::size_t>(spec.replicates), 0.0);
  rep.estimates.assign(static_cast<std::size_t>(spec.replicates), 0.0);
  parallel_for(spec.replicates, workers, [&](Index r) {
    Sample const sample = replicate_sample(spec, r);
    rep.estimates[static_cast<std::size_t>(r)] = u_quantile(sample, kernel, q).value;
    double sum = 0.0;
    Index  count = 0;
    for_each_subset(sample.rows(), kernel.degree(), [&](std::span<const Index> idx) {
      sum += kernel(sample, idx);
      ++count;
    });
    ustat[static_cast<std::size_t>(r)] = sum / static_cast<double>(count);
  });
  for (double e : rep.estimates) { rep.standardized_values.push_back(standardize(rep.oracle, e, spec.n)); }
  summarize(rep);

  auto scaled_var = [&](std::vector<double> const &xs) { return static_cast<double>(spec.n) * sample_variance(xs); };
  EfficiencySummary eff;
  eff.variance_u_statistic = scaled_var(ustat);
  eff.variance_u_quantile = scaled_var(rep.estimates);
  eff.ratio = eff.variance_u_statistic / eff.variance_u_quantile;
  rep.efficiency = eff;
  return rep;
}

SimulationReport run_coverage(ScenarioSpec const &spec, double level, unsigned workers)
{
  spec.validate();
  if (!(level > 0.0 && level < 1.0)) { throw InvalidArgument("coverage level must lie in (0, 1)"); }
  SimulationReport rep;
  rep.spec = spec;
  rep.spec.level = level;
  rep.oracle = scenario_oracle(spec);
  auto const         kernel = kernel_from_name(spec.kernel_name);
  QuantileSpec const q(spec.p);
  double const       truth = rep.oracle.quantile;

  auto const reps = static_cast<std::size_t>(spec.replicates);
  rep.estimates.assign(reps, 0.0);
  rep.standardized_values.assign(reps, std::numeric_limits<double>::quiet_NaN());
  std::vector<int>    status(reps, 0); // 1 covered, 0 missed, -1 refused
  std::vector<double> width(reps, 0.0);
  parallel_for(spec.replicates, workers, [&](Index r) {
    auto const       i = static_cast<std::size_t>(r);
    Sample const     sample = replicate_sample(spec, r);
    AsymptoticConfig config;
    config.seed = mix64(spec.master_seed ^ mix64(static_cast<std::uint64_t>(r)));
    try {
      auto const s = asymptotic_summary(sample, kernel, q, level, config);
      rep.estimates[i] = s.point;
      rep.standardized_values[i] = (s.point - truth) / s.std_error;
      status[i] = (s.ci_lower <= truth && truth <= s.ci_upper) ? 1 : 0;
      width[i] = s.ci_upper - s.ci_lower;
    } catch (HypothesisViolation const &) {
      rep.estimates[i] = u_quantile(sample, kernel, q).value;
      status[i] = -1;
    }
  });
  summarize(rep);

  CoverageSummary cov;
  double          width_sum = 0.0;
  for (std::size_t i = 0; i < reps; ++i) {
    if (status[i] < 0) {
      ++cov.refused;
      continue;
    }
    ++cov.valid;
    cov.covered += status[i];
    width_sum += width[i];
  }
  if (cov.valid > 0) {
    cov.coverage = static_cast<double>(cov.covered) / static_cast<double>(cov.valid);
    cov.mean_width = width_sum / static_cast<double>(cov.valid);
  }
  rep.plugin_coverage = cov;
  return rep;
}

SimulationReport run(ScenarioSpec const &spec, unsigned workers)
{
  switch (spec.mode) {
  case ScenarioMode::scenario: return run_scenario(spec, workers);
  case ScenarioMode::onesided: return run_onesided(spec, workers);
  case ScenarioMode::efficiency: return run_efficiency(spec, workers);
  case ScenarioMode::coverage: return run_coverage(spec, spec.level, workers);
  }
  throw InvalidArgument("unknown scenario mode");
}

} // namespace uqs
