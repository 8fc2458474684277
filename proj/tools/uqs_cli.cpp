// uqs: U-quantile-statistics from the command line.
//
//   uqs estimate --file F --kernel K --p P --level L --backend {exact,fast,auto} --seed S
//   uqs simulate --scenario F --workers K [--out PREFIX]
//   uqs oracle NAME [--dist D] [--theta T] [--m M]
//
// Exit codes: 0 success, 2 malformed input or usage, 3 theorem hypothesis
// violated by the data (zeta_hat <= 0 or f_hat <= 0), 1 anything else.

#include "uqs/asymptotics.hpp"
#include "uqs/io.hpp"
#include "uqs/montecarlo.hpp"
#include "uqs/oracles.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

constexpr int exit_usage = 2;
constexpr int exit_hypothesis = 3;

struct EstimateArgs {
  std::string           file = "-";
  std::string           kernel = "walsh";
  double                p = 0.5;
  double                level = 0.95;
  std::string           backend = "auto";
  std::uint64_t         seed = uqs::default_seed;
  std::optional<double> bandwidth;
};

struct SimulateArgs {
  std::string scenario;
  unsigned    workers = 1;
  std::string out;
};

struct OracleArgs {
  std::string           name;
  std::string           dist;
  std::optional<double> theta;
  int                   m = 2;
  std::string           norm = "euclidean";
  double                p = 0.5;
  std::uint64_t         seed = uqs::default_seed;
  uqs::Index            draws = 10'000'000;
};

int cmd_estimate(EstimateArgs const &a)
{
  uqs::Sample sample;
  if (a.file == "-") {
    sample = uqs::read_csv_sample(std::cin);
  } else {
    std::ifstream in(a.file);
    if (!in) { throw uqs::InvalidArgument("cannot open '" + a.file + "'"); }
    sample = uqs::read_csv_sample(in);
  }
  auto const             kernel = uqs::kernel_from_name(a.kernel);
  uqs::QuantileSpec const spec(a.p);
  uqs::AsymptoticConfig  config;
  config.backend = uqs::parse_backend(a.backend);
  config.seed = a.seed;
  auto const summary = uqs::asymptotic_summary(sample, kernel, spec, a.level, config, a.bandwidth);
  std::cout << uqs::format_json(uqs::to_json(summary, a.kernel, a.p, a.backend));
  return 0;
}

int cmd_simulate(SimulateArgs const &a)
{
  auto const spec = uqs::load_scenario(a.scenario);
  auto const report = uqs::run(spec, a.workers);

  std::filesystem::path prefix = a.out.empty() ? std::filesystem::path(a.scenario).stem() : std::filesystem::path(a.out);
  auto const json_path = std::filesystem::path(prefix.string() + ".json");
  auto const csv_path = std::filesystem::path(prefix.string() + ".csv");
  {
    std::ofstream out(json_path);
    out << uqs::format_json(uqs::to_json(report));
  }
  {
    std::ofstream out(csv_path);
    uqs::write_standardized_csv(out, report);
  }
  std::cout << "ks_distance=" << report.ks_distance << " empirical_variance=" << report.empirical_variance
            << " coverage=" << report.coverage;
  if (report.efficiency) { std::cout << " efficiency_ratio=" << report.efficiency->ratio; }
  if (report.plugin_coverage) { std::cout << " plugin_coverage=" << report.plugin_coverage->coverage; }
  std::cout << " json=" << json_path.string() << " csv=" << csv_path.string() << "\n";
  return 0;
}

int cmd_oracle(OracleArgs const &a)
{
  if (a.name == "hl") {
    auto const g = uqs::Distribution::parse(a.dist.empty() ? "normal" : a.dist);
    std::cout << uqs::format_json(uqs::to_json(uqs::oracle_hl(g)));
    return 0;
  }
  if (a.name == "mwise-mean") {
    auto const g = uqs::Distribution::parse(a.dist.empty() ? "normal" : a.dist);
    std::cout << uqs::format_json(uqs::to_json(uqs::oracle_mwise_mean(g, a.m)));
    return 0;
  }
  if (a.name == "interpoint") {
    auto const g = uqs::Distribution::parse(a.dist.empty() ? "square" : a.dist);
    auto const norm = uqs::parse_norm(a.norm);
    uqs::Json  extra;
    double     theta = 0.0;
    if (a.theta) {
      theta = *a.theta;
    } else {
      auto const q = uqs::interpoint_quantile(g, a.p, norm, a.draws, a.seed);
      theta = q.value;
      extra["theta_se"] = q.std_error;
    }
    auto j = uqs::to_json(uqs::oracle_interpoint(g, theta, norm, a.p, {}, a.seed));
    if (extra.contains("theta_se")) { j["theta_se"] = extra["theta_se"]; }
    std::cout << uqs::format_json(j);
    return 0;
  }
  throw uqs::InvalidArgument("unknown oracle example '" + a.name + "' (expected hl, mwise-mean, interpoint)");
}

} // namespace

int main(int argc, char **argv)
{
  CLI::App app{"U-quantile-statistics: estimation, simulation and oracle constants"};
  app.require_subcommand(1);

  EstimateArgs est;
  auto        *estimate = app.add_subcommand("estimate", "Point estimate, plug-in zeta and density, confidence interval");
  estimate->add_option("--file", est.file, "CSV file, one point per line ('-' for stdin)")->capture_default_str();
  estimate->add_option("--kernel", est.kernel, "walsh, mean:<m>, dist:<norm>")->capture_default_str();
  estimate->add_option("--p", est.p, "quantile level in (0, 1)")->capture_default_str();
  estimate->add_option("--level", est.level, "confidence level in [0, 1)")->capture_default_str();
  estimate->add_option("--backend", est.backend, "exact, fast or auto")->capture_default_str();
  estimate->add_option("--seed", est.seed, "seed for subsampling")->capture_default_str();
  estimate->add_option("--bandwidth", est.bandwidth, "KDE bandwidth (default: Silverman)");

  SimulateArgs sim;
  auto        *simulate = app.add_subcommand("simulate", "Run a Monte Carlo scenario file");
  simulate->add_option("--scenario", sim.scenario, "scenario file")->required();
  simulate->add_option("--workers", sim.workers, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  simulate->add_option("--out", sim.out, "output prefix for .json and .csv (default: scenario file stem)");

  OracleArgs orc;
  auto      *oracle = app.add_subcommand("oracle", "Population constants for the worked examples");
  oracle->add_option("name", orc.name, "hl, mwise-mean or interpoint")->required();
  oracle->add_option("--dist", orc.dist, "distribution, e.g. normal, uniform, logistic, square, cube(3)");
  oracle->add_option("--theta", orc.theta, "interpoint: distance threshold (default: population quantile)");
  oracle->add_option("--m", orc.m, "mwise-mean: kernel degree")->capture_default_str();
  oracle->add_option("--norm", orc.norm, "interpoint: euclidean, manhattan, chebyshev")->capture_default_str();
  oracle->add_option("--p", orc.p, "interpoint: quantile level")->capture_default_str();
  oracle->add_option("--seed", orc.seed, "Monte Carlo seed")->capture_default_str();
  oracle->add_option("--draws", orc.draws, "interpoint: draws for the population quantile")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (CLI::CallForHelp const &e) {
    return app.exit(e);
  } catch (CLI::CallForAllHelp const &e) {
    return app.exit(e);
  } catch (CLI::ParseError const &e) {
    app.exit(e);
    return exit_usage;
  }

  try {
    if (*estimate) { return cmd_estimate(est); }
    if (*simulate) { return cmd_simulate(sim); }
    if (*oracle) { return cmd_oracle(orc); }
  } catch (uqs::HypothesisViolation const &e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_hypothesis;
  } catch (uqs::InvalidArgument const &e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (uqs::OracleUnavailable const &e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (std::exception const &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
