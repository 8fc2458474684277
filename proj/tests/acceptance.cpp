// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
//   uqs_acceptance [--workers K] [--scenarios DIR] [--cache DIR]
//
// --workers 0 uses every hardware thread. Results do not depend on K.

#include "uqs/asymptotics.hpp"
#include "uqs/io.hpp"
#include "uqs/montecarlo.hpp"
#include "uqs/oracles.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

using namespace uqs;

namespace {

struct Context {
  unsigned              workers = 1;
  std::filesystem::path scenarios;
  std::filesystem::path cache;
};

struct Outcome {
  bool        pass = false;
  std::string detail;
};

std::string fmt(char const *format, auto... args)
{
  char buf[512];
  std::snprintf(buf, sizeof(buf), format, args...);
  return buf;
}

ScenarioSpec bundled(Context const &ctx, std::string const &name)
{
  auto spec = load_scenario(ctx.scenarios / name);
  spec.oracle_cache = ctx.cache;
  return spec;
}

Outcome criterion_variance(Context const &ctx)
{
  auto const   r = run(bundled(ctx, "hl_normal.scn"), ctx.workers);
  double const target = std::numbers::pi / 3.0;
  double const lo = 0.85 * target, hi = 1.15 * target;
  return {r.empirical_variance >= lo && r.empirical_variance <= hi,
          fmt("empirical variance %.4f in [%.4f, %.4f] (n=%lld, R=%lld)", r.empirical_variance, lo, hi,
              static_cast<long long>(r.spec.n), static_cast<long long>(r.spec.replicates))};
}

Outcome criterion_zeta(Context const &)
{
  int    hits = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng          rng = stream_rng(0x2e7a00 + seed, 0);
    auto const   s = Distribution::normal().draw(500, rng);
    double const err = std::abs(zeta_plugin(s, walsh_average_kernel(), QuantileSpec(0.5)).value - 1.0 / 12.0);
    hits += err < 0.01;
    worst = std::max(worst, err);
  }
  return {hits >= 18, fmt("%d of 20 seeds within 0.01 of 1/12 (largest error %.4f)", hits, worst)};
}

Outcome criterion_normality(Context const &ctx)
{
  auto const walsh = run(bundled(ctx, "hl_normal.scn"), ctx.workers);
  auto const inter = run(bundled(ctx, "interpoint_square.scn"), ctx.workers);
  bool const pass = walsh.ks_distance < walsh.ks_critical_01 && inter.ks_distance < inter.ks_critical_01;
  return {pass, fmt("walsh/normal n=%lld KS %.4f, interpoint/square n=%lld KS %.4f, critical %.4f",
                    static_cast<long long>(walsh.spec.n), walsh.ks_distance, static_cast<long long>(inter.spec.n),
                    inter.ks_distance, walsh.ks_critical_01)};
}

Outcome criterion_onesided(Context const &ctx)
{
  auto const   r = run(bundled(ctx, "kinked_onesided.scn"), ctx.workers);
  double const left_crit = ks_critical_value(0.01, r.left_count);
  double const right_crit = ks_critical_value(0.01, r.right_count);
  bool const   pass = r.left_tail_ks < left_crit && r.right_tail_ks < right_crit &&
                    std::abs(r.oracle.density_left - 2.0 * r.oracle.density_right) < 1e-12;
  return {pass, fmt("left KS %.4f < %.4f (%lld pts), right KS %.4f < %.4f (%lld pts), F'(-)/F'(+) = %.3f", r.left_tail_ks,
                    left_crit, static_cast<long long>(r.left_count), r.right_tail_ks, right_crit,
                    static_cast<long long>(r.right_count), r.oracle.density_left / r.oracle.density_right)};
}

Sample column(std::vector<double> const &x)
{
  Sample s(static_cast<Index>(x.size()), 1);
  for (std::size_t i = 0; i < x.size(); ++i) { s(static_cast<Index>(i), 0) = x[i]; }
  return s;
}

Outcome criterion_reduction(Context const &)
{
  std::mt19937_64 rng(0x5eed0005);
  auto const      id = mwise_mean_kernel(1);
  int             mismatches = 0;
  int             checks = 0;
  for (int r = 0; r < 1000; ++r) {
    std::size_t const   n = std::uniform_int_distribution<std::size_t>(1, 50)(rng);
    bool const          lattice = r % 3 == 0;
    std::vector<double> x(n);
    for (auto &v : x) {
      v = lattice ? static_cast<double>(std::uniform_int_distribution<int>(0, 5)(rng))
                  : std::normal_distribution<double>(0.0, 10.0)(rng);
    }
    auto const s = column(x);
    // Ordinary sample quantile: the smallest order statistic x_(k) with k/n >= i/10.
    std::sort(x.begin(), x.end());
    for (std::size_t i = 1; i <= 9; ++i) {
      std::size_t k = 1;
      while (10 * k < i * n) { ++k; }
      double const expected = x[k - 1];
      double const got = u_quantile(s, id, QuantileSpec(static_cast<double>(i) / 10.0)).value;
      mismatches += std::bit_cast<std::uint64_t>(got) != std::bit_cast<std::uint64_t>(expected + 0.0);
      ++checks;
    }
  }
  return {mismatches == 0, fmt("%d mismatches in %d comparisons over 1000 samples", mismatches, checks)};
}

Outcome criterion_backends(Context const &)
{
  std::mt19937_64 rng(0x5eed0006);
  double const    levels[] = {0.1, 0.25, 0.5, 0.75, 0.9};
  auto const      walsh = walsh_average_kernel();
  auto const      dist = distance_kernel(NormSpec::euclidean);
  int             mismatches = 0;
  int             checks = 0;
  for (int r = 0; r < 500; ++r) {
    std::size_t const   n = std::uniform_int_distribution<std::size_t>(2, 60)(rng);
    std::vector<double> x(n);
    for (auto &v : x) {
      v = r % 4 == 0 ? static_cast<double>(std::uniform_int_distribution<int>(-4, 4)(rng))
                     : std::normal_distribution<double>(0.0, 1.0)(rng);
    }
    auto const s = column(x);
    for (Kernel const *k : {&walsh, &dist}) {
      auto const values = enumerate_kernel_values(s, *k);
      for (double p : levels) {
        std::vector<double> sorted = values;
        std::sort(sorted.begin(), sorted.end());
        QuantileSpec const spec(p);
        double const       enumerated = sorted[static_cast<std::size_t>(spec.rank(static_cast<Index>(sorted.size())) - 1)] + 0.0;
        double const       fast = u_quantile_fast_pairsum(s, *k, spec).value;
        mismatches += std::bit_cast<std::uint64_t>(fast) != std::bit_cast<std::uint64_t>(enumerated);
        ++checks;
      }
    }
  }
  return {mismatches == 0, fmt("%d mismatches in %d comparisons (walsh and 1-d distance)", mismatches, checks)};
}

Outcome criterion_efficiency(Context const &ctx)
{
  auto const   r = run(bundled(ctx, "hl_efficiency.scn"), ctx.workers);
  double const ratio = r.efficiency ? r.efficiency->ratio : std::nan("");
  return {ratio >= 0.85 && ratio <= 1.06, fmt("Var(U_n)/Var(H_pn) = %.4f in [0.85, 1.06], 3/pi = %.4f", ratio,
                                              3.0 / std::numbers::pi)};
}

Outcome criterion_coverage(Context const &ctx)
{
  auto const r = run(bundled(ctx, "hl_coverage.scn"), ctx.workers);
  if (!r.plugin_coverage) { return {false, "no coverage summary"}; }
  auto const &c = *r.plugin_coverage;
  return {c.coverage >= 0.92 && c.coverage <= 0.97,
          fmt("plug-in coverage %.4f in [0.92, 0.97] (%lld valid, %lld refused)", c.coverage,
              static_cast<long long>(c.valid), static_cast<long long>(c.refused))};
}

// Replicated data-route estimates against the quadrature route at the population median.
Outcome criterion_cross_oracle(Context const &ctx)
{
  auto spec = bundled(ctx, "interpoint_square.scn");
  auto const oracle = scenario_oracle(spec);

  Index const         n = 1000;
  int const           reps = 40;
  std::vector<double> estimates(reps);
  auto const          kernel = distance_kernel(NormSpec::euclidean);
  auto const          g = Distribution::cube(2);
  std::vector<std::jthread> pool;
  std::atomic<int>          next{0};
  unsigned const            threads = std::max(1u, ctx.workers);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int r = next++; r < reps; r = next++) {
        Rng rng = stream_rng(0xc0ffee, static_cast<std::uint64_t>(r));
        estimates[static_cast<std::size_t>(r)] = zeta_plugin(g.draw(n, rng), kernel, QuantileSpec(0.5)).value;
      }
    });
  }
  pool.clear();

  double mean = 0.0;
  for (double v : estimates) { mean += v; }
  mean /= reps;
  double ss = 0.0;
  for (double v : estimates) { ss += (v - mean) * (v - mean); }
  double const data_se = std::sqrt(ss / (reps - 1) / reps);
  double const combined = std::hypot(data_se, oracle.zeta_se);
  double const gap = std::abs(mean - oracle.zeta);
  return {gap <= 3.0 * combined, fmt("data %.5f (se %.5f, %d samples of n=%lld), quadrature %.5f (se %.5f), gap %.2f se",
                                     mean, data_se, reps, static_cast<long long>(n), oracle.zeta, oracle.zeta_se,
                                     gap / combined)};
}

std::string csv_of(SimulationReport const &r)
{
  std::ostringstream out;
  write_standardized_csv(out, r);
  return out.str();
}

Outcome criterion_determinism(Context const &ctx)
{
  unsigned const many = std::max(2u, ctx.workers);
  int            identical = 0;
  int            total = 0;
  for (auto const &entry : std::filesystem::directory_iterator(ctx.scenarios)) {
    if (entry.path().extension() != ".scn") { continue; }
    auto const spec = bundled(ctx, entry.path().filename().string());
    identical += csv_of(run(spec, 1)) == csv_of(run(spec, many));
    ++total;
  }
  return {total > 0 && identical == total,
          fmt("%d of %d bundled scenarios byte-identical with 1 and %u workers", identical, total, many)};
}

} // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Acceptance criteria"};
  Context  ctx;
  unsigned workers = 0;
  std::string scenarios = "scenarios";
  std::string cache = "oracle_cache";
  app.add_option("--workers", workers, "worker threads, 0 for all hardware threads")->capture_default_str();
  app.add_option("--scenarios", scenarios, "directory of bundled scenario files")->capture_default_str();
  app.add_option("--cache", cache, "oracle cache directory")->capture_default_str();
  CLI11_PARSE(app, argc, argv);
  ctx.workers = workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : workers;
  ctx.scenarios = scenarios;
  ctx.cache = cache;

  struct Criterion {
    char const *name;
    Outcome (*check)(Context const &);
  };
  Criterion const criteria[] = {
    {"walsh median asymptotic variance", criterion_variance},
    {"plug-in zeta for the walsh kernel", criterion_zeta},
    {"normality of standardized replicates", criterion_normality},
    {"one-sided limits at a density kink", criterion_onesided},
    {"identity kernel equals the sample quantile", criterion_reduction},
    {"fast and exact backends agree", criterion_backends},
    {"relative efficiency", criterion_efficiency},
    {"plug-in interval coverage", criterion_coverage},
    {"data and quadrature zeta agree", criterion_cross_oracle},
    {"worker-count determinism", criterion_determinism},
  };

  int failures = 0;
  int number = 0;
  for (auto const &c : criteria) {
    ++number;
    auto const start = std::chrono::steady_clock::now();
    Outcome    outcome;
    try {
      outcome = c.check(ctx);
    } catch (std::exception const &e) {
      outcome = {false, std::string("error: ") + e.what()};
    }
    double const seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !outcome.pass;
    std::printf("%s %2d %s: %s [%.1fs]\n", outcome.pass ? "PASS" : "FAIL", number, c.name, outcome.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
