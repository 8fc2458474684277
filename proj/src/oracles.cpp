#include "uqs/oracles.hpp"

#include "uqs/asymptotics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace uqs {

namespace {

constexpr double quad_tol = 1e-8;

template <typename F> double integrate(F f, double a, double b)
{
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 30, quad_tol, &err);
}

// Running mean and standard error of the mean.
struct Moments {
  Index  n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x)
  {
    ++n;
    double const d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  double se() const { return n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0; }
};

// Uniform draw from the unit ball of `norm`, projected radially onto its sphere.
void cone_direction(NormSpec norm, Rng &rng, Eigen::Ref<Eigen::VectorXd> v)
{
  Index const                      d = v.size();
  std::normal_distribution<double> gauss;
  switch (norm) {
  case NormSpec::euclidean:
    for (Index j = 0; j < d; ++j) { v(j) = gauss(rng); }
    break;
  case NormSpec::chebyshev:
    for (Index j = 0; j < d; ++j) { v(j) = 2.0 * open_uniform(rng) - 1.0; }
    break;
  case NormSpec::manhattan:
    for (Index j = 0; j < d; ++j) {
      double const e = -std::log(open_uniform(rng));
      v(j) = open_uniform(rng) < 0.5 ? -e : e;
    }
    break;
  }
  v /= norm_of(norm, v);
}

} // namespace

double unit_ball_volume(NormSpec norm, Index d)
{
  auto const dd = static_cast<double>(d);
  switch (norm) {
  case NormSpec::euclidean: return std::pow(std::numbers::pi, dd / 2.0) / std::tgamma(dd / 2.0 + 1.0);
  case NormSpec::manhattan: return std::pow(2.0, dd) / std::tgamma(dd + 1.0);
  case NormSpec::chebyshev: return std::pow(2.0, dd);
  }
  return 0.0;
}

double integral_of_squared_density(Distribution const &g)
{
  using F = Distribution::Family;
  auto sq = [&](double x) {
    double const v = g.pdf(x);
    return v * v;
  };
  double const inf = std::numeric_limits<double>::infinity();
  switch (g.family()) {
  case F::uniform: return integrate(sq, g.param(0), g.param(1));
  case F::exponential: return integrate(sq, 0.0, inf);
  case F::twopiece: return integrate(sq, -inf, 0.0) + integrate(sq, 0.0, inf);
  case F::cube:
  case F::mvnormal: throw OracleUnavailable("int g^2 is only computed for scalar distributions");
  default: {
    double const c = g.param(0);
    return integrate(sq, -inf, c) + integrate(sq, c, inf);
  }
  }
}

HodgesLehmannOracle oracle_hl(Distribution const &g)
{
  auto const center = g.is_scalar() ? g.symmetry_center() : std::nullopt;
  if (!center || g.family() == Distribution::Family::twopiece) {
    throw OracleUnavailable("Walsh-average oracle needs a built-in symmetric scalar distribution (normal, uniform, "
                            "logistic, laplace, cauchy), got " + g.describe());
  }
  HodgesLehmannOracle o;
  o.zeta = 1.0 / 12.0;
  o.integral_g2 = integral_of_squared_density(g);
  o.density_at_center = 2.0 * o.integral_g2;
  o.sigma2 = 1.0 / (12.0 * o.integral_g2 * o.integral_g2);
  o.center = *center;
  return o;
}

MeanKernelOracle oracle_mwise_mean(Distribution const &g, int m)
{
  if (m < 1) { throw InvalidArgument("mean kernel degree must be >= 1"); }
  MeanKernelOracle o;
  o.degree = m;
  if (m == 2) {
    auto const hl = oracle_hl(g);
    o.zeta = hl.zeta;
    o.density_at_center = hl.density_at_center;
    o.sigma2 = hl.sigma2;
    o.center = hl.center;
    return o;
  }
  auto const center = g.is_scalar() ? g.symmetry_center() : std::nullopt;
  if (!center) { throw OracleUnavailable("mean-kernel oracle needs a symmetric scalar distribution, got " + g.describe()); }
  o.center = *center;
  if (m == 1) {
    o.zeta = 0.25;
    o.density_at_center = g.pdf(*center);
  } else {
    if (g.family() != Distribution::Family::normal) {
      throw OracleUnavailable("mean-kernel oracle for m >= 3 is only available for normal data");
    }
    double const sigma = g.param(1);
    double const s = std::sqrt(static_cast<double>(m - 1));
    double const inf = std::numeric_limits<double>::infinity();
    double const second = integrate(
      [&](double x) {
        double const c = normal_cdf(-x / s);
        return c * c * std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
      },
      -inf, inf);
    o.zeta = second - 0.25;
    o.density_at_center = std::sqrt(static_cast<double>(m)) / (sigma * std::sqrt(2.0 * std::numbers::pi));
  }
  o.sigma2 = static_cast<double>(m * m) * o.zeta / (o.density_at_center * o.density_at_center);
  return o;
}

InterpointOracle oracle_interpoint(Distribution const &g, double theta, NormSpec norm, double p,
                                   QuadratureBudget const &budget, std::uint64_t seed)
{
  if (!(theta > 0.0)) { throw InvalidArgument("interpoint oracle needs theta > 0"); }
  if (!(p > 0.0 && p < 1.0)) { throw InvalidArgument("quantile level must lie in (0, 1)"); }
  if (budget.outer < 2 || budget.inner < 2 || budget.surface < 2) {
    throw InvalidArgument("quadrature budget must allow at least two draws per stage");
  }
  Index const d = g.dimension();

  InterpointOracle out;
  out.theta = theta;
  out.p = p;

  Rng     rng = stream_rng(seed, 1);
  Moments ball;
  Moments ball_sq;
  auto const inner = static_cast<double>(budget.inner);
  for (Index r = 0; r < budget.outer; ++r) {
    Sample const x = g.draw(1, rng);
    Sample const ys = g.draw(budget.inner, rng);
    Index        hits = 0;
    for (Index k = 0; k < budget.inner; ++k) {
      if (norm_of(norm, ys.row(k) - x.row(0)) <= theta) { ++hits; }
    }
    auto const h = static_cast<double>(hits);
    ball.add(h / inner);
    ball_sq.add(h * (h - 1.0) / (inner * (inner - 1.0)));
  }
  out.ball_probability = ball.mean;
  out.ball_probability_se = ball.se();
  out.zeta = ball_sq.mean - p * p;
  out.zeta_se = ball_sq.se();

  Rng             srng = stream_rng(seed, 2);
  Moments         shell;
  Eigen::VectorXd v(d);
  double const    scale = static_cast<double>(d) * unit_ball_volume(norm, d) * std::pow(theta, static_cast<double>(d - 1));
  for (Index r = 0; r < budget.surface; ++r) {
    Sample const x = g.draw(1, srng);
    cone_direction(norm, srng, v);
    Eigen::VectorXd const y = x.row(0).transpose() + theta * v;
    shell.add(scale * g.pdf(y));
  }
  out.f_theta = shell.mean;
  out.f_theta_se = shell.se();
  return out;
}

QuantileOracle interpoint_quantile(Distribution const &g, double p, NormSpec norm, Index draws, std::uint64_t seed)
{
  if (!(p > 0.0 && p < 1.0)) { throw InvalidArgument("quantile level must lie in (0, 1)"); }
  if (draws < 100) { throw InvalidArgument("interpoint quantile needs at least 100 draws"); }
  Rng                 rng = stream_rng(seed, 3);
  std::vector<double> dist(static_cast<std::size_t>(draws));
  constexpr Index     batch = 4096;
  for (Index r = 0; r < draws; r += batch) {
    Index const  len = std::min(batch, draws - r);
    Sample const a = g.draw(len, rng);
    Sample const b = g.draw(len, rng);
    for (Index k = 0; k < len; ++k) { dist[static_cast<std::size_t>(r + k)] = norm_of(norm, a.row(k) - b.row(k)); }
  }
  auto order_stat = [&](double q) {
    auto const k = std::clamp<Index>(static_cast<Index>(std::ceil(q * static_cast<double>(draws))), 1, draws);
    std::nth_element(dist.begin(), dist.begin() + (k - 1), dist.end());
    return dist[static_cast<std::size_t>(k - 1)];
  };
  double const     spread = std::sqrt(p * (1.0 - p) / static_cast<double>(draws));
  QuantileOracle   out;
  out.value = order_stat(p);
  double const lo = order_stat(std::max(p - spread, 1e-12));
  double const hi = order_stat(std::min(p + spread, 1.0 - 1e-12));
  out.std_error = 0.5 * (hi - lo);
  return out;
}

} // namespace uqs
