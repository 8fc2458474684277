#pragma once

#include "uqs/distributions.hpp"
#include "uqs/kernels.hpp"

namespace uqs {

// Constants of the Walsh-average median under a symmetric scalar density g.
struct HodgesLehmannOracle {
  double zeta = 0.0;              // always 1/12
  double integral_g2 = 0.0;       // int g^2
  double density_at_center = 0.0; // f at the center of symmetry = 2 int g^2
  double sigma2 = 0.0;            // m^2 zeta / f^2 = 1 / (12 (int g^2)^2)
  double center = 0.0;
};

/// Normal, uniform, logistic, laplace and cauchy are supported; int g^2 comes
/// from adaptive Gauss-Kronrod quadrature to relative tolerance 1e-8. Throws
/// OracleUnavailable for asymmetric distributions.
HodgesLehmannOracle oracle_hl(Distribution const &g);

// int g^2 by adaptive quadrature over the support.
double integral_of_squared_density(Distribution const &g);

// Same quantities for the m-wise mean kernel at p = 1/2.
struct MeanKernelOracle {
  int    degree = 0;
  double zeta = 0.0;
  double density_at_center = 0.0;
  double sigma2 = 0.0;
  double center = 0.0;
};

/// m = 1: zeta = 1/4, f = g(center). m = 2: the Walsh oracle. m >= 3: normal
/// only, with zeta + 1/4 = int Phi(-x / sqrt(m-1))^2 phi(x) dx by quadrature
/// and f(0) = sqrt(m) / (sigma sqrt(2 pi)).
MeanKernelOracle oracle_mwise_mean(Distribution const &g, int m);

struct QuadratureBudget {
  Index outer = 200'000;  // centers x drawn from g for the ball-probability integral
  Index inner = 200;      // points per center estimating P(||xi - x|| <= theta)
  Index surface = 2'000'000; // draws for the shell (density) integral
};

// Interpoint-distance constants at theta, each with its Monte Carlo standard error.
struct InterpointOracle {
  double theta = 0.0;
  double p = 0.5;
  double ball_probability = 0.0;    // F(theta) = E_x P(||xi - x|| <= theta)
  double ball_probability_se = 0.0;
  double zeta = 0.0;                // E_x P(||xi - x|| <= theta)^2 - p^2
  double zeta_se = 0.0;
  double f_theta = 0.0;             // density of ||xi_1 - xi_2|| at theta
  double f_theta_se = 0.0;
};

/// Monte Carlo quadrature of
///   zeta + p^2 = int (int_{x + theta B} g(y) dy)^2 g(x) dx,
///   f(theta)   = int (int_{x + theta S} g(y) dy) g(x) dx.
/// The squared inner probability is estimated without bias by k(k-1)/(M(M-1))
/// from M inner draws with k hits. The shell integral uses polar coordinates
/// for the chosen norm: d vol(B) theta^(d-1) E_v g(x + theta v) with v drawn
/// from the cone measure of the unit sphere.
InterpointOracle oracle_interpoint(Distribution const &g, double theta, NormSpec norm = NormSpec::euclidean,
                                   double p = 0.5, QuadratureBudget const &budget = {},
                                   std::uint64_t seed = default_seed);

struct QuantileOracle {
  double value = 0.0;
  double std_error = 0.0;
};

/// p-quantile of ||xi_1 - xi_2|| from `draws` independent pairs. The standard
/// error is half the width of the order-statistic interval at +/- one binomial
/// standard deviation of the rank.
QuantileOracle interpoint_quantile(Distribution const &g, double p, NormSpec norm = NormSpec::euclidean,
                                   Index draws = 10'000'000, std::uint64_t seed = default_seed);

// Volume of the unit ball of `norm` in R^d.
double unit_ball_volume(NormSpec norm, Index d);

} // namespace uqs
