#pragma once

#include "uqs/random.hpp"
#include "uqs/types.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace uqs {

/// Data-generating distributions for oracles and simulation.
///
/// Scalar families: normal(mu, sigma), uniform(a, b), exponential(rate),
/// laplace(mu, b), logistic(mu, s), cauchy(x0, gamma), and
/// twopiece(sigma_left, sigma_right, w): half-normal pieces joined at 0 with
/// mass w on the left, so the density jumps at its w-quantile.
///
/// Point clouds: cube(d), uniform on [0,1]^d (`square` = cube(2)); mvnormal(d),
/// standard normal in R^d.
class Distribution {
public:
  enum class Family { normal, uniform, exponential, laplace, logistic, cauchy, twopiece, cube, mvnormal };

  static Distribution normal(double mu = 0.0, double sigma = 1.0);
  static Distribution uniform(double a = 0.0, double b = 1.0);
  static Distribution exponential(double rate = 1.0);
  static Distribution laplace(double mu = 0.0, double b = 1.0);
  static Distribution logistic(double mu = 0.0, double s = 1.0);
  static Distribution cauchy(double x0 = 0.0, double gamma = 1.0);
  static Distribution twopiece(double sigma_left, double sigma_right, double left_mass = 0.5);
  static Distribution cube(int d);
  static Distribution mvnormal(int d);

  // Parses the text form, e.g. "normal(0,1)", "twopiece(1,2,0.5)", "square".
  static Distribution parse(std::string_view text);

  // Canonical text form; parse(describe()) reproduces the distribution.
  std::string describe() const;

  Family family() const { return family_; }
  Index  dimension() const { return dim_; }
  bool   is_scalar() const { return dim_ == 1; }
  double param(int i) const { return params_[static_cast<std::size_t>(i)]; }

  Sample draw(Index n, Rng &rng) const;

  double pdf(Eigen::Ref<const Eigen::VectorXd> x) const;

  // Scalar families only.
  double pdf(double x) const;
  double cdf(double x) const;
  double quantile(double q) const;
  // One-sided limits of the density; they differ only at the twopiece joint.
  double pdf_left(double x) const;
  double pdf_right(double x) const;
  // Center of symmetry, if the density is symmetric.
  std::optional<double> symmetry_center() const;
  bool has_finite_variance() const;

private:
  Distribution(Family f, Index dim, std::array<double, 3> params);
  void require_scalar(char const *what) const;

  Family                family_;
  Index                 dim_;
  std::array<double, 3> params_;
};

} // namespace uqs
