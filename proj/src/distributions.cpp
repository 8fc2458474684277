#include "uqs/distributions.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <vector>

namespace uqs {

namespace {

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }
double std_normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }
double std_normal_quantile(double q) { return boost::math::quantile(boost::math::normal_distribution<double>(), q); }

std::string fmt(double v)
{
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void require_positive(double v, char const *what)
{
  if (!(v > 0.0) || !std::isfinite(v)) { throw InvalidArgument(std::string(what) + " must be positive and finite"); }
}

} // namespace

Distribution::Distribution(Family f, Index dim, std::array<double, 3> params)
  : family_(f)
  , dim_(dim)
  , params_(params)
{}

Distribution Distribution::normal(double mu, double sigma)
{
  require_positive(sigma, "normal sigma");
  return {Family::normal, 1, {mu, sigma, 0.0}};
}

Distribution Distribution::uniform(double a, double b)
{
  if (!(b > a)) { throw InvalidArgument("uniform(a, b) requires a < b"); }
  return {Family::uniform, 1, {a, b, 0.0}};
}

Distribution Distribution::exponential(double rate)
{
  require_positive(rate, "exponential rate");
  return {Family::exponential, 1, {rate, 0.0, 0.0}};
}

Distribution Distribution::laplace(double mu, double b)
{
  require_positive(b, "laplace scale");
  return {Family::laplace, 1, {mu, b, 0.0}};
}

Distribution Distribution::logistic(double mu, double s)
{
  require_positive(s, "logistic scale");
  return {Family::logistic, 1, {mu, s, 0.0}};
}

Distribution Distribution::cauchy(double x0, double gamma)
{
  require_positive(gamma, "cauchy scale");
  return {Family::cauchy, 1, {x0, gamma, 0.0}};
}

Distribution Distribution::twopiece(double sigma_left, double sigma_right, double left_mass)
{
  require_positive(sigma_left, "twopiece left scale");
  require_positive(sigma_right, "twopiece right scale");
  if (!(left_mass > 0.0 && left_mass < 1.0)) { throw InvalidArgument("twopiece left mass must lie in (0, 1)"); }
  return {Family::twopiece, 1, {sigma_left, sigma_right, left_mass}};
}

Distribution Distribution::cube(int d)
{
  if (d < 1) { throw InvalidArgument("cube dimension must be >= 1"); }
  return {Family::cube, d, {0.0, 0.0, 0.0}};
}

Distribution Distribution::mvnormal(int d)
{
  if (d < 1) { throw InvalidArgument("mvnormal dimension must be >= 1"); }
  return {Family::mvnormal, d, {0.0, 0.0, 0.0}};
}

Distribution Distribution::parse(std::string_view text)
{
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) { s.remove_prefix(1); }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) { s.remove_suffix(1); }
    return s;
  };
  text = trim(text);
  std::string_view    name = text;
  std::vector<double> args;
  if (auto const open = text.find('('); open != std::string_view::npos) {
    if (text.back() != ')') { throw InvalidArgument("distribution '" + std::string(text) + "': missing ')'"); }
    name = trim(text.substr(0, open));
    std::string_view rest = text.substr(open + 1, text.size() - open - 2);
    while (!trim(rest).empty()) {
      auto const       comma = rest.find(',');
      std::string_view tok = trim(rest.substr(0, comma));
      double           v = 0.0;
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw InvalidArgument("distribution '" + std::string(text) + "': bad number '" + std::string(tok) + "'");
      }
      args.push_back(v);
      if (comma == std::string_view::npos) { break; }
      rest = rest.substr(comma + 1);
    }
  }
  auto arg = [&](std::size_t i, double fallback) { return i < args.size() ? args[i] : fallback; };
  auto arity = [&](std::size_t max) {
    if (args.size() > max) {
      throw InvalidArgument("distribution '" + std::string(name) + "' takes at most " + std::to_string(max) +
                            " parameters");
    }
  };
  auto int_arg = [&](double v) {
    if (v != std::floor(v)) { throw InvalidArgument("distribution '" + std::string(name) + "': dimension must be an integer"); }
    return static_cast<int>(v);
  };

  if (name == "normal") { arity(2); return normal(arg(0, 0.0), arg(1, 1.0)); }
  if (name == "uniform") { arity(2); return uniform(arg(0, 0.0), arg(1, 1.0)); }
  if (name == "exponential") { arity(1); return exponential(arg(0, 1.0)); }
  if (name == "laplace") { arity(2); return laplace(arg(0, 0.0), arg(1, 1.0)); }
  if (name == "logistic") { arity(2); return logistic(arg(0, 0.0), arg(1, 1.0)); }
  if (name == "cauchy") { arity(2); return cauchy(arg(0, 0.0), arg(1, 1.0)); }
  if (name == "twopiece") { arity(3); return twopiece(arg(0, 1.0), arg(1, 2.0), arg(2, 0.5)); }
  if (name == "square") { arity(0); return cube(2); }
  if (name == "cube") { arity(1); return cube(int_arg(arg(0, 3.0))); }
  if (name == "mvnormal") { arity(1); return mvnormal(int_arg(arg(0, 2.0))); }
  throw InvalidArgument("unknown distribution '" + std::string(name) + "'");
}

std::string Distribution::describe() const
{
  auto two = [&](char const *n) { return std::string(n) + "(" + fmt(params_[0]) + "," + fmt(params_[1]) + ")"; };
  switch (family_) {
  case Family::normal: return two("normal");
  case Family::uniform: return two("uniform");
  case Family::exponential: return "exponential(" + fmt(params_[0]) + ")";
  case Family::laplace: return two("laplace");
  case Family::logistic: return two("logistic");
  case Family::cauchy: return two("cauchy");
  case Family::twopiece:
    return "twopiece(" + fmt(params_[0]) + "," + fmt(params_[1]) + "," + fmt(params_[2]) + ")";
  case Family::cube: return "cube(" + std::to_string(dim_) + ")";
  case Family::mvnormal: return "mvnormal(" + std::to_string(dim_) + ")";
  }
  return "?";
}

Sample Distribution::draw(Index n, Rng &rng) const
{
  Sample                           s(n, dim_);
  std::normal_distribution<double> gauss;
  auto const [a, b, c] = params_;
  for (Index i = 0; i < n; ++i) {
    switch (family_) {
    case Family::normal: s(i, 0) = a + b * gauss(rng); break;
    case Family::uniform: s(i, 0) = a + (b - a) * open_uniform(rng); break;
    case Family::exponential: s(i, 0) = -std::log(open_uniform(rng)) / a; break;
    case Family::laplace: {
      double const u = open_uniform(rng) - 0.5;
      s(i, 0) = a - b * std::copysign(std::log1p(-2.0 * std::abs(u)), u);
      break;
    }
    case Family::logistic: {
      double const u = open_uniform(rng);
      s(i, 0) = a + b * std::log(u / (1.0 - u));
      break;
    }
    case Family::cauchy: s(i, 0) = a + b * std::tan(std::numbers::pi * (open_uniform(rng) - 0.5)); break;
    case Family::twopiece: {
      bool const   left = open_uniform(rng) < c;
      double const z = std::abs(gauss(rng));
      s(i, 0) = left ? -a * z : b * z;
      break;
    }
    case Family::cube:
      for (Index j = 0; j < dim_; ++j) { s(i, j) = open_uniform(rng); }
      break;
    case Family::mvnormal:
      for (Index j = 0; j < dim_; ++j) { s(i, j) = gauss(rng); }
      break;
    }
  }
  return s;
}

double Distribution::pdf(Eigen::Ref<const Eigen::VectorXd> x) const
{
  if (x.size() != dim_) { throw InvalidArgument("pdf: point dimension does not match distribution"); }
  switch (family_) {
  case Family::cube: return (x.array() >= 0.0).all() && (x.array() <= 1.0).all() ? 1.0 : 0.0;
  case Family::mvnormal:
    return std::exp(-0.5 * x.squaredNorm()) / std::pow(2.0 * std::numbers::pi, 0.5 * static_cast<double>(dim_));
  default: return pdf(x(0));
  }
}

void Distribution::require_scalar(char const *what) const
{
  if (!is_scalar() || family_ == Family::cube || family_ == Family::mvnormal) {
    throw InvalidArgument(std::string(what) + " is only defined for scalar distributions, not " + describe());
  }
}

double Distribution::pdf(double x) const
{
  if (family_ == Family::twopiece && x == 0.0) { return 0.5 * (pdf_left(x) + pdf_right(x)); }
  return pdf_right(x);
}

double Distribution::pdf_left(double x) const
{
  if (family_ == Family::twopiece && x == 0.0) { return params_[2] * 2.0 * std_normal_pdf(0.0) / params_[0]; }
  if (family_ == Family::uniform && x == params_[1]) { return 1.0 / (params_[1] - params_[0]); }
  if (family_ == Family::uniform && x == params_[0]) { return 0.0; }
  return pdf_right(x);
}

double Distribution::pdf_right(double x) const
{
  require_scalar("pdf");
  auto const [a, b, c] = params_;
  switch (family_) {
  case Family::normal: return std_normal_pdf((x - a) / b) / b;
  case Family::uniform: return (x >= a && x < b) ? 1.0 / (b - a) : 0.0;
  case Family::exponential: return x >= 0.0 ? a * std::exp(-a * x) : 0.0;
  case Family::laplace: return std::exp(-std::abs(x - a) / b) / (2.0 * b);
  case Family::logistic: {
    double const e = std::exp(-std::abs(x - a) / b);
    return e / (b * (1.0 + e) * (1.0 + e));
  }
  case Family::cauchy: {
    double const z = (x - a) / b;
    return 1.0 / (std::numbers::pi * b * (1.0 + z * z));
  }
  case Family::twopiece:
    return x < 0.0 ? c * 2.0 * std_normal_pdf(x / a) / a : (1.0 - c) * 2.0 * std_normal_pdf(x / b) / b;
  default: return 0.0;
  }
}

double Distribution::cdf(double x) const
{
  require_scalar("cdf");
  auto const [a, b, c] = params_;
  switch (family_) {
  case Family::normal: return std_normal_cdf((x - a) / b);
  case Family::uniform: return std::clamp((x - a) / (b - a), 0.0, 1.0);
  case Family::exponential: return x > 0.0 ? -std::expm1(-a * x) : 0.0;
  case Family::laplace: return x < a ? 0.5 * std::exp((x - a) / b) : 1.0 - 0.5 * std::exp(-(x - a) / b);
  case Family::logistic: return 1.0 / (1.0 + std::exp(-(x - a) / b));
  case Family::cauchy: return 0.5 + std::atan((x - a) / b) / std::numbers::pi;
  case Family::twopiece:
    return x < 0.0 ? c * 2.0 * std_normal_cdf(x / a) : c + (1.0 - c) * (2.0 * std_normal_cdf(x / b) - 1.0);
  default: return 0.0;
  }
}

double Distribution::quantile(double q) const
{
  require_scalar("quantile");
  if (!(q > 0.0 && q < 1.0)) { throw InvalidArgument("quantile level must lie in (0, 1)"); }
  auto const [a, b, c] = params_;
  switch (family_) {
  case Family::normal: return a + b * std_normal_quantile(q);
  case Family::uniform: return a + (b - a) * q;
  case Family::exponential: return -std::log1p(-q) / a;
  case Family::laplace: return q < 0.5 ? a + b * std::log(2.0 * q) : a - b * std::log(2.0 * (1.0 - q));
  case Family::logistic: return a + b * std::log(q / (1.0 - q));
  case Family::cauchy: return a + b * std::tan(std::numbers::pi * (q - 0.5));
  case Family::twopiece:
    if (q == c) { return 0.0; }
    return q < c ? a * std_normal_quantile(q / (2.0 * c)) : b * std_normal_quantile(0.5 + (q - c) / (2.0 * (1.0 - c)));
  default: return 0.0;
  }
}

std::optional<double> Distribution::symmetry_center() const
{
  switch (family_) {
  case Family::normal:
  case Family::laplace:
  case Family::logistic:
  case Family::cauchy: return params_[0];
  case Family::uniform: return 0.5 * (params_[0] + params_[1]);
  case Family::twopiece:
    if (params_[0] == params_[1] && params_[2] == 0.5) { return 0.0; }
    return std::nullopt;
  default: return std::nullopt;
  }
}

bool Distribution::has_finite_variance() const { return family_ != Family::cauchy; }

} // namespace uqs
