#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace uqs {

using Index = Eigen::Index;

// One sample point per row; d = cols().
using Sample = Eigen::MatrixXd;
using SampleRef = Eigen::Ref<const Sample>;
using Point = Eigen::VectorXd;

// Malformed arguments: bad p, n < m, dimension mismatch, non-finite data.
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// The exact backend refuses to materialize more than the configured number of values.
class CapExceeded : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A hypothesis of the limit theorem (zeta > 0, positive density at the quantile) fails on the data.
class HypothesisViolation : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Kernel values are degenerate (zero interquartile range); no density can be estimated.
class DegenerateDistribution : public HypothesisViolation {
public:
  using HypothesisViolation::HypothesisViolation;
};

// Scenario asks for constants that no oracle can supply.
class OracleUnavailable : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Throws InvalidArgument unless every coordinate is finite.
void require_finite(SampleRef sample);

// C(n, k); throws std::overflow_error if it does not fit in Index.
Index binomial(Index n, Index k);

} // namespace uqs
