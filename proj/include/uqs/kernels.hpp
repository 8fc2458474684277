#pragma once

#include "uqs/types.hpp"

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace uqs {

enum class NormSpec { euclidean, manhattan, chebyshev };

NormSpec parse_norm(std::string_view name);
std::string_view norm_name(NormSpec norm);

// Norm of a difference vector. Accepts any Eigen expression.
template <typename Derived>
double norm_of(NormSpec norm, Eigen::MatrixBase<Derived> const &v)
{
  switch (norm) {
  case NormSpec::euclidean: return v.norm();
  case NormSpec::manhattan: return v.template lpNorm<1>();
  case NormSpec::chebyshev: return v.template lpNorm<Eigen::Infinity>();
  }
  return 0.0;
}

/// How a degree-2 kernel on scalars depends on its arguments, when it admits
/// O(n) counting over a sorted sample.
///
/// `sum`: value is a nondecreasing function of each argument (Walsh average).
/// `abs_difference`: value is a nondecreasing function of |x - y|.
enum class PairOrder { none, sum, abs_difference };

/// A symmetric real-valued kernel of fixed degree on points of R^d.
///
/// The kernel reads its m arguments as rows of a sample addressed by an index
/// tuple, so the engine never copies points. Kernels are immutable and may be
/// evaluated concurrently.
///
/// Symmetry is the kernel author's contract: the value must not depend on the
/// order of the index tuple, bit for bit.
class Kernel {
public:
  using Fn = std::function<double(SampleRef const &, std::span<const Index>)>;
  using PairFn = double (*)(double, double);

  // `dimension` 0 accepts any d.
  Kernel(std::string name, int degree, Fn fn, Index dimension = 0);

  // Kernel with an O(n) counting fast path on scalar samples. `pair` must compute
  // exactly what `fn` computes for two scalar rows.
  Kernel(std::string name, int degree, Fn fn, Index dimension, PairOrder order, PairFn pair);

  std::string const &name() const { return name_; }
  int degree() const { return degree_; }
  Index dimension() const { return dimension_; }
  PairOrder pair_order() const { return order_; }
  PairFn pair_fn() const { return pair_; }

  // True when `sample` can use the sorted-pair counting path.
  bool has_fast_path(SampleRef sample) const;

  // Unchecked evaluation on the rows named by `idx` (idx.size() == degree()).
  double operator()(SampleRef const &sample, std::span<const Index> idx) const { return fn_(sample, idx); }

  // Evaluates on the first degree() rows of `points`.
  double evaluate(SampleRef points) const;

  // Evaluates on separately stored points; throws on count or dimension mismatch.
  double evaluate(std::vector<Point> const &points) const;

  // Throws InvalidArgument if the sample dimension is incompatible or n < degree.
  void check_sample(SampleRef sample) const;

private:
  std::string name_;
  int         degree_;
  Fn          fn_;
  Index       dimension_;
  PairOrder   order_ = PairOrder::none;
  PairFn      pair_ = nullptr;
};

// h(x, y) = (x + y) / 2 on scalars.
Kernel walsh_average_kernel();

// Arithmetic mean of m scalars; m = 1 is the identity kernel.
Kernel mwise_mean_kernel(int m);

// ||x - y|| under the chosen norm.
Kernel distance_kernel(NormSpec norm);

// Constant kernel h = c of the given degree; useful for degenerate-case tests.
Kernel constant_kernel(double c, int degree);

/// Resolves `walsh`, `mean:<m>`, `dist:<norm>` and any name added with
/// register_kernel(). Throws InvalidArgument for unknown names.
Kernel kernel_from_name(std::string_view name);

/// Adds a user kernel family. `prefix` is matched against the part of the name
/// before ':'; the factory receives the text after ':' (empty if none).
void register_kernel(std::string prefix, std::function<Kernel(std::string_view)> factory);

} // namespace uqs
