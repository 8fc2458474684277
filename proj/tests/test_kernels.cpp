#include "uqs/kernels.hpp"

#include "doctest.h"

#include <algorithm>
#include <random>

using namespace uqs;

namespace {

Sample column(std::initializer_list<double> xs)
{
  Sample s(static_cast<Index>(xs.size()), 1);
  Index  i = 0;
  for (double x : xs) { s(i++, 0) = x; }
  return s;
}

Point pt(std::initializer_list<double> xs)
{
  Point  p(static_cast<Index>(xs.size()));
  Index  i = 0;
  for (double x : xs) { p(i++) = x; }
  return p;
}

// Evaluates `k` on every ordering of the rows of `rows` and checks the values are bit-identical.
void check_symmetric(Kernel const &k, Sample const &rows)
{
  std::vector<Index> idx(static_cast<std::size_t>(k.degree()));
  for (std::size_t i = 0; i < idx.size(); ++i) { idx[i] = static_cast<Index>(i); }
  double const reference = k(rows, idx);
  while (std::next_permutation(idx.begin(), idx.end())) { REQUIRE(k(rows, idx) == reference); }
}

} // namespace

TEST_CASE("walsh average kernel")
{
  auto const k = walsh_average_kernel();
  CHECK(k.degree() == 2);
  CHECK(k.evaluate(column({1, 3})) == 2.0);
  CHECK(k.evaluate(column({0, 0})) == 0.0);
  CHECK(k.evaluate(column({1.5, 2.0})) == 1.75);
  CHECK_THROWS_AS(k.evaluate(Sample::Zero(2, 2)), InvalidArgument);
}

TEST_CASE("m-wise mean kernel")
{
  CHECK(mwise_mean_kernel(3).evaluate(column({1, 2, 3})) == 2.0);
  CHECK(mwise_mean_kernel(1).evaluate(column({7.5})) == 7.5);
  CHECK_THROWS_AS(mwise_mean_kernel(0), InvalidArgument);
  CHECK_THROWS_AS(mwise_mean_kernel(3).evaluate(Sample::Zero(3, 2)), InvalidArgument);

  std::mt19937_64                        rng(7);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  auto const                             walsh = walsh_average_kernel();
  auto const                             mean2 = mwise_mean_kernel(2);
  for (int r = 0; r < 1000; ++r) {
    auto const pair = column({u(rng), u(rng)});
    REQUIRE(mean2.evaluate(pair) == walsh.evaluate(pair));
  }
}

TEST_CASE("distance kernel")
{
  CHECK(distance_kernel(NormSpec::euclidean).evaluate({pt({0, 0}), pt({3, 4})}) == 5.0);
  CHECK(distance_kernel(NormSpec::manhattan).evaluate({pt({0, 0}), pt({3, 4})}) == 7.0);
  CHECK(distance_kernel(NormSpec::chebyshev).evaluate({pt({1, 1}), pt({1, 1})}) == 0.0);
  CHECK_THROWS_AS(distance_kernel(NormSpec::euclidean).evaluate({pt({0, 0}), pt({1, 2, 3})}), InvalidArgument);
  CHECK_THROWS_AS(distance_kernel(NormSpec::euclidean).evaluate(std::vector<Point>{pt({0, 0})}), InvalidArgument);
}

TEST_CASE("built-in kernels are symmetric bit for bit")
{
  std::mt19937_64                  rng(11);
  std::normal_distribution<double> gauss(0.0, 100.0);
  auto draw = [&](Index rows, Index d) {
    Sample s(rows, d);
    for (Index i = 0; i < rows; ++i) {
      for (Index j = 0; j < d; ++j) { s(i, j) = gauss(rng); }
    }
    return s;
  };
  for (int r = 0; r < 200; ++r) {
    check_symmetric(walsh_average_kernel(), draw(2, 1));
    for (int m = 1; m <= 6; ++m) { check_symmetric(mwise_mean_kernel(m), draw(m, 1)); }
    for (auto norm : {NormSpec::euclidean, NormSpec::manhattan, NormSpec::chebyshev}) {
      check_symmetric(distance_kernel(norm), draw(2, 3));
      check_symmetric(distance_kernel(norm), draw(2, 1));
    }
  }
}

TEST_CASE("distance kernel satisfies the norm axioms on random triples")
{
  std::mt19937_64                        rng(3);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (auto norm : {NormSpec::euclidean, NormSpec::manhattan, NormSpec::chebyshev}) {
    auto const k = distance_kernel(norm);
    for (int r = 0; r < 2000; ++r) {
      Point x(4), y(4), z(4);
      for (Index j = 0; j < 4; ++j) {
        x(j) = u(rng);
        y(j) = u(rng);
        z(j) = u(rng);
      }
      double const xy = k.evaluate({x, y});
      double const yz = k.evaluate({y, z});
      double const xz = k.evaluate({x, z});
      REQUIRE(xy >= 0.0);
      REQUIRE(xy == k.evaluate({y, x}));
      REQUIRE(k.evaluate({x, x}) == 0.0);
      // Rounding may cost an ulp or two on the right-hand side.
      REQUIRE(xz <= (xy + yz) * (1.0 + 1e-14));
    }
  }
}

TEST_CASE("kernels by name")
{
  CHECK(kernel_from_name("walsh").name() == "walsh");
  CHECK(kernel_from_name("mean:4").degree() == 4);
  CHECK(kernel_from_name("dist:manhattan").evaluate({pt({0, 0}), pt({3, 4})}) == 7.0);
  CHECK_THROWS_AS(kernel_from_name("mean:0"), InvalidArgument);
  CHECK_THROWS_AS(kernel_from_name("mean:x"), InvalidArgument);
  CHECK_THROWS_AS(kernel_from_name("dist:l7"), InvalidArgument);
  CHECK_THROWS_AS(kernel_from_name("walsh:2"), InvalidArgument);
  CHECK_THROWS_AS(kernel_from_name("nope"), InvalidArgument);
}

TEST_CASE("user kernels register under a prefix")
{
  register_kernel("range", [](std::string_view) {
    return Kernel("range", 2, [](SampleRef const &s, std::span<const Index> idx) {
      return std::max(s(idx[0], 0), s(idx[1], 0)) - std::min(s(idx[0], 0), s(idx[1], 0));
    }, 1);
  });
  auto const k = kernel_from_name("range");
  CHECK(k.evaluate(column({4, 1})) == 3.0);
  CHECK_FALSE(k.has_fast_path(column({4, 1})));
  check_symmetric(k, column({-2.5, 9.0}));
}

TEST_CASE("fast path availability")
{
  CHECK(walsh_average_kernel().has_fast_path(column({1, 2})));
  CHECK(distance_kernel(NormSpec::euclidean).has_fast_path(column({1, 2})));
  CHECK_FALSE(distance_kernel(NormSpec::euclidean).has_fast_path(Sample::Zero(2, 2)));
  CHECK_FALSE(mwise_mean_kernel(3).has_fast_path(column({1, 2, 3})));
}

TEST_CASE("binomial coefficients")
{
  CHECK(binomial(5, 2) == 10);
  CHECK(binomial(50, 0) == 1);
  CHECK(binomial(3, 4) == 0);
  CHECK(binomial(60, 30) == 118264581564861424LL);
  CHECK_THROWS_AS(binomial(200, 100), std::overflow_error);
}
