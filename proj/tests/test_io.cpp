#include "uqs/io.hpp"

#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

using namespace uqs;

namespace {

Sample parse(std::string const &text)
{
  std::istringstream in(text);
  return read_csv_sample(in);
}

int error_line(std::string const &text)
{
  try {
    parse(text);
  } catch (ParseError const &e) {
    return e.line();
  }
  return 0;
}

} // namespace

TEST_CASE("CSV samples")
{
  auto const s = parse("x,y\n1,2\n\n 3 , 4.5\n-1e-3,+7\n");
  REQUIRE(s.rows() == 3);
  REQUIRE(s.cols() == 2);
  CHECK(s(1, 1) == 4.5);
  CHECK(s(2, 0) == -1e-3);
  CHECK(s(2, 1) == 7.0);

  auto const scalar = parse("0.5\n0.25\n");
  CHECK(scalar.rows() == 2);
  CHECK(scalar.cols() == 1);
}

TEST_CASE("CSV errors carry line numbers")
{
  CHECK(error_line("1\nabc\n3\n") == 2);
  CHECK(error_line("1,2\n3\n") == 2);
  CHECK(error_line("1\n\n2\ninf\n") == 4);
  CHECK(error_line("1\nnan\n") == 2);
  CHECK(error_line("1\n2,\n") == 2);
  CHECK(error_line("header only\n") != 0);
  CHECK_THROWS_AS(parse(""), ParseError);
  try {
    parse("1\nabc\n3\n");
  } catch (ParseError const &e) {
    CHECK(std::string(e.what()).rfind("line 2:", 0) == 0);
  }
}

TEST_CASE("JSON formatting")
{
  Json j;
  j["b"] = 0.1;
  j["a"] = std::nan("");
  j["c"] = -0.0;
  j["d"] = Json::array({1, 2.5});
  j["e"] = Json::object();
  j["f"] = "text";
  auto const out = format_json(j);
  CHECK(out == "{\n"
               "  \"b\": 0.10000000000000001,\n"
               "  \"a\": null,\n"
               "  \"c\": 0,\n"
               "  \"d\": [\n"
               "    1,\n"
               "    2.5\n"
               "  ],\n"
               "  \"e\": {},\n"
               "  \"f\": \"text\"\n"
               "}\n");
}

TEST_CASE("JSON output round-trips through a parser")
{
  std::mt19937_64                  rng(1);
  std::normal_distribution<double> gauss(0.0, 1e3);
  for (int r = 0; r < 200; ++r) {
    Json j;
    Json values = Json::array();
    for (int i = 0; i < 20; ++i) { values.push_back(gauss(rng) * std::pow(10.0, i - 10)); }
    j["values"] = values;
    j["count"] = r;
    auto const text = format_json(j);
    auto const back = Json::parse(text);
    REQUIRE(format_json(back) == text);
    for (int i = 0; i < 20; ++i) { REQUIRE(back["values"][static_cast<std::size_t>(i)].get<double>() == values[static_cast<std::size_t>(i)].get<double>()); }
  }
}

TEST_CASE("summary JSON fields")
{
  Sample s(5, 1);
  s << 0.3, -1.2, 2.2, 0.9, -0.4;
  auto const summary = asymptotic_summary(s, walsh_average_kernel(), QuantileSpec(0.5), 0.95);
  auto const j = to_json(summary, "walsh", 0.5, "auto");
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) { keys.push_back(it.key()); }
  CHECK(keys == std::vector<std::string>{"kernel", "p", "n", "degree", "backend", "point", "total_count", "selected_rank",
                                         "tie_count", "zeta_hat", "density_hat", "bandwidth", "std_error",
                                         "confidence_level", "ci_lower", "ci_upper", "warnings"});
  CHECK(j["n"] == 5);
  CHECK(j["total_count"] == 10);
  CHECK(j["point"].get<double>() == summary.point);
}

TEST_CASE("oracle JSON")
{
  auto const hl = to_json(oracle_hl(Distribution::normal()));
  CHECK(hl["example"] == "hl");
  CHECK(hl["sigma2"].get<double>() == doctest::Approx(3.14159265358979 / 3.0));

  InterpointOracle o;
  o.theta = 0.5;
  o.zeta = 0.02;
  o.f_theta = 0.0;
  auto const text = format_json(to_json(o));
  CHECK(text.find("\"sigma2\": null") != std::string::npos);
}
