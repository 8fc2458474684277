#include "uqs/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <vector>

namespace uqs {

ParseError::ParseError(int line, std::string const &message)
  : InvalidArgument("line " + std::to_string(line) + ": " + message)
  , line_(line)
{}

namespace {

std::string_view trim(std::string_view s)
{
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) { s.remove_prefix(1); }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) { s.remove_suffix(1); }
  return s;
}

// Parses a comma-separated row; returns false and names the bad field on failure.
bool parse_row(std::string_view line, std::vector<double> &row, std::string &bad)
{
  row.clear();
  while (true) {
    auto const       comma = line.find(',');
    std::string_view field = trim(line.substr(0, comma));
    if (!field.empty() && field.front() == '+') { field.remove_prefix(1); }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
      bad = std::string(field);
      return false;
    }
    row.push_back(v);
    if (comma == std::string_view::npos) { return true; }
    line = line.substr(comma + 1);
  }
}

std::string g17(double v)
{
  char buf[40];
  int  len = std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(len));
}

void emit(std::string &out, Json const &j, int indent)
{
  std::string const pad(static_cast<std::size_t>(indent + 2), ' ');
  std::string const close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
  case Json::value_t::object: {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first) { out += ",\n"; }
      first = false;
      out += pad + Json(it.key()).dump() + ": ";
      emit(out, it.value(), indent + 2);
    }
    out += "\n" + close + "}";
    return;
  }
  case Json::value_t::array: {
    if (j.empty()) {
      out += "[]";
      return;
    }
    out += "[\n";
    bool first = true;
    for (auto const &e : j) {
      if (!first) { out += ",\n"; }
      first = false;
      out += pad;
      emit(out, e, indent + 2);
    }
    out += "\n" + close + "]";
    return;
  }
  case Json::value_t::number_float: {
    double const v = j.get<double>() + 0.0;
    out += std::isfinite(v) ? g17(v) : "null";
    return;
  }
  default: out += j.dump(); return;
  }
}

} // namespace

Sample read_csv_sample(std::istream &in)
{
  std::vector<double> data;
  Index               dim = 0;
  Index               rows = 0;
  std::string         line;
  std::vector<double> row;
  std::string         bad;
  int                 lineno = 0;
  bool                seen_first = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view text = trim(line);
    if (text.empty()) { continue; }
    bool const first = !seen_first;
    seen_first = true;
    if (!parse_row(text, row, bad)) {
      if (first) { continue; } // header
      throw ParseError(lineno, "cannot parse '" + bad + "' as a number");
    }
    if (dim == 0) { dim = static_cast<Index>(row.size()); }
    if (static_cast<Index>(row.size()) != dim) {
      throw ParseError(lineno, "expected " + std::to_string(dim) + " coordinates, found " + std::to_string(row.size()));
    }
    for (double v : row) {
      if (!std::isfinite(v)) { throw ParseError(lineno, "non-finite coordinate"); }
    }
    data.insert(data.end(), row.begin(), row.end());
    ++rows;
  }
  if (rows == 0) { throw ParseError(lineno, "no sample points in input"); }
  Sample s(rows, dim);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < dim; ++j) { s(i, j) = data[static_cast<std::size_t>(i * dim + j)]; }
  }
  return s;
}

std::string format_json(Json const &j)
{
  std::string out;
  emit(out, j, 0);
  out += "\n";
  return out;
}

Json to_json(AsymptoticSummary const &s, std::string const &kernel_name, double p, std::string const &backend)
{
  Json j;
  j["kernel"] = kernel_name;
  j["p"] = p;
  j["n"] = s.n;
  j["degree"] = s.degree;
  j["backend"] = backend;
  j["point"] = s.point;
  j["total_count"] = s.total_count;
  j["selected_rank"] = s.selected_rank;
  j["tie_count"] = s.tie_count;
  j["zeta_hat"] = s.zeta_hat;
  j["density_hat"] = s.density_hat;
  j["bandwidth"] = s.bandwidth;
  j["std_error"] = s.std_error;
  j["confidence_level"] = s.confidence_level;
  j["ci_lower"] = s.ci_lower;
  j["ci_upper"] = s.ci_upper;
  j["warnings"] = s.warnings;
  return j;
}

Json to_json(SimulationReport const &r)
{
  Json j;
  Json spec;
  spec["mode"] = std::string(mode_name(r.spec.mode));
  spec["distribution"] = r.spec.distribution.describe();
  spec["kernel"] = r.spec.kernel_name;
  spec["p"] = r.spec.p;
  spec["n"] = r.spec.n;
  spec["replicates"] = r.spec.replicates;
  spec["seed"] = r.spec.master_seed;
  if (r.spec.mode == ScenarioMode::coverage) { spec["level"] = r.spec.level; }
  j["scenario"] = spec;

  Json oracle;
  oracle["source"] = r.oracle.source;
  oracle["quantile"] = r.oracle.quantile;
  oracle["quantile_se"] = r.oracle.quantile_se;
  oracle["zeta"] = r.oracle.zeta;
  oracle["zeta_se"] = r.oracle.zeta_se;
  oracle["density_left"] = r.oracle.density_left;
  oracle["density_right"] = r.oracle.density_right;
  oracle["density_se"] = r.oracle.density_se;
  oracle["asymptotic_variance"] = r.oracle.asymptotic_variance();
  j["oracle"] = oracle;

  j["ks_distance"] = r.ks_distance;
  j["ks_critical_01"] = r.ks_critical_01;
  j["empirical_variance"] = r.empirical_variance;
  j["standardized_mean"] = r.standardized_mean;
  j["standardized_sd"] = r.standardized_sd;
  j["coverage"] = r.coverage;
  j["left_tail_ks"] = r.left_tail_ks;
  j["left_count"] = r.left_count;
  j["right_tail_ks"] = r.right_tail_ks;
  j["right_count"] = r.right_count;
  if (r.efficiency) {
    Json e;
    e["ratio"] = r.efficiency->ratio;
    e["variance_u_statistic"] = r.efficiency->variance_u_statistic;
    e["variance_u_quantile"] = r.efficiency->variance_u_quantile;
    j["efficiency"] = e;
  }
  if (r.plugin_coverage) {
    Json c;
    c["coverage"] = r.plugin_coverage->coverage;
    c["covered"] = r.plugin_coverage->covered;
    c["valid"] = r.plugin_coverage->valid;
    c["refused"] = r.plugin_coverage->refused;
    c["mean_width"] = r.plugin_coverage->mean_width;
    j["plugin_coverage"] = c;
  }
  Json values = Json::array();
  for (double v : r.standardized_values) { values.push_back(v); }
  j["standardized_values"] = values;
  return j;
}

Json to_json(HodgesLehmannOracle const &o)
{
  Json j;
  j["example"] = "hl";
  j["zeta"] = o.zeta;
  j["integral_g2"] = o.integral_g2;
  j["density_at_quantile"] = o.density_at_center;
  j["sigma2"] = o.sigma2;
  j["quantile"] = o.center;
  return j;
}

Json to_json(MeanKernelOracle const &o)
{
  Json j;
  j["example"] = "mwise-mean";
  j["m"] = o.degree;
  j["zeta"] = o.zeta;
  j["density_at_quantile"] = o.density_at_center;
  j["sigma2"] = o.sigma2;
  j["quantile"] = o.center;
  return j;
}

Json to_json(InterpointOracle const &o)
{
  Json j;
  j["example"] = "interpoint";
  j["theta"] = o.theta;
  j["p"] = o.p;
  j["ball_probability"] = o.ball_probability;
  j["ball_probability_se"] = o.ball_probability_se;
  j["zeta"] = o.zeta;
  j["zeta_se"] = o.zeta_se;
  j["density_at_quantile"] = o.f_theta;
  j["density_at_quantile_se"] = o.f_theta_se;
  double const sigma2 = o.f_theta > 0.0 ? 4.0 * o.zeta / (o.f_theta * o.f_theta) : std::nan("");
  j["sigma2"] = sigma2;
  return j;
}

void write_standardized_csv(std::ostream &out, SimulationReport const &report)
{
  for (double v : report.standardized_values) { out << (std::isnan(v) ? std::string("nan") : g17(v)) << '\n'; }
}

} // namespace uqs
