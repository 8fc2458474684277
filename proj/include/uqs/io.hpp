#pragma once

#include "uqs/asymptotics.hpp"
#include "uqs/montecarlo.hpp"
#include "uqs/oracles.hpp"

#include "json.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>

namespace uqs {

using Json = nlohmann::ordered_json;

// Malformed CSV input; what() carries the 1-based line number.
class ParseError : public InvalidArgument {
public:
  ParseError(int line, std::string const &message);
  int line() const { return line_; }

private:
  int line_;
};

/// One sample point per line, comma-separated coordinates. A first line that
/// does not parse as numbers is taken as a header. Blank lines are skipped.
/// All rows must have the same dimension and finite entries.
Sample read_csv_sample(std::istream &in);

// Renders `j` with fields in insertion order and doubles as %.17g; NaN and infinities become null.
std::string format_json(Json const &j);

Json to_json(AsymptoticSummary const &s, std::string const &kernel_name, double p, std::string const &backend);
Json to_json(SimulationReport const &report);
Json to_json(HodgesLehmannOracle const &o);
Json to_json(MeanKernelOracle const &o);
Json to_json(InterpointOracle const &o);

// One standardized value per line, %.17g, "nan" for missing values.
void write_standardized_csv(std::ostream &out, SimulationReport const &report);

} // namespace uqs
