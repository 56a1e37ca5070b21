#pragma once

#include <cstdint>
#include <istream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "stochcuts/model.hpp"

namespace stochcuts {

inline constexpr const char* kInstanceSchema = "stochcuts-v1";

enum class ParseErrorKind {
  kSyntax,       // unreadable line, bad number, unknown keyword
  kDimension,    // index out of range or counts that do not add up
  kSchema,       // missing or unknown header line
  kNoScenarios,  // scenario count of zero
  kInvalid,      // parsed cleanly but fails Validate()
};

const char* ToString(ParseErrorKind kind);

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, int line, const std::string& what);
  ParseErrorKind kind() const { return kind_; }
  int line() const { return line_; }

 private:
  ParseErrorKind kind_;
  int line_;
};

struct ParsedInstance {
  Instance instance;
  // Non-fatal findings such as summed duplicate entries.
  std::vector<std::string> warnings;
};

// Text form; numbers are written with %.17g so Parse(Emit(i)) == i.
std::string EmitInstance(const Instance& instance);
ParsedInstance ParseInstance(std::istream& in);
ParsedInstance ParseInstanceString(const std::string& text);
ParsedInstance ReadInstanceFile(const std::string& path);
void WriteInstanceFile(const Instance& instance, const std::string& path);

struct GeneratorConfig {
  int sites = 5;        // n1
  int clients = 10;     // m
  int scenarios = 8;
  std::uint64_t seed = 1;
  // Closed integer ranges for the uniform draws.
  std::pair<int, int> site_cost{40, 80};
  std::pair<int, int> capacity{60, 120};
  std::pair<int, int> demand{5, 25};
  std::pair<int, int> revenue{5, 25};
  // Revenue drawn per (site, client) pair instead of per client.
  bool variant = false;

  void Validate() const;
};

// Server-location style instance: binary x_i opens site i at cost c_i;
// y_ij is the fraction of client j served from site i. Rows:
//   u_i x_i - sum_j q_j y_ij >= 0       (capacity, one per site)
//   -sum_i y_ij >= -a_j^s                (availability, one per client)
// with a_j^s ~ Bernoulli(0.5) and d_ij = -revenue. Only h varies by scenario.
Instance GenerateSslp(const GeneratorConfig& config);

// "thm1", "dim1-random-<seed>", "refinement-example". Throws
// std::invalid_argument listing the known names otherwise.
Instance Builtin(const std::string& name);

// Resolves "builtin:<name>" or a file path.
Instance LoadInstance(const std::string& source);

}  // namespace stochcuts
