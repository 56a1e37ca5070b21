#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "stochcuts/model.hpp"

namespace stochcuts {

inline constexpr const char* kCutPoolSchema = "stochcuts-cuts-v1";

struct CutPool {
  std::string instance;
  std::vector<Cut> cuts;
};

// Throws std::invalid_argument on an unknown name.
CutKind ParseCutKind(const std::string& name);

// JSON document {"schema", "instance", "cuts": [{"kind", "x", "theta",
// "rhs", "origin", "dual"}]} with theta as [scenario, coefficient] pairs.
void WriteCutPool(std::ostream& out, const CutPool& pool);
// Throws std::runtime_error on malformed JSON or a wrong schema.
CutPool ReadCutPool(std::istream& in);

}  // namespace stochcuts
