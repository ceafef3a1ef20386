#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "mvrobust/model.hpp"

namespace mvrobust {

struct ParseError : std::runtime_error {
  int line;
  ParseError(int l, const std::string& msg)
      : std::runtime_error("line " + std::to_string(l) + ": " + msg), line(l) {}
};

// Template DSL, line oriented, '#' starts a comment:
//   relation NAME(attr [readonly], ...) [workload_readonly]
//   template NAME {
//     (R|W|U) VAR:RELATION {readset} [{writeset}]
//   }
Model parse_model(std::string_view text);
Model load_model_file(const std::string& path);

// Allocation syntax: comma-separated Name=LEVEL pairs; templates not
// mentioned default to SSI.
Allocation parse_allocation(const Model& m, std::string_view spec);

}  // namespace mvrobust
