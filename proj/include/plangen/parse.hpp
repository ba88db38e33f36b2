#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "plangen/ast.hpp"

namespace plangen {

struct ParseOptions {
  // When set, a problem whose (:domain ...) does not match the domain name
  // raises DomainMismatch instead of a warning.
  bool strict_domain_match = false;
  // Warning sink; ignored when null.
  std::vector<std::string>* warnings = nullptr;
};

Domain parse_domain(std::string_view text);

Problem parse_problem(std::string_view text, const Domain& domain,
                      const ParseOptions& options = {});

// Accepts VAL's sequential plan format: `<digits>: (<name> <args...>)` lines,
// blank lines, `;` comments, and an optional final END marker.
TimedPlan parse_plan(std::string_view text);

bool is_identifier(std::string_view token);

}  // namespace plangen
