#pragma once

#include <string>

#include "plangen/ast.hpp"

namespace plangen {

// Canonical printing. Deterministic byte-for-byte: declarations keep source
// order, identifiers are lowercase, plans use zero-padded (width 5)
// timestamps and a trailing END line. parse(render(x)) == x structurally.
std::string render(const Domain& domain);
std::string render(const Problem& problem);
std::string render(const TimedPlan& plan);

}  // namespace plangen
