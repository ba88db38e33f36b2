#pragma once

#include <set>
#include <string>
#include <vector>

#include "plangen/ast.hpp"

namespace plangen {

struct GroundAction {
  std::string schema_name;
  std::vector<std::string> args;
  std::vector<Literal> precondition;  // ground literals, may include "="
  std::vector<Atom> add_effects;
  std::vector<Atom> del_effects;
  long long cost_delta = 0;

  bool operator==(const GroundAction&) const = default;
  std::string str() const;  // "(board c1 l1)"
};

// Closed-world state: atoms present are true, everything else is false.
struct State {
  std::set<Atom> atoms;
  long long cost = 0;

  bool operator==(const State&) const = default;
};

struct SatisfactionReport {
  bool satisfied = true;
  std::vector<Literal> violated;
};

State initial_state(const Problem& problem);

// Substitutes args into the named schema, checking arity and types.
GroundAction ground(const Domain& domain, const Problem& problem,
                    const std::string& name,
                    const std::vector<std::string>& args);

SatisfactionReport applicable(const State& state, const GroundAction& action);

// STRIPS successor, delete-then-add. Throws PreconditionViolation when the
// action is not applicable.
State apply(const State& state, const GroundAction& action);

bool holds(const State& state, const std::vector<Literal>& goal);

// Goal literals not satisfied in `state` (the holds() residue).
std::vector<Literal> unsatisfied(const State& state,
                                 const std::vector<Literal>& goal);

}  // namespace plangen
