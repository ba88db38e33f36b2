#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace plangen {

// Parsed PDDL values are plain data: immutable after construction by
// convention, freely copyable, and safe to share across threads.

struct TypedName {
  std::string name;
  std::string type = "object";

  bool operator==(const TypedName&) const = default;
};

struct Atom {
  std::string pred;
  std::vector<std::string> args;

  auto operator<=>(const Atom&) const = default;
  std::string str() const;
};

struct Literal {
  bool positive = true;
  Atom atom;

  bool operator==(const Literal&) const = default;
  std::string str() const;
};

struct PredicateSignature {
  std::string name;
  std::vector<TypedName> params;

  bool operator==(const PredicateSignature&) const = default;
};

struct CostEffect {
  std::string function;
  long long amount = 0;

  bool operator==(const CostEffect&) const = default;
};

struct ActionSchema {
  std::string name;
  std::vector<TypedName> params;
  std::vector<Literal> precondition;
  std::vector<Atom> add_effects;
  std::vector<Atom> del_effects;
  std::optional<CostEffect> cost;

  bool operator==(const ActionSchema&) const = default;
};

struct Domain {
  std::string name;
  // (type, parent) pairs in declaration order; parents resolve to "object".
  std::vector<std::pair<std::string, std::string>> types;
  std::vector<PredicateSignature> predicates;
  std::vector<ActionSchema> actions;
  std::vector<std::string> functions;
  std::vector<std::string> requirements;

  bool operator==(const Domain&) const = default;

  const PredicateSignature* find_predicate(const std::string& name) const;
  const ActionSchema* find_action(const std::string& name) const;
  bool type_declared(const std::string& name) const;
};

// True iff an object of type `t` may fill a parameter of type `u`.
bool is_subtype(const Domain& domain, const std::string& t, const std::string& u);

struct FunctionInit {
  std::string function;
  long long value = 0;

  bool operator==(const FunctionInit&) const = default;
};

struct Problem {
  std::string name;
  std::string domain_name;
  std::vector<TypedName> objects;
  std::vector<Atom> init;
  std::vector<FunctionInit> init_costs;
  std::vector<Literal> goal;

  bool operator==(const Problem&) const = default;

  const TypedName* find_object(const std::string& name) const;
};

struct PlanStep {
  long long time = 0;
  std::string action;
  std::vector<std::string> args;

  bool operator==(const PlanStep&) const = default;
};

struct TimedPlan {
  std::vector<PlanStep> steps;
  bool terminated = false;

  bool operator==(const TimedPlan&) const = default;
};

}  // namespace plangen
