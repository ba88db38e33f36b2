#include "plangen/semantics.hpp"

#include <algorithm>

#include "plangen/errors.hpp"

namespace plangen {

std::string GroundAction::str() const {
  std::string out = "(" + schema_name;
  for (const auto& a : args) {
    out += ' ';
    out += a;
  }
  out += ')';
  return out;
}

State initial_state(const Problem& problem) {
  State state;
  state.atoms.insert(problem.init.begin(), problem.init.end());
  state.cost = 0;
  return state;
}

namespace {

// Equality is built in: decided on object names, never looked up in states.
bool eval_equality(const Literal& lit) {
  bool eq = lit.atom.args[0] == lit.atom.args[1];
  return lit.positive ? eq : !eq;
}

std::string substitute(const std::string& term, const ActionSchema& schema,
                       const std::vector<std::string>& args) {
  if (term.empty() || term[0] != '?') return term;  // constant
  std::string var = term.substr(1);
  for (std::size_t i = 0; i < schema.params.size(); ++i)
    if (schema.params[i].name == var) return args[i];
  fail(Errc::internal, "unbound variable '?" + var + "' survived parsing");
}

}  // namespace

GroundAction ground(const Domain& domain, const Problem& problem,
                    const std::string& name,
                    const std::vector<std::string>& args) {
  const ActionSchema* schema = domain.find_action(name);
  if (schema == nullptr)
    fail(Errc::unknown_action, "unknown action '" + name + "'");
  if (schema->params.size() != args.size())
    fail(Errc::arity_mismatch,
         "action '" + name + "' expects " +
             std::to_string(schema->params.size()) + " arguments, got " +
             std::to_string(args.size()));
  for (std::size_t i = 0; i < args.size(); ++i) {
    const TypedName* obj = problem.find_object(args[i]);
    if (obj == nullptr)
      fail(Errc::type_mismatch, "argument " + std::to_string(i + 1) + " of '" +
                                    name + "': unknown object '" + args[i] +
                                    "'");
    if (!is_subtype(domain, obj->type, schema->params[i].type))
      fail(Errc::type_mismatch,
           "parameter " + std::to_string(i + 1) + " of '" + name +
               "' expects type '" + schema->params[i].type + "', object '" +
               args[i] + "' has type '" + obj->type + "'");
  }

  GroundAction ga;
  ga.schema_name = schema->name;
  ga.args = args;
  for (const auto& lit : schema->precondition) {
    Literal ground_lit{lit.positive, Atom{lit.atom.pred, {}}};
    for (const auto& term : lit.atom.args)
      ground_lit.atom.args.push_back(substitute(term, *schema, args));
    ga.precondition.push_back(std::move(ground_lit));
  }
  auto ground_atoms = [&](const std::vector<Atom>& in, std::vector<Atom>& out) {
    for (const auto& atom : in) {
      Atom ga_atom{atom.pred, {}};
      for (const auto& term : atom.args)
        ga_atom.args.push_back(substitute(term, *schema, args));
      out.push_back(std::move(ga_atom));
    }
  };
  ground_atoms(schema->add_effects, ga.add_effects);
  ground_atoms(schema->del_effects, ga.del_effects);
  // Aliased arguments can make an added atom coincide with a deleted one.
  // Under delete-then-add the add wins, so dropping the delete keeps the
  // successor state identical and preserves the disjointness invariant.
  std::erase_if(ga.del_effects, [&](const Atom& del) {
    for (const auto& add : ga.add_effects)
      if (add == del) return true;
    return false;
  });
  ga.cost_delta = schema->cost.has_value() ? schema->cost->amount : 0;

  // Grounded constants must name declared objects too.
  auto check_ground = [&](const Atom& atom) {
    for (const auto& a : atom.args)
      if (problem.find_object(a) == nullptr)
        fail(Errc::type_mismatch, "action '" + name +
                                      "' references unknown object '" + a +
                                      "'");
  };
  for (const auto& lit : ga.precondition) check_ground(lit.atom);
  for (const auto& atom : ga.add_effects) check_ground(atom);
  for (const auto& atom : ga.del_effects) check_ground(atom);
  return ga;
}

SatisfactionReport applicable(const State& state, const GroundAction& action) {
  SatisfactionReport report;
  for (const auto& lit : action.precondition) {
    bool ok;
    if (lit.atom.pred == "=") {
      ok = eval_equality(lit);
    } else {
      bool present = state.atoms.count(lit.atom) > 0;
      ok = lit.positive ? present : !present;
    }
    if (!ok) {
      report.satisfied = false;
      report.violated.push_back(lit);
    }
  }
  return report;
}

State apply(const State& state, const GroundAction& action) {
  SatisfactionReport report = applicable(state, action);
  if (!report.satisfied) {
    std::string detail;
    for (const auto& lit : report.violated) {
      if (!detail.empty()) detail += ", ";
      detail += lit.str();
    }
    fail(Errc::precondition_violation,
         "action " + action.str() + " is not applicable; violated: " + detail);
  }
  State next = state;
  for (const auto& atom : action.del_effects) next.atoms.erase(atom);
  for (const auto& atom : action.add_effects) next.atoms.insert(atom);
  next.cost = state.cost + action.cost_delta;
  return next;
}

bool holds(const State& state, const std::vector<Literal>& goal) {
  return unsatisfied(state, goal).empty();
}

std::vector<Literal> unsatisfied(const State& state,
                                 const std::vector<Literal>& goal) {
  std::vector<Literal> out;
  for (const auto& lit : goal) {
    bool ok;
    if (lit.atom.pred == "=") {
      ok = eval_equality(lit);
    } else {
      bool present = state.atoms.count(lit.atom) > 0;
      ok = lit.positive ? present : !present;
    }
    if (!ok) out.push_back(lit);
  }
  return out;
}

}  // namespace plangen
