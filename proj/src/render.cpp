#include "plangen/render.hpp"

#include <cstdio>

namespace plangen {

namespace {

void append_typed_list(std::string& out, const std::vector<TypedName>& list,
                       bool variables) {
  // Consecutive names of equal type share one `- type` marker. The marker
  // can only be left implicit when the whole list is object-typed; a bare
  // name in front of a typed run would be captured by that run on reparse.
  bool all_object = true;
  for (const auto& entry : list) all_object &= (entry.type == "object");
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (i > 0) out += ' ';
    if (variables) out += '?';
    out += list[i].name;
    bool run_end = (i + 1 == list.size()) || (list[i + 1].type != list[i].type);
    if (run_end && !all_object) {
      out += " - ";
      out += list[i].type;
    }
  }
}

void append_literals(std::string& out, const std::vector<Literal>& lits) {
  out += "(and";
  for (const auto& lit : lits) {
    out += ' ';
    out += lit.str();
  }
  out += ')';
}

}  // namespace

std::string render(const Domain& domain) {
  std::string out = "(define (domain " + domain.name + ")\n";
  if (!domain.requirements.empty()) {
    out += "  (:requirements";
    static const char* kOrder[] = {":strips", ":typing",
                                   ":negative-preconditions", ":equality",
                                   ":action-costs"};
    for (const char* req : kOrder)
      for (const auto& r : domain.requirements)
        if (r == req) {
          out += ' ';
          out += r;
        }
    out += ")\n";
  }
  if (!domain.types.empty()) {
    out += "  (:types";
    for (const auto& [t, parent] : domain.types) {
      out += ' ';
      out += t;
      out += " - ";
      out += parent;
    }
    out += ")\n";
  }
  if (!domain.predicates.empty()) {
    out += "  (:predicates\n";
    for (const auto& sig : domain.predicates) {
      out += "    (" + sig.name;
      if (!sig.params.empty()) {
        out += ' ';
        append_typed_list(out, sig.params, true);
      }
      out += ")\n";
    }
    out += "  )\n";
  }
  if (!domain.functions.empty()) {
    out += "  (:functions";
    for (const auto& fn : domain.functions) out += " (" + fn + ")";
    out += ")\n";
  }
  for (const auto& schema : domain.actions) {
    out += "  (:action " + schema.name + "\n";
    out += "    :parameters (";
    append_typed_list(out, schema.params, true);
    out += ")\n    :precondition ";
    append_literals(out, schema.precondition);
    out += "\n    :effect (and";
    for (const auto& atom : schema.add_effects) out += ' ' + atom.str();
    for (const auto& atom : schema.del_effects)
      out += " (not " + atom.str() + ")";
    if (schema.cost.has_value())
      out += " (increase (" + schema.cost->function + ") " +
             std::to_string(schema.cost->amount) + ")";
    out += "))\n";
  }
  out += ")\n";
  return out;
}

std::string render(const Problem& problem) {
  std::string out = "(define (problem " + problem.name + ")\n";
  out += "  (:domain " + problem.domain_name + ")\n";
  if (!problem.objects.empty()) {
    out += "  (:objects ";
    append_typed_list(out, problem.objects, false);
    out += ")\n";
  }
  out += "  (:init\n";
  for (const auto& atom : problem.init) out += "    " + atom.str() + "\n";
  for (const auto& ci : problem.init_costs)
    out += "    (= (" + ci.function + ") " + std::to_string(ci.value) + ")\n";
  out += "  )\n";
  out += "  (:goal (and";
  for (const auto& lit : problem.goal) out += ' ' + lit.str();
  out += "))\n)\n";
  return out;
}

std::string render(const TimedPlan& plan) {
  std::string out;
  char buf[32];
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    const auto& step = plan.steps[i];
    std::snprintf(buf, sizeof buf, "%05lld", step.time);
    if (i > 0) out += '\n';
    out += buf;
    out += ": (";
    out += step.action;
    for (const auto& arg : step.args) {
      out += ' ';
      out += arg;
    }
    out += ")";
  }
  // END is kept in sync with how the plan was read: round-tripping a source
  // without the marker must not invent one.
  if (plan.terminated) {
    if (!plan.steps.empty()) out += '\n';
    out += "END";
  }
  return out;
}

}  // namespace plangen
