#include "plangen/validate.hpp"

#include <cmath>

#include "plangen/errors.hpp"
#include "plangen/parse.hpp"

namespace plangen {

const char* outcome_name(Outcome outcome) {
  switch (outcome) {
    case Outcome::valid: return "Valid";
    case Outcome::executable_no_goal: return "ExecutableNoGoal";
    case Outcome::precondition_failure: return "PreconditionFailure";
    case Outcome::malformed: return "Malformed";
  }
  return "Unknown";
}

namespace {

// Guard against caller bugs: a problem that does not fit the domain is an
// error, not a plan outcome.
void check_consistent(const Domain& domain, const Problem& problem) {
  for (const auto& obj : problem.objects)
    if (!domain.type_declared(obj.type))
      fail(Errc::invalid_inputs, "problem object '" + obj.name +
                                     "' has undeclared type '" + obj.type +
                                     "'");
  auto check_atom = [&](const Atom& atom, const char* where) {
    if (atom.pred == "=") {
      if (atom.args.size() != 2)
        fail(Errc::invalid_inputs, std::string(where) + ": malformed equality");
      return;
    }
    const PredicateSignature* sig = domain.find_predicate(atom.pred);
    if (sig == nullptr)
      fail(Errc::invalid_inputs, std::string(where) + " atom " + atom.str() +
                                     " uses undeclared predicate");
    if (sig->params.size() != atom.args.size())
      fail(Errc::invalid_inputs,
           std::string(where) + " atom " + atom.str() + " has wrong arity");
  };
  for (const auto& atom : problem.init) check_atom(atom, "init");
  for (const auto& lit : problem.goal) check_atom(lit.atom, "goal");
}

}  // namespace

ValidationReport validate(const Domain& domain, const Problem& problem,
                          std::string_view plan_text) {
  check_consistent(domain, problem);

  ValidationReport report;

  // Whole-plan syntax first, then whole-plan grounding; execution only
  // starts once every step is well formed, mirroring VAL.
  TimedPlan plan;
  try {
    plan = parse_plan(plan_text);
  } catch (const Error& e) {
    report.outcome = Outcome::malformed;
    report.malformed_reason = e.what();
    return report;
  }

  std::vector<GroundAction> actions;
  actions.reserve(plan.steps.size());
  try {
    for (const auto& step : plan.steps)
      actions.push_back(ground(domain, problem, step.action, step.args));
  } catch (const Error& e) {
    report.outcome = Outcome::malformed;
    report.malformed_reason = e.what();
    return report;
  }

  State state = initial_state(problem);
  for (std::size_t i = 0; i < actions.size(); ++i) {
    StepRecord record;
    record.index = static_cast<int>(i) + 1;
    record.action = actions[i];
    record.pre_state_atoms = state.atoms.size();
    record.report = applicable(state, actions[i]);
    bool satisfied = record.report.satisfied;
    report.trace.push_back(std::move(record));
    if (!satisfied) {
      report.outcome = Outcome::precondition_failure;
      report.failing_step = static_cast<int>(i) + 1;
      report.violated = report.trace.back().report.violated;
      report.final_cost = state.cost;
      return report;
    }
    state = apply(state, actions[i]);
  }

  report.final_cost = state.cost;
  auto open_goals = unsatisfied(state, problem.goal);
  if (open_goals.empty()) {
    report.outcome = Outcome::valid;
  } else {
    report.outcome = Outcome::executable_no_goal;
    report.unsatisfied_goals = std::move(open_goals);
  }
  return report;
}

double valid_plan_rate(const std::vector<PlanCase>& cases) {
  if (cases.empty()) fail(Errc::empty_input, "no cases to rate");
  std::size_t valid = 0;
  for (const auto& c : cases) {
    if (c.domain == nullptr || c.problem == nullptr)
      fail(Errc::invalid_inputs, "null domain/problem in case list");
    if (validate(*c.domain, *c.problem, c.plan_text).outcome == Outcome::valid)
      ++valid;
  }
  double percent = 100.0 * static_cast<double>(valid) /
                   static_cast<double>(cases.size());
  return std::round(percent * 10.0) / 10.0;
}

}  // namespace plangen
