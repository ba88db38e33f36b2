#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "plangen/ast.hpp"
#include "plangen/semantics.hpp"

namespace plangen {

// Four-way classification, one label per plan. Precedence: Malformed over
// PreconditionFailure (earliest step) over ExecutableNoGoal over Valid.
enum class Outcome {
  valid,
  executable_no_goal,
  precondition_failure,
  malformed,
};

const char* outcome_name(Outcome outcome);

struct StepRecord {
  int index = 0;  // 1-based position in the plan
  GroundAction action;
  std::size_t pre_state_atoms = 0;
  SatisfactionReport report;
};

struct ValidationReport {
  Outcome outcome = Outcome::malformed;
  std::vector<StepRecord> trace;
  // Populated according to outcome: the earliest failing step and its
  // violated literals, the goal literals left unsatisfied, or the parse /
  // grounding error text.
  std::optional<int> failing_step;
  std::vector<Literal> violated;
  std::vector<Literal> unsatisfied_goals;
  std::string malformed_reason;
  long long final_cost = 0;
};

// Executes plan_text against (domain, problem). Plan defects never throw;
// they are encoded in the outcome. Throws InvalidInputs only when the
// domain/problem pair itself is inconsistent.
ValidationReport validate(const Domain& domain, const Problem& problem,
                          std::string_view plan_text);

struct PlanCase {
  const Domain* domain = nullptr;
  const Problem* problem = nullptr;
  std::string plan_text;
};

// 100 * valid / total, rounded to one decimal place.
double valid_plan_rate(const std::vector<PlanCase>& cases);

}  // namespace plangen
