#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "plangen/ast.hpp"
#include "plangen/semantics.hpp"

namespace plangen {

struct SearchConfig {
  enum class Strategy { greedy_best_first, breadth_first };
  enum class Heuristic { goal_count, zero };

  Strategy strategy = Strategy::greedy_best_first;
  Heuristic heuristic = Heuristic::goal_count;
  std::uint64_t max_expansions = 200000;
  std::size_t max_plan_length = 500;
  std::uint64_t seed = 0;
  std::size_t max_ground_actions = 500000;
};

struct Unsolved {
  enum class Reason {
    exhausted,  // search space fully explored under max_plan_length
    budget,     // max_expansions hit
  };
  Reason reason = Reason::exhausted;
  std::uint64_t expansions = 0;
};

using SolveResult = std::variant<TimedPlan, Unsolved>;

// Every ground instantiation of every schema, statically false equality
// preconditions pruned. Throws GroundingExplosion past `cap`.
std::vector<GroundAction> ground_all_actions(const Domain& domain,
                                             const Problem& problem,
                                             std::size_t cap);

// Forward search. A returned plan is guaranteed Valid: it is re-validated
// internally before being handed back.
SolveResult solve(const Domain& domain, const Problem& problem,
                  const SearchConfig& config = {});

// Runs an external planner command ({domain} and {problem} placeholders),
// accepting VAL-format or bare "(action args)" stdout, converting, and
// validating the result.
TimedPlan external_solve(const std::string& command_template,
                         const std::filesystem::path& domain_file,
                         const std::filesystem::path& problem_file,
                         double timeout_sec);

}  // namespace plangen
