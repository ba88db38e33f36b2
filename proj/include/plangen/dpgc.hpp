#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "plangen/ast.hpp"
#include "plangen/plan_search.hpp"

namespace plangen {

// How many of something to draw: a fixed number, an inclusive range
// (sampled uniformly), or the instantiated size of an object pool.
struct CountSpec {
  enum class Kind { fixed, range, of_pool };
  Kind kind = Kind::fixed;
  long long lo = 1;
  long long hi = 1;
  std::string pool;  // of_pool only

  static CountSpec fixed(long long n) { return {Kind::fixed, n, n, {}}; }
};

struct ObjectPool {
  // exclusive: no reuse within one predicate pool's draws
  // sequential: handed out in order, wrapping at the end
  // uniform: independent uniform draws
  enum class Selection { exclusive, sequential, uniform };

  std::string name;
  std::string type;
  std::string prefix;  // prefix + 1-based index, e.g. truck -> truck1
  CountSpec count;
  Selection selection = Selection::uniform;
};

struct ArgSource {
  enum class Kind { pool, literal, tag };
  Kind kind = Kind::pool;
  std::string ref;
};

struct TagRef {
  std::string tag;
  std::size_t arg = 0;
};

struct PredicatePool {
  std::string name;
  std::string predicate;
  CountSpec count;
  std::vector<ArgSource> args;
  std::vector<TagRef> emit_tags;     // publish chosen objects
  std::vector<TagRef> consume_tags;  // force reuse of published objects
};

struct PoolGroup {
  enum class Mode { all, exclusive_choice };

  std::string name;
  Mode mode = Mode::all;
  std::vector<double> weights;  // exclusive_choice only, one per member
  std::vector<PredicatePool> pools;
};

struct SolvabilityPolicy {
  enum class Mode { planner_check, none };
  Mode mode = Mode::planner_check;
  std::uint64_t max_expansions = 50000;
  std::size_t max_plan_length = 300;
};

struct DpgcConfig {
  std::string domain_ref;
  std::vector<ObjectPool> object_pools;
  std::vector<std::string> init_invariants;  // "(pred arg...)" text
  std::vector<std::string> goal_invariants;  // may be "(not (...))"
  std::vector<PoolGroup> init_groups;
  std::vector<PoolGroup> goal_groups;
  SolvabilityPolicy solvability;
  int max_retries = 20;
};

DpgcConfig load_dpgc(const std::string& json_text);
DpgcConfig load_dpgc_file(const std::string& path);

struct Diagnostic {
  enum class Code {
    unknown_predicate,
    unknown_pool,
    unknown_type,
    tag_undefined,
    tag_cycle,
    pool_exhaustible,
    type_mismatch,
    bad_config,
  };
  Code code;
  std::string message;
};

const char* diagnostic_name(Diagnostic::Code code);

// Static checks; returns an empty list iff the config is generation-ready.
std::vector<Diagnostic> validate_dpgc(const DpgcConfig& config,
                                      const Domain& domain);

// Deterministic in (config, seed). Requires validate_dpgc to pass.
Problem generate_problem(const Domain& domain, const DpgcConfig& config,
                         std::uint64_t seed);

struct BatchItem {
  Problem problem;
  std::optional<TimedPlan> plan;
  std::optional<Unsolved> unsolved;
  std::uint64_t seed = 0;  // sub-seed that produced the kept draw
  int retries = 0;
};

// Exactly `count` items. Under planner-check, unsolvable draws are redrawn
// with fresh sub-seeds up to max_retries per slot. Slots are independent:
// results do not depend on `jobs`.
std::vector<BatchItem> generate_batch(const Domain& domain,
                                      const DpgcConfig& config,
                                      std::size_t count, std::uint64_t seed,
                                      const SearchConfig& planner_cfg,
                                      unsigned jobs = 1,
                                      bool skip_solve = false);

}  // namespace plangen
