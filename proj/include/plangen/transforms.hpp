#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "plangen/ast.hpp"

namespace plangen {

// Per-category bijections original -> synthetic (a_0, p_3, o_7, t_1 ...).
// Pairs are stored in assignment order: the order of first occurrence in the
// canonical render of domain, then problem, then plan. The built-in type
// `object` always maps to itself.
struct SymbolMap {
  std::vector<std::pair<std::string, std::string>> actions;
  std::vector<std::pair<std::string, std::string>> predicates;
  std::vector<std::pair<std::string, std::string>> objects;
  std::vector<std::pair<std::string, std::string>> types;
};

struct AnonymizedTuple {
  Domain domain;
  Problem problem;
  TimedPlan plan;
  SymbolMap map;
};

// Renames action/predicate/object/type symbols consistently within the
// tuple. Deterministic: counters follow first occurrence, so the seed is
// accepted only for forward compatibility with randomized schemes.
AnonymizedTuple anonymize_tuple(const Domain& domain, const Problem& problem,
                                const TimedPlan& plan, std::uint64_t seed = 0);

struct CurriculumItem {
  std::size_t index = 0;  // 1-based
  std::string tuple_id;
  double probability = 0.0;  // (i-1)/(N-1), 0 when N == 1
  bool anonymize = false;
};

// Stacks the id list `copies` times and draws a Bernoulli(p(i)) flag per
// item from a counter-based stream keyed on (seed, index).
std::vector<CurriculumItem> curriculum_expand(
    const std::vector<std::string>& tuple_ids, std::size_t copies,
    std::uint64_t seed, bool pre_shuffle = false);

// Compact plan codec: encode strips timestamps, parentheses and END while
// preserving the action sequence; decode restores them with 1-based
// step-index timestamps.
std::string encode_plan(const TimedPlan& plan);
std::string decode_plan(std::string_view compact);

}  // namespace plangen
