#include <set>

#include "doctest.h"
#include "gen_random.hpp"
#include "oracle.hpp"
#include "plangen/errors.hpp"
#include "plangen/parse.hpp"
#include "plangen/plan_search.hpp"
#include "plangen/render.hpp"
#include "plangen/validate.hpp"
#include "testutil.hpp"

using namespace plangen;

namespace {

struct Ferry {
  Domain domain = parse_domain(testutil::fixture("ferry/domain.pddl"));
  Problem problem =
      parse_problem(testutil::fixture("ferry/problem1.pddl"), domain);
};

SearchConfig bfs_config() {
  SearchConfig cfg;
  cfg.strategy = SearchConfig::Strategy::breadth_first;
  cfg.heuristic = SearchConfig::Heuristic::zero;
  return cfg;
}

// Independent shortest-plan length via plain BFS over the naive string
// simulation; -1 when no plan exists. Used to cross-check optimality.
long long oracle_shortest(const Domain& d, const Problem& p,
                          std::size_t state_cap, bool* overflow) {
  auto ground = testgen::enumerate_ground(testgen::RandomInstance{d, p});
  std::set<std::string> init_atoms;
  for (const auto& a : p.init) init_atoms.insert(a.str());
  auto goal_ok = [&](const std::set<std::string>& s) {
    for (const auto& lit : p.goal) {
      bool ok;
      if (lit.atom.pred == "=") {
        bool eq = lit.atom.args[0] == lit.atom.args[1];
        ok = lit.positive ? eq : !eq;
      } else {
        bool in = s.count(lit.atom.str()) > 0;
        ok = lit.positive ? in : !in;
      }
      if (!ok) return false;
    }
    return true;
  };
  std::set<std::set<std::string>> seen{init_atoms};
  std::vector<std::pair<std::set<std::string>, long long>> frontier{
      {init_atoms, 0}};
  *overflow = false;
  if (goal_ok(init_atoms)) return 0;
  for (std::size_t i = 0; i < frontier.size(); ++i) {
    auto [state, depth] = frontier[i];
    for (const auto& ga : ground) {
      bool ok = true;
      for (const auto& lit : ga.precondition) {
        bool truth;
        if (lit.atom.pred == "=")
          truth = (lit.atom.args[0] == lit.atom.args[1]) == lit.positive;
        else
          truth = (state.count(lit.atom.str()) > 0) == lit.positive;
        if (!truth) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      std::set<std::string> next = state;
      for (const auto& atom : ga.del_effects) next.erase(atom.str());
      for (const auto& atom : ga.add_effects) next.insert(atom.str());
      if (!seen.insert(next).second) continue;
      if (goal_ok(next)) return depth + 1;
      if (seen.size() > state_cap) {
        *overflow = true;
        return -1;
      }
      frontier.emplace_back(std::move(next), depth + 1);
    }
  }
  return -1;
}

}  // namespace

TEST_CASE("breadth-first finds the unique shortest ferry plan") {
  Ferry f;
  SolveResult result = solve(f.domain, f.problem, bfs_config());
  REQUIRE(std::holds_alternative<TimedPlan>(result));
  const TimedPlan& plan = std::get<TimedPlan>(result);
  REQUIRE(plan.steps.size() == 3);
  CHECK(plan.steps[0].action == "board");
  CHECK(plan.steps[1].action == "sail");
  CHECK(plan.steps[2].action == "debark");
  CHECK(validate(f.domain, f.problem, render(plan)).outcome == Outcome::valid);
}

TEST_CASE("trivially satisfied goal yields the empty plan") {
  Ferry f;
  Problem done = f.problem;
  done.goal.clear();
  SolveResult result = solve(f.domain, done, bfs_config());
  REQUIRE(std::holds_alternative<TimedPlan>(result));
  CHECK(std::get<TimedPlan>(result).steps.empty());
}

TEST_CASE("unreachable goal is exhausted, not budget") {
  Ferry f;
  Problem stranded = parse_problem(
      testutil::fixture("ferry/problem_unsolvable.pddl"), f.domain);
  SolveResult result = solve(f.domain, stranded, bfs_config());
  REQUIRE(std::holds_alternative<Unsolved>(result));
  CHECK(std::get<Unsolved>(result).reason == Unsolved::Reason::exhausted);
}

TEST_CASE("expansion budget is respected") {
  Ferry f;
  Problem impossible = f.problem;
  // c1 cannot be in two places; the space itself is several states wide
  impossible.goal.push_back(Literal{true, Atom{"at", {"c1", "l1"}}});
  SearchConfig cfg = bfs_config();
  cfg.max_expansions = 1;
  SolveResult result = solve(f.domain, impossible, cfg);
  REQUIRE(std::holds_alternative<Unsolved>(result));
  CHECK(std::get<Unsolved>(result).reason == Unsolved::Reason::budget);

  cfg.max_expansions = 100000;
  SolveResult full = solve(f.domain, impossible, cfg);
  REQUIRE(std::holds_alternative<Unsolved>(full));
  CHECK(std::get<Unsolved>(full).reason == Unsolved::Reason::exhausted);
}

TEST_CASE("bfs config with nonzero heuristic is rejected") {
  Ferry f;
  SearchConfig cfg;
  cfg.strategy = SearchConfig::Strategy::breadth_first;
  cfg.heuristic = SearchConfig::Heuristic::goal_count;
  CHECK_THROWS_AS(solve(f.domain, f.problem, cfg), Error);
}

TEST_CASE("grounding explosion reports the count") {
  Ferry f;
  SearchConfig cfg;
  cfg.max_ground_actions = 2;
  try {
    solve(f.domain, f.problem, cfg);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::grounding_explosion);
  }
}

TEST_CASE("same seed, same plan; plans always validate") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    testgen::RandomInstance inst = testgen::make_instance(seed);
    SearchConfig cfg;
    cfg.seed = seed;
    cfg.max_expansions = 20000;
    SolveResult a = solve(inst.domain, inst.problem, cfg);
    SolveResult b = solve(inst.domain, inst.problem, cfg);
    REQUIRE(std::holds_alternative<TimedPlan>(a) ==
            std::holds_alternative<TimedPlan>(b));
    if (std::holds_alternative<TimedPlan>(a)) {
      CHECK(std::get<TimedPlan>(a) == std::get<TimedPlan>(b));
      CHECK(validate(inst.domain, inst.problem, render(std::get<TimedPlan>(a)))
                .outcome == Outcome::valid);
    }
  }
}

TEST_CASE("bfs matches exhaustive shortest length on random instances") {
  int compared = 0;
  for (std::uint64_t seed = 100; seed < 160; ++seed) {
    testgen::RandomInstance inst = testgen::make_instance(seed);
    bool overflow = false;
    long long want = oracle_shortest(inst.domain, inst.problem, 10000, &overflow);
    if (overflow) continue;
    SearchConfig cfg = bfs_config();
    cfg.max_expansions = 200000;
    cfg.seed = seed;
    SolveResult got = solve(inst.domain, inst.problem, cfg);
    if (want < 0) {
      REQUIRE(std::holds_alternative<Unsolved>(got));
      CHECK(std::get<Unsolved>(got).reason == Unsolved::Reason::exhausted);
    } else {
      REQUIRE(std::holds_alternative<TimedPlan>(got));
      CHECK(std::get<TimedPlan>(got).steps.size() ==
            static_cast<std::size_t>(want));
    }
    ++compared;
  }
  CHECK(compared >= 30);
}

TEST_CASE("external adapter converts bare parens output") {
  Ferry f;
  auto stub = testutil::fixture_dir() / "stubs" / "plan_ok.sh";
  TimedPlan plan =
      external_solve("sh " + stub.string() + " {domain} {problem}",
                     testutil::fixture_dir() / "ferry" / "domain.pddl",
                     testutil::fixture_dir() / "ferry" / "problem1.pddl", 10);
  REQUIRE(plan.steps.size() == 3);
  CHECK(plan.steps[0].time == 1);
  CHECK(plan.steps[2].time == 3);
  CHECK(validate(f.domain, f.problem, render(plan)).outcome == Outcome::valid);
}

TEST_CASE("external adapter handles VAL-style lines amid chatter") {
  auto stub = testutil::fixture_dir() / "stubs" / "plan_chatter.sh";
  TimedPlan plan =
      external_solve("sh " + stub.string() + " {domain} {problem}",
                     testutil::fixture_dir() / "ferry" / "domain.pddl",
                     testutil::fixture_dir() / "ferry" / "problem1.pddl", 10);
  CHECK(plan.steps.size() == 3);
}

TEST_CASE("external adapter failure modes") {
  auto dir = testutil::fixture_dir();
  auto dom = dir / "ferry" / "domain.pddl";
  auto prob = dir / "ferry" / "problem1.pddl";

  auto code_of = [&](const char* stub, double timeout) {
    try {
      external_solve("sh " + (dir / "stubs" / stub).string() +
                         " {domain} {problem}",
                     dom, prob, timeout);
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::internal;
  };

  CHECK(code_of("plan_fail.sh", 10) == Errc::external_failure);
  CHECK(code_of("plan_garbage.sh", 10) == Errc::conversion_failure);
  CHECK(code_of("plan_invalid.sh", 10) == Errc::invalid_external_plan);
  CHECK(code_of("plan_slow.sh", 0.5) == Errc::external_failure);

  CHECK_THROWS_AS(external_solve("sh foo.sh", dom, prob, 1), Error);
}
