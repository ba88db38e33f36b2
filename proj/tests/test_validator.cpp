#include "doctest.h"
#include "gen_random.hpp"
#include "oracle.hpp"
#include "plangen/errors.hpp"
#include "plangen/parse.hpp"
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

}  // namespace

TEST_CASE("validate classifies the ferry plans") {
  Ferry f;

  ValidationReport ok =
      validate(f.domain, f.problem, testutil::fixture("ferry/plan_valid.txt"));
  CHECK(ok.outcome == Outcome::valid);
  CHECK(ok.trace.size() == 3);
  CHECK(!ok.failing_step.has_value());
  CHECK(ok.unsatisfied_goals.empty());

  ValidationReport nogoal =
      validate(f.domain, f.problem, testutil::fixture("ferry/plan_nogoal.txt"));
  CHECK(nogoal.outcome == Outcome::executable_no_goal);
  REQUIRE(nogoal.unsatisfied_goals.size() == 1);
  CHECK(nogoal.unsatisfied_goals[0].atom.str() == "(at c1 l2)");

  ValidationReport precfail = validate(
      f.domain, f.problem, testutil::fixture("ferry/plan_precfail.txt"));
  CHECK(precfail.outcome == Outcome::precondition_failure);
  REQUIRE(precfail.failing_step.has_value());
  CHECK(*precfail.failing_step == 2);
  REQUIRE(precfail.violated.size() == 1);
  CHECK(precfail.violated[0].atom.str() == "(ferry-at l1)");
  CHECK(precfail.trace.size() == 2);  // halted at the failing step

  ValidationReport bad = validate(f.domain, f.problem,
                                  testutil::fixture("ferry/plan_malformed.txt"));
  CHECK(bad.outcome == Outcome::malformed);
  CHECK(!bad.malformed_reason.empty());
  CHECK(bad.trace.empty());
}

TEST_CASE("grounding failures are malformed") {
  Ferry f;
  CHECK(validate(f.domain, f.problem, "1: (warp c1)").outcome ==
        Outcome::malformed);
  CHECK(validate(f.domain, f.problem, "1: (board c1)").outcome ==
        Outcome::malformed);
  CHECK(validate(f.domain, f.problem, "1: (board l1 c1)").outcome ==
        Outcome::malformed);
  // a later malformed step wins over an earlier precondition failure
  CHECK(validate(f.domain, f.problem, "1: (sail l1 l2)\n2: (warp c1)").outcome ==
        Outcome::malformed);
}

TEST_CASE("empty plan executes vacuously") {
  Ferry f;
  ValidationReport rep = validate(f.domain, f.problem, "");
  CHECK(rep.outcome == Outcome::executable_no_goal);

  Problem trivially_done = f.problem;
  trivially_done.goal.clear();
  CHECK(validate(f.domain, trivially_done, "").outcome == Outcome::valid);
}

TEST_CASE("plans without END still validate") {
  Ferry f;
  CHECK(validate(f.domain, f.problem,
                 "1: (board c1 l1)\n2: (sail l1 l2)\n3: (debark c1 l2)")
            .outcome == Outcome::valid);
}

TEST_CASE("cost accumulates into the report") {
  Domain d = parse_domain(testutil::fixture("costferry/domain.pddl"));
  Problem p = parse_problem(testutil::fixture("costferry/problem1.pddl"), d);
  ValidationReport rep =
      validate(d, p, "1: (board c1 l1)\n2: (sail l1 l2)\n3: (debark c1 l2)");
  CHECK(rep.outcome == Outcome::valid);
  CHECK(rep.final_cost == 5);
}

TEST_CASE("valid_plan_rate") {
  Ferry f;
  std::vector<PlanCase> cases;
  for (const char* rel : {"ferry/plan_valid.txt", "ferry/plan_nogoal.txt",
                          "ferry/plan_precfail.txt", "ferry/plan_malformed.txt"})
    cases.push_back(PlanCase{&f.domain, &f.problem, testutil::fixture(rel)});
  CHECK(valid_plan_rate(cases) == doctest::Approx(25.0));
  CHECK(valid_plan_rate({cases[0]}) == doctest::Approx(100.0));
  CHECK(valid_plan_rate({cases[3]}) == doctest::Approx(0.0));
  CHECK_THROWS_AS(valid_plan_rate({}), Error);
}

TEST_CASE("truncating a valid plan never fails preconditions") {
  Ferry f;
  TimedPlan full = parse_plan(testutil::fixture("ferry/plan_valid.txt"));
  for (std::size_t keep = 0; keep <= full.steps.size(); ++keep) {
    TimedPlan prefix;
    prefix.steps.assign(full.steps.begin(), full.steps.begin() + keep);
    prefix.terminated = true;
    Outcome out = validate(f.domain, f.problem, render(prefix)).outcome;
    CHECK((out == Outcome::valid || out == Outcome::executable_no_goal));
  }
}

TEST_CASE("validator agrees with the naive oracle on random instances") {
  // smaller copy of the acceptance sweep, kept here for fast iteration
  std::size_t checked = 0;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    testgen::RandomInstance inst = testgen::make_instance(seed);
    for (const std::string& plan_text : testgen::make_plans(inst, seed, 6)) {
      Outcome got = validate(inst.domain, inst.problem, plan_text).outcome;
      oracle::Kind want = oracle::classify(inst.domain, inst.problem, plan_text);
      CHECK(testgen::same_outcome(got, want));
      ++checked;
    }
  }
  CHECK(checked >= 200);
}
