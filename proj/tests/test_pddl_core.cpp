#include <functional>
#include <random>
#include <string>

#include "doctest.h"
#include "plangen/errors.hpp"
#include "plangen/parse.hpp"
#include "plangen/render.hpp"
#include "testutil.hpp"

using namespace plangen;

namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::internal;
}

}  // namespace

TEST_CASE("minimal domain parses") {
  Domain d = parse_domain("(define (domain d) (:predicates (p ?x)))");
  CHECK(d.name == "d");
  CHECK(d.predicates.size() == 1);
  CHECK(d.predicates[0].name == "p");
  CHECK(d.predicates[0].params.size() == 1);
  CHECK(d.predicates[0].params[0].type == "object");
  CHECK(d.actions.empty());
  CHECK(d.types.empty());
}

TEST_CASE("ferry fixture domain") {
  Domain d = parse_domain(testutil::fixture("ferry/domain.pddl"));
  CHECK(d.name == "ferry");
  CHECK(d.types.size() == 2);
  CHECK(d.predicates.size() == 4);
  REQUIRE(d.actions.size() == 3);
  CHECK(d.actions[0].name == "board");
  CHECK(d.actions[1].name == "sail");
  CHECK(d.actions[2].name == "debark");
  // every variable in the bodies is bound (parse would have rejected it
  // otherwise); spot-check board's pieces
  const ActionSchema& board = d.actions[0];
  CHECK(board.params.size() == 2);
  CHECK(board.precondition.size() == 3);
  CHECK(board.add_effects.size() == 1);
  CHECK(board.del_effects.size() == 2);
  CHECK(!board.cost.has_value());
}

TEST_CASE("cost functions and increase effects") {
  Domain d = parse_domain(testutil::fixture("costferry/domain.pddl"));
  REQUIRE(d.functions.size() == 1);
  CHECK(d.functions[0] == "total-cost");
  REQUIRE(d.actions[0].cost.has_value());
  CHECK(d.actions[0].cost->function == "total-cost");
  CHECK(d.actions[0].cost->amount == 1);
  CHECK(d.actions[1].cost->amount == 3);

  Problem p = parse_problem(testutil::fixture("costferry/problem1.pddl"), d);
  REQUIRE(p.init_costs.size() == 1);
  CHECK(p.init_costs[0].function == "total-cost");
  CHECK(p.init_costs[0].value == 0);
}

TEST_CASE("case-insensitive identifiers render lowercase") {
  Domain d = parse_domain("(define (domain FeRRy) (:predicates (At ?X)))");
  CHECK(d.name == "ferry");
  CHECK(d.predicates[0].name == "at");
  CHECK(render(d).find("FeRRy") == std::string::npos);
}

TEST_CASE("domain errors are structured") {
  CHECK(code_of([] { parse_domain("(define (domain d"); }) == Errc::lex_error);
  CHECK(code_of([] { parse_domain("(define (domain d) \x01)"); }) ==
        Errc::lex_error);
  CHECK(code_of([] { parse_domain("(define (domain d) (:bogus))"); }) ==
        Errc::structure_error);
  CHECK(code_of([] {
          parse_domain("(define (domain d) (:durative-action))");
        }) == Errc::unsupported_feature);
  CHECK(code_of([] {
          parse_domain("(define (domain d) (:requirements :adl))");
        }) == Errc::unsupported_feature);
  CHECK(code_of([] {
          parse_domain("(define (domain d) (:predicates (p ?x)) "
                       "(:action a :parameters (?x) :precondition "
                       "(forall (?y) (p ?y)) :effect (p ?x)))");
        }) == Errc::unsupported_feature);
  // unbound variable
  CHECK(code_of([] {
          parse_domain("(define (domain d) (:predicates (p ?x)) "
                       "(:action a :parameters (?x) :precondition (p ?y) "
                       ":effect (p ?x)))");
        }) == Errc::structure_error);
  // add/delete overlap
  CHECK(code_of([] {
          parse_domain("(define (domain d) (:predicates (p ?x)) "
                       "(:action a :parameters (?x) :precondition (and) "
                       ":effect (and (p ?x) (not (p ?x)))))");
        }) == Errc::structure_error);
  // type cycle
  CHECK(code_of([] {
          parse_domain("(define (domain d) (:types a - b b - a))");
        }) == Errc::structure_error);
}

TEST_CASE("problem parsing against ferry") {
  Domain d = parse_domain(testutil::fixture("ferry/domain.pddl"));
  Problem p = parse_problem(testutil::fixture("ferry/problem1.pddl"), d);
  CHECK(p.name == "ferry-1");
  CHECK(p.domain_name == "ferry");
  CHECK(p.objects.size() == 3);
  CHECK(p.init.size() == 3);
  CHECK(p.goal.size() == 1);
  CHECK(p.goal[0].positive);
  CHECK(p.goal[0].atom.str() == "(at c1 l2)");
}

TEST_CASE("empty goal conjunction is legal") {
  Domain d = parse_domain(testutil::fixture("ferry/domain.pddl"));
  Problem p = parse_problem(
      "(define (problem p) (:domain ferry) (:objects c1 - car) "
      "(:init) (:goal (and)))",
      d);
  CHECK(p.goal.empty());
}

TEST_CASE("goal type violation is a binding error") {
  Domain d = parse_domain(testutil::fixture("ferry/domain.pddl"));
  auto parse = [&] {
    parse_problem(
        "(define (problem p) (:domain ferry) (:objects c1 - car l1 - "
        "location) (:init) (:goal (at c1 c1)))",
        d);
  };
  CHECK(code_of(parse) == Errc::binding_error);
  try {
    parse();
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("(at c1 c1)") != std::string::npos);
    CHECK(std::string(e.what()).find("location") != std::string::npos);
  }
}

TEST_CASE("domain mismatch is a warning unless strict") {
  Domain d = parse_domain(testutil::fixture("ferry/domain.pddl"));
  std::string text =
      "(define (problem p) (:domain boat) (:init) (:goal (and)))";
  std::vector<std::string> warnings;
  ParseOptions opts;
  opts.warnings = &warnings;
  Problem p = parse_problem(text, d, opts);
  CHECK(p.domain_name == "boat");
  CHECK(warnings.size() == 1);

  ParseOptions strict;
  strict.strict_domain_match = true;
  CHECK(code_of([&] { parse_problem(text, d, strict); }) ==
        Errc::domain_mismatch);
}

TEST_CASE("duplicate init atoms merge") {
  Domain d = parse_domain(testutil::fixture("ferry/domain.pddl"));
  Problem p = parse_problem(
      "(define (problem p) (:domain ferry) (:objects c1 - car l1 - location) "
      "(:init (at c1 l1) (at c1 l1)) (:goal (and)))",
      d);
  CHECK(p.init.size() == 1);
}

TEST_CASE("plan parsing") {
  TimedPlan plan = parse_plan("00100: (move truck1 depot1 depot2)\nEND");
  REQUIRE(plan.steps.size() == 1);
  CHECK(plan.steps[0].time == 100);
  CHECK(plan.steps[0].action == "move");
  CHECK(plan.steps[0].args ==
        std::vector<std::string>{"truck1", "depot1", "depot2"});
  CHECK(plan.terminated);

  TimedPlan empty = parse_plan("");
  CHECK(empty.steps.empty());
  CHECK(!empty.terminated);

  TimedPlan commented = parse_plan("; header\n\n1: (a x)\n2: (b)\n");
  CHECK(commented.steps.size() == 2);
  CHECK(!commented.terminated);

  CHECK(code_of([] { parse_plan("1: (a)\n1: (b)"); }) ==
        Errc::non_monotonic_timestamps);
  CHECK(code_of([] { parse_plan("2: (a)\n1: (b)"); }) ==
        Errc::non_monotonic_timestamps);
  CHECK(code_of([] { parse_plan("oops"); }) == Errc::plan_format);
  CHECK(code_of([] { parse_plan("1: move a b"); }) == Errc::plan_format);
  CHECK(code_of([] { parse_plan("END\n1: (a)"); }) == Errc::plan_format);
  CHECK(code_of([] { parse_plan("x: (a)"); }) == Errc::plan_format);
}

TEST_CASE("plan format errors carry line numbers") {
  try {
    parse_plan("1: (a)\n2: (b)\nbroken");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("render round-trips fixtures") {
  for (const char* rel :
       {"ferry/domain.pddl", "gripper/domain.pddl", "blocks/domain.pddl",
        "costferry/domain.pddl"}) {
    Domain d1 = parse_domain(testutil::fixture(rel));
    Domain d2 = parse_domain(render(d1));
    CHECK(d1 == d2);
    CHECK(render(d1) == render(d2));
  }
  Domain ferry = parse_domain(testutil::fixture("ferry/domain.pddl"));
  for (const char* rel : {"ferry/problem1.pddl"}) {
    Problem p1 = parse_problem(testutil::fixture(rel), ferry);
    Problem p2 = parse_problem(render(p1), ferry);
    CHECK(p1 == p2);
  }
  Domain costferry = parse_domain(testutil::fixture("costferry/domain.pddl"));
  Problem cp1 =
      parse_problem(testutil::fixture("costferry/problem1.pddl"), costferry);
  Problem cp2 = parse_problem(render(cp1), costferry);
  CHECK(cp1 == cp2);

  TimedPlan plan1 = parse_plan(testutil::fixture("ferry/plan_valid.txt"));
  TimedPlan plan2 = parse_plan(render(plan1));
  CHECK(plan1 == plan2);
}

TEST_CASE("plan rendering format") {
  TimedPlan plan;
  plan.steps.push_back(PlanStep{1, "move", {"t1", "d1", "d2"}});
  plan.terminated = true;
  CHECK(render(plan) == "00001: (move t1 d1 d2)\nEND");

  TimedPlan empty;
  empty.terminated = true;
  CHECK(render(empty) == "END");
}

TEST_CASE("parser survives arbitrary bytes") {
  // Structured errors only, never a crash.
  std::mt19937_64 rng(7);
  std::string ferry = testutil::fixture("ferry/domain.pddl");
  for (int round = 0; round < 2000; ++round) {
    std::string input;
    if (round % 2 == 0) {
      std::size_t len = rng() % 200;
      for (std::size_t i = 0; i < len; ++i)
        input.push_back(static_cast<char>(rng() & 0xff));
    } else {
      input = ferry;
      for (int m = 0; m < 8; ++m)
        input[rng() % input.size()] = static_cast<char>(rng() & 0xff);
    }
    try {
      parse_domain(input);
    } catch (const Error&) {
    }
    try {
      parse_plan(input);
    } catch (const Error&) {
    }
  }
  CHECK(true);
}
