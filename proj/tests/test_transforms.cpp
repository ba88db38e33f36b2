#include <cmath>
#include <set>

#include "doctest.h"
#include "gen_random.hpp"
#include "plangen/errors.hpp"
#include "plangen/parse.hpp"
#include "plangen/render.hpp"
#include "plangen/transforms.hpp"
#include "plangen/validate.hpp"
#include "testutil.hpp"

using namespace plangen;

namespace {

struct FerryTuple {
  Domain domain = parse_domain(testutil::fixture("ferry/domain.pddl"));
  Problem problem =
      parse_problem(testutil::fixture("ferry/problem1.pddl"), domain);
  TimedPlan plan = parse_plan(testutil::fixture("ferry/plan_valid.txt"));
};

}  // namespace

TEST_CASE("anonymization follows first occurrence") {
  FerryTuple t;
  AnonymizedTuple anon = anonymize_tuple(t.domain, t.problem, t.plan, 0);

  // board is the first declared action, at the first predicate
  CHECK(anon.map.actions[0] == std::pair<std::string, std::string>{"board", "a_0"});
  CHECK(anon.map.predicates[0] == std::pair<std::string, std::string>{"at", "p_0"});
  CHECK(anon.map.types[0] == std::pair<std::string, std::string>{"car", "t_0"});
  // c1 and l1 are the first objects encountered (problem objects section)
  CHECK(anon.map.objects[0].first == "c1");
  CHECK(anon.map.objects[0].second == "o_0");
  CHECK(anon.map.objects[1].first == "l1");
  CHECK(anon.map.objects[1].second == "o_1");

  CHECK(anon.plan.steps[0].action == "a_0");
  CHECK(anon.plan.steps[0].args == std::vector<std::string>{"o_0", "o_1"});

  // outputs reparse as valid PDDL against each other
  Domain d2 = parse_domain(render(anon.domain));
  Problem p2 = parse_problem(render(anon.problem), d2);
  CHECK(d2 == anon.domain);
  CHECK(p2 == anon.problem);
}

TEST_CASE("anonymization preserves the validation outcome") {
  FerryTuple t;
  for (const char* rel : {"ferry/plan_valid.txt", "ferry/plan_nogoal.txt",
                          "ferry/plan_precfail.txt"}) {
    TimedPlan plan = parse_plan(testutil::fixture(rel));
    AnonymizedTuple anon = anonymize_tuple(t.domain, t.problem, plan, 0);
    Outcome before = validate(t.domain, t.problem, render(plan)).outcome;
    Outcome after =
        validate(anon.domain, anon.problem, render(anon.plan)).outcome;
    CHECK(before == after);
  }
}

TEST_CASE("anonymization is deterministic and seed-independent") {
  FerryTuple t;
  AnonymizedTuple a = anonymize_tuple(t.domain, t.problem, t.plan, 1);
  AnonymizedTuple b = anonymize_tuple(t.domain, t.problem, t.plan, 99);
  CHECK(render(a.domain) == render(b.domain));
  CHECK(render(a.problem) == render(b.problem));
  CHECK(render(a.plan) == render(b.plan));
}

TEST_CASE("anonymization maps are independent across tuples") {
  // truck1 is the first object of t1 but the second of t2
  Domain d = parse_domain(
      "(define (domain share) (:predicates (at ?x) (elsewhere ?x)))");
  Problem p1 = parse_problem(
      "(define (problem a) (:domain share) (:objects truck1 truck2) "
      "(:init (at truck1)) (:goal (at truck1)))",
      d);
  Problem p2 = parse_problem(
      "(define (problem b) (:domain share) (:objects truck2 truck1) "
      "(:init (at truck1)) (:goal (at truck1)))",
      d);
  TimedPlan empty;
  AnonymizedTuple a1 = anonymize_tuple(d, p1, empty, 0);
  AnonymizedTuple a2 = anonymize_tuple(d, p2, empty, 0);
  auto find = [](const SymbolMap& m, const std::string& name) {
    for (const auto& [from, to] : m.objects)
      if (from == name) return to;
    return std::string();
  };
  CHECK(find(a1.map, "truck1") == "o_0");
  CHECK(find(a2.map, "truck1") == "o_1");
}

TEST_CASE("tuple with zero objects still anonymizes") {
  Domain d = parse_domain("(define (domain empty) (:predicates (go)))");
  Problem p = parse_problem(
      "(define (problem e) (:domain empty) (:init) (:goal (and)))", d);
  TimedPlan none;
  AnonymizedTuple anon = anonymize_tuple(d, p, none, 0);
  CHECK(anon.map.objects.empty());
  CHECK(anon.map.predicates.size() == 1);
  CHECK(parse_domain(render(anon.domain)) == anon.domain);
}

TEST_CASE("inconsistent tuples are rejected") {
  FerryTuple t;
  TimedPlan rogue = t.plan;
  rogue.steps[0].action = "warp";
  CHECK_THROWS_AS(anonymize_tuple(t.domain, t.problem, rogue, 0), Error);
  TimedPlan ghost = t.plan;
  ghost.steps[0].args[0] = "c9";
  try {
    anonymize_tuple(t.domain, t.problem, ghost, 0);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::inconsistent_tuple);
  }
}

TEST_CASE("within-tuple bijectivity") {
  for (std::uint64_t seed = 300; seed < 330; ++seed) {
    testgen::RandomInstance inst = testgen::make_instance(seed);
    AnonymizedTuple anon =
        anonymize_tuple(inst.domain, inst.problem, TimedPlan{}, 0);
    for (const auto* category :
         {&anon.map.actions, &anon.map.predicates, &anon.map.objects,
          &anon.map.types}) {
      std::set<std::string> froms, tos;
      for (const auto& [from, to] : *category) {
        CHECK(froms.insert(from).second);
        CHECK(tos.insert(to).second);
      }
    }
  }
}

TEST_CASE("curriculum endpoints and formula") {
  auto items = curriculum_expand({"t"}, 3, 7);
  REQUIRE(items.size() == 3);
  CHECK(items[0].probability == 0.0);
  CHECK(items[1].probability == doctest::Approx(0.5));
  CHECK(items[2].probability == 1.0);
  CHECK(!items[0].anonymize);  // p = 0 never fires
  CHECK(items[2].anonymize);   // p = 1 always fires

  auto five = curriculum_expand({"a", "b", "c", "d", "e"}, 1, 0);
  CHECK(five[2].probability == doctest::Approx(0.5));

  auto single = curriculum_expand({"only"}, 1, 0);
  REQUIRE(single.size() == 1);
  CHECK(single[0].probability == 0.0);
  CHECK(!single[0].anonymize);
}

TEST_CASE("curriculum keeps copies in stacking order") {
  auto items = curriculum_expand({"x", "y"}, 3, 11);
  REQUIRE(items.size() == 6);
  CHECK(items[0].tuple_id == "x");
  CHECK(items[1].tuple_id == "y");
  CHECK(items[2].tuple_id == "x");
  CHECK(items[5].tuple_id == "y");
  for (std::size_t i = 1; i < items.size(); ++i)
    CHECK(items[i].probability >= items[i - 1].probability);
}

TEST_CASE("curriculum empirical fraction approaches one half") {
  std::vector<std::string> ids;
  for (int i = 0; i < 100; ++i) ids.push_back("t" + std::to_string(i));
  auto items = curriculum_expand(ids, 100, 2024);  // N = 10000
  std::size_t anonymized = 0;
  for (const auto& item : items) anonymized += item.anonymize ? 1 : 0;
  double fraction =
      static_cast<double>(anonymized) / static_cast<double>(items.size());
  CHECK(std::abs(fraction - 0.5) < 0.02);
}

TEST_CASE("curriculum draws are reproducible and index-keyed") {
  auto a = curriculum_expand({"p", "q", "r"}, 4, 99);
  auto b = curriculum_expand({"p", "q", "r"}, 4, 99);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(a[i].anonymize == b[i].anonymize);
}

TEST_CASE("encode strips format, decode restores it") {
  TimedPlan plan = parse_plan("00100: (move truck1 depot1 depot2)\nEND");
  CHECK(encode_plan(plan) == "move truck1 depot1 depot2");
  CHECK(decode_plan("move truck1 depot1 depot2") ==
        "00001: (move truck1 depot1 depot2)\nEND");

  TimedPlan empty;
  CHECK(encode_plan(empty) == "");
  CHECK(decode_plan("") == "END");

  TimedPlan ferry = parse_plan(testutil::fixture("ferry/plan_valid.txt"));
  CHECK(encode_plan(ferry) == "board c1 l1\nsail l1 l2\ndebark c1 l2");
}

TEST_CASE("decode tolerates blanks and case, rejects junk tokens") {
  CHECK(decode_plan("\n  \nmove A b\n\n") == "00001: (move a b)\nEND");
  try {
    decode_plan("move truck1\nbad(token here");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::decode_failure);
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(decode_plan("1967"), Error);
}

TEST_CASE("codec round-trips preserve the action sequence") {
  for (std::uint64_t seed = 500; seed < 540; ++seed) {
    testgen::RandomInstance inst = testgen::make_instance(seed);
    auto ground = testgen::enumerate_ground(inst);
    if (ground.empty()) continue;
    Rng rng(seed);
    TimedPlan plan;
    plan.terminated = true;
    int len = static_cast<int>(rng.range(0, 10));
    for (int i = 0; i < len; ++i) {
      const GroundAction& ga = ground[rng.below(ground.size())];
      plan.steps.push_back(
          PlanStep{static_cast<long long>(i + 1), ga.schema_name, ga.args});
    }
    TimedPlan back = parse_plan(decode_plan(encode_plan(plan)));
    REQUIRE(back.steps.size() == plan.steps.size());
    for (std::size_t i = 0; i < back.steps.size(); ++i) {
      CHECK(back.steps[i].action == plan.steps[i].action);
      CHECK(back.steps[i].args == plan.steps[i].args);
    }
    // decode(encode(.)) is the identity on canonical compact text
    std::string compact = encode_plan(plan);
    CHECK(encode_plan(parse_plan(decode_plan(compact))) == compact);
  }
}
