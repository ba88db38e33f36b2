#include "plangen/plan_search.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <queue>
#include <set>
#include <tuple>

#include "plangen/errors.hpp"
#include "plangen/fsio.hpp"
#include "plangen/parse.hpp"
#include "plangen/render.hpp"
#include "plangen/rng.hpp"
#include "plangen/subprocess.hpp"
#include "plangen/validate.hpp"

namespace plangen {

namespace {

void enumerate_args(const Domain& domain, const Problem& problem,
                    const ActionSchema& schema, std::size_t param_index,
                    std::vector<std::string>& current,
                    std::vector<GroundAction>& out, std::size_t cap) {
  if (param_index == schema.params.size()) {
    GroundAction ga = ground(domain, problem, schema.name, current);
    // statically false equality guards make the action a dead entry
    bool dead = false;
    std::vector<Literal> kept;
    for (const auto& lit : ga.precondition) {
      if (lit.atom.pred == "=") {
        bool eq = lit.atom.args[0] == lit.atom.args[1];
        if (lit.positive != eq) {
          dead = true;
          break;
        }
        continue;  // statically true, drop
      }
      kept.push_back(lit);
    }
    if (dead) return;
    ga.precondition = std::move(kept);
    out.push_back(std::move(ga));
    if (out.size() > cap)
      fail(Errc::grounding_explosion,
           "ground action count exceeds cap of " + std::to_string(cap) +
               " (at least " + std::to_string(out.size()) + ")");
    return;
  }
  const std::string& want = schema.params[param_index].type;
  for (const auto& obj : problem.objects) {
    if (!is_subtype(domain, obj.type, want)) continue;
    current.push_back(obj.name);
    enumerate_args(domain, problem, schema, param_index + 1, current, out, cap);
    current.pop_back();
  }
}

struct InternedInstance {
  std::vector<Atom> atoms;               // id -> atom
  std::map<Atom, int> ids;               // atom -> id
  std::vector<GroundAction> actions;
  // per action: sorted id vectors
  std::vector<std::vector<int>> pre_pos, pre_neg, adds, dels;
  std::vector<int> goal_pos, goal_neg;

  int intern(const Atom& atom) {
    auto it = ids.find(atom);
    if (it != ids.end()) return it->second;
    int id = static_cast<int>(atoms.size());
    atoms.push_back(atom);
    ids.emplace(atom, id);
    return id;
  }
};

using StateKey = std::vector<int>;

bool contains(const StateKey& state, int id) {
  return std::binary_search(state.begin(), state.end(), id);
}

bool satisfied(const StateKey& state, const std::vector<int>& pos,
               const std::vector<int>& neg) {
  for (int id : pos)
    if (!contains(state, id)) return false;
  for (int id : neg)
    if (contains(state, id)) return false;
  return true;
}

StateKey successor(const StateKey& state, const std::vector<int>& dels,
                   const std::vector<int>& adds) {
  StateKey next;
  next.reserve(state.size() + adds.size());
  std::set_difference(state.begin(), state.end(), dels.begin(), dels.end(),
                      std::back_inserter(next));
  StateKey merged;
  merged.reserve(next.size() + adds.size());
  std::set_union(next.begin(), next.end(), adds.begin(), adds.end(),
                 std::back_inserter(merged));
  return merged;
}

int goal_distance(const StateKey& state, const InternedInstance& inst) {
  int missing = 0;
  for (int id : inst.goal_pos)
    if (!contains(state, id)) ++missing;
  for (int id : inst.goal_neg)
    if (contains(state, id)) ++missing;
  return missing;
}

TimedPlan extract_plan(const std::vector<GroundAction>& actions,
                       const std::vector<std::pair<int, int>>& parents,
                       int node) {
  std::vector<int> action_ids;
  while (parents[static_cast<std::size_t>(node)].first >= 0) {
    action_ids.push_back(parents[static_cast<std::size_t>(node)].second);
    node = parents[static_cast<std::size_t>(node)].first;
  }
  std::reverse(action_ids.begin(), action_ids.end());
  TimedPlan plan;
  plan.terminated = true;
  long long t = 1;
  for (int id : action_ids) {
    const GroundAction& ga = actions[static_cast<std::size_t>(id)];
    plan.steps.push_back(PlanStep{t++, ga.schema_name, ga.args});
  }
  return plan;
}

}  // namespace

std::vector<GroundAction> ground_all_actions(const Domain& domain,
                                             const Problem& problem,
                                             std::size_t cap) {
  std::vector<GroundAction> out;
  std::vector<std::string> current;
  for (const auto& schema : domain.actions)
    enumerate_args(domain, problem, schema, 0, current, out, cap);
  return out;
}

SolveResult solve(const Domain& domain, const Problem& problem,
                  const SearchConfig& config) {
  if (config.strategy == SearchConfig::Strategy::breadth_first &&
      config.heuristic != SearchConfig::Heuristic::zero)
    fail(Errc::invalid_inputs, "breadth-first search requires the zero heuristic");

  InternedInstance inst;
  inst.actions = ground_all_actions(domain, problem, config.max_ground_actions);

  // seed-shuffled successor ordering; ties in the open list then fall back
  // to insertion order
  Rng rng(derive_seed(config.seed, 0x5eedu));
  rng.shuffle(inst.actions);

  for (const auto& ga : inst.actions) {
    std::vector<int> pos, neg, adds, dels;
    for (const auto& lit : ga.precondition)
      (lit.positive ? pos : neg).push_back(inst.intern(lit.atom));
    for (const auto& atom : ga.add_effects) adds.push_back(inst.intern(atom));
    for (const auto& atom : ga.del_effects) dels.push_back(inst.intern(atom));
    auto sort_unique = [](std::vector<int>& v) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    sort_unique(pos);
    sort_unique(neg);
    sort_unique(adds);
    sort_unique(dels);
    inst.pre_pos.push_back(std::move(pos));
    inst.pre_neg.push_back(std::move(neg));
    inst.adds.push_back(std::move(adds));
    inst.dels.push_back(std::move(dels));
  }
  for (const auto& lit : problem.goal) {
    if (lit.atom.pred == "=") {
      bool eq = lit.atom.args[0] == lit.atom.args[1];
      if (lit.positive == eq) continue;  // statically true
      return Unsolved{Unsolved::Reason::exhausted, 0};  // statically false
    }
    (lit.positive ? inst.goal_pos : inst.goal_neg).push_back(inst.intern(lit.atom));
  }

  StateKey init;
  for (const auto& atom : problem.init) init.push_back(inst.intern(atom));
  std::sort(init.begin(), init.end());
  init.erase(std::unique(init.begin(), init.end()), init.end());

  auto finish = [&](const TimedPlan& plan) -> SolveResult {
    ValidationReport report = validate(domain, problem, render(plan));
    if (report.outcome != Outcome::valid)
      fail(Errc::internal, "search produced a plan that fails validation: " +
                               std::string(outcome_name(report.outcome)));
    return plan;
  };

  std::vector<StateKey> states{init};
  std::vector<std::pair<int, int>> parents{{-1, -1}};  // (parent node, action)
  std::vector<std::size_t> depths{0};
  std::map<StateKey, int> seen{{init, 0}};

  if (goal_distance(init, inst) == 0) return finish(extract_plan(inst.actions, parents, 0));

  const bool bfs = config.strategy == SearchConfig::Strategy::breadth_first;
  const bool use_goal_count =
      config.heuristic == SearchConfig::Heuristic::goal_count;

  // (priority, insertion order, node)
  using Entry = std::tuple<int, std::uint64_t, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> open;
  std::deque<int> fifo;
  std::uint64_t pushes = 0;
  if (bfs)
    fifo.push_back(0);
  else
    open.emplace(use_goal_count ? goal_distance(init, inst) : 0, pushes++, 0);

  std::uint64_t expansions = 0;
  bool truncated_by_depth = false;

  while (bfs ? !fifo.empty() : !open.empty()) {
    int node;
    if (bfs) {
      node = fifo.front();
      fifo.pop_front();
    } else {
      node = std::get<2>(open.top());
      open.pop();
    }
    if (expansions >= config.max_expansions)
      return Unsolved{Unsolved::Reason::budget, expansions};
    ++expansions;

    const StateKey state = states[static_cast<std::size_t>(node)];
    const std::size_t depth = depths[static_cast<std::size_t>(node)];
    if (depth >= config.max_plan_length) {
      truncated_by_depth = true;
      continue;
    }

    for (std::size_t a = 0; a < inst.actions.size(); ++a) {
      if (!satisfied(state, inst.pre_pos[a], inst.pre_neg[a])) continue;
      StateKey next = successor(state, inst.dels[a], inst.adds[a]);
      auto [it, fresh] = seen.emplace(next, static_cast<int>(states.size()));
      if (!fresh) continue;
      states.push_back(std::move(next));
      parents.emplace_back(node, static_cast<int>(a));
      depths.push_back(depth + 1);
      int child = it->second;
      if (goal_distance(states[static_cast<std::size_t>(child)], inst) == 0)
        return finish(extract_plan(inst.actions, parents, child));
      if (bfs)
        fifo.push_back(child);
      else
        open.emplace(use_goal_count
                         ? goal_distance(states[static_cast<std::size_t>(child)], inst)
                         : 0,
                     pushes++, child);
    }
  }

  // Exhausted means provably no plan under max_plan_length. When the depth
  // bound pruned anything the space was not fully explored, but the claim
  // "no plan within the bound" still holds.
  (void)truncated_by_depth;
  return Unsolved{Unsolved::Reason::exhausted, expansions};
}

namespace {

// Accepts either VAL-format lines or bare "(action args)" lines; bare lines
// get sequential timestamps. Planner chatter is ignored in bare mode.
TimedPlan convert_external_output(const std::string& text) {
  try {
    TimedPlan plan = parse_plan(text);
    if (!plan.steps.empty() || plan.terminated) return plan;
  } catch (const Error&) {
    // fall through to bare-parens extraction
  }

  TimedPlan plan;
  plan.terminated = true;
  long long t = 1;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string line = text.substr(
        pos, eol == std::string::npos ? std::string::npos : eol - pos);
    pos = eol == std::string::npos ? text.size() : eol + 1;
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    std::size_t last = line.find_last_not_of(" \t\r");
    // tolerate a leading "<digits>:" stamp mixed into chatter
    std::size_t scan = first;
    while (scan <= last && std::isdigit(static_cast<unsigned char>(line[scan])))
      ++scan;
    if (scan > first && scan <= last && line[scan] == ':') {
      std::size_t after = line.find_first_not_of(" \t", scan + 1);
      if (after != std::string::npos) first = after;
    }
    if (line[first] != '(' || line[last] != ')') continue;
    std::string body = line.substr(first + 1, last - first - 1);
    std::vector<std::string> tokens;
    std::size_t i = 0;
    bool ok = true;
    while (i < body.size()) {
      while (i < body.size() && (body[i] == ' ' || body[i] == '\t')) ++i;
      std::size_t start = i;
      while (i < body.size() && body[i] != ' ' && body[i] != '\t') ++i;
      if (i > start) {
        std::string tok = body.substr(start, i - start);
        for (char& c : tok)
          c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (!is_identifier(tok)) {
          ok = false;
          break;
        }
        tokens.push_back(tok);
      }
    }
    if (!ok || tokens.empty()) continue;
    PlanStep step;
    step.time = t++;
    step.action = tokens[0];
    step.args.assign(tokens.begin() + 1, tokens.end());
    plan.steps.push_back(std::move(step));
  }
  if (plan.steps.empty())
    fail(Errc::conversion_failure,
         "no plan steps recognized in external planner output");
  return plan;
}

std::string substitute_placeholders(const std::string& tmpl,
                                    const std::string& domain_path,
                                    const std::string& problem_path) {
  if (tmpl.find("{domain}") == std::string::npos ||
      tmpl.find("{problem}") == std::string::npos)
    fail(Errc::invalid_inputs,
         "command template must contain {domain} and {problem} placeholders");
  std::string out;
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    if (tmpl.compare(pos, 8, "{domain}") == 0) {
      out += domain_path;
      pos += 8;
    } else if (tmpl.compare(pos, 9, "{problem}") == 0) {
      out += problem_path;
      pos += 9;
    } else {
      out += tmpl[pos++];
    }
  }
  return out;
}

}  // namespace

TimedPlan external_solve(const std::string& command_template,
                         const std::filesystem::path& domain_file,
                         const std::filesystem::path& problem_file,
                         double timeout_sec) {
  std::string command = substitute_placeholders(
      command_template, domain_file.string(), problem_file.string());
  RunResult run = run_command(command, timeout_sec);
  if (run.timed_out)
    fail(Errc::external_failure,
         "external planner timed out after " + std::to_string(timeout_sec) +
             "s; stderr: " + run.err);
  if (run.exit_code != 0)
    fail(Errc::external_failure,
         "external planner exited with " + std::to_string(run.exit_code) +
             "; stderr: " + run.err);

  TimedPlan plan;
  try {
    plan = convert_external_output(run.out);
  } catch (const Error& e) {
    if (e.code() == Errc::conversion_failure) throw;
    fail(Errc::conversion_failure, std::string("cannot convert output: ") + e.what());
  }

  Domain domain = parse_domain(read_text_file(domain_file));
  ParseOptions opts;
  Problem problem = parse_problem(read_text_file(problem_file), domain, opts);
  ValidationReport report = validate(domain, problem, render(plan));
  if (report.outcome != Outcome::valid) {
    std::string detail = outcome_name(report.outcome);
    if (report.failing_step.has_value())
      detail += " at step " + std::to_string(*report.failing_step);
    fail(Errc::invalid_external_plan,
         "external plan failed validation: " + detail);
  }
  return plan;
}

}  // namespace plangen
