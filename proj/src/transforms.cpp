#include "plangen/transforms.hpp"

#include <cctype>
#include <cstdio>
#include <map>

#include "plangen/errors.hpp"
#include "plangen/parse.hpp"
#include "plangen/rng.hpp"

namespace plangen {

namespace {

class Renamer {
 public:
  Renamer(const char* prefix, std::vector<std::pair<std::string, std::string>>& out)
      : prefix_(prefix), out_(out) {}

  // Assigns the next counter on first sight.
  const std::string& touch(const std::string& name) {
    auto it = lookup_.find(name);
    if (it != lookup_.end()) return it->second;
    std::string synthetic = prefix_ + std::to_string(lookup_.size());
    auto [pos, _] = lookup_.emplace(name, std::move(synthetic));
    out_.emplace_back(name, pos->second);
    return pos->second;
  }

  const std::string& rename(const std::string& name) const {
    auto it = lookup_.find(name);
    if (it == lookup_.end())
      fail(Errc::inconsistent_tuple, "symbol '" + name + "' was never declared");
    return it->second;
  }

  bool known(const std::string& name) const { return lookup_.count(name) > 0; }

 private:
  const char* prefix_;
  std::vector<std::pair<std::string, std::string>>& out_;
  std::map<std::string, std::string> lookup_;
};

bool is_var(const std::string& term) { return !term.empty() && term[0] == '?'; }

}  // namespace

AnonymizedTuple anonymize_tuple(const Domain& domain, const Problem& problem,
                                const TimedPlan& plan, std::uint64_t seed) {
  (void)seed;  // renaming is occurrence-ordered, not random

  AnonymizedTuple out;
  Renamer actions("a_", out.map.actions);
  Renamer predicates("p_", out.map.predicates);
  Renamer objects("o_", out.map.objects);
  Renamer types("t_", out.map.types);

  // Pass 1: assign counters in canonical render order of
  // domain -> problem -> plan.
  for (const auto& [t, parent] : domain.types) {
    types.touch(t);
    if (parent != "object") types.touch(parent);
  }
  for (const auto& sig : domain.predicates) {
    predicates.touch(sig.name);
    for (const auto& p : sig.params)
      if (p.type != "object") types.touch(p.type);
  }
  auto touch_atom = [&](const Atom& atom) {
    if (atom.pred != "=") predicates.touch(atom.pred);
    for (const auto& term : atom.args)
      if (!is_var(term)) objects.touch(term);
  };
  for (const auto& schema : domain.actions) {
    actions.touch(schema.name);
    for (const auto& p : schema.params)
      if (p.type != "object") types.touch(p.type);
    for (const auto& lit : schema.precondition) touch_atom(lit.atom);
    for (const auto& atom : schema.add_effects) touch_atom(atom);
    for (const auto& atom : schema.del_effects) touch_atom(atom);
  }
  for (const auto& obj : problem.objects) {
    objects.touch(obj.name);
    if (obj.type != "object") types.touch(obj.type);
  }
  for (const auto& atom : problem.init) touch_atom(atom);
  for (const auto& lit : problem.goal) touch_atom(lit.atom);

  // The plan may only reference declared actions and objects.
  for (const auto& step : plan.steps) {
    if (!actions.known(step.action))
      fail(Errc::inconsistent_tuple,
           "plan references undeclared action '" + step.action + "'");
    for (const auto& arg : step.args)
      if (!objects.known(arg))
        fail(Errc::inconsistent_tuple,
             "plan references undeclared object '" + arg + "'");
  }

  // Pass 2: rewrite the three artifacts through the maps.
  auto map_type = [&](const std::string& t) {
    return t == "object" ? t : types.rename(t);
  };
  auto map_atom = [&](const Atom& atom) {
    Atom out_atom;
    out_atom.pred = atom.pred == "=" ? atom.pred : predicates.rename(atom.pred);
    for (const auto& term : atom.args)
      out_atom.args.push_back(is_var(term) ? term : objects.rename(term));
    return out_atom;
  };

  out.domain.name = domain.name;
  out.domain.requirements = domain.requirements;
  for (const auto& [t, parent] : domain.types)
    out.domain.types.emplace_back(types.rename(t), map_type(parent));
  for (const auto& sig : domain.predicates) {
    PredicateSignature ns;
    ns.name = predicates.rename(sig.name);
    for (const auto& p : sig.params)
      ns.params.push_back(TypedName{p.name, map_type(p.type)});
    out.domain.predicates.push_back(std::move(ns));
  }
  out.domain.functions = domain.functions;
  for (const auto& schema : domain.actions) {
    ActionSchema ns;
    ns.name = actions.rename(schema.name);
    for (const auto& p : schema.params)
      ns.params.push_back(TypedName{p.name, map_type(p.type)});
    for (const auto& lit : schema.precondition)
      ns.precondition.push_back(Literal{lit.positive, map_atom(lit.atom)});
    for (const auto& atom : schema.add_effects)
      ns.add_effects.push_back(map_atom(atom));
    for (const auto& atom : schema.del_effects)
      ns.del_effects.push_back(map_atom(atom));
    ns.cost = schema.cost;
    out.domain.actions.push_back(std::move(ns));
  }

  out.problem.name = problem.name;
  out.problem.domain_name = problem.domain_name;
  for (const auto& obj : problem.objects)
    out.problem.objects.push_back(
        TypedName{objects.rename(obj.name), map_type(obj.type)});
  for (const auto& atom : problem.init) out.problem.init.push_back(map_atom(atom));
  out.problem.init_costs = problem.init_costs;
  for (const auto& lit : problem.goal)
    out.problem.goal.push_back(Literal{lit.positive, map_atom(lit.atom)});

  out.plan.terminated = plan.terminated;
  for (const auto& step : plan.steps) {
    PlanStep ns;
    ns.time = step.time;
    ns.action = actions.rename(step.action);
    for (const auto& arg : step.args) ns.args.push_back(objects.rename(arg));
    out.plan.steps.push_back(std::move(ns));
  }
  return out;
}

std::vector<CurriculumItem> curriculum_expand(
    const std::vector<std::string>& tuple_ids, std::size_t copies,
    std::uint64_t seed, bool pre_shuffle) {
  if (tuple_ids.empty()) fail(Errc::invalid_inputs, "no tuple ids");
  if (copies < 1) fail(Errc::invalid_inputs, "copies must be >= 1");

  std::vector<std::string> ids = tuple_ids;
  if (pre_shuffle) {
    Rng rng(derive_seed(seed, 0xc0ffee));
    rng.shuffle(ids);
  }

  std::size_t n = copies * ids.size();
  std::vector<CurriculumItem> out;
  out.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) {
    CurriculumItem item;
    item.index = i;
    item.tuple_id = ids[(i - 1) % ids.size()];
    item.probability =
        n == 1 ? 0.0
               : static_cast<double>(i - 1) / static_cast<double>(n - 1);
    item.anonymize = counter_real01(seed, i) < item.probability;
    out.push_back(std::move(item));
  }
  return out;
}

std::string encode_plan(const TimedPlan& plan) {
  std::string out;
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    if (i > 0) out += '\n';
    out += plan.steps[i].action;
    for (const auto& arg : plan.steps[i].args) {
      out += ' ';
      out += arg;
    }
  }
  return out;
}

std::string decode_plan(std::string_view compact) {
  std::string out;
  std::size_t pos = 0;
  int lineno = 0;
  long long step = 0;
  char buf[32];
  while (pos < compact.size()) {
    std::size_t eol = compact.find('\n', pos);
    std::string_view raw = (eol == std::string_view::npos)
                               ? compact.substr(pos)
                               : compact.substr(pos, eol - pos);
    pos = (eol == std::string_view::npos) ? compact.size() : eol + 1;
    ++lineno;

    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < raw.size()) {
      while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i])))
        ++i;
      std::size_t start = i;
      while (i < raw.size() && !std::isspace(static_cast<unsigned char>(raw[i])))
        ++i;
      if (i > start) tokens.emplace_back(raw.substr(start, i - start));
    }
    if (tokens.empty()) continue;  // blank lines are skipped, not errors
    for (auto& tok : tokens) {
      for (char& c : tok)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      if (!is_identifier(tok))
        fail(Errc::decode_failure,
             "token '" + tok + "' cannot appear in a plan step", lineno, 1);
    }
    ++step;
    std::snprintf(buf, sizeof buf, "%05lld", step);
    out += buf;
    out += ": (";
    for (std::size_t k = 0; k < tokens.size(); ++k) {
      if (k > 0) out += ' ';
      out += tokens[k];
    }
    out += ")\n";
  }
  out += "END";
  return out;
}

}  // namespace plangen
