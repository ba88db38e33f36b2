#include "plangen/dpgc.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "json.hpp"
#include "plangen/errors.hpp"
#include "plangen/fsio.hpp"
#include "plangen/parallel.hpp"
#include "plangen/parse.hpp"
#include "plangen/render.hpp"
#include "plangen/rng.hpp"
#include "plangen/sexpr.hpp"

namespace plangen {

const char* diagnostic_name(Diagnostic::Code code) {
  switch (code) {
    case Diagnostic::Code::unknown_predicate: return "UnknownPredicate";
    case Diagnostic::Code::unknown_pool: return "UnknownPool";
    case Diagnostic::Code::unknown_type: return "UnknownType";
    case Diagnostic::Code::tag_undefined: return "TagUndefined";
    case Diagnostic::Code::tag_cycle: return "TagCycle";
    case Diagnostic::Code::pool_exhaustible: return "PoolExhaustible";
    case Diagnostic::Code::type_mismatch: return "TypeMismatch";
    case Diagnostic::Code::bad_config: return "BadConfig";
  }
  return "Unknown";
}

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& message) {
  fail(Errc::invalid_inputs, "DPGC config: " + message);
}

void expect_keys(const json& obj, const std::set<std::string>& allowed,
                 const std::string& where) {
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key))
      config_error("unknown key '" + key + "' in " + where);
}

std::string get_string(const json& obj, const std::string& key,
                       const std::string& where) {
  if (!obj.contains(key) || !obj[key].is_string())
    config_error("missing string '" + key + "' in " + where);
  return obj[key].get<std::string>();
}

CountSpec parse_count(const json& value, const std::string& where,
                      bool allow_pool_ref) {
  CountSpec count;
  if (value.is_number_integer()) {
    count.kind = CountSpec::Kind::fixed;
    count.lo = count.hi = value.get<long long>();
    return count;
  }
  if (value.is_object()) {
    if (value.contains("count_of")) {
      if (!allow_pool_ref)
        config_error("'count_of' is not allowed in " + where);
      expect_keys(value, {"count_of"}, where);
      count.kind = CountSpec::Kind::of_pool;
      count.pool = get_string(value, "count_of", where);
      return count;
    }
    expect_keys(value, {"min", "max"}, where);
    if (!value.contains("min") || !value.contains("max") ||
        !value["min"].is_number_integer() || !value["max"].is_number_integer())
      config_error("range count in " + where + " needs integer 'min'/'max'");
    count.kind = CountSpec::Kind::range;
    count.lo = value["min"].get<long long>();
    count.hi = value["max"].get<long long>();
    return count;
  }
  config_error("count in " + where + " must be an integer or an object");
}

std::vector<TagRef> parse_tag_refs(const json& arr, const std::string& where) {
  std::vector<TagRef> out;
  if (!arr.is_array()) config_error(where + " must be an array");
  for (const auto& e : arr) {
    expect_keys(e, {"tag", "arg"}, where);
    if (!e.contains("tag") || !e.contains("arg") ||
        !e["arg"].is_number_integer())
      config_error("tag reference in " + where + " needs 'tag' and integer 'arg'");
    out.push_back(TagRef{e["tag"].get<std::string>(),
                         e["arg"].get<std::size_t>()});
  }
  return out;
}

PredicatePool parse_predicate_pool(const json& obj) {
  PredicatePool pool;
  pool.name = get_string(obj, "name", "predicate pool");
  const std::string where = "predicate pool '" + pool.name + "'";
  expect_keys(obj, {"name", "predicate", "count", "args", "emit_tags",
                    "consume_tags"},
              where);
  pool.predicate = get_string(obj, "predicate", where);
  pool.count = obj.contains("count") ? parse_count(obj["count"], where, true)
                                     : CountSpec::fixed(1);
  if (!obj.contains("args") || !obj["args"].is_array())
    config_error(where + " needs an 'args' array");
  for (const auto& arg : obj["args"]) {
    if (!arg.is_object() || arg.size() != 1)
      config_error("each arg of " + where +
                   " must be exactly one of {pool|literal|tag}");
    ArgSource source;
    if (arg.contains("pool")) {
      source.kind = ArgSource::Kind::pool;
      source.ref = get_string(arg, "pool", where);
    } else if (arg.contains("literal")) {
      source.kind = ArgSource::Kind::literal;
      source.ref = get_string(arg, "literal", where);
    } else if (arg.contains("tag")) {
      source.kind = ArgSource::Kind::tag;
      source.ref = get_string(arg, "tag", where);
    } else {
      config_error("arg of " + where + " must name a pool, literal, or tag");
    }
    pool.args.push_back(std::move(source));
  }
  if (obj.contains("emit_tags"))
    pool.emit_tags = parse_tag_refs(obj["emit_tags"], where);
  if (obj.contains("consume_tags"))
    pool.consume_tags = parse_tag_refs(obj["consume_tags"], where);
  return pool;
}

PoolGroup parse_group(const json& obj) {
  PoolGroup group;
  group.name = get_string(obj, "name", "group");
  const std::string where = "group '" + group.name + "'";
  expect_keys(obj, {"name", "mode", "pools"}, where);
  if (obj.contains("mode")) {
    const json& mode = obj["mode"];
    if (mode.is_string() && mode.get<std::string>() == "all") {
      group.mode = PoolGroup::Mode::all;
    } else if (mode.is_object() && mode.contains("exclusive_choice")) {
      expect_keys(mode, {"exclusive_choice"}, where);
      const json& choice = mode["exclusive_choice"];
      expect_keys(choice, {"weights"}, where);
      group.mode = PoolGroup::Mode::exclusive_choice;
      if (!choice.contains("weights") || !choice["weights"].is_array())
        config_error(where + " exclusive_choice needs a 'weights' array");
      for (const auto& w : choice["weights"]) {
        if (!w.is_number()) config_error(where + " weights must be numbers");
        group.weights.push_back(w.get<double>());
      }
    } else {
      config_error(where + " mode must be \"all\" or {\"exclusive_choice\": ...}");
    }
  }
  if (!obj.contains("pools") || !obj["pools"].is_array())
    config_error(where + " needs a 'pools' array");
  for (const auto& p : obj["pools"]) group.pools.push_back(parse_predicate_pool(p));
  return group;
}

}  // namespace

DpgcConfig load_dpgc(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    config_error(std::string("not valid JSON: ") + e.what());
  }
  if (!root.is_object()) config_error("top level must be an object");
  expect_keys(root,
              {"domain", "object_pools", "init_invariants", "goal_invariants",
               "init_groups", "goal_groups", "solvability", "max_retries"},
              "config");

  DpgcConfig config;
  config.domain_ref = get_string(root, "domain", "config");
  if (root.contains("max_retries")) {
    if (!root["max_retries"].is_number_integer() ||
        root["max_retries"].get<long long>() < 1)
      config_error("max_retries must be a positive integer");
    config.max_retries = root["max_retries"].get<int>();
  }
  if (root.contains("solvability")) {
    const json& solv = root["solvability"];
    expect_keys(solv, {"mode", "max_expansions", "max_plan_length"},
                "solvability");
    std::string mode = get_string(solv, "mode", "solvability");
    if (mode == "planner-check")
      config.solvability.mode = SolvabilityPolicy::Mode::planner_check;
    else if (mode == "none")
      config.solvability.mode = SolvabilityPolicy::Mode::none;
    else
      config_error("solvability mode must be 'planner-check' or 'none'");
    if (solv.contains("max_expansions"))
      config.solvability.max_expansions =
          solv["max_expansions"].get<std::uint64_t>();
    if (solv.contains("max_plan_length"))
      config.solvability.max_plan_length =
          solv["max_plan_length"].get<std::size_t>();
  }
  if (root.contains("object_pools")) {
    if (!root["object_pools"].is_array())
      config_error("object_pools must be an array");
    for (const auto& obj : root["object_pools"]) {
      ObjectPool pool;
      pool.name = get_string(obj, "name", "object pool");
      const std::string where = "object pool '" + pool.name + "'";
      expect_keys(obj, {"name", "type", "prefix", "count", "selection"}, where);
      pool.type = get_string(obj, "type", where);
      pool.prefix = get_string(obj, "prefix", where);
      if (!obj.contains("count")) config_error(where + " needs a count");
      pool.count = parse_count(obj["count"], where, false);
      std::string selection = obj.contains("selection")
                                  ? get_string(obj, "selection", where)
                                  : "uniform";
      if (selection == "exclusive")
        pool.selection = ObjectPool::Selection::exclusive;
      else if (selection == "sequential")
        pool.selection = ObjectPool::Selection::sequential;
      else if (selection == "uniform")
        pool.selection = ObjectPool::Selection::uniform;
      else
        config_error(where + " selection must be exclusive|sequential|uniform");
      config.object_pools.push_back(std::move(pool));
    }
  }
  auto read_strings = [&](const char* key, std::vector<std::string>& out) {
    if (!root.contains(key)) return;
    if (!root[key].is_array()) config_error(std::string(key) + " must be an array");
    for (const auto& s : root[key]) {
      if (!s.is_string()) config_error(std::string(key) + " entries must be strings");
      out.push_back(s.get<std::string>());
    }
  };
  read_strings("init_invariants", config.init_invariants);
  read_strings("goal_invariants", config.goal_invariants);
  if (root.contains("init_groups"))
    for (const auto& g : root["init_groups"])
      config.init_groups.push_back(parse_group(g));
  if (root.contains("goal_groups"))
    for (const auto& g : root["goal_groups"])
      config.goal_groups.push_back(parse_group(g));
  return config;
}

DpgcConfig load_dpgc_file(const std::string& path) {
  return load_dpgc(read_text_file(path));
}

namespace {

struct InvariantLiteral {
  bool positive = true;
  Atom atom;
};

InvariantLiteral parse_invariant(const std::string& text, bool allow_negative) {
  SExpr e = parse_sexpr(text);
  InvariantLiteral lit;
  if (e.tagged("not")) {
    if (!allow_negative)
      fail(Errc::invalid_inputs,
           "init invariant cannot be negative: " + text);
    if (e.children.size() != 2)
      fail(Errc::invalid_inputs, "malformed invariant: " + text);
    lit.positive = false;
    e = e.children[1];
  }
  if (e.is_atom || e.children.empty() || !e.children[0].is_atom)
    fail(Errc::invalid_inputs, "malformed invariant: " + text);
  lit.atom.pred = e.children[0].atom;
  for (std::size_t i = 1; i < e.children.size(); ++i) {
    if (!e.children[i].is_atom)
      fail(Errc::invalid_inputs, "malformed invariant: " + text);
    lit.atom.args.push_back(e.children[i].atom);
  }
  return lit;
}

long long max_of_count(const CountSpec& count, const DpgcConfig& config) {
  switch (count.kind) {
    case CountSpec::Kind::fixed: return count.lo;
    case CountSpec::Kind::range: return count.hi;
    case CountSpec::Kind::of_pool:
      for (const auto& pool : config.object_pools)
        if (pool.name == count.pool)
          return pool.count.kind == CountSpec::Kind::fixed ? pool.count.lo
                                                           : pool.count.hi;
      return 0;
  }
  return 0;
}

long long min_of_count(const CountSpec& count) {
  return count.lo;
}

const ObjectPool* find_pool(const DpgcConfig& config, const std::string& name) {
  for (const auto& pool : config.object_pools)
    if (pool.name == name) return &pool;
  return nullptr;
}

// Arg sources after folding consume_tags over the declared args.
std::vector<ArgSource> effective_args(const PredicatePool& pool) {
  std::vector<ArgSource> args = pool.args;
  for (const auto& ref : pool.consume_tags) {
    if (ref.arg < args.size())
      args[ref.arg] = ArgSource{ArgSource::Kind::tag, ref.tag};
  }
  return args;
}

}  // namespace

std::vector<Diagnostic> validate_dpgc(const DpgcConfig& config,
                                      const Domain& domain) {
  std::vector<Diagnostic> diags;
  auto add = [&](Diagnostic::Code code, const std::string& message) {
    diags.push_back(Diagnostic{code, message});
  };

  if (config.domain_ref != domain.name)
    add(Diagnostic::Code::bad_config,
        "config targets domain '" + config.domain_ref + "', got '" +
            domain.name + "'");

  std::set<std::string> pool_names, prefixes;
  for (const auto& pool : config.object_pools) {
    if (!pool_names.insert(pool.name).second)
      add(Diagnostic::Code::bad_config,
          "duplicate object pool '" + pool.name + "'");
    if (!prefixes.insert(pool.prefix).second)
      add(Diagnostic::Code::bad_config,
          "duplicate object prefix '" + pool.prefix + "'");
    if (!is_identifier(pool.prefix))
      add(Diagnostic::Code::bad_config,
          "prefix '" + pool.prefix + "' is not a legal identifier stem");
    if (!domain.type_declared(pool.type))
      add(Diagnostic::Code::unknown_type,
          "object pool '" + pool.name + "' uses undeclared type '" +
              pool.type + "'");
    if (pool.count.kind == CountSpec::Kind::of_pool)
      add(Diagnostic::Code::bad_config,
          "object pool '" + pool.name + "' cannot use count_of");
    else if (pool.count.lo < 1 || pool.count.lo > pool.count.hi)
      add(Diagnostic::Code::bad_config,
          "object pool '" + pool.name + "' has an invalid count");
  }

  for (const auto& text : config.init_invariants) {
    try {
      InvariantLiteral lit = parse_invariant(text, false);
      const PredicateSignature* sig = domain.find_predicate(lit.atom.pred);
      if (sig == nullptr)
        add(Diagnostic::Code::unknown_predicate,
            "init invariant uses undeclared predicate '" + lit.atom.pred + "'");
      else if (sig->params.size() != lit.atom.args.size())
        add(Diagnostic::Code::bad_config,
            "init invariant " + text + " has wrong arity");
    } catch (const Error& e) {
      add(Diagnostic::Code::bad_config, e.what());
    }
  }
  for (const auto& text : config.goal_invariants) {
    try {
      InvariantLiteral lit = parse_invariant(text, true);
      const PredicateSignature* sig = domain.find_predicate(lit.atom.pred);
      if (sig == nullptr)
        add(Diagnostic::Code::unknown_predicate,
            "goal invariant uses undeclared predicate '" + lit.atom.pred + "'");
      else if (sig->params.size() != lit.atom.args.size())
        add(Diagnostic::Code::bad_config,
            "goal invariant " + text + " has wrong arity");
    } catch (const Error& e) {
      add(Diagnostic::Code::bad_config, e.what());
    }
  }

  // Walk groups in sampling order for names, arities, types, tag dataflow,
  // and exhaustion.
  std::set<std::string> group_names, pred_pool_names;
  std::set<std::string> tags_guaranteed;           // emitted by 'all' groups
  std::set<std::string> tags_maybe;                // emitted inside a choice
  std::map<std::string, std::set<std::string>> tag_types;
  std::set<std::string> tags_emitted_anywhere;

  std::vector<std::pair<const PoolGroup*, bool>> ordered;  // (group, is_goal)
  for (const auto& g : config.init_groups) ordered.emplace_back(&g, false);
  for (const auto& g : config.goal_groups) ordered.emplace_back(&g, true);

  for (const auto& [group_ptr, _] : ordered)
    for (const auto& pool : group_ptr->pools)
      for (const auto& ref : pool.emit_tags)
        tags_emitted_anywhere.insert(ref.tag);

  for (const auto& [group_ptr, is_goal] : ordered) {
    const PoolGroup& group = *group_ptr;
    if (!group_names.insert(group.name).second)
      add(Diagnostic::Code::bad_config, "duplicate group '" + group.name + "'");
    bool choice = group.mode == PoolGroup::Mode::exclusive_choice;
    if (choice) {
      if (group.pools.size() < 2)
        add(Diagnostic::Code::bad_config,
            "exclusive-choice group '" + group.name + "' needs >= 2 members");
      if (group.weights.size() != group.pools.size())
        add(Diagnostic::Code::bad_config,
            "group '" + group.name + "' needs one weight per member");
      for (double w : group.weights)
        if (!(w > 0.0) || !std::isfinite(w))
          add(Diagnostic::Code::bad_config,
              "group '" + group.name + "' has a non-positive weight");
    }

    for (const auto& pool : group.pools) {
      const std::string where = "predicate pool '" + pool.name + "'";
      if (!pred_pool_names.insert(pool.name).second)
        add(Diagnostic::Code::bad_config, "duplicate " + where);

      const PredicateSignature* sig = domain.find_predicate(pool.predicate);
      if (sig == nullptr) {
        add(Diagnostic::Code::unknown_predicate,
            where + " samples undeclared predicate '" + pool.predicate + "'");
        continue;
      }
      if (sig->params.size() != pool.args.size()) {
        add(Diagnostic::Code::bad_config,
            where + " has " + std::to_string(pool.args.size()) +
                " args, predicate '" + pool.predicate + "' expects " +
                std::to_string(sig->params.size()));
        continue;
      }
      if (pool.count.kind == CountSpec::Kind::of_pool &&
          find_pool(config, pool.count.pool) == nullptr)
        add(Diagnostic::Code::unknown_pool,
            where + " counts objects of unknown pool '" + pool.count.pool + "'");
      if (pool.count.kind == CountSpec::Kind::range &&
          (pool.count.lo < 0 || pool.count.lo > pool.count.hi))
        add(Diagnostic::Code::bad_config, where + " has an invalid count range");

      for (const auto& ref : pool.emit_tags)
        if (ref.arg >= pool.args.size())
          add(Diagnostic::Code::bad_config,
              where + " emits tag '" + ref.tag + "' at position " +
                  std::to_string(ref.arg) + ", beyond arity");
      for (const auto& ref : pool.consume_tags)
        if (ref.arg >= pool.args.size())
          add(Diagnostic::Code::bad_config,
              where + " consumes tag '" + ref.tag + "' at position " +
                  std::to_string(ref.arg) + ", beyond arity");

      auto args = effective_args(pool);
      long long draws = max_of_count(pool.count, config);
      std::map<std::string, long long> exclusive_positions;

      std::set<std::string> own_emits;
      for (const auto& ref : pool.emit_tags) own_emits.insert(ref.tag);

      for (std::size_t i = 0; i < args.size(); ++i) {
        const ArgSource& source = args[i];
        const std::string& want = sig->params[i].type;
        switch (source.kind) {
          case ArgSource::Kind::pool: {
            const ObjectPool* op = find_pool(config, source.ref);
            if (op == nullptr) {
              add(Diagnostic::Code::unknown_pool,
                  where + " draws from unknown pool '" + source.ref + "'");
              break;
            }
            if (domain.type_declared(op->type) &&
                !is_subtype(domain, op->type, want))
              add(Diagnostic::Code::type_mismatch,
                  where + " argument " + std::to_string(i) + " has type '" +
                      op->type + "', predicate wants '" + want + "'");
            if (op->selection == ObjectPool::Selection::exclusive)
              exclusive_positions[op->name] += 1;
            break;
          }
          case ArgSource::Kind::literal:
            break;  // object existence is dynamic
          case ArgSource::Kind::tag: {
            if (own_emits.count(source.ref)) {
              add(Diagnostic::Code::tag_cycle,
                  where + " consumes tag '" + source.ref +
                      "' that it emits itself");
            } else if (tags_guaranteed.count(source.ref)) {
              for (const auto& t : tag_types[source.ref])
                if (domain.type_declared(t) && !is_subtype(domain, t, want))
                  add(Diagnostic::Code::type_mismatch,
                      where + " consumes tag '" + source.ref +
                          "' of type '" + t + "', predicate wants '" + want +
                          "'");
            } else if (tags_maybe.count(source.ref)) {
              add(Diagnostic::Code::tag_undefined,
                  where + " consumes tag '" + source.ref +
                      "' that is only emitted inside an exclusive choice");
            } else if (tags_emitted_anywhere.count(source.ref)) {
              add(Diagnostic::Code::tag_cycle,
                  where + " consumes tag '" + source.ref +
                      "' before it is emitted");
            } else {
              add(Diagnostic::Code::tag_undefined,
                  where + " consumes tag '" + source.ref +
                      "' that no pool emits");
            }
            break;
          }
        }
      }

      for (const auto& [pool_name, positions] : exclusive_positions) {
        const ObjectPool* op = find_pool(config, pool_name);
        if (op == nullptr) continue;
        long long capacity = min_of_count(op->count);
        if (draws * positions > capacity)
          add(Diagnostic::Code::pool_exhaustible,
              where + " may draw " + std::to_string(draws * positions) +
                  " exclusive objects from pool '" + pool_name +
                  "' of minimum size " + std::to_string(capacity));
      }

      // publish emissions for downstream pools
      for (const auto& ref : pool.emit_tags) {
        if (ref.arg >= args.size()) continue;
        (choice ? tags_maybe : tags_guaranteed).insert(ref.tag);
        const ArgSource& source = args[ref.arg];
        if (source.kind == ArgSource::Kind::pool) {
          const ObjectPool* op = find_pool(config, source.ref);
          if (op != nullptr) tag_types[ref.tag].insert(op->type);
        } else if (source.kind == ArgSource::Kind::tag) {
          for (const auto& t : tag_types[source.ref])
            tag_types[ref.tag].insert(t);
        }
      }
    }
  }
  return diags;
}

namespace {

struct PoolRuntime {
  const ObjectPool* spec = nullptr;
  std::vector<std::string> objects;
  std::size_t cursor = 0;  // sequential hand-out position
};

// One full sampling pass; throws SamplingFailure on dead ends so the retry
// loop can redraw.
Problem sample_once(const Domain& domain, const DpgcConfig& config,
                    std::uint64_t attempt_seed, const std::string& name) {
  Rng rng(attempt_seed);
  Problem problem;
  problem.name = name;
  problem.domain_name = domain.name;

  std::map<std::string, PoolRuntime> pools;
  for (const auto& spec : config.object_pools) {
    PoolRuntime runtime;
    runtime.spec = &spec;
    long long n = spec.count.kind == CountSpec::Kind::fixed
                      ? spec.count.lo
                      : rng.range(spec.count.lo, spec.count.hi);
    for (long long i = 1; i <= n; ++i) {
      std::string obj = spec.prefix + std::to_string(i);
      runtime.objects.push_back(obj);
      problem.objects.push_back(TypedName{obj, spec.type});
    }
    pools.emplace(spec.name, std::move(runtime));
  }

  std::map<std::string, std::vector<std::string>> tags;
  std::set<Atom> init_seen;
  std::set<std::string> goal_seen;

  auto object_exists = [&](const std::string& name_) {
    return problem.find_object(name_) != nullptr;
  };

  auto resolve_draws = [&](const CountSpec& count) -> long long {
    switch (count.kind) {
      case CountSpec::Kind::fixed: return count.lo;
      case CountSpec::Kind::range: return rng.range(count.lo, count.hi);
      case CountSpec::Kind::of_pool:
        return static_cast<long long>(pools.at(count.pool).objects.size());
    }
    return 0;
  };

  auto sample_pool = [&](const PredicatePool& pool, bool is_goal) {
    auto args = effective_args(pool);
    long long draws = resolve_draws(pool.count);
    std::map<std::string, std::set<std::size_t>> used;  // exclusive state

    for (long long d = 0; d < draws; ++d) {
      std::vector<std::string> chosen(args.size());
      for (std::size_t i = 0; i < args.size(); ++i) {
        const ArgSource& source = args[i];
        switch (source.kind) {
          case ArgSource::Kind::pool: {
            PoolRuntime& runtime = pools.at(source.ref);
            switch (runtime.spec->selection) {
              case ObjectPool::Selection::exclusive: {
                std::set<std::size_t>& taken = used[source.ref];
                std::vector<std::size_t> open;
                for (std::size_t k = 0; k < runtime.objects.size(); ++k)
                  if (!taken.count(k)) open.push_back(k);
                if (open.empty())
                  fail(Errc::sampling_failure,
                       "exclusive pool '" + source.ref + "' exhausted in '" +
                           pool.name + "'");
                std::size_t pick = open[rng.below(open.size())];
                taken.insert(pick);
                chosen[i] = runtime.objects[pick];
                break;
              }
              case ObjectPool::Selection::sequential:
                chosen[i] =
                    runtime.objects[runtime.cursor % runtime.objects.size()];
                ++runtime.cursor;
                break;
              case ObjectPool::Selection::uniform:
                chosen[i] = runtime.objects[rng.below(runtime.objects.size())];
                break;
            }
            break;
          }
          case ArgSource::Kind::literal:
            if (!object_exists(source.ref))
              fail(Errc::sampling_failure,
                   "literal object '" + source.ref + "' does not exist");
            chosen[i] = source.ref;
            break;
          case ArgSource::Kind::tag: {
            const auto& published = tags[source.ref];
            if (static_cast<std::size_t>(d) >= published.size())
              fail(Errc::sampling_failure,
                   "tag '" + source.ref + "' has " +
                       std::to_string(published.size()) +
                       " entries, draw " + std::to_string(d) + " needs more");
            chosen[i] = published[static_cast<std::size_t>(d)];
            break;
          }
        }
      }
      for (const auto& ref : pool.emit_tags)
        tags[ref.tag].push_back(chosen[ref.arg]);

      Atom atom{pool.predicate, chosen};
      if (is_goal) {
        if (goal_seen.insert(atom.str()).second)
          problem.goal.push_back(Literal{true, atom});
      } else {
        if (init_seen.insert(atom).second) problem.init.push_back(atom);
      }
    }
  };

  auto run_groups = [&](const std::vector<PoolGroup>& groups, bool is_goal) {
    for (const auto& group : groups) {
      if (group.mode == PoolGroup::Mode::all) {
        for (const auto& pool : group.pools) sample_pool(pool, is_goal);
      } else {
        std::size_t pick = rng.weighted_pick(group.weights);
        sample_pool(group.pools[pick], is_goal);
      }
    }
  };

  for (const auto& text : config.init_invariants) {
    InvariantLiteral lit = parse_invariant(text, false);
    for (const auto& arg : lit.atom.args)
      if (!object_exists(arg))
        fail(Errc::sampling_failure,
             "init invariant references missing object '" + arg + "'");
    if (init_seen.insert(lit.atom).second) problem.init.push_back(lit.atom);
  }
  run_groups(config.init_groups, false);

  for (const auto& text : config.goal_invariants) {
    InvariantLiteral lit = parse_invariant(text, true);
    for (const auto& arg : lit.atom.args)
      if (!object_exists(arg))
        fail(Errc::sampling_failure,
             "goal invariant references missing object '" + arg + "'");
    if (goal_seen.insert(lit.str()).second) problem.goal.push_back(lit);
  }
  run_groups(config.goal_groups, true);

  // Cost-enabled domains need the usual zero initialization.
  for (const auto& fn : domain.functions)
    problem.init_costs.push_back(FunctionInit{fn, 0});

  // Round through the parsers: the generated problem must be valid PDDL for
  // this domain, or the draw is rejected.
  try {
    return parse_problem(render(problem), domain);
  } catch (const Error& e) {
    fail(Errc::sampling_failure, std::string("sampled problem invalid: ") + e.what());
  }
}

std::string problem_name_for(const Domain& domain, std::uint64_t seed) {
  return domain.name + "-" + hex64(seed);
}

Problem generate_with_retries(const Domain& domain, const DpgcConfig& config,
                              std::uint64_t seed) {
  std::string last_error;
  for (int attempt = 0; attempt < config.max_retries; ++attempt) {
    std::uint64_t attempt_seed = derive_seed(seed, 0xA770 + static_cast<std::uint64_t>(attempt));
    try {
      return sample_once(domain, config, attempt_seed,
                         problem_name_for(domain, seed));
    } catch (const Error& e) {
      if (e.code() != Errc::sampling_failure) throw;
      last_error = e.what();
    }
  }
  fail(Errc::sampling_failure,
       "no viable draw after " + std::to_string(config.max_retries) +
           " retries; last: " + last_error);
}

void require_valid_config(const Domain& domain, const DpgcConfig& config) {
  auto diags = validate_dpgc(config, domain);
  if (diags.empty()) return;
  std::string all;
  for (const auto& d : diags) {
    if (!all.empty()) all += "; ";
    all += std::string(diagnostic_name(d.code)) + ": " + d.message;
  }
  fail(Errc::invalid_inputs, "DPGC validation failed: " + all);
}

}  // namespace

Problem generate_problem(const Domain& domain, const DpgcConfig& config,
                         std::uint64_t seed) {
  require_valid_config(domain, config);
  return generate_with_retries(domain, config, seed);
}

std::vector<BatchItem> generate_batch(const Domain& domain,
                                      const DpgcConfig& config,
                                      std::size_t count, std::uint64_t seed,
                                      const SearchConfig& planner_cfg,
                                      unsigned jobs, bool skip_solve) {
  if (count < 1) fail(Errc::invalid_inputs, "count must be >= 1");
  require_valid_config(domain, config);

  const bool check = config.solvability.mode == SolvabilityPolicy::Mode::planner_check;
  std::vector<BatchItem> items(count);
  std::vector<std::string> slot_errors(count);

  parallel_for(count, jobs, [&](std::size_t slot) {
    std::uint64_t slot_seed = derive_seed(seed, slot);
    try {
      for (int attempt = 0;; ++attempt) {
        if (attempt >= config.max_retries) {
          slot_errors[slot] = "slot " + std::to_string(slot) + " exceeded " +
                              std::to_string(config.max_retries) + " retries";
          return;
        }
        std::uint64_t attempt_seed = derive_seed(slot_seed, static_cast<std::uint64_t>(attempt));
        BatchItem item;
        item.seed = attempt_seed;
        item.retries = attempt;
        try {
          // named by attempt seed so redraws stay distinct
          item.problem = sample_once(domain, config,
                                     derive_seed(attempt_seed, 0xA770),
                                     problem_name_for(domain, attempt_seed));
        } catch (const Error& e) {
          if (e.code() != Errc::sampling_failure) throw;
          continue;  // dead draw counts as a retry
        }
        if (skip_solve) {
          items[slot] = std::move(item);
          return;
        }
        SearchConfig cfg = planner_cfg;
        cfg.seed = derive_seed(attempt_seed, 0x504c414eULL);
        cfg.max_expansions = config.solvability.max_expansions;
        cfg.max_plan_length = config.solvability.max_plan_length;
        SolveResult result = solve(domain, item.problem, cfg);
        if (std::holds_alternative<TimedPlan>(result)) {
          item.plan = std::get<TimedPlan>(result);
          items[slot] = std::move(item);
          return;
        }
        item.unsolved = std::get<Unsolved>(result);
        if (!check) {  // keep the unsolved draw
          items[slot] = std::move(item);
          return;
        }
      }
    } catch (const Error& e) {
      slot_errors[slot] = e.what();
    }
  });

  std::size_t succeeded = 0;
  for (const auto& item : items)
    if (!item.problem.name.empty()) ++succeeded;
  for (std::size_t slot = 0; slot < count; ++slot)
    if (!slot_errors[slot].empty())
      fail(Errc::batch_exhausted,
           slot_errors[slot] + " (" + std::to_string(succeeded) + " of " +
               std::to_string(count) + " slots succeeded)");
  return items;
}

}  // namespace plangen
