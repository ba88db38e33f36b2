#include "plangen/parse.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <unordered_set>

#include "plangen/errors.hpp"
#include "plangen/sexpr.hpp"

namespace plangen {

bool is_identifier(std::string_view token) {
  if (token.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(token[0]))) return false;
  for (char c : token) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_')
      return false;
  }
  return true;
}

namespace {

const std::set<std::string> kSupportedRequirements = {
    ":strips", ":typing", ":negative-preconditions", ":equality",
    ":action-costs"};

// Constructs we recognize but deliberately do not support.
const std::set<std::string> kRejectedSections = {
    ":constants", ":durative-action", ":derived", ":axiom", ":constraints",
    ":init-constraints"};

const std::set<std::string> kRejectedConnectives = {
    "or", "imply", "forall", "exists", "when", "either",
    "<", ">", "<=", ">=", "assign", "decrease", "scale-up", "scale-down"};

[[noreturn]] void structure_error(const SExpr& at, const std::string& msg) {
  fail(Errc::structure_error, msg, at.line, at.col);
}

[[noreturn]] void unsupported(const SExpr& at, const std::string& what) {
  fail(Errc::unsupported_feature, what + " is not supported", at.line, at.col);
}

const std::string& expect_symbol(const SExpr& e, const std::string& what) {
  if (!e.is_atom) structure_error(e, "expected " + what + ", found a list");
  return e.atom;
}

std::string expect_name(const SExpr& e, const std::string& what) {
  const std::string& s = expect_symbol(e, what);
  if (!is_identifier(s))
    structure_error(e, "illegal " + what + " '" + s + "'");
  return s;
}

bool is_variable(const std::string& s) { return !s.empty() && s[0] == '?'; }

// `?x ?y - t ?z` style typed lists (also bare-name lists for objects/types).
std::vector<TypedName> parse_typed_list(const SExpr& list, std::size_t from,
                                        bool variables,
                                        const std::string& what) {
  std::vector<TypedName> out;
  std::vector<std::size_t> pending;
  for (std::size_t i = from; i < list.children.size(); ++i) {
    const SExpr& e = list.children[i];
    const std::string& s = expect_symbol(e, what);
    if (s == "-") {
      if (pending.empty())
        structure_error(e, "dangling '-' in typed list");
      if (i + 1 >= list.children.size())
        structure_error(e, "missing type after '-'");
      const SExpr& te = list.children[++i];
      std::string type = expect_name(te, "type name");
      for (std::size_t k : pending) out[k].type = type;
      pending.clear();
      continue;
    }
    std::string name = s;
    if (variables) {
      if (!is_variable(name))
        structure_error(e, "expected variable, found '" + name + "'");
      name = name.substr(1);
      if (!is_identifier(name))
        structure_error(e, "illegal variable '?" + name + "'");
    } else {
      if (!is_identifier(name))
        structure_error(e, "illegal " + what + " '" + name + "'");
    }
    pending.push_back(out.size());
    out.push_back(TypedName{name, "object"});
  }
  return out;
}

std::string term_text(const SExpr& e) {
  const std::string& s = expect_symbol(e, "term");
  if (is_variable(s)) {
    std::string body = s.substr(1);
    if (!is_identifier(body)) structure_error(e, "illegal variable '" + s + "'");
    return s;  // keep the '?' marker
  }
  if (!is_identifier(s)) structure_error(e, "illegal term '" + s + "'");
  return s;
}

Atom parse_atom_expr(const SExpr& e) {
  if (e.is_atom) structure_error(e, "expected an atom, found symbol '" + e.atom + "'");
  if (e.children.empty()) structure_error(e, "empty atom");
  Atom atom;
  const std::string& head = expect_symbol(e.children[0], "predicate name");
  if (head == "=") {
    atom.pred = "=";
    if (e.children.size() != 3)
      structure_error(e, "equality takes exactly two terms");
  } else {
    if (kRejectedConnectives.count(head)) unsupported(e, "'" + head + "'");
    if (!is_identifier(head))
      structure_error(e.children[0], "illegal predicate name '" + head + "'");
    atom.pred = head;
  }
  for (std::size_t i = 1; i < e.children.size(); ++i)
    atom.args.push_back(term_text(e.children[i]));
  return atom;
}

// Formula: literal | (and literal*); literal: atom | (not atom).
std::vector<Literal> parse_literal_list(const SExpr& e) {
  std::vector<Literal> out;
  if (e.is_atom) structure_error(e, "expected a formula");
  if (e.children.empty()) return out;  // () treated as empty conjunction
  if (e.tagged("and")) {
    for (std::size_t i = 1; i < e.children.size(); ++i) {
      const SExpr& sub = e.children[i];
      if (sub.tagged("not")) {
        if (sub.children.size() != 2)
          structure_error(sub, "'not' takes exactly one atom");
        out.push_back(Literal{false, parse_atom_expr(sub.children[1])});
      } else {
        out.push_back(Literal{true, parse_atom_expr(sub)});
      }
    }
    return out;
  }
  if (e.tagged("not")) {
    if (e.children.size() != 2)
      structure_error(e, "'not' takes exactly one atom");
    out.push_back(Literal{false, parse_atom_expr(e.children[1])});
    return out;
  }
  out.push_back(Literal{true, parse_atom_expr(e)});
  return out;
}

long long parse_integer(const SExpr& e, const std::string& what) {
  const std::string& s = expect_symbol(e, what);
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) {
        return std::isdigit(static_cast<unsigned char>(c));
      }))
    unsupported(e, "non-integer " + what + " '" + s + "'");
  long long v = 0;
  for (char c : s) {
    v = v * 10 + (c - '0');
    if (v > (1LL << 60)) structure_error(e, what + " out of range");
  }
  return v;
}

void check_unsupported_requirement(const SExpr& e, const std::string& req) {
  if (!kSupportedRequirements.count(req)) unsupported(e, "requirement " + req);
}

struct ActionBuilder {
  const Domain& domain;
  const ActionSchema& schema;

  void check_atom(const SExpr& at, const Atom& atom,
                  std::set<std::string>* seen_constants) const {
    if (atom.pred == "=") {
      for (const auto& arg : atom.args) check_term(at, arg, "object", seen_constants);
      return;
    }
    const PredicateSignature* sig = domain.find_predicate(atom.pred);
    if (sig == nullptr)
      fail(Errc::structure_error,
           "undeclared predicate '" + atom.pred + "' in action '" +
               schema.name + "'",
           at.line, at.col);
    if (sig->params.size() != atom.args.size())
      fail(Errc::structure_error,
           "predicate '" + atom.pred + "' expects " +
               std::to_string(sig->params.size()) + " arguments, got " +
               std::to_string(atom.args.size()),
           at.line, at.col);
    for (std::size_t i = 0; i < atom.args.size(); ++i)
      check_term(at, atom.args[i], sig->params[i].type, seen_constants);
  }

  void check_term(const SExpr& at, const std::string& term,
                  const std::string& required_type,
                  std::set<std::string>* seen_constants) const {
    if (is_variable(term)) {
      std::string var = term.substr(1);
      const TypedName* param = nullptr;
      for (const auto& p : schema.params)
        if (p.name == var) {
          param = &p;
          break;
        }
      if (param == nullptr)
        fail(Errc::structure_error,
             "variable '?" + var + "' is not bound in parameters of action '" +
                 schema.name + "'",
             at.line, at.col);
      if (!is_subtype(domain, param->type, required_type))
        fail(Errc::structure_error,
             "variable '?" + var + "' has type '" + param->type +
                 "', expected '" + required_type + "'",
             at.line, at.col);
    } else {
      // Bare constants refer to problem objects; resolved when grounding.
      if (seen_constants) seen_constants->insert(term);
    }
  }
};

ActionSchema parse_action(const SExpr& e, const Domain& domain) {
  if (e.children.size() < 2)
    structure_error(e, "action needs a name");
  ActionSchema schema;
  schema.name = expect_name(e.children[1], "action name");

  std::size_t i = 2;
  bool saw_params = false, saw_pre = false, saw_eff = false;
  while (i < e.children.size()) {
    const std::string& key = expect_symbol(e.children[i], "action keyword");
    if (i + 1 >= e.children.size())
      structure_error(e.children[i], "missing value after " + key);
    const SExpr& value = e.children[i + 1];
    if (key == ":parameters") {
      if (saw_params) structure_error(e.children[i], "duplicate :parameters");
      saw_params = true;
      if (value.is_atom) structure_error(value, ":parameters expects a list");
      schema.params = parse_typed_list(value, 0, true, "parameter");
    } else if (key == ":precondition") {
      if (saw_pre) structure_error(e.children[i], "duplicate :precondition");
      saw_pre = true;
      schema.precondition = parse_literal_list(value);
    } else if (key == ":effect") {
      if (saw_eff) structure_error(e.children[i], "duplicate :effect");
      saw_eff = true;
      std::vector<const SExpr*> effects;
      if (value.is_atom) structure_error(value, ":effect expects a list");
      if (value.tagged("and")) {
        for (std::size_t k = 1; k < value.children.size(); ++k)
          effects.push_back(&value.children[k]);
      } else if (!value.children.empty()) {
        effects.push_back(&value);
      }
      for (const SExpr* eff : effects) {
        if (eff->tagged("increase")) {
          if (schema.cost.has_value())
            structure_error(*eff, "multiple cost effects in action '" +
                                      schema.name + "'");
          if (eff->children.size() != 3)
            structure_error(*eff, "'increase' takes a function and an amount");
          const SExpr& fn = eff->children[1];
          if (fn.is_atom || fn.children.size() != 1)
            unsupported(*eff, "non-nullary function in 'increase'");
          std::string fname = expect_name(fn.children[0], "function name");
          schema.cost = CostEffect{fname, parse_integer(eff->children[2],
                                                        "cost amount")};
        } else if (eff->tagged("not")) {
          if (eff->children.size() != 2)
            structure_error(*eff, "'not' takes exactly one atom");
          schema.del_effects.push_back(parse_atom_expr(eff->children[1]));
        } else if (eff->tagged("when") || eff->tagged("forall")) {
          unsupported(*eff, "conditional/quantified effect");
        } else {
          schema.add_effects.push_back(parse_atom_expr(*eff));
        }
      }
    } else {
      unsupported(e.children[i], "action keyword " + key);
    }
    i += 2;
  }

  ActionBuilder builder{domain, schema};
  std::set<std::string> constants;
  for (const auto& lit : schema.precondition) {
    SExpr approx{true, lit.atom.pred, {}, e.line, e.col};
    builder.check_atom(approx, lit.atom, &constants);
  }
  for (const auto& atom : schema.add_effects) {
    if (atom.pred == "=")
      structure_error(e, "equality is not allowed in effects");
    SExpr approx{true, atom.pred, {}, e.line, e.col};
    builder.check_atom(approx, atom, &constants);
  }
  for (const auto& atom : schema.del_effects) {
    if (atom.pred == "=")
      structure_error(e, "equality is not allowed in effects");
    SExpr approx{true, atom.pred, {}, e.line, e.col};
    builder.check_atom(approx, atom, &constants);
  }
  for (const auto& add : schema.add_effects)
    for (const auto& del : schema.del_effects)
      if (add == del)
        structure_error(e, "literal " + add.str() +
                               " appears in both add and delete effects of '" +
                               schema.name + "'");
  return schema;
}

void check_duplicate(const SExpr& at, std::set<std::string>& seen,
                     const std::string& name, const std::string& what) {
  if (!seen.insert(name).second)
    fail(Errc::structure_error, "duplicate " + what + " '" + name + "'",
         at.line, at.col);
}

}  // namespace

Domain parse_domain(std::string_view text) {
  SExpr root = parse_sexpr(text);
  if (!root.tagged("define") || root.children.size() < 2)
    structure_error(root, "expected (define (domain ...) ...)");
  const SExpr& head = root.children[1];
  if (!head.tagged("domain") || head.children.size() != 2)
    structure_error(root.children.size() > 1 ? root.children[1] : root,
                    "expected (domain <name>)");
  Domain domain;
  domain.name = expect_name(head.children[1], "domain name");

  std::set<std::string> type_names, pred_names, action_names, fn_names;
  for (std::size_t i = 2; i < root.children.size(); ++i) {
    const SExpr& section = root.children[i];
    if (section.is_atom || section.children.empty() ||
        !section.children[0].is_atom)
      structure_error(section, "expected a (:section ...) list");
    const std::string& tag = section.children[0].atom;
    if (tag == ":requirements") {
      for (std::size_t k = 1; k < section.children.size(); ++k) {
        const std::string& req =
            expect_symbol(section.children[k], "requirement flag");
        check_unsupported_requirement(section.children[k], req);
        if (std::find(domain.requirements.begin(), domain.requirements.end(),
                      req) == domain.requirements.end())
          domain.requirements.push_back(req);
      }
    } else if (tag == ":types") {
      auto typed = parse_typed_list(section, 1, false, "type name");
      for (const auto& t : typed) {
        if (t.name == "object")
          structure_error(section, "built-in type 'object' cannot be redeclared");
        check_duplicate(section, type_names, t.name, "type");
        domain.types.emplace_back(t.name, t.type);
      }
    } else if (tag == ":predicates") {
      for (std::size_t k = 1; k < section.children.size(); ++k) {
        const SExpr& p = section.children[k];
        if (p.is_atom || p.children.empty())
          structure_error(p, "malformed predicate declaration");
        PredicateSignature sig;
        sig.name = expect_name(p.children[0], "predicate name");
        check_duplicate(p, pred_names, sig.name, "predicate");
        sig.params = parse_typed_list(p, 1, true, "parameter");
        domain.predicates.push_back(std::move(sig));
      }
    } else if (tag == ":functions") {
      for (std::size_t k = 1; k < section.children.size(); ++k) {
        const SExpr& f = section.children[k];
        if (f.is_atom) {
          // Trailing `- number` type annotation on the function list.
          if (f.atom == "-") {
            if (k + 1 >= section.children.size() ||
                !section.children[k + 1].is_atom ||
                section.children[k + 1].atom != "number")
              unsupported(f, "non-numeric function type");
            ++k;
            continue;
          }
          structure_error(f, "malformed function declaration");
        }
        if (f.children.size() != 1)
          unsupported(f, "function with parameters");
        std::string name = expect_name(f.children[0], "function name");
        check_duplicate(f, fn_names, name, "function");
        domain.functions.push_back(std::move(name));
      }
    } else if (tag == ":action") {
      ActionSchema schema = parse_action(section, domain);
      check_duplicate(section, action_names, schema.name, "action");
      domain.actions.push_back(std::move(schema));
    } else if (kRejectedSections.count(tag)) {
      unsupported(section, "section " + tag);
    } else {
      structure_error(section, "unknown section " + tag);
    }
  }

  // Type tree: parents declared, chains terminate at object, no cycles.
  for (const auto& [t, parent] : domain.types) {
    if (parent != "object" && !type_names.count(parent))
      fail(Errc::structure_error,
           "type '" + t + "' has undeclared parent '" + parent + "'");
  }
  for (const auto& [t, parent] : domain.types) {
    std::set<std::string> visited{t};
    std::string cur = parent;
    while (cur != "object") {
      if (!visited.insert(cur).second)
        fail(Errc::structure_error, "type cycle involving '" + t + "'");
      const std::string* next = nullptr;
      for (const auto& [name, p] : domain.types)
        if (name == cur) {
          next = &p;
          break;
        }
      cur = *next;
    }
  }
  for (const auto& sig : domain.predicates)
    for (const auto& param : sig.params)
      if (!domain.type_declared(param.type))
        fail(Errc::structure_error, "predicate '" + sig.name +
                                        "' uses undeclared type '" +
                                        param.type + "'");
  for (const auto& schema : domain.actions) {
    for (const auto& param : schema.params)
      if (!domain.type_declared(param.type))
        fail(Errc::structure_error, "action '" + schema.name +
                                        "' uses undeclared type '" +
                                        param.type + "'");
    if (schema.cost.has_value() &&
        std::find(domain.functions.begin(), domain.functions.end(),
                  schema.cost->function) == domain.functions.end())
      fail(Errc::structure_error, "action '" + schema.name +
                                      "' increases undeclared function '" +
                                      schema.cost->function + "'");
  }
  return domain;
}

namespace {

void bind_check_ground_atom(const Atom& atom, const Domain& domain,
                            const Problem& problem, const std::string& where) {
  if (atom.pred == "=") {
    for (const auto& arg : atom.args) {
      if (is_variable(arg))
        fail(Errc::binding_error,
             where + " atom " + atom.str() + " is not ground");
      if (problem.find_object(arg) == nullptr)
        fail(Errc::binding_error, where + " atom " + atom.str() +
                                      " references unknown object '" + arg +
                                      "'");
    }
    return;
  }
  const PredicateSignature* sig = domain.find_predicate(atom.pred);
  if (sig == nullptr)
    fail(Errc::binding_error,
         where + " atom " + atom.str() + " uses undeclared predicate '" +
             atom.pred + "'");
  if (sig->params.size() != atom.args.size())
    fail(Errc::binding_error,
         where + " atom " + atom.str() + " has arity " +
             std::to_string(atom.args.size()) + ", predicate '" + atom.pred +
             "' expects " + std::to_string(sig->params.size()));
  for (std::size_t i = 0; i < atom.args.size(); ++i) {
    const std::string& arg = atom.args[i];
    if (is_variable(arg))
      fail(Errc::binding_error,
           where + " atom " + atom.str() + " is not ground");
    const TypedName* obj = problem.find_object(arg);
    if (obj == nullptr)
      fail(Errc::binding_error, where + " atom " + atom.str() +
                                    " references unknown object '" + arg + "'");
    if (!is_subtype(domain, obj->type, sig->params[i].type))
      fail(Errc::binding_error,
           where + " atom " + atom.str() + ": object '" + arg + "' has type '" +
               obj->type + "', expected '" + sig->params[i].type + "'");
  }
}

}  // namespace

Problem parse_problem(std::string_view text, const Domain& domain,
                      const ParseOptions& options) {
  SExpr root = parse_sexpr(text);
  if (!root.tagged("define") || root.children.size() < 2)
    structure_error(root, "expected (define (problem ...) ...)");
  const SExpr& head = root.children[1];
  if (!head.tagged("problem") || head.children.size() != 2)
    structure_error(root, "expected (problem <name>)");
  Problem problem;
  problem.name = expect_name(head.children[1], "problem name");

  bool saw_domain = false, saw_init = false, saw_goal = false;
  std::vector<const SExpr*> init_exprs;
  const SExpr* goal_expr = nullptr;
  std::set<std::string> object_names;

  for (std::size_t i = 2; i < root.children.size(); ++i) {
    const SExpr& section = root.children[i];
    if (section.is_atom || section.children.empty() ||
        !section.children[0].is_atom)
      structure_error(section, "expected a (:section ...) list");
    const std::string& tag = section.children[0].atom;
    if (tag == ":domain") {
      if (section.children.size() != 2)
        structure_error(section, "malformed (:domain ...)");
      saw_domain = true;
      problem.domain_name = expect_name(section.children[1], "domain name");
      if (problem.domain_name != domain.name) {
        std::string msg = "problem references domain '" + problem.domain_name +
                          "', expected '" + domain.name + "'";
        if (options.strict_domain_match)
          fail(Errc::domain_mismatch, msg, section.line, section.col);
        if (options.warnings) options.warnings->push_back(msg);
      }
    } else if (tag == ":objects") {
      auto typed = parse_typed_list(section, 1, false, "object name");
      for (auto& o : typed) {
        check_duplicate(section, object_names, o.name, "object");
        if (!domain.type_declared(o.type))
          fail(Errc::binding_error,
               "object '" + o.name + "' has undeclared type '" + o.type + "'",
               section.line, section.col);
        problem.objects.push_back(std::move(o));
      }
    } else if (tag == ":init") {
      saw_init = true;
      for (std::size_t k = 1; k < section.children.size(); ++k)
        init_exprs.push_back(&section.children[k]);
    } else if (tag == ":goal") {
      if (section.children.size() != 2)
        structure_error(section, "malformed (:goal ...)");
      saw_goal = true;
      goal_expr = &section.children[1];
    } else if (tag == ":metric") {
      // Tolerated for cost-enabled inputs; cost is inert for validity and
      // the canonical form does not keep the metric.
      if (section.children.size() != 3 || !section.children[1].is_atom ||
          section.children[1].atom != "minimize" ||
          section.children[2].is_atom ||
          section.children[2].children.size() != 1)
        unsupported(section, "metric other than (minimize (<function>))");
      std::string fn = expect_name(section.children[2].children[0],
                                   "function name");
      if (std::find(domain.functions.begin(), domain.functions.end(), fn) ==
          domain.functions.end())
        fail(Errc::binding_error, "metric uses undeclared function '" + fn + "'",
             section.line, section.col);
    } else {
      structure_error(section, "unknown section " + tag);
    }
  }

  if (!saw_domain) structure_error(root, "missing (:domain ...)");
  if (!saw_goal) structure_error(root, "missing (:goal ...)");
  (void)saw_init;  // an empty or absent :init is legal

  std::set<Atom> seen_atoms;
  for (const SExpr* e : init_exprs) {
    if (e->tagged("=")) {
      if (e->children.size() != 3 || e->children[1].is_atom ||
          e->children[1].children.size() != 1)
        unsupported(*e, "non-cost numeric initialization");
      std::string fn =
          expect_name(e->children[1].children[0], "function name");
      if (std::find(domain.functions.begin(), domain.functions.end(), fn) ==
          domain.functions.end())
        fail(Errc::binding_error,
             "init assigns undeclared function '" + fn + "'", e->line, e->col);
      problem.init_costs.push_back(
          FunctionInit{fn, parse_integer(e->children[2], "function value")});
      continue;
    }
    if (e->tagged("not")) unsupported(*e, "negative init literal");
    Atom atom = parse_atom_expr(*e);
    bind_check_ground_atom(atom, domain, problem, "init");
    if (seen_atoms.insert(atom).second) problem.init.push_back(std::move(atom));
  }

  for (const Literal& lit : parse_literal_list(*goal_expr)) {
    bind_check_ground_atom(lit.atom, domain, problem, "goal");
    problem.goal.push_back(lit);
  }
  return problem;
}

namespace {

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() &&
           std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    std::size_t start = i;
    while (i < line.size() &&
           !std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    if (i > start) out.emplace_back(line.substr(start, i - start));
  }
  return out;
}

std::string lowercase(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

TimedPlan parse_plan(std::string_view text) {
  TimedPlan plan;
  int lineno = 0;
  std::size_t pos = 0;
  bool saw_end = false;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view raw = (eol == std::string_view::npos)
                               ? text.substr(pos)
                               : text.substr(pos, eol - pos);
    pos = (eol == std::string_view::npos) ? text.size() : eol + 1;
    ++lineno;

    std::string line(raw);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;           // blank
    if (line[first] == ';') continue;                   // comment
    std::string body = lowercase(line.substr(first));
    while (!body.empty() && (body.back() == ' ' || body.back() == '\t'))
      body.pop_back();

    if (saw_end)
      fail(Errc::plan_format, "content after END marker", lineno, 1);
    if (body == "end") {
      saw_end = true;
      continue;
    }

    std::size_t colon = body.find(':');
    if (colon == std::string::npos)
      fail(Errc::plan_format, "missing ':' after timestamp", lineno, 1);
    std::string stamp = body.substr(0, colon);
    while (!stamp.empty() && stamp.back() == ' ') stamp.pop_back();
    if (stamp.empty() || !std::all_of(stamp.begin(), stamp.end(), [](char c) {
          return std::isdigit(static_cast<unsigned char>(c));
        }))
      fail(Errc::plan_format, "timestamp is not a non-negative integer",
           lineno, 1);
    long long time = 0;
    for (char c : stamp) {
      time = time * 10 + (c - '0');
      if (time > (1LL << 60))
        fail(Errc::plan_format, "timestamp out of range", lineno, 1);
    }

    std::string rest = body.substr(colon + 1);
    std::size_t open = rest.find_first_not_of(" \t");
    if (open == std::string::npos || rest[open] != '(')
      fail(Errc::plan_format, "expected '(' after timestamp", lineno, 1);
    std::size_t close = rest.find_last_not_of(" \t");
    if (rest[close] != ')')
      fail(Errc::plan_format, "expected ')' at end of step", lineno, 1);
    auto tokens = split_ws(std::string_view(rest).substr(open + 1, close - open - 1));
    if (tokens.empty())
      fail(Errc::plan_format, "empty action", lineno, 1);
    for (const auto& t : tokens)
      if (!is_identifier(t))
        fail(Errc::plan_format, "illegal token '" + t + "' in step", lineno, 1);

    PlanStep step;
    step.time = time;
    step.action = tokens[0];
    step.args.assign(tokens.begin() + 1, tokens.end());
    if (!plan.steps.empty() && step.time <= plan.steps.back().time)
      fail(Errc::non_monotonic_timestamps,
           "timestamp " + std::to_string(step.time) +
               " does not increase past " +
               std::to_string(plan.steps.back().time),
           lineno, 1);
    plan.steps.push_back(std::move(step));
  }
  plan.terminated = saw_end;
  return plan;
}

}  // namespace plangen
