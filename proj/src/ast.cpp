#include "plangen/ast.hpp"

namespace plangen {

std::string Atom::str() const {
  std::string out = "(" + pred;
  for (const auto& a : args) {
    out += ' ';
    out += a;
  }
  out += ')';
  return out;
}

std::string Literal::str() const {
  return positive ? atom.str() : "(not " + atom.str() + ")";
}

const PredicateSignature* Domain::find_predicate(const std::string& name) const {
  for (const auto& p : predicates)
    if (p.name == name) return &p;
  return nullptr;
}

const ActionSchema* Domain::find_action(const std::string& name) const {
  for (const auto& a : actions)
    if (a.name == name) return &a;
  return nullptr;
}

bool Domain::type_declared(const std::string& name) const {
  if (name == "object") return true;
  for (const auto& [t, parent] : types)
    if (t == name) return true;
  return false;
}

bool is_subtype(const Domain& domain, const std::string& t, const std::string& u) {
  if (u == "object" || t == u) return true;
  std::string cur = t;
  // Parent chains are acyclic by Domain invariant; bound the walk anyway.
  for (std::size_t hops = 0; hops <= domain.types.size(); ++hops) {
    const std::string* parent = nullptr;
    for (const auto& [name, p] : domain.types)
      if (name == cur) {
        parent = &p;
        break;
      }
    if (parent == nullptr) return false;
    if (*parent == u) return true;
    cur = *parent;
  }
  return false;
}

const TypedName* Problem::find_object(const std::string& name) const {
  for (const auto& o : objects)
    if (o.name == name) return &o;
  return nullptr;
}

}  // namespace plangen
