#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace plangen {

// Generic s-expression tree; the PDDL readers work on this instead of raw
// text. Symbols are lowercased here (PDDL identifiers are case-insensitive),
// comments (';' to end of line) are dropped.
struct SExpr {
  bool is_atom = false;
  std::string atom;
  std::vector<SExpr> children;
  int line = 0;
  int col = 0;

  bool tagged(std::string_view tag) const;
  const SExpr& child(std::size_t i) const { return children[i]; }
};

// Parse exactly one expression (trailing whitespace/comments allowed).
SExpr parse_sexpr(std::string_view text);

// Parse a whole file worth of expressions.
std::vector<SExpr> parse_sexpr_list(std::string_view text);

}  // namespace plangen
