#include "plangen/sexpr.hpp"

#include <cctype>

#include "plangen/errors.hpp"

namespace plangen {

bool SExpr::tagged(std::string_view tag) const {
  return !is_atom && !children.empty() && children[0].is_atom &&
         children[0].atom == tag;
}

namespace {

bool symbol_char(char c) {
  if (std::isalnum(static_cast<unsigned char>(c))) return true;
  switch (c) {
    case '-': case '_': case '?': case ':': case '=': case '.':
      return true;
    default:
      return false;
  }
}

struct Lexer {
  std::string_view text;
  std::size_t pos = 0;
  int line = 1;
  int col = 1;

  void advance() {
    if (text[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  void skip_ws_and_comments() {
    while (pos < text.size()) {
      char c = text[pos];
      if (c == ';') {
        while (pos < text.size() && text[pos] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n' ||
                 c == '\f' || c == '\v') {
        advance();
      } else {
        break;
      }
    }
  }

  bool eof() {
    skip_ws_and_comments();
    return pos >= text.size();
  }

  SExpr parse_expr(int depth) {
    if (depth > 512) fail(Errc::lex_error, "nesting too deep", line, col);
    skip_ws_and_comments();
    if (pos >= text.size())
      fail(Errc::lex_error, "unexpected end of input", line, col);
    char c = text[pos];
    int start_line = line, start_col = col;
    if (c == ')') fail(Errc::lex_error, "unexpected ')'", line, col);
    if (c == '(') {
      advance();
      SExpr node{false, {}, {}, start_line, start_col};
      while (true) {
        skip_ws_and_comments();
        if (pos >= text.size())
          fail(Errc::lex_error, "unbalanced '(': missing ')'", start_line,
               start_col);
        if (text[pos] == ')') {
          advance();
          return node;
        }
        node.children.push_back(parse_expr(depth + 1));
      }
    }
    if (!symbol_char(c))
      fail(Errc::lex_error,
           std::string("illegal character '") + printable(c) + "'", line, col);
    SExpr node{true, {}, {}, start_line, start_col};
    while (pos < text.size() && symbol_char(text[pos])) {
      char s = text[pos];
      node.atom.push_back(static_cast<char>(
          std::tolower(static_cast<unsigned char>(s))));
      advance();
    }
    return node;
  }

  static std::string printable(char c) {
    unsigned char u = static_cast<unsigned char>(c);
    if (u >= 0x20 && u < 0x7f) return std::string(1, c);
    static const char hex[] = "0123456789abcdef";
    return std::string("\\x") + hex[u >> 4] + hex[u & 0xf];
  }
};

}  // namespace

SExpr parse_sexpr(std::string_view text) {
  Lexer lex{text};
  SExpr e = lex.parse_expr(0);
  if (!lex.eof())
    fail(Errc::lex_error, "trailing content after expression", lex.line,
         lex.col);
  return e;
}

std::vector<SExpr> parse_sexpr_list(std::string_view text) {
  Lexer lex{text};
  std::vector<SExpr> out;
  while (!lex.eof()) out.push_back(lex.parse_expr(0));
  return out;
}

}  // namespace plangen
