// Minimal s-expression reader shared by the problem, model, and ML-sequent
// parsers. Atoms are maximal runs of characters other than whitespace,
// parentheses, and ';' (which starts a line comment).

#ifndef FOML_SEXPR_HPP_
#define FOML_SEXPR_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "foml/expr.hpp"

namespace foml {

struct ParseError : Error {
  enum class Code { Syntax, UnknownSymbol, Arity, NestedPrime, StrayVariable, Semantic };

  ParseError(Code code, int line, int column, const std::string& msg);

  Code code;
  int line;
  int column;
};

struct SExpr {
  bool is_list = false;
  std::string atom;
  std::vector<SExpr> items;
  int line = 0;
  int column = 0;

  bool is_atom() const { return !is_list; }
  bool is_atom(std::string_view a) const { return !is_list && atom == a; }
  // Head atom of a non-empty list whose first item is an atom, else "".
  std::string_view head() const;

  [[noreturn]] void fail(const std::string& msg,
                         ParseError::Code code = ParseError::Code::Syntax) const;
};

std::vector<SExpr> read_sexprs(std::string_view text);

}  // namespace foml

#endif  // FOML_SEXPR_HPP_
