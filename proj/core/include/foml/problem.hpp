// Problem files: declarations, definitions, hypotheses, and a goal.
//
//   (declare-op name arity) (declare-rigid x) (declare-flex v)
//   (define (d x1 .. xn) body) (assume e) (goal e) (mode fol|ml|action)
//
// Safety specifications add (vars v ..) (init e) (next e) (inv e) (iinv e).

#ifndef FOML_PROBLEM_HPP_
#define FOML_PROBLEM_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "foml/environment.hpp"
#include "foml/expr.hpp"
#include "foml/sexpr.hpp"

namespace foml {

enum class Mode { Fol, Ml, Action };

const char* mode_name(Mode m);

struct Obligation {
  std::vector<Expr> hypotheses;
  Expr goal;
  DefinitionEnvironment env;
  Mode mode = Mode::Fol;
};

struct SafetySpec {
  std::vector<std::string> vars;
  Expr init, next, inv, iinv;
};

struct ProblemFile {
  DefinitionEnvironment env;
  std::vector<Expr> hypotheses;
  std::optional<Expr> goal;
  Mode mode = Mode::Fol;
  std::optional<SafetySpec> safety;  // present iff any safety form was given
};

ProblemFile parse_problem_file(std::string_view text);

// Requires a (goal ...) form.
Obligation parse_problem(std::string_view text);

SafetySpec parse_safety(std::string_view text, DefinitionEnvironment& env_out);

// Parses one expression against a fixed environment (no declarations).
Expr parse_expression(std::string_view text, const DefinitionEnvironment& env);
Expr parse_expression(const SExpr& s, const DefinitionEnvironment& env);

// Declarations and definitions as problem-file forms, in a stable order
// (ops, rigid, flex, then definitions in declaration order).
std::string print_environment(const DefinitionEnvironment& env);
std::string print_problem(const Obligation& ob);

}  // namespace foml

#endif  // FOML_PROBLEM_HPP_
