// Core expression language of first-order modal logic.
//
// The AST has exactly the productions of the core grammar plus applications
// of defined operators and the next-state modality. Surface connectives
// (true, not, and, or, iff, exists, delta) are built from the core by the
// helpers at the bottom of this header and never appear as node kinds.

#ifndef FOML_EXPR_HPP_
#define FOML_EXPR_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace foml {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when an internal invariant does not hold (a bug, not bad input).
struct InvariantError : Error {
  using Error::Error;
};

enum class Kind : std::uint8_t {
  RigidVar,
  FlexVar,
  Op,       // primitive operator application (0-ary ops are constants)
  Def,      // defined operator application
  Eq,
  False,
  Implies,
  Forall,   // name() is the bound rigid variable, arg(0) the body
  Nabla,
  Prime,
};

const char* kind_name(Kind k);

class Expr {
 public:
  // FALSE; lets Expr live in containers that default-construct.
  Expr();

  static Expr rigid(std::string name);
  static Expr flex(std::string name);
  static Expr op(std::string name, std::vector<Expr> args = {});
  static Expr def(std::string name, std::vector<Expr> args = {});
  static Expr eq(Expr lhs, Expr rhs);
  static Expr falsum();
  static Expr implies(Expr lhs, Expr rhs);
  static Expr forall(std::string var, Expr body);
  static Expr nabla(Expr body);
  static Expr prime(Expr body);

  Kind kind() const noexcept;
  const std::string& name() const noexcept;
  std::span<const Expr> args() const noexcept;
  const Expr& arg(std::size_t i) const;
  std::size_t arity() const noexcept { return args().size(); }

  bool is(Kind k) const noexcept { return kind() == k; }
  bool is_var() const noexcept { return is(Kind::RigidVar) || is(Kind::FlexVar); }
  bool is_modal() const noexcept { return is(Kind::Nabla) || is(Kind::Prime); }

  // Same node kind and name, new children.
  Expr with_args(std::vector<Expr> args) const;

  std::size_t hash() const noexcept;
  bool same_node(const Expr& o) const noexcept { return node_ == o.node_; }

  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Expr make(Kind k, std::string name, std::vector<Expr> args);

  std::shared_ptr<const Node> node_;
};

struct ExprHash {
  std::size_t operator()(const Expr& e) const noexcept { return e.hash(); }
};

// Surface connectives, desugared to the core.
Expr truth();                           // FALSE => FALSE
Expr negate(Expr e);                    // e => FALSE
Expr conj(Expr a, Expr b);              // not (a => not b)
Expr disj(Expr a, Expr b);              // (not a) => b
Expr iff(Expr a, Expr b);               // (a => b) and (b => a)
Expr exists(std::string var, Expr body);  // not forall var. not body
Expr delta(Expr e);                     // not nabla not e

using NameSet = std::set<std::string>;
using Substitution = std::map<std::string, Expr>;

// Rigid variables with a free occurrence, in order of first occurrence.
std::vector<std::string> free_rigid_vars(const Expr& e);
bool occurs_free(const Expr& e, const std::string& rigid_var);

// Every name mentioned anywhere in e (variables, binders, operators).
void collect_names(const Expr& e, NameSet& out);

// `base` if it is not in `avoid`, otherwise base_1, base_2, ...
std::string fresh_name(const std::string& base, const NameSet& avoid);

// Capture-avoiding substitution of rigid variables. Bound variables are
// renamed only when a capture would occur; fresh names avoid every name in
// e, in sigma, and in `reserved`.
Expr substitute(const Expr& e, const Substitution& sigma, const NameSet& reserved = {});

// Canonical rendering with de Bruijn indices for bound rigid variables.
// `outer` lists enclosing binders, innermost first; occurrences of them are
// rendered as indices too (used for lambda-abstracted coalescing keys).
std::string canonical(const Expr& e, std::span<const std::string> outer = {});
bool alpha_equal(const Expr& a, const Expr& b);

bool contains_kind(const Expr& e, Kind k);
std::size_t expr_size(const Expr& e);
std::size_t modal_depth(const Expr& e);

// Pretty-printer for the problem-file expression syntax. Re-sugars the
// derived connectives; parse(print(e)) reproduces e exactly.
std::string to_string(const Expr& e);
// Core-only rendering: (=> a b), false, (nabla a), ... no sugar.
std::string to_core_string(const Expr& e);

// 64-bit FNV-1a; used for stable symbol digests.
std::uint64_t fnv1a(std::string_view s);

}  // namespace foml

#endif  // FOML_EXPR_HPP_
