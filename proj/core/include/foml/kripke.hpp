// Finite Kripke models, first-order structures, and propositional Kripke
// models, with exact evaluation.
//
// Values are indices into a finite universe. Operators are interpreted by
// total lookup tables in row-major order of their arguments.

#ifndef FOML_KRIPKE_HPP_
#define FOML_KRIPKE_HPP_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "foml/environment.hpp"
#include "foml/expr.hpp"

namespace foml {

using Value = int;

struct EvalError : Error {
  using Error::Error;
};

struct OpTable {
  std::size_t arity = 0;
  std::vector<Value> values;  // size = |universe|^arity

  static OpTable constant(Value v) { return {0, {v}}; }
  Value at(std::span<const Value> args, std::size_t universe_size) const;
  bool operator==(const OpTable&) const = default;
};

// Successor lists over states 0..n-1, kept sorted and duplicate-free.
struct Relation {
  std::vector<std::vector<int>> succ;

  explicit Relation(std::size_t states = 0) : succ(states) {}
  void add(int from, int to);
  bool has(int from, int to) const;
  std::size_t states() const { return succ.size(); }
  bool is_reflexive() const;
  bool is_transitive() const;
  bool is_functional() const;  // exactly one successor per state
  bool operator==(const Relation&) const = default;
};

// Frame classes for an accessibility relation.
enum class Frame { K, T, K4, S4 };

const char* frame_name(Frame f);
// Accepts k, t, k4, s4.
Frame parse_frame(std::string_view s);
bool frame_admits(Frame f, const Relation& r);

struct Universe {
  std::vector<std::string> names;
  Value tt = 0;
  Value ff = 1;

  std::size_t size() const { return names.size(); }
  // {tt, ff, u2, u3, ...}
  static Universe standard(std::size_t size);
  bool operator==(const Universe&) const = default;
};

struct KripkeModel {
  Universe universe;
  std::map<std::string, OpTable> ops;
  std::map<std::string, Value> xi;
  std::vector<std::string> states;
  Relation r;
  std::map<std::string, std::vector<Value>> zeta;  // flexible variable -> value per state
  std::optional<Relation> prime_r;

  std::size_t num_states() const { return states.size(); }
  int state_index(std::string_view name) const;
  // Throws Error when a structural invariant does not hold.
  void validate() const;
  bool operator==(const KripkeModel&) const = default;
};

struct FolStructure {
  Universe universe;
  std::map<std::string, OpTable> ops;  // primitive and coalesced symbols
  std::map<std::string, Value> xi;     // rigid and flexible variables

  void validate() const;
  bool operator==(const FolStructure&) const = default;
};

struct PropModel {
  std::vector<std::string> states;
  Relation r;
  std::optional<Relation> prime_r;
  std::map<std::string, std::vector<bool>> zeta;  // atom -> truth per state

  std::size_t num_states() const { return states.size(); }
  void validate() const;
  bool operator==(const PropModel&) const = default;
};

// Value of e at state w. Defined-operator applications are evaluated by
// expansion. Quantifiers range over the whole universe. Prime is evaluated
// over prime_r: with exactly one successor it yields the value there,
// otherwise the same collapse as nabla.
Value eval(const KripkeModel& m, int w, const Expr& e, const DefinitionEnvironment& env);
// Same as eval but assumes e has no Def nodes (already expanded).
Value eval_expanded(const KripkeModel& m, int w, const Expr& e);
Value eval_expanded(const KripkeModel& m, int w, const Expr& e,
                    const std::map<std::string, Value>& extra_rigid);
bool holds(const KripkeModel& m, int w, const Expr& e, const DefinitionEnvironment& env);

Value eval_fol(const FolStructure& s, const Expr& e);
bool holds_fol(const FolStructure& s, const Expr& e);

bool eval_ml(const PropModel& k, int w, const Expr& e);

// The first-order structure (I, xi) of a Kripke model; flexible variables
// take their values at state w.
FolStructure fol_view(const KripkeModel& m, int w);

// PropModel as a Kripke model over the universe {tt, ff}.
KripkeModel as_kripke(const PropModel& k);

// Model-file s-expressions. print_model is canonical; parse_model accepts
// exactly the canonical layout's grammar (whitespace-insensitive).
std::string print_model(const KripkeModel& m);
KripkeModel parse_model(std::string_view text);
std::string print_fol_structure(const FolStructure& s);

}  // namespace foml

#endif  // FOML_KRIPKE_HPP_
