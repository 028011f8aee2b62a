// Coalescing to first-order logic: every modal subexpression and every
// defined-operator application is replaced by an application of a fresh
// operator symbol. Alpha-equivalent sources share one symbol.

#ifndef FOML_COALESCE_FOL_HPP_
#define FOML_COALESCE_FOL_HPP_

#include <map>
#include <string>
#include <vector>

#include "foml/environment.hpp"
#include "foml/expr.hpp"
#include "foml/kripke.hpp"
#include "foml/leibniz.hpp"
#include "foml/problem.hpp"

namespace foml {

// Order of the abstracted binders z (the arguments of a modal symbol).
enum class CanonicalOrder {
  Innermost,   // innermost binder first, as the binder list grows by prepending
  Appearance,  // order of first free occurrence in the abstracted expression
};

CanonicalOrder parse_canonical_order(std::string_view s);  // "innermost" | "appearance"

struct CoalesceOptions {
  CanonicalOrder order = CanonicalOrder::Innermost;
  bool prime_names = false;  // a symbol for (prime v) is named v'
};

struct SymbolEntry {
  enum class Type { Modal, Def };

  Type type = Type::Modal;
  std::string name;
  std::size_t arity = 0;
  std::string key;  // canonical coalescing key
  // Modal: the nabla/prime expression. Def: d(a1..an) where a_i is the
  // concrete argument or a fresh parameter.
  Expr source;
  // Rigid variable bound to each argument position; empty for positions
  // whose argument the interpretation ignores (concrete epsilon entries).
  std::vector<std::string> params;
  std::string display;  // human-readable key
};

class SymbolTable {
 public:
  explicit SymbolTable(CoalesceOptions options = {}) : options_(options) {}

  const CoalesceOptions& options() const { return options_; }
  const std::vector<SymbolEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  const SymbolEntry* find_key(const std::string& key) const;
  const SymbolEntry* find_name(const std::string& name) const;

  // Returns the existing entry for proto.key, or adds proto under a fresh
  // name (c<k>__<digest>, or the hint when given) avoiding `reserved`.
  const SymbolEntry& intern(SymbolEntry proto, const NameSet& reserved, const std::string& hint = {});

 private:
  CoalesceOptions options_;
  std::vector<SymbolEntry> entries_;
  std::map<std::string, std::size_t> by_key_;
  std::map<std::string, std::size_t> by_name_;
};

// Translation of e under enclosing binders (innermost first).
Expr coalesce_fol(const Expr& e, const std::vector<std::string>& binders, SymbolTable& table,
                  const DefinitionEnvironment& env);

struct FolSequent {
  std::vector<Expr> hypotheses;
  Expr goal;
};

struct FolCoalesced {
  FolSequent sequent;
  SymbolTable table;
};

// One table shared by all hypotheses and the goal.
FolCoalesced coalesce_obligation_fol(const Obligation& ob, CoalesceOptions options = {});

// Rewrites nabla(e) for rigid e: to e on reflexive frames, otherwise to
// nabla(false) or e. Applied bottom-up; definition bodies are untouched.
Expr rewrite_rigid_box(const Expr& e, bool reflexive, const DefinitionEnvironment& env);

// Declarations for a coalesced sequent: primitive operators, variables, and
// one 0..n-ary operator per symbol. Definitions are dropped.
DefinitionEnvironment coalesced_environment(const DefinitionEnvironment& env, const SymbolTable& table);

// The structure from the soundness proof: variables as in M at w, symbols
// interpreted by evaluating their sources at w under the argument values.
FolStructure build_witness_structure(const KripkeModel& m, int w, const SymbolTable& table,
                                     const DefinitionEnvironment& env);

// "(symbols (name key) ...)" block.
std::string format_symbols(const SymbolTable& table);

}  // namespace foml

#endif  // FOML_COALESCE_FOL_HPP_
