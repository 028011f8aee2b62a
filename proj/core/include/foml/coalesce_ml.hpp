// Coalescing to propositional modal logic: first-order leaves (free rigid
// variables, applications, equalities, quantified formulas) become fresh
// propositional atoms; implication, nabla, and prime are kept.

#ifndef FOML_COALESCE_ML_HPP_
#define FOML_COALESCE_ML_HPP_

#include <map>
#include <string>
#include <vector>

#include "foml/environment.hpp"
#include "foml/expr.hpp"
#include "foml/kripke.hpp"
#include "foml/problem.hpp"

namespace foml {

struct AtomEntry {
  std::string name;
  std::string key;  // canonical rendering of the source
  Expr source;
  bool rigid = false;
};

class AtomTable {
 public:
  const std::vector<AtomEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  const AtomEntry* find_key(const std::string& key) const;
  const AtomEntry* find_name(const std::string& name) const;

  // Existing atom for the source's canonical key, or a fresh a<k>__<digest>.
  const AtomEntry& intern(const Expr& source, const DefinitionEnvironment& env);

 private:
  std::vector<AtomEntry> entries_;
  std::map<std::string, std::size_t> by_key_;
  std::map<std::string, std::size_t> by_name_;
};

// Atoms are rendered as flexible variables; user flexible variables pass
// through unchanged.
Expr coalesce_ml(const Expr& e, AtomTable& table, const DefinitionEnvironment& env);

// a => nabla a for every atom with a rigid source, plus a => prime a for
// each of them when `with_prime`.
std::vector<Expr> hypotheses(const AtomTable& table, bool with_prime);

// Same, deciding `with_prime` from whether prime occurs in gamma or phi.
std::vector<Expr> hypotheses(const std::vector<Expr>& gamma, const Expr& phi, const AtomTable& table,
                             const DefinitionEnvironment& env);

struct MlCoalesced {
  std::vector<Expr> hypotheses;  // translated gamma
  Expr goal;
  std::vector<Expr> h;           // rigidity hypotheses
  AtomTable atoms;
  bool uses_prime = false;
};

MlCoalesced coalesce_obligation_ml(const Obligation& ob);

// The propositional model from the soundness proof: same states and
// relations; an atom holds at w iff its source evaluates to tt there; a
// flexible variable holds iff its value is tt.
PropModel build_witness_propmodel(const KripkeModel& m, const AtomTable& table,
                                  const DefinitionEnvironment& env);

// "(atoms (name source) ...)" block.
std::string format_atoms(const AtomTable& table);

}  // namespace foml

#endif  // FOML_COALESCE_ML_HPP_
