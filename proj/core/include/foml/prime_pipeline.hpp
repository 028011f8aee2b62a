// Action formulas: distribute prime down to flexible variables, coalesce
// primed variables to fresh constants, and generate the obligations of an
// invariance proof.

#ifndef FOML_PRIME_PIPELINE_HPP_
#define FOML_PRIME_PIPELINE_HPP_

#include <array>
#include <string>
#include <vector>

#include "foml/coalesce_fol.hpp"
#include "foml/modal_prover.hpp"
#include "foml/problem.hpp"

namespace foml {

// Requires no nabla, no defined operators, no nested prime. Afterwards every
// prime wraps a flexible variable; primes over rigid subexpressions vanish.
Expr distribute_prime(const Expr& e, const DefinitionEnvironment& env);

// Replaces each (prime v) by the 0-ary symbol v' (shared per variable).
// Requires the output of distribute_prime.
Expr coalesce_action(const Expr& e, SymbolTable& table, const DefinitionEnvironment& env);

// Expands definitions, distributes prime, and coalesces.
Expr translate_action(const Expr& e, SymbolTable& table, const DefinitionEnvironment& env);

// A two-state Kripke model with primeR = {(w, w2), (w2, w2)} lifted from a
// first-order structure over an action table: v takes its value at w and
// v' its value at w2.
KripkeModel lift_action_structure(const FolStructure& s, const SymbolTable& action_table,
                                  const DefinitionEnvironment& env);

struct SafetyObligations {
  // (1) init => iinv, (2) iinv and [next]_vars => iinv', (3) iinv => inv.
  std::array<Obligation, 3> raw;
  // Definitions expanded; (2) distributed and coalesced. Pure first-order.
  std::array<Obligation, 3> fol;
  SymbolTable action_symbols;
  // Ties the three facts to init and always-[next] implies always-inv.
  MLSequent glue;
  std::vector<std::pair<std::string, std::string>> glue_atoms;  // atom, source
};

SafetyObligations safety_obligations(const SafetySpec& spec, const DefinitionEnvironment& env);

// [next]_vars = next or (v1' = v1 and ... ).
Expr stuttering_step(const Expr& next, const std::vector<std::string>& vars);

}  // namespace foml

#endif  // FOML_PRIME_PIPELINE_HPP_
