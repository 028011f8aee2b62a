// Output formats: SMT-LIB 2 and TPTP FOF for first-order sequents, and an
// s-expression exchange format for propositional modal sequents.
//
// First-order expressions are encoded over one uninterpreted sort U with
// distinct constants tt and ff. An expression in formula position is read
// as "term = tt"; equalities, implications, and quantifiers in formula
// position translate directly.

#ifndef FOML_EMITTERS_HPP_
#define FOML_EMITTERS_HPP_

#include <optional>
#include <string>
#include <string_view>

#include "foml/coalesce_fol.hpp"
#include "foml/modal_prover.hpp"

namespace foml {

// Validity of the sequent is unsatisfiability of the script. `table`, when
// given, adds a comment per coalesced symbol.
std::string emit_smt(const FolSequent& s, const SymbolTable* table = nullptr);

// Hypotheses become axioms, the goal the conjecture.
std::string emit_tptp(const FolSequent& s, const SymbolTable* table = nullptr);

std::string emit_ml(const MLSequent& s);
// Inverse of emit_ml; accepts any whitespace and comments.
MLSequent parse_ml_sequent(std::string_view text);

enum class SolverAnswer { Valid, Invalid, Unknown };

const char* solver_answer_name(SolverAnswer a);

// Runs `solver` on a file holding `script` and classifies its output
// (sat/unsat for SMT, SZS status lines for TPTP). nullopt when the solver
// could not be run.
std::optional<SolverAnswer> run_solver(const std::string& solver, const std::string& script,
                                       bool tptp, int timeout_seconds = 30);

}  // namespace foml

#endif  // FOML_EMITTERS_HPP_
