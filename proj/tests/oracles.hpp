// Independent reference implementations used by the tests. None of them
// call into the evaluators of the library under test.

#ifndef FOML_TESTS_ORACLES_HPP_
#define FOML_TESTS_ORACLES_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "foml/coalesce_fol.hpp"
#include "foml/kripke.hpp"
#include "foml/modal_prover.hpp"

namespace oracle {

// Exhaustive search for a propositional countermodel with at most
// `max_states` states: hypotheses true everywhere, goal false somewhere.
// Relations range over every relation admitted by the sequent's frames.
struct MlSearch {
  bool found = false;
  std::size_t states = 0;  // size of the first countermodel found
  std::uint64_t models = 0;
};
MlSearch ml_countermodel(const foml::MLSequent& s, std::size_t max_states);

// Every ML formula over `atoms`, false, =>, nabla (and prime when
// `with_prime`) with at most `max_size` nodes and modal depth at most
// `max_depth`. Index n holds the formulas with exactly n nodes.
std::vector<std::vector<foml::Expr>> ml_family(const std::vector<foml::Expr>& atoms, std::size_t max_size,
                                               std::size_t max_depth, bool with_prime);

// Formulas of sizes 1..max_size from an ml_family result, smallest first.
std::vector<foml::Expr> flatten(const std::vector<std::vector<foml::Expr>>& by_size, std::size_t max_size);

// Truth of an ML formula in a propositional model, by set semantics.
bool ml_holds(const foml::PropModel& k, int w, const foml::Expr& e);

// Evaluates every assertion of an SMT-LIB script produced for `s` in the
// structure `st`; returns whether all of them hold.
bool smt_satisfied(const std::string& script, const foml::FolSequent& s, const foml::FolStructure& st);

// Evaluates a TPTP problem produced for `s`: the definitional bool_k symbols
// are given the tables their axioms force, then the result is whether every
// axiom holds and the conjecture fails.
bool tptp_countermodel(const std::string& problem, const foml::FolStructure& st);

// Plain recursive evaluation of a first-order expression, written directly
// from the semantic clauses.
int fol_value(const foml::FolStructure& st, const foml::Expr& e);

}  // namespace oracle

#endif  // FOML_TESTS_ORACLES_HPP_
