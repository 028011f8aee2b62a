// Tableau decision procedure for propositional modal logic with two
// modalities (nabla, prime), global hypotheses, and K/T/K4/S4 frames.

#ifndef FOML_MODAL_PROVER_HPP_
#define FOML_MODAL_PROVER_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "foml/expr.hpp"
#include "foml/kripke.hpp"

namespace foml {

struct MLSequent {
  std::vector<Expr> hypotheses;  // hold at every state
  Expr goal;
  Frame frame = Frame::K;        // class of R (nabla)
  Frame prime_frame = Frame::K;  // class of primeR (prime)

  bool operator==(const MLSequent&) const = default;
};

// Throws Error unless e uses only atoms (flexible variables), false, =>,
// nabla, and prime.
void check_ml_formula(const Expr& e);

struct ProverLimits {
  std::uint64_t max_nodes = 2'000'000;  // expansion steps
};

struct Verdict {
  enum class Status { Proved, Countermodel, ResourceOut };

  Status status = Status::ResourceOut;
  std::optional<PropModel> model;  // set for Countermodel
  int state = -1;                  // where the goal fails
  std::uint64_t nodes = 0;
};

const char* status_name(Verdict::Status s);

// Proved iff the goal holds at every state of every model (of the frame
// classes) in which all hypotheses hold at every state. Countermodels are
// re-checked with eval_ml before being returned.
Verdict prove_ml(const MLSequent& s, const ProverLimits& limits = {});

}  // namespace foml

#endif  // FOML_MODAL_PROVER_HPP_
