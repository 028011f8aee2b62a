// Random expressions and models, and the semantic properties checked on
// them: the soundness witnesses of both coalescing translations, the lemmas
// on rigid and Leibniz arguments, and the action-formula pipeline.

#ifndef FOML_FUZZ_HPP_
#define FOML_FUZZ_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "foml/environment.hpp"
#include "foml/kripke.hpp"
#include "foml/rng.hpp"

namespace foml {

// Operators 0, 1, f/1, g/2, P/1; rigid a, b; flexible u, v; definitions
// cst, id, gd, mix, nxt, wrap (nxt uses prime).
const DefinitionEnvironment& fuzz_environment();
// Operators 0, f/1; rigid a; flexible u, v; definitions stay, inc.
const DefinitionEnvironment& action_environment();

struct GenOptions {
  std::size_t max_depth = 4;        // syntactic depth
  std::size_t max_modal_depth = 3;
  bool nabla = true;
  bool prime = true;
  bool definitions = true;
  bool flexible = true;
};

class ExprGen {
 public:
  ExprGen(SplitMix64& rng, const DefinitionEnvironment& env, GenOptions options = {});

  Expr expr();
  // No flexible variables, modalities, or definitions.
  Expr rigid_expr();
  // Arguments for d; those landing under prime avoid prime.
  std::vector<Expr> def_args(const std::string& d);

 private:
  Expr gen(std::size_t depth, std::size_t modal_left, bool under_prime, std::vector<std::string>& bound);
  Expr leaf(const std::vector<std::string>& bound);

  SplitMix64& rng_;
  const DefinitionEnvironment& env_;
  GenOptions opt_;
  std::vector<std::string> rigid_;
  std::vector<std::string> flex_;
  std::vector<std::pair<std::string, std::size_t>> ops_;
};

struct ModelOptions {
  std::size_t max_universe = 3;
  std::size_t max_states = 3;
  bool functional_prime = false;  // otherwise functional half the time
};

KripkeModel random_model(SplitMix64& rng, const DefinitionEnvironment& env, ModelOptions options = {});

enum class Property {
  FolWitness,         // coalesce_fol evaluated in the witness structure
  MlWitness,          // coalesce_ml in the witness propositional model, plus H
  RigidLemma,         // rigid arguments may be replaced by their values
  LeibnizLemma,       // so may arguments at Leibniz positions
  Consequent,         // e = f implies d(..e..) = d(..f..)
  PrimeDistribution,  // distribute_prime preserves values (functional primeR)
  ActionLifting,      // countermodels transfer both ways for action formulas
};

const char* property_name(Property p);
std::optional<Property> parse_property(std::string_view s);
const std::vector<Property>& all_properties();

// nullopt when the property holds for the case drawn from `case_seed`,
// otherwise a description of the discrepancy.
std::optional<std::string> check_case(Property p, std::uint64_t case_seed);

struct FuzzFailure {
  Property property;
  std::uint64_t iteration = 0;
  std::uint64_t case_seed = 0;
  std::string detail;
};

struct FuzzReport {
  std::uint64_t cases = 0;
  std::vector<FuzzFailure> failures;  // in order of (iteration, property)
};

// Runs `iters` iterations; iteration i checks every property on
// case_seed(seed, i). Stops collecting details after `max_failures`.
FuzzReport run_fuzz(std::uint64_t seed, std::uint64_t iters, const std::vector<Property>& properties,
                    std::size_t max_failures = 10);

}  // namespace foml

#endif  // FOML_FUZZ_HPP_
