// Bounded, exhaustive model enumeration: countermodel search for FOML
// obligations over finite Kripke models and for first-order sequents over
// finite structures.

#ifndef FOML_SEARCH_HPP_
#define FOML_SEARCH_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "foml/kripke.hpp"
#include "foml/problem.hpp"

namespace foml {

struct SearchBounds {
  std::size_t max_universe = 2;  // universes of size 2 .. max_universe
  std::size_t max_states = 2;    // 1 .. max_states
  std::uint64_t max_models = 20'000'000;
  Frame frame = Frame::K;         // class of R
  bool functional_prime = false;  // primeR a total function
};

// What a model has to interpret.
struct Signature {
  std::map<std::string, std::size_t> ops;
  std::vector<std::string> rigid_vars;  // free rigid variables
  std::vector<std::string> flex_vars;
  bool uses_nabla = false;
  bool uses_prime = false;

  void add(const Expr& e);  // e must be expanded (no Def nodes)
};

enum class SearchStatus { Found, NoneWithinBounds, ResourceOut };

struct KripkeSearchResult {
  SearchStatus status = SearchStatus::NoneWithinBounds;
  std::optional<KripkeModel> model;
  int state = -1;
  std::uint64_t models_checked = 0;
};

struct FolSearchResult {
  SearchStatus status = SearchStatus::NoneWithinBounds;
  std::optional<FolStructure> structure;
  std::uint64_t models_checked = 0;
};

// Visits every Kripke model over `sig` within the bounds, universes of size 2
// upward. R is fixed empty when nabla is unused; primeR is present only when
// prime is used. `visit` returns false to stop. Returns the number visited,
// or nullopt when the cap was hit.
std::optional<std::uint64_t> for_each_kripke_model(
    const Signature& sig, const SearchBounds& bounds,
    const std::function<bool(const KripkeModel&)>& visit);

std::optional<std::uint64_t> for_each_fol_structure(
    const Signature& sig, std::size_t max_universe, std::uint64_t max_models,
    const std::function<bool(const FolStructure&)>& visit);

// A model where every hypothesis holds at every state and the goal fails at
// the returned state.
KripkeSearchResult find_countermodel(const Obligation& ob, const SearchBounds& bounds);

// A structure where every hypothesis holds and the goal does not.
FolSearchResult find_fol_countermodel(const std::vector<Expr>& hypotheses, const Expr& goal,
                                      std::size_t max_universe,
                                      std::uint64_t max_models = 20'000'000);

}  // namespace foml

#endif  // FOML_SEARCH_HPP_
