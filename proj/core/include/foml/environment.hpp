// Signature declarations and operator definitions.

#ifndef FOML_ENVIRONMENT_HPP_
#define FOML_ENVIRONMENT_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "foml/expr.hpp"

namespace foml {

struct Definition {
  std::string name;
  std::vector<std::string> params;  // pairwise-distinct rigid variables
  Expr body;
};

// Declared primitive operators, rigid and flexible variables, and an ordered
// list of definitions (each body refers only to earlier definitions).
class DefinitionEnvironment {
 public:
  // Per-definition facts about the full expansion of the body, computed
  // incrementally on insertion without expanding.
  struct DefInfo {
    bool body_rigid = true;        // expansion has no FlexVar/Nabla/Prime outside params
    bool body_has_prime = false;   // expansion contains a Prime node
    std::vector<bool> param_used;  // parameter occurs free in the expansion
  };

  void declare_op(const std::string& name, std::size_t arity);
  void declare_rigid(const std::string& name);
  void declare_flex(const std::string& name);
  // Validates parameters, free variables, and referenced symbols.
  void add_definition(Definition d);

  bool is_op(const std::string& n) const { return ops_.contains(n); }
  bool is_def(const std::string& n) const { return def_index_.contains(n); }
  bool is_rigid_var(const std::string& n) const { return rigid_.contains(n); }
  bool is_flex_var(const std::string& n) const { return flex_.contains(n); }
  bool is_declared(const std::string& n) const;

  std::size_t op_arity(const std::string& n) const;
  const Definition& definition(const std::string& n) const;
  const DefInfo& info(const std::string& n) const;

  const std::map<std::string, std::size_t>& ops() const { return ops_; }
  const std::vector<Definition>& definitions() const { return defs_; }
  const NameSet& rigid_vars() const { return rigid_; }
  const NameSet& flex_vars() const { return flex_; }

  // Every declared or defined name; fresh names are generated against this.
  const NameSet& all_names() const { return names_; }

 private:
  void claim(const std::string& name);

  std::map<std::string, std::size_t> ops_;
  NameSet rigid_;
  NameSet flex_;
  std::vector<Definition> defs_;
  std::vector<DefInfo> infos_;
  std::map<std::string, std::size_t> def_index_;
  NameSet names_;
};

// One-step unfolding of a defined-operator application.
Expr unfold(const Expr& app, const DefinitionEnvironment& env);

// Unfolds every defined-operator application; terminates because definitions
// are acyclic.
Expr expand_definitions(const Expr& e, const DefinitionEnvironment& env);

// True iff the full expansion of e has no flexible variable and no modal
// subexpression.
bool is_rigid(const Expr& e, const DefinitionEnvironment& env);

// True iff the full expansion of e contains a Prime.
bool has_prime(const Expr& e, const DefinitionEnvironment& env);

}  // namespace foml

#endif  // FOML_ENVIRONMENT_HPP_
