// Leibniz argument positions of defined operators, and the epsilon vector
// that indexes the coalesced symbol of a defined-operator application.

#ifndef FOML_LEIBNIZ_HPP_
#define FOML_LEIBNIZ_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "foml/environment.hpp"
#include "foml/expr.hpp"

namespace foml {

// Position i of d is Leibniz iff its parameter never occurs free inside a
// non-Leibniz argument position (under nabla, prime, or a non-Leibniz
// position of an earlier definition) in d's body.
class LeibnizTable {
 public:
  const std::vector<bool>& positions(const std::string& def) const;
  bool is_leibniz(const std::string& def, std::size_t i) const { return positions(def).at(i); }
  bool contains(const std::string& def) const { return table_.contains(def); }
  const std::map<std::string, std::vector<bool>>& entries() const { return table_; }

  void set(const std::string& def, std::vector<bool> positions) { table_[def] = std::move(positions); }

 private:
  std::map<std::string, std::vector<bool>> table_;
};

LeibnizTable compute_leibniz(const DefinitionEnvironment& env);

// One entry per argument: nullopt stands for STAR, otherwise the argument.
using EpsilonVector = std::vector<std::optional<Expr>>;

// STAR exactly when the position is Leibniz or the argument is rigid.
EpsilonVector classify_args(const std::string& def, std::span<const Expr> args,
                            const LeibnizTable& table, const DefinitionEnvironment& env);

// "d: L N ..." for every definition, in declaration order.
std::string format_leibniz(const LeibnizTable& table, const DefinitionEnvironment& env);

}  // namespace foml

#endif  // FOML_LEIBNIZ_HPP_
