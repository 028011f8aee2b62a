#include "foml/leibniz.hpp"

namespace foml {

const std::vector<bool>& LeibnizTable::positions(const std::string& def) const {
  auto it = table_.find(def);
  if (it == table_.end()) throw Error("no Leibniz data for '" + def + "'");
  return it->second;
}

namespace {

void mark_all_free(const Expr& e, const NameSet& bound, NameSet& out) {
  for (const auto& x : free_rigid_vars(e))
    if (!bound.contains(x)) out.insert(x);
}

// Collects names free at the top of the body that occur in a non-Leibniz
// context. `bound` holds binders between the body root and e.
void scan(const Expr& e, NameSet& bound, const LeibnizTable& table, NameSet& out) {
  switch (e.kind()) {
    case Kind::Nabla:
    case Kind::Prime: mark_all_free(e.arg(0), bound, out); return;
    case Kind::Def: {
      const auto& pos = table.positions(e.name());
      for (std::size_t i = 0; i < e.arity(); ++i) {
        if (pos[i]) {
          scan(e.arg(i), bound, table, out);
        } else {
          mark_all_free(e.arg(i), bound, out);
        }
      }
      return;
    }
    case Kind::Forall: {
      const bool fresh = bound.insert(e.name()).second;
      scan(e.arg(0), bound, table, out);
      if (fresh) bound.erase(e.name());
      return;
    }
    default:
      for (const auto& a : e.args()) scan(a, bound, table, out);
  }
}

}  // namespace

LeibnizTable compute_leibniz(const DefinitionEnvironment& env) {
  LeibnizTable table;
  for (const auto& d : env.definitions()) {
    NameSet bound, bad;
    scan(d.body, bound, table, bad);
    std::vector<bool> pos;
    pos.reserve(d.params.size());
    for (const auto& p : d.params) pos.push_back(!bad.contains(p));
    table.set(d.name, std::move(pos));
  }
  return table;
}

EpsilonVector classify_args(const std::string& def, std::span<const Expr> args,
                            const LeibnizTable& table, const DefinitionEnvironment& env) {
  const auto& pos = table.positions(def);
  if (pos.size() != args.size())
    throw Error("classify_args: '" + def + "' expects " + std::to_string(pos.size()) + " arguments");
  EpsilonVector eps;
  eps.reserve(args.size());
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (pos[i] || is_rigid(args[i], env)) {
      eps.emplace_back(std::nullopt);
    } else {
      eps.emplace_back(args[i]);
    }
  }
  return eps;
}

std::string format_leibniz(const LeibnizTable& table, const DefinitionEnvironment& env) {
  std::string out;
  for (const auto& d : env.definitions()) {
    out += d.name + ":";
    for (bool b : table.positions(d.name)) out += b ? " L" : " N";
    out += '\n';
  }
  return out;
}

}  // namespace foml
