#include "foml/coalesce_ml.hpp"

#include <cstdio>

namespace foml {

const AtomEntry* AtomTable::find_key(const std::string& key) const {
  auto it = by_key_.find(key);
  return it == by_key_.end() ? nullptr : &entries_[it->second];
}

const AtomEntry* AtomTable::find_name(const std::string& name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : &entries_[it->second];
}

const AtomEntry& AtomTable::intern(const Expr& source, const DefinitionEnvironment& env) {
  std::string key = canonical(source);
  if (const AtomEntry* e = find_key(key)) return *e;
  char digest[9];
  std::snprintf(digest, sizeof digest, "%08x", static_cast<unsigned>(fnv1a(key) & 0xffffffffU));
  const std::string base = "a" + std::to_string(entries_.size()) + "__" + digest;
  std::string name = base;
  for (int k = 1; env.is_declared(name) || by_name_.contains(name); ++k) name = base + "_" + std::to_string(k);
  by_key_.emplace(key, entries_.size());
  by_name_.emplace(name, entries_.size());
  entries_.push_back(AtomEntry{name, std::move(key), source, is_rigid(source, env)});
  return entries_.back();
}

Expr coalesce_ml(const Expr& e, AtomTable& table, const DefinitionEnvironment& env) {
  switch (e.kind()) {
    case Kind::FlexVar:
    case Kind::False: return e;
    case Kind::Implies: {
      Expr lhs = coalesce_ml(e.arg(0), table, env);
      return Expr::implies(std::move(lhs), coalesce_ml(e.arg(1), table, env));
    }
    case Kind::Nabla: return Expr::nabla(coalesce_ml(e.arg(0), table, env));
    case Kind::Prime: return Expr::prime(coalesce_ml(e.arg(0), table, env));
    case Kind::RigidVar:
    case Kind::Op:
    case Kind::Def:
    case Kind::Eq:
    case Kind::Forall: return Expr::flex(table.intern(e, env).name);
  }
  throw InvariantError("coalesce_ml: unknown node kind");
}

std::vector<Expr> hypotheses(const AtomTable& table, bool with_prime) {
  std::vector<Expr> out;
  for (const auto& a : table.entries()) {
    if (!a.rigid) continue;
    const Expr atom = Expr::flex(a.name);
    out.push_back(Expr::implies(atom, Expr::nabla(atom)));
  }
  if (with_prime) {
    for (const auto& a : table.entries()) {
      if (!a.rigid) continue;
      const Expr atom = Expr::flex(a.name);
      out.push_back(Expr::implies(atom, Expr::prime(atom)));
    }
  }
  return out;
}

std::vector<Expr> hypotheses(const std::vector<Expr>& gamma, const Expr& phi, const AtomTable& table,
                             const DefinitionEnvironment& env) {
  bool prime = has_prime(phi, env);
  for (const auto& g : gamma) prime = prime || has_prime(g, env);
  return hypotheses(table, prime);
}

MlCoalesced coalesce_obligation_ml(const Obligation& ob) {
  MlCoalesced out;
  for (const auto& h : ob.hypotheses) out.hypotheses.push_back(coalesce_ml(h, out.atoms, ob.env));
  out.goal = coalesce_ml(ob.goal, out.atoms, ob.env);
  out.h = hypotheses(ob.hypotheses, ob.goal, out.atoms, ob.env);
  out.uses_prime = contains_kind(out.goal, Kind::Prime);
  for (const auto& h : out.hypotheses) out.uses_prime = out.uses_prime || contains_kind(h, Kind::Prime);
  return out;
}

PropModel build_witness_propmodel(const KripkeModel& m, const AtomTable& table,
                                  const DefinitionEnvironment& env) {
  PropModel k;
  k.states = m.states;
  k.r = m.r;
  k.prime_r = m.prime_r;
  const Value tt = m.universe.tt;
  for (const auto& [v, vals] : m.zeta) {
    auto& z = k.zeta[v];
    for (Value a : vals) z.push_back(a == tt);
  }
  for (const auto& a : table.entries()) {
    const Expr source = expand_definitions(a.source, env);
    auto& z = k.zeta[a.name];
    z.clear();
    for (std::size_t w = 0; w < m.num_states(); ++w) {
      bool holds;
      if (source.is(Kind::Eq)) {
        holds = eval_expanded(m, static_cast<int>(w), source.arg(0)) ==
                eval_expanded(m, static_cast<int>(w), source.arg(1));
      } else {
        holds = eval_expanded(m, static_cast<int>(w), source) == tt;
      }
      z.push_back(holds);
    }
  }
  return k;
}

std::string format_atoms(const AtomTable& table) {
  std::string out = "(atoms";
  for (const auto& a : table.entries()) out += "\n  (" + a.name + " " + to_string(a.source) + ")";
  return out + ")\n";
}

}  // namespace foml
