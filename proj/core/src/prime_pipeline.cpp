#include "foml/prime_pipeline.hpp"

#include "foml/coalesce_ml.hpp"

namespace foml {

namespace {

Expr push_prime(const Expr& e, const DefinitionEnvironment& env) {
  switch (e.kind()) {
    case Kind::RigidVar:
    case Kind::False: return e;
    case Kind::FlexVar: return Expr::prime(e);
    case Kind::Op:
    case Kind::Eq:
    case Kind::Implies: {
      if (is_rigid(e, env)) return e;
      std::vector<Expr> args;
      args.reserve(e.arity());
      for (const auto& a : e.args()) args.push_back(push_prime(a, env));
      return e.with_args(std::move(args));
    }
    case Kind::Forall: return Expr::forall(e.name(), push_prime(e.arg(0), env));
    case Kind::Prime: throw Error("distribute_prime: nested prime in " + to_string(e));
    case Kind::Nabla: throw Error("distribute_prime: nabla is not part of an action formula");
    case Kind::Def: throw Error("distribute_prime: expand definitions first ('" + e.name() + "')");
  }
  throw InvariantError("distribute_prime: unknown node kind");
}

}  // namespace

Expr distribute_prime(const Expr& e, const DefinitionEnvironment& env) {
  switch (e.kind()) {
    case Kind::Prime: return push_prime(e.arg(0), env);
    case Kind::Nabla: throw Error("distribute_prime: nabla is not part of an action formula");
    case Kind::Def: throw Error("distribute_prime: expand definitions first ('" + e.name() + "')");
    default: break;
  }
  if (e.arity() == 0) return e;
  std::vector<Expr> args;
  args.reserve(e.arity());
  for (const auto& a : e.args()) args.push_back(distribute_prime(a, env));
  return e.with_args(std::move(args));
}

Expr coalesce_action(const Expr& e, SymbolTable& table, const DefinitionEnvironment& env) {
  if (!table.options().prime_names) throw Error("coalesce_action: the table must use prime names");
  return coalesce_fol(e, {}, table, env);
}

Expr translate_action(const Expr& e, SymbolTable& table, const DefinitionEnvironment& env) {
  return coalesce_action(distribute_prime(expand_definitions(e, env), env), table, env);
}

KripkeModel lift_action_structure(const FolStructure& s, const SymbolTable& action_table,
                                  const DefinitionEnvironment& env) {
  KripkeModel m;
  m.universe = s.universe;
  for (const auto& [name, t] : s.ops)
    if (!action_table.find_name(name)) m.ops.emplace(name, t);
  m.states = {"w", "w2"};
  m.r = Relation(2);
  Relation next(2);
  next.add(0, 1);
  next.add(1, 1);
  m.prime_r = next;
  for (const auto& [x, v] : s.xi)
    if (!env.is_flex_var(x)) m.xi[x] = v;
  for (const auto& x : env.flex_vars()) {
    const auto it = s.xi.find(x);
    const Value before = it == s.xi.end() ? 0 : it->second;
    Value after = before;
    for (const auto& sym : action_table.entries()) {
      if (sym.source.is(Kind::Prime) && sym.source.arg(0).is(Kind::FlexVar) && sym.source.arg(0).name() == x) {
        auto op = s.ops.find(sym.name);
        if (op != s.ops.end()) after = op->second.values.at(0);
      }
    }
    m.zeta[x] = {before, after};
  }
  return m;
}

Expr stuttering_step(const Expr& next, const std::vector<std::string>& vars) {
  Expr unchanged = truth();
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
    Expr eq = Expr::eq(Expr::prime(Expr::flex(*it)), Expr::flex(*it));
    unchanged = it == vars.rbegin() ? eq : conj(eq, unchanged);
  }
  return disj(next, unchanged);
}

SafetyObligations safety_obligations(const SafetySpec& spec, const DefinitionEnvironment& env) {
  for (const auto* p : {&spec.init, &spec.inv, &spec.iinv})
    if (contains_kind(expand_definitions(*p, env), Kind::Nabla) || has_prime(*p, env))
      throw Error("init, inv, and iinv must be state predicates");
  for (const auto& v : spec.vars)
    if (!env.is_flex_var(v)) throw Error("'" + v + "' is not a declared flexible variable");

  SafetyObligations out{{}, {}, SymbolTable(CoalesceOptions{CanonicalOrder::Innermost, true}), {}, {}};
  const Expr step = stuttering_step(spec.next, spec.vars);
  const Expr goals[3] = {
      Expr::implies(spec.init, spec.iinv),
      Expr::implies(conj(spec.iinv, step), Expr::prime(spec.iinv)),
      Expr::implies(spec.iinv, spec.inv),
  };
  for (int i = 0; i < 3; ++i) out.raw[i] = Obligation{{}, goals[i], env, i == 1 ? Mode::Action : Mode::Fol};

  const Expr translated = translate_action(goals[1], out.action_symbols, env);
  const DefinitionEnvironment fol_env = coalesced_environment(env, out.action_symbols);
  out.fol[0] = Obligation{{}, expand_definitions(goals[0], env), fol_env, Mode::Fol};
  out.fol[1] = Obligation{{}, translated, fol_env, Mode::Fol};
  out.fol[2] = Obligation{{}, expand_definitions(goals[2], env), fol_env, Mode::Fol};

  AtomTable atoms;
  for (const auto& g : goals) out.glue.hypotheses.push_back(coalesce_ml(g, atoms, env));
  const Expr init = coalesce_ml(spec.init, atoms, env);
  const Expr box_step = Expr::nabla(coalesce_ml(step, atoms, env));
  const Expr inv = coalesce_ml(spec.inv, atoms, env);
  out.glue.goal = Expr::implies(conj(init, box_step), Expr::nabla(inv));
  out.glue.frame = Frame::S4;
  out.glue.prime_frame = Frame::K;
  for (const auto& a : atoms.entries()) out.glue_atoms.emplace_back(a.name, to_string(a.source));
  return out;
}

}  // namespace foml
