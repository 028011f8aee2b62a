#include "foml/environment.hpp"

#include <algorithm>

namespace foml {

namespace {

bool rigid_rec(const Expr& e, const DefinitionEnvironment& env);
bool prime_rec(const Expr& e, const DefinitionEnvironment& env);

bool used_rec(const Expr& e, const std::string& x, const DefinitionEnvironment& env) {
  switch (e.kind()) {
    case Kind::RigidVar: return e.name() == x;
    case Kind::Forall: return e.name() != x && used_rec(e.arg(0), x, env);
    case Kind::Def: {
      const auto& info = env.info(e.name());
      for (std::size_t j = 0; j < e.arity(); ++j)
        if (info.param_used[j] && used_rec(e.arg(j), x, env)) return true;
      return false;
    }
    default:
      return std::ranges::any_of(e.args(), [&](const Expr& a) { return used_rec(a, x, env); });
  }
}

bool rigid_rec(const Expr& e, const DefinitionEnvironment& env) {
  switch (e.kind()) {
    case Kind::FlexVar:
    case Kind::Nabla:
    case Kind::Prime:
      return false;
    case Kind::Def: {
      const auto& info = env.info(e.name());
      if (!info.body_rigid) return false;
      for (std::size_t j = 0; j < e.arity(); ++j)
        if (info.param_used[j] && !rigid_rec(e.arg(j), env)) return false;
      return true;
    }
    default:
      return std::ranges::all_of(e.args(), [&](const Expr& a) { return rigid_rec(a, env); });
  }
}

bool prime_rec(const Expr& e, const DefinitionEnvironment& env) {
  switch (e.kind()) {
    case Kind::Prime: return true;
    case Kind::Def: {
      const auto& info = env.info(e.name());
      if (info.body_has_prime) return true;
      for (std::size_t j = 0; j < e.arity(); ++j)
        if (info.param_used[j] && prime_rec(e.arg(j), env)) return true;
      return false;
    }
    default:
      return std::ranges::any_of(e.args(), [&](const Expr& a) { return prime_rec(a, env); });
  }
}

void check_symbols(const Expr& e, const DefinitionEnvironment& env) {
  switch (e.kind()) {
    case Kind::FlexVar:
      if (!env.is_flex_var(e.name())) throw Error("undeclared flexible variable '" + e.name() + "'");
      break;
    case Kind::Op:
      if (!env.is_op(e.name())) throw Error("undeclared operator '" + e.name() + "'");
      if (env.op_arity(e.name()) != e.arity())
        throw Error("arity mismatch for operator '" + e.name() + "'");
      break;
    case Kind::Def:
      if (!env.is_def(e.name())) throw Error("undefined operator '" + e.name() + "'");
      if (env.definition(e.name()).params.size() != e.arity())
        throw Error("arity mismatch for defined operator '" + e.name() + "'");
      break;
    default:
      break;
  }
  for (const auto& a : e.args()) check_symbols(a, env);
}

}  // namespace

bool DefinitionEnvironment::is_declared(const std::string& n) const { return names_.contains(n); }

void DefinitionEnvironment::claim(const std::string& name) {
  if (name.empty()) throw Error("empty symbol name");
  if (!names_.insert(name).second) throw Error("symbol '" + name + "' declared twice");
}

void DefinitionEnvironment::declare_op(const std::string& name, std::size_t arity) {
  claim(name);
  ops_.emplace(name, arity);
}

void DefinitionEnvironment::declare_rigid(const std::string& name) {
  claim(name);
  rigid_.insert(name);
}

void DefinitionEnvironment::declare_flex(const std::string& name) {
  claim(name);
  flex_.insert(name);
}

void DefinitionEnvironment::add_definition(Definition d) {
  for (std::size_t i = 0; i < d.params.size(); ++i) {
    const auto& p = d.params[i];
    if (std::find(d.params.begin(), d.params.begin() + static_cast<std::ptrdiff_t>(i), p) !=
        d.params.begin() + static_cast<std::ptrdiff_t>(i))
      throw Error("definition '" + d.name + "': parameter '" + p + "' repeated");
    if (is_flex_var(p) || is_op(p) || is_def(p) || p == d.name)
      throw Error("definition '" + d.name + "': parameter '" + p + "' clashes with a symbol");
  }
  for (const auto& x : free_rigid_vars(d.body)) {
    if (std::find(d.params.begin(), d.params.end(), x) == d.params.end())
      throw Error("definition '" + d.name + "': free rigid variable '" + x +
                  "' is not a parameter");
  }
  check_symbols(d.body, *this);

  DefInfo info;
  info.body_rigid = rigid_rec(d.body, *this);
  info.body_has_prime = prime_rec(d.body, *this);
  for (const auto& p : d.params) info.param_used.push_back(used_rec(d.body, p, *this));

  claim(d.name);
  def_index_.emplace(d.name, defs_.size());
  defs_.push_back(std::move(d));
  infos_.push_back(std::move(info));
}

std::size_t DefinitionEnvironment::op_arity(const std::string& n) const {
  auto it = ops_.find(n);
  if (it == ops_.end()) throw Error("undeclared operator '" + n + "'");
  return it->second;
}

const Definition& DefinitionEnvironment::definition(const std::string& n) const {
  auto it = def_index_.find(n);
  if (it == def_index_.end()) throw Error("undefined operator '" + n + "'");
  return defs_[it->second];
}

const DefinitionEnvironment::DefInfo& DefinitionEnvironment::info(const std::string& n) const {
  auto it = def_index_.find(n);
  if (it == def_index_.end()) throw Error("undefined operator '" + n + "'");
  return infos_[it->second];
}

Expr unfold(const Expr& app, const DefinitionEnvironment& env) {
  if (!app.is(Kind::Def)) return app;
  const Definition& d = env.definition(app.name());
  if (d.params.size() != app.arity()) throw Error("arity mismatch for '" + d.name + "'");
  Substitution sigma;
  for (std::size_t i = 0; i < d.params.size(); ++i) sigma.emplace(d.params[i], app.arg(i));
  return substitute(d.body, sigma, env.all_names());
}

Expr expand_definitions(const Expr& e, const DefinitionEnvironment& env) {
  if (e.arity() == 0 && !e.is(Kind::Def)) return e;
  std::vector<Expr> args;
  args.reserve(e.arity());
  bool changed = false;
  for (const auto& a : e.args()) {
    args.push_back(expand_definitions(a, env));
    changed = changed || !args.back().same_node(a);
  }
  if (e.is(Kind::Def)) {
    // Bodies only mention earlier definitions, so recursion terminates.
    return expand_definitions(unfold(e.with_args(std::move(args)), env), env);
  }
  return changed ? e.with_args(std::move(args)) : e;
}

bool is_rigid(const Expr& e, const DefinitionEnvironment& env) { return rigid_rec(e, env); }

bool has_prime(const Expr& e, const DefinitionEnvironment& env) { return prime_rec(e, env); }

}  // namespace foml
