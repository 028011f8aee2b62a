#include "foml/coalesce_fol.hpp"

#include <algorithm>
#include <cstdio>

namespace foml {

CanonicalOrder parse_canonical_order(std::string_view s) {
  if (s == "innermost") return CanonicalOrder::Innermost;
  if (s == "appearance") return CanonicalOrder::Appearance;
  throw Error("unknown canonical order '" + std::string(s) + "' (expected innermost or appearance)");
}

const SymbolEntry* SymbolTable::find_key(const std::string& key) const {
  auto it = by_key_.find(key);
  return it == by_key_.end() ? nullptr : &entries_[it->second];
}

const SymbolEntry* SymbolTable::find_name(const std::string& name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? nullptr : &entries_[it->second];
}

namespace {

std::string digest8(const std::string& key) {
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x", static_cast<unsigned>(fnv1a(key) & 0xffffffffU));
  return buf;
}

}  // namespace

const SymbolEntry& SymbolTable::intern(SymbolEntry proto, const NameSet& reserved,
                                       const std::string& hint) {
  if (const SymbolEntry* e = find_key(proto.key)) return *e;
  std::string base = hint.empty() ? "c" + std::to_string(entries_.size()) + "__" + digest8(proto.key) : hint;
  std::string name = base;
  for (int k = 1; reserved.contains(name) || by_name_.contains(name); ++k)
    name = base + "_" + std::to_string(k);
  proto.name = name;
  by_key_.emplace(proto.key, entries_.size());
  by_name_.emplace(name, entries_.size());
  entries_.push_back(std::move(proto));
  return entries_.back();
}

namespace {

class FolCoalescer {
 public:
  FolCoalescer(SymbolTable& table, const DefinitionEnvironment& env)
      : table_(table), env_(env), leibniz_(compute_leibniz(env)) {}

  Expr run(const Expr& e, std::vector<std::string>& y) {
    switch (e.kind()) {
      case Kind::RigidVar:
      case Kind::FlexVar:
      case Kind::False: return e;
      case Kind::Op:
      case Kind::Eq:
      case Kind::Implies: {
        std::vector<Expr> args;
        args.reserve(e.arity());
        for (const auto& a : e.args()) args.push_back(run(a, y));
        return e.with_args(std::move(args));
      }
      case Kind::Forall: {
        y.insert(y.begin(), e.name());
        Expr body = run(e.arg(0), y);
        y.erase(y.begin());
        return Expr::forall(e.name(), std::move(body));
      }
      case Kind::Nabla:
      case Kind::Prime: return modal(e, y);
      case Kind::Def: return defined(e, y);
    }
    throw InvariantError("coalesce_fol: unknown node kind");
  }

 private:
  // Binders of y (deduplicated, innermost kept) occurring free in any of exprs.
  std::vector<std::string> select(const std::vector<std::string>& y, const std::vector<Expr>& exprs) const {
    std::vector<std::string> free;
    for (const auto& e : exprs)
      for (auto& x : free_rigid_vars(e))
        if (std::find(free.begin(), free.end(), x) == free.end()) free.push_back(std::move(x));
    std::vector<std::string> z;
    if (table_.options().order == CanonicalOrder::Appearance) {
      for (const auto& x : free)
        if (std::find(y.begin(), y.end(), x) != y.end()) z.push_back(x);
    } else {
      for (const auto& x : y)
        if (std::find(z.begin(), z.end(), x) == z.end() &&
            std::find(free.begin(), free.end(), x) != free.end())
          z.push_back(x);
    }
    return z;
  }

  static std::vector<Expr> as_vars(const std::vector<std::string>& names) {
    std::vector<Expr> out;
    out.reserve(names.size());
    for (const auto& n : names) out.push_back(Expr::rigid(n));
    return out;
  }

  static std::string lambda_display(const std::vector<std::string>& z, const std::string& body) {
    if (z.empty()) return body;
    std::string out = "(lambda (";
    for (std::size_t i = 0; i < z.size(); ++i) out += (i ? " " : "") + z[i];
    return out + ") " + body + ")";
  }

  Expr modal(const Expr& e, const std::vector<std::string>& y) {
    std::vector<std::string> z = select(y, {e});
    SymbolEntry proto;
    proto.type = SymbolEntry::Type::Modal;
    proto.arity = z.size();
    proto.key = "M" + std::to_string(z.size()) + ":" + canonical(e, z);
    proto.source = e;
    proto.params = z;
    proto.display = lambda_display(z, to_string(e));
    std::string hint;
    if (table_.options().prime_names && e.is(Kind::Prime) && e.arg(0).is(Kind::FlexVar))
      hint = e.arg(0).name() + "'";
    const SymbolEntry& sym = table_.intern(std::move(proto), env_.all_names(), hint);
    return Expr::op(sym.name, as_vars(z));
  }

  Expr defined(const Expr& e, std::vector<std::string>& y) {
    const EpsilonVector eps = classify_args(e.name(), e.args(), leibniz_, env_);
    std::vector<Expr> concrete;
    for (const auto& x : eps)
      if (x) concrete.push_back(*x);
    std::vector<std::string> w = select(y, concrete);

    SymbolEntry proto;
    proto.type = SymbolEntry::Type::Def;
    proto.arity = e.arity() + w.size();
    proto.key = "D" + std::to_string(w.size()) + ":" + e.name();
    std::string shown = "(" + e.name();
    for (const auto& x : eps) {
      proto.key += x ? " " + canonical(*x, w) : " *";
      shown += x ? " " + to_string(*x) : " *";
    }
    proto.display = lambda_display(w, shown + ")");

    if (!table_.find_key(proto.key)) {
      NameSet avoid = env_.all_names();
      for (const auto& c : concrete) collect_names(c, avoid);
      avoid.insert(w.begin(), w.end());
      const auto& params = env_.definition(e.name()).params;
      std::vector<Expr> alpha;
      for (std::size_t i = 0; i < eps.size(); ++i) {
        if (eps[i]) {
          alpha.push_back(*eps[i]);
          proto.params.emplace_back();
        } else {
          std::string p = fresh_name(params[i], avoid);
          avoid.insert(p);
          alpha.push_back(Expr::rigid(p));
          proto.params.push_back(p);
        }
      }
      proto.params.insert(proto.params.end(), w.begin(), w.end());
      proto.source = Expr::def(e.name(), std::move(alpha));
    }
    const std::string name = table_.intern(std::move(proto), env_.all_names()).name;

    std::vector<Expr> args;
    args.reserve(e.arity() + w.size());
    for (const auto& a : e.args()) args.push_back(run(a, y));
    for (auto& v : as_vars(w)) args.push_back(std::move(v));
    return Expr::op(name, std::move(args));
  }

  SymbolTable& table_;
  const DefinitionEnvironment& env_;
  LeibnizTable leibniz_;
};

}  // namespace

Expr coalesce_fol(const Expr& e, const std::vector<std::string>& binders, SymbolTable& table,
                  const DefinitionEnvironment& env) {
  std::vector<std::string> y = binders;
  return FolCoalescer(table, env).run(e, y);
}

FolCoalesced coalesce_obligation_fol(const Obligation& ob, CoalesceOptions options) {
  FolCoalesced out{{}, SymbolTable(options)};
  FolCoalescer c(out.table, ob.env);
  std::vector<std::string> y;
  for (const auto& h : ob.hypotheses) out.sequent.hypotheses.push_back(c.run(h, y));
  out.sequent.goal = c.run(ob.goal, y);
  return out;
}

namespace {

bool boolean_shaped(const Expr& e) {
  return e.is(Kind::Eq) || e.is(Kind::False) || e.is(Kind::Implies) || e.is(Kind::Forall);
}

}  // namespace

Expr rewrite_rigid_box(const Expr& e, bool reflexive, const DefinitionEnvironment& env) {
  if (e.arity() == 0) return e;
  std::vector<Expr> args;
  args.reserve(e.arity());
  for (const auto& a : e.args()) args.push_back(rewrite_rigid_box(a, reflexive, env));
  Expr r = e.with_args(std::move(args));
  if (!r.is(Kind::Nabla) || !is_rigid(r.arg(0), env)) return r;
  const Expr& body = r.arg(0);
  if (reflexive) return boolean_shaped(body) ? body : Expr::implies(truth(), body);
  return disj(Expr::nabla(Expr::falsum()), body);
}

DefinitionEnvironment coalesced_environment(const DefinitionEnvironment& env, const SymbolTable& table) {
  DefinitionEnvironment out;
  for (const auto& [name, arity] : env.ops()) out.declare_op(name, arity);
  for (const auto& x : env.rigid_vars()) out.declare_rigid(x);
  for (const auto& v : env.flex_vars()) out.declare_flex(v);
  for (const auto& s : table.entries()) out.declare_op(s.name, s.arity);
  return out;
}

FolStructure build_witness_structure(const KripkeModel& m, int w, const SymbolTable& table,
                                     const DefinitionEnvironment& env) {
  FolStructure s = fol_view(m, w);
  const std::size_t n = m.universe.size();
  for (const auto& sym : table.entries()) {
    const Expr source = expand_definitions(sym.source, env);
    std::size_t rows = 1;
    for (std::size_t i = 0; i < sym.arity; ++i) rows *= n;
    OpTable t{sym.arity, std::vector<Value>(rows, 0)};
    std::vector<Value> digits(sym.arity, 0);
    std::map<std::string, Value> extra;
    for (std::size_t row = 0; row < rows; ++row) {
      extra.clear();
      for (std::size_t i = 0; i < sym.arity; ++i)
        if (!sym.params[i].empty()) extra[sym.params[i]] = digits[i];
      t.values[row] = eval_expanded(m, w, source, extra);
      for (std::size_t i = sym.arity; i-- > 0;) {
        if (static_cast<std::size_t>(++digits[i]) < n) break;
        digits[i] = 0;
      }
    }
    s.ops[sym.name] = std::move(t);
  }
  return s;
}

std::string format_symbols(const SymbolTable& table) {
  std::string out = "(symbols";
  for (const auto& s : table.entries()) out += "\n  (" + s.name + " " + s.display + ")";
  return out + ")\n";
}

}  // namespace foml
