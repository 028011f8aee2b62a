#include "foml/expr.hpp"

#include <algorithm>
#include <functional>

namespace foml {

struct Expr::Node {
  Kind kind;
  std::string name;
  std::vector<Expr> args;
  std::size_t hash;
};

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::RigidVar: return "rigid-var";
    case Kind::FlexVar: return "flex-var";
    case Kind::Op: return "op";
    case Kind::Def: return "def";
    case Kind::Eq: return "eq";
    case Kind::False: return "false";
    case Kind::Implies: return "implies";
    case Kind::Forall: return "forall";
    case Kind::Nabla: return "nabla";
    case Kind::Prime: return "prime";
  }
  return "?";
}

Expr Expr::make(Kind k, std::string name, std::vector<Expr> args) {
  std::size_t h = mix(std::hash<std::string>{}(name), static_cast<std::size_t>(k));
  for (const auto& a : args) h = mix(h, a.hash());
  return Expr(std::make_shared<const Node>(Node{k, std::move(name), std::move(args), h}));
}

Expr::Expr() : Expr(falsum()) {}

Expr Expr::rigid(std::string name) { return make(Kind::RigidVar, std::move(name), {}); }
Expr Expr::flex(std::string name) { return make(Kind::FlexVar, std::move(name), {}); }
Expr Expr::op(std::string name, std::vector<Expr> args) {
  return make(Kind::Op, std::move(name), std::move(args));
}
Expr Expr::def(std::string name, std::vector<Expr> args) {
  return make(Kind::Def, std::move(name), std::move(args));
}
Expr Expr::eq(Expr lhs, Expr rhs) { return make(Kind::Eq, {}, {std::move(lhs), std::move(rhs)}); }
Expr Expr::falsum() {
  static const Expr f(make(Kind::False, {}, {}).node_);
  return f;
}
Expr Expr::implies(Expr lhs, Expr rhs) {
  return make(Kind::Implies, {}, {std::move(lhs), std::move(rhs)});
}
Expr Expr::forall(std::string var, Expr body) {
  return make(Kind::Forall, std::move(var), {std::move(body)});
}
Expr Expr::nabla(Expr body) { return make(Kind::Nabla, {}, {std::move(body)}); }
Expr Expr::prime(Expr body) { return make(Kind::Prime, {}, {std::move(body)}); }

Kind Expr::kind() const noexcept { return node_->kind; }
const std::string& Expr::name() const noexcept { return node_->name; }
std::span<const Expr> Expr::args() const noexcept { return node_->args; }
const Expr& Expr::arg(std::size_t i) const {
  if (i >= node_->args.size()) throw InvariantError("Expr::arg: index out of range");
  return node_->args[i];
}
std::size_t Expr::hash() const noexcept { return node_->hash; }

Expr Expr::with_args(std::vector<Expr> args) const {
  return make(kind(), name(), std::move(args));
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.kind() != b.kind() || a.name() != b.name() ||
      a.arity() != b.arity())
    return false;
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (a.args()[i] != b.args()[i]) return false;
  return true;
}

Expr truth() { return Expr::implies(Expr::falsum(), Expr::falsum()); }
Expr negate(Expr e) { return Expr::implies(std::move(e), Expr::falsum()); }
Expr conj(Expr a, Expr b) { return negate(Expr::implies(std::move(a), negate(std::move(b)))); }
Expr disj(Expr a, Expr b) { return Expr::implies(negate(std::move(a)), std::move(b)); }
Expr iff(Expr a, Expr b) { return conj(Expr::implies(a, b), Expr::implies(b, a)); }
Expr exists(std::string var, Expr body) {
  return negate(Expr::forall(std::move(var), negate(std::move(body))));
}
Expr delta(Expr e) { return negate(Expr::nabla(negate(std::move(e)))); }

namespace {

void free_vars_rec(const Expr& e, std::vector<std::string>& bound,
                   std::vector<std::string>& out) {
  switch (e.kind()) {
    case Kind::RigidVar:
      if (std::find(bound.begin(), bound.end(), e.name()) == bound.end() &&
          std::find(out.begin(), out.end(), e.name()) == out.end())
        out.push_back(e.name());
      return;
    case Kind::Forall:
      bound.push_back(e.name());
      free_vars_rec(e.arg(0), bound, out);
      bound.pop_back();
      return;
    default:
      for (const auto& a : e.args()) free_vars_rec(a, bound, out);
  }
}

}  // namespace

std::vector<std::string> free_rigid_vars(const Expr& e) {
  std::vector<std::string> bound, out;
  free_vars_rec(e, bound, out);
  return out;
}

bool occurs_free(const Expr& e, const std::string& x) {
  switch (e.kind()) {
    case Kind::RigidVar: return e.name() == x;
    case Kind::Forall: return e.name() != x && occurs_free(e.arg(0), x);
    default:
      for (const auto& a : e.args())
        if (occurs_free(a, x)) return true;
      return false;
  }
}

void collect_names(const Expr& e, NameSet& out) {
  if (!e.name().empty()) out.insert(e.name());
  for (const auto& a : e.args()) collect_names(a, out);
}

std::string fresh_name(const std::string& base, const NameSet& avoid) {
  if (!avoid.contains(base)) return base;
  for (std::size_t k = 1;; ++k) {
    std::string candidate = base + "_" + std::to_string(k);
    if (!avoid.contains(candidate)) return candidate;
  }
}

namespace {

Expr subst_rec(const Expr& e, const Substitution& sigma, NameSet& avoid) {
  if (sigma.empty()) return e;
  switch (e.kind()) {
    case Kind::RigidVar: {
      auto it = sigma.find(e.name());
      return it == sigma.end() ? e : it->second;
    }
    case Kind::FlexVar:
    case Kind::False:
      return e;
    case Kind::Forall: {
      const std::string& x = e.name();
      const Expr& body = e.arg(0);
      Substitution inner;
      bool capture = false;
      for (const auto& [y, val] : sigma) {
        if (y == x || !occurs_free(body, y)) continue;
        inner.emplace(y, val);
        if (occurs_free(val, x)) capture = true;
      }
      if (inner.empty()) return e;
      if (!capture) return Expr::forall(x, subst_rec(body, inner, avoid));
      std::string renamed = fresh_name(x, avoid);
      avoid.insert(renamed);
      inner[x] = Expr::rigid(renamed);
      return Expr::forall(renamed, subst_rec(body, inner, avoid));
    }
    default: {
      std::vector<Expr> args;
      args.reserve(e.arity());
      bool changed = false;
      for (const auto& a : e.args()) {
        args.push_back(subst_rec(a, sigma, avoid));
        changed = changed || !args.back().same_node(a);
      }
      return changed ? e.with_args(std::move(args)) : e;
    }
  }
}

}  // namespace

Expr substitute(const Expr& e, const Substitution& sigma, const NameSet& reserved) {
  if (sigma.empty()) return e;
  NameSet avoid = reserved;
  collect_names(e, avoid);
  for (const auto& [k, v] : sigma) {
    avoid.insert(k);
    collect_names(v, avoid);
  }
  return subst_rec(e, sigma, avoid);
}

namespace {

void canon_rec(const Expr& e, std::vector<std::string>& ctx, std::string& out) {
  switch (e.kind()) {
    case Kind::RigidVar: {
      // ctx is innermost-last here; search from the back.
      for (std::size_t i = ctx.size(); i-- > 0;) {
        if (ctx[i] == e.name()) {
          out += '#';
          out += std::to_string(ctx.size() - 1 - i);
          return;
        }
      }
      out += "r:";
      out += e.name();
      return;
    }
    case Kind::FlexVar:
      out += "v:";
      out += e.name();
      return;
    case Kind::False:
      out += 'F';
      return;
    case Kind::Forall:
      out += "(A ";
      ctx.push_back(e.name());
      canon_rec(e.arg(0), ctx, out);
      ctx.pop_back();
      out += ')';
      return;
    default:
      break;
  }
  out += '(';
  switch (e.kind()) {
    case Kind::Op: out += "o:" + e.name(); break;
    case Kind::Def: out += "d:" + e.name(); break;
    case Kind::Eq: out += '='; break;
    case Kind::Implies: out += '>'; break;
    case Kind::Nabla: out += 'N'; break;
    case Kind::Prime: out += 'P'; break;
    default: throw InvariantError("canonical: unexpected node");
  }
  for (const auto& a : e.args()) {
    out += ' ';
    canon_rec(a, ctx, out);
  }
  out += ')';
}

}  // namespace

std::string canonical(const Expr& e, std::span<const std::string> outer) {
  // outer is innermost-first; the working stack is innermost-last.
  std::vector<std::string> ctx(outer.rbegin(), outer.rend());
  std::string out;
  canon_rec(e, ctx, out);
  return out;
}

bool alpha_equal(const Expr& a, const Expr& b) {
  if (a == b) return true;
  return canonical(a) == canonical(b);
}

bool contains_kind(const Expr& e, Kind k) {
  if (e.kind() == k) return true;
  for (const auto& a : e.args())
    if (contains_kind(a, k)) return true;
  return false;
}

std::size_t expr_size(const Expr& e) {
  std::size_t n = 1;
  for (const auto& a : e.args()) n += expr_size(a);
  return n;
}

std::size_t modal_depth(const Expr& e) {
  std::size_t d = 0;
  for (const auto& a : e.args()) d = std::max(d, modal_depth(a));
  return e.is_modal() ? d + 1 : d;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace foml
