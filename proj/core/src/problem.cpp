#include "foml/problem.hpp"

#include <algorithm>
#include <array>
#include <charconv>

namespace foml {

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::Fol: return "fol";
    case Mode::Ml: return "ml";
    case Mode::Action: return "action";
  }
  return "?";
}

namespace {

using Code = ParseError::Code;

constexpr std::array kKeywords = {"=",      "=>",    "not",   "and",   "or",    "iff",  "forall",
                                  "exists", "nabla", "delta", "prime", "true",  "false"};

bool is_keyword(std::string_view s) {
  return std::find(kKeywords.begin(), kKeywords.end(), s) != kKeywords.end();
}

class ExprParser {
 public:
  ExprParser(const DefinitionEnvironment& env, std::vector<std::string> scope, bool in_definition)
      : env_(env), bound_(std::move(scope)), in_definition_(in_definition) {}

  Expr parse(const SExpr& s) {
    if (s.is_atom()) return parse_name(s);
    if (s.items.empty()) s.fail("empty expression");
    const SExpr& h = s.items.front();
    if (!h.is_atom()) h.fail("expected an operator name");
    const std::string& head = h.atom;
    const std::size_t n = s.items.size() - 1;

    if (head == "=") {
      expect_args(s, 2);
      Expr lhs = parse(s.items[1]);
      return Expr::eq(std::move(lhs), parse(s.items[2]));
    }
    if (head == "=>") {
      expect_args(s, 2);
      Expr lhs = parse(s.items[1]);
      return Expr::implies(std::move(lhs), parse(s.items[2]));
    }
    if (head == "iff") {
      expect_args(s, 2);
      Expr lhs = parse(s.items[1]);
      return iff(std::move(lhs), parse(s.items[2]));
    }
    if (head == "not") {
      expect_args(s, 1);
      return negate(parse(s.items[1]));
    }
    if (head == "and" || head == "or") {
      const bool is_and = head == "and";
      if (n == 0) return is_and ? truth() : Expr::falsum();
      std::vector<Expr> parts;
      for (std::size_t i = 1; i <= n; ++i) parts.push_back(parse(s.items[i]));
      Expr acc = parts.back();
      for (std::size_t i = n - 1; i-- > 0;)
        acc = is_and ? conj(parts[i], std::move(acc)) : disj(parts[i], std::move(acc));
      return acc;
    }
    if (head == "forall" || head == "exists") return parse_binder(s, head == "exists");
    if (head == "nabla") {
      expect_args(s, 1);
      return Expr::nabla(parse(s.items[1]));
    }
    if (head == "delta") {
      expect_args(s, 1);
      return delta(parse(s.items[1]));
    }
    if (head == "prime") {
      expect_args(s, 1);
      Expr body = parse(s.items[1]);
      if (has_prime(body, env_)) s.fail("prime cannot be nested", Code::NestedPrime);
      return Expr::prime(std::move(body));
    }
    if (head == "true" || head == "false") h.fail("'" + head + "' takes no arguments", Code::Arity);

    std::vector<Expr> args;
    for (std::size_t i = 1; i <= n; ++i) args.push_back(parse(s.items[i]));
    if (env_.is_op(head) && !is_bound(head)) {
      if (env_.op_arity(head) != n)
        h.fail("operator '" + head + "' expects " + std::to_string(env_.op_arity(head)) +
                   " arguments, got " + std::to_string(n),
               Code::Arity);
      return Expr::op(head, std::move(args));
    }
    if (env_.is_def(head) && !is_bound(head)) {
      const auto& d = env_.definition(head);
      if (d.params.size() != n)
        h.fail("defined operator '" + head + "' expects " + std::to_string(d.params.size()) +
                   " arguments, got " + std::to_string(n),
               Code::Arity);
      return Expr::def(head, std::move(args));
    }
    if (is_bound(head) || env_.is_rigid_var(head) || env_.is_flex_var(head))
      h.fail("'" + head + "' is a variable, not an operator", Code::Arity);
    h.fail("unknown symbol '" + head + "'", Code::UnknownSymbol);
  }

 private:
  bool is_bound(const std::string& name) const {
    return std::find(bound_.begin(), bound_.end(), name) != bound_.end();
  }

  void expect_args(const SExpr& s, std::size_t n) {
    if (s.items.size() - 1 != n)
      s.fail("'" + s.items.front().atom + "' expects " + std::to_string(n) + " argument(s)",
             Code::Arity);
  }

  void check_binder(const SExpr& v) {
    if (!v.is_atom()) v.fail("expected a variable name");
    const auto& x = v.atom;
    if (is_keyword(x) || env_.is_flex_var(x) || env_.is_op(x) || env_.is_def(x))
      v.fail("cannot bind '" + x + "': not a rigid variable name");
  }

  Expr parse_binder(const SExpr& s, bool existential) {
    if (s.items.size() != 3) s.fail("binder expects a variable (or list) and a body", Code::Arity);
    std::vector<std::string> vars;
    const SExpr& v = s.items[1];
    if (v.is_list) {
      if (v.items.empty()) v.fail("empty binder list");
      for (const auto& item : v.items) {
        check_binder(item);
        vars.push_back(item.atom);
      }
    } else {
      check_binder(v);
      vars.push_back(v.atom);
    }
    for (const auto& x : vars) bound_.push_back(x);
    Expr body = parse(s.items[2]);
    bound_.resize(bound_.size() - vars.size());
    for (std::size_t i = vars.size(); i-- > 0;)
      body = existential ? exists(vars[i], std::move(body)) : Expr::forall(vars[i], std::move(body));
    return body;
  }

  Expr parse_name(const SExpr& s) {
    const std::string& n = s.atom;
    if (n == "false") return Expr::falsum();
    if (n == "true") return truth();
    if (is_keyword(n)) s.fail("'" + n + "' is not an expression");
    if (is_bound(n)) return Expr::rigid(n);
    if (env_.is_flex_var(n)) return Expr::flex(n);
    if (env_.is_op(n)) {
      if (env_.op_arity(n) != 0)
        s.fail("operator '" + n + "' expects " + std::to_string(env_.op_arity(n)) + " arguments",
               Code::Arity);
      return Expr::op(n);
    }
    if (env_.is_def(n)) {
      if (!env_.definition(n).params.empty())
        s.fail("defined operator '" + n + "' expects arguments", Code::Arity);
      return Expr::def(n);
    }
    if (env_.is_rigid_var(n)) {
      if (in_definition_)
        s.fail("free rigid variable '" + n + "' is not a parameter of the definition",
               Code::StrayVariable);
      return Expr::rigid(n);
    }
    s.fail("unknown symbol '" + n + "'", Code::UnknownSymbol);
  }

  const DefinitionEnvironment& env_;
  std::vector<std::string> bound_;
  bool in_definition_;
};

void check_new_name(const SExpr& s, const DefinitionEnvironment& env) {
  if (!s.is_atom()) s.fail("expected a symbol name");
  if (is_keyword(s.atom)) s.fail("'" + s.atom + "' is reserved");
  if (env.is_declared(s.atom)) s.fail("symbol '" + s.atom + "' declared twice", Code::Semantic);
}

Expr parse_top_expr(const SExpr& form, const DefinitionEnvironment& env) {
  if (form.items.size() != 2) form.fail("'" + std::string(form.head()) + "' expects one expression");
  return ExprParser(env, {}, false).parse(form.items[1]);
}

}  // namespace

ProblemFile parse_problem_file(std::string_view text) {
  ProblemFile pf;
  auto& env = pf.env;
  SafetySpec safety;
  bool any_safety = false;
  std::array<bool, 4> have_safety{};

  for (const SExpr& form : read_sexprs(text)) {
    std::string_view head = form.head();
    if (head.empty()) form.fail("expected a top-level form");

    if (head == "declare-op") {
      if (form.items.size() != 3) form.fail("usage: (declare-op name arity)");
      check_new_name(form.items[1], env);
      const SExpr& a = form.items[2];
      std::size_t arity = 0;
      auto [p, ec] = std::from_chars(a.atom.data(), a.atom.data() + a.atom.size(), arity);
      if (!a.is_atom() || ec != std::errc{} || p != a.atom.data() + a.atom.size())
        a.fail("arity must be a natural number");
      env.declare_op(form.items[1].atom, arity);
    } else if (head == "declare-rigid" || head == "declare-flex") {
      if (form.items.size() < 2) form.fail("expected at least one name");
      for (std::size_t i = 1; i < form.items.size(); ++i) {
        check_new_name(form.items[i], env);
        if (head == "declare-rigid") {
          env.declare_rigid(form.items[i].atom);
        } else {
          env.declare_flex(form.items[i].atom);
        }
      }
    } else if (head == "define") {
      if (form.items.size() != 3 || !form.items[1].is_list || form.items[1].items.empty())
        form.fail("usage: (define (d x1 .. xn) body)");
      const auto& sig = form.items[1].items;
      check_new_name(sig[0], env);
      Definition d;
      d.name = sig[0].atom;
      for (std::size_t i = 1; i < sig.size(); ++i) {
        const SExpr& p = sig[i];
        if (!p.is_atom() || is_keyword(p.atom)) p.fail("expected a parameter name");
        if (env.is_flex_var(p.atom) || env.is_op(p.atom) || env.is_def(p.atom) || p.atom == d.name)
          p.fail("parameter '" + p.atom + "' clashes with a declared symbol");
        if (std::find(d.params.begin(), d.params.end(), p.atom) != d.params.end())
          p.fail("parameter '" + p.atom + "' repeated");
        d.params.push_back(p.atom);
      }
      d.body = ExprParser(env, d.params, true).parse(form.items[2]);
      try {
        env.add_definition(std::move(d));
      } catch (const ParseError&) {
        throw;
      } catch (const Error& e) {
        form.fail(e.what(), Code::Semantic);
      }
    } else if (head == "assume") {
      pf.hypotheses.push_back(parse_top_expr(form, env));
    } else if (head == "goal") {
      if (pf.goal) form.fail("more than one goal");
      pf.goal = parse_top_expr(form, env);
    } else if (head == "mode") {
      if (form.items.size() != 2 || !form.items[1].is_atom()) form.fail("usage: (mode fol|ml|action)");
      const auto& m = form.items[1].atom;
      if (m == "fol") {
        pf.mode = Mode::Fol;
      } else if (m == "ml") {
        pf.mode = Mode::Ml;
      } else if (m == "action") {
        pf.mode = Mode::Action;
      } else {
        form.items[1].fail("unknown mode '" + m + "'");
      }
    } else if (head == "vars") {
      any_safety = true;
      for (std::size_t i = 1; i < form.items.size(); ++i) {
        const SExpr& v = form.items[i];
        if (!v.is_atom() || !env.is_flex_var(v.atom))
          v.fail("'" + v.atom + "' is not a declared flexible variable", Code::UnknownSymbol);
        safety.vars.push_back(v.atom);
      }
    } else if (head == "init" || head == "next" || head == "inv" || head == "iinv") {
      any_safety = true;
      const int slot = head == "init" ? 0 : head == "next" ? 1 : head == "inv" ? 2 : 3;
      if (have_safety[slot]) form.fail("'" + std::string(head) + "' given twice");
      have_safety[slot] = true;
      Expr e = parse_top_expr(form, env);
      (slot == 0 ? safety.init : slot == 1 ? safety.next : slot == 2 ? safety.inv : safety.iinv) =
          std::move(e);
    } else {
      form.items.front().fail("unknown form '" + std::string(head) + "'");
    }
  }
  if (any_safety) {
    if (!std::all_of(have_safety.begin(), have_safety.end(), [](bool b) { return b; }))
      throw ParseError(Code::Semantic, 1, 1, "safety specification needs init, next, inv, and iinv");
    if (safety.vars.empty())
      throw ParseError(Code::Semantic, 1, 1, "safety specification needs a (vars ...) form");
    pf.safety = std::move(safety);
  }
  return pf;
}

Obligation parse_problem(std::string_view text) {
  ProblemFile pf = parse_problem_file(text);
  if (!pf.goal) throw ParseError(Code::Semantic, 1, 1, "problem has no (goal ...)");
  return Obligation{std::move(pf.hypotheses), std::move(*pf.goal), std::move(pf.env), pf.mode};
}

SafetySpec parse_safety(std::string_view text, DefinitionEnvironment& env_out) {
  ProblemFile pf = parse_problem_file(text);
  if (!pf.safety) throw ParseError(Code::Semantic, 1, 1, "no safety specification in file");
  env_out = std::move(pf.env);
  return std::move(*pf.safety);
}

Expr parse_expression(const SExpr& s, const DefinitionEnvironment& env) {
  return ExprParser(env, {}, false).parse(s);
}

Expr parse_expression(std::string_view text, const DefinitionEnvironment& env) {
  auto forms = read_sexprs(text);
  if (forms.size() != 1) throw ParseError(Code::Syntax, 1, 1, "expected exactly one expression");
  return parse_expression(forms.front(), env);
}

std::string print_environment(const DefinitionEnvironment& env) {
  std::string out;
  for (const auto& [name, arity] : env.ops())
    out += "(declare-op " + name + " " + std::to_string(arity) + ")\n";
  for (const auto& x : env.rigid_vars()) out += "(declare-rigid " + x + ")\n";
  for (const auto& v : env.flex_vars()) out += "(declare-flex " + v + ")\n";
  for (const auto& d : env.definitions()) {
    out += "(define (" + d.name;
    for (const auto& p : d.params) out += " " + p;
    out += ") " + to_string(d.body) + ")\n";
  }
  return out;
}

std::string print_problem(const Obligation& ob) {
  std::string out = print_environment(ob.env);
  if (ob.mode != Mode::Fol) out += std::string("(mode ") + mode_name(ob.mode) + ")\n";
  for (const auto& h : ob.hypotheses) out += "(assume " + to_string(h) + ")\n";
  out += "(goal " + to_string(ob.goal) + ")\n";
  return out;
}

}  // namespace foml
