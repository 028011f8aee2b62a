#include <gtest/gtest.h>

#include <functional>
#include <map>

#include "foml/environment.hpp"
#include "foml/fuzz.hpp"
#include "foml/kripke.hpp"
#include "foml/problem.hpp"
#include "foml/sexpr.hpp"
#include "support.hpp"

using namespace foml;
using testing_support::expr;

namespace {

Expr v() { return Expr::flex("v"); }
Expr zero() { return Expr::op("0"); }
Expr x(const char* n) { return Expr::rigid(n); }

ParseError parse_error(const std::string& text) {
  try {
    parse_problem(text);
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "no parse error for: " << text;
  return ParseError(ParseError::Code::Syntax, 0, 0, "none");
}

// Renames every binder to a fresh r<k>.
Expr rename_bound(const Expr& e, int& counter, const std::map<std::string, std::string>& scope) {
  switch (e.kind()) {
    case Kind::RigidVar:
      if (auto it = scope.find(e.name()); it != scope.end()) return Expr::rigid(it->second);
      return e;
    case Kind::Forall: {
      auto inner = scope;
      const std::string fresh = "r" + std::to_string(counter++);
      inner[e.name()] = fresh;
      return Expr::forall(fresh, rename_bound(e.arg(0), counter, inner));
    }
    default: {
      std::vector<Expr> args;
      for (const auto& a : e.args()) args.push_back(rename_bound(a, counter, scope));
      return e.with_args(std::move(args));
    }
  }
}

// Expansion oracle: unfold one application at a time until none remain.
Expr unfold_to_fixpoint(const Expr& e, const DefinitionEnvironment& env) {
  std::function<std::optional<Expr>(const Expr&)> step = [&](const Expr& f) -> std::optional<Expr> {
    if (f.is(Kind::Def)) return unfold(f, env);
    std::vector<Expr> args(f.args().begin(), f.args().end());
    for (auto& a : args) {
      if (auto r = step(a)) {
        a = *r;
        return f.with_args(std::move(args));
      }
    }
    return std::nullopt;
  };
  Expr cur = e;
  while (auto next = step(cur)) cur = *next;
  return cur;
}

bool scan_rigid(const Expr& e) {
  if (e.is(Kind::FlexVar) || e.is(Kind::Nabla) || e.is(Kind::Prime)) return false;
  for (const auto& a : e.args())
    if (!scan_rigid(a)) return false;
  return true;
}

}  // namespace

TEST(Parse, FlexibleVariableExample) {
  const Obligation ob = parse_problem("(declare-op 0 0) (declare-flex v) (goal (=> (= v 0) (nabla (= v 0))))");
  EXPECT_EQ(ob.goal, Expr::implies(Expr::eq(v(), zero()), Expr::nabla(Expr::eq(v(), zero()))));
  EXPECT_TRUE(ob.hypotheses.empty());
}

TEST(Parse, SmallestProgram) {
  const Obligation ob = parse_problem("(goal false)");
  EXPECT_EQ(ob.goal, Expr::falsum());
}

TEST(Parse, DefinitionDesugarsExists) {
  const Obligation ob = parse_problem("(define (cst x) (exists y (nabla (= x y)))) (goal (forall a (cst a)))");
  const Definition& d = ob.env.definition("cst");
  const Expr inner = Expr::implies(Expr::nabla(Expr::eq(x("x"), x("y"))), Expr::falsum());
  EXPECT_EQ(d.body, Expr::implies(Expr::forall("y", inner), Expr::falsum()));
  EXPECT_TRUE(ob.goal.arg(0).is(Kind::Def));
}

TEST(Parse, SugarDesugarsToCoreGrammar) {
  DefinitionEnvironment env;
  env.declare_op("p", 0);
  env.declare_op("q", 0);
  const Expr p = Expr::op("p");
  const Expr q = Expr::op("q");
  EXPECT_EQ(expr("true", env), truth());
  EXPECT_EQ(expr("(not p)", env), Expr::implies(p, Expr::falsum()));
  EXPECT_EQ(expr("(and p q)", env), conj(p, q));
  EXPECT_EQ(expr("(or p q)", env), disj(p, q));
  EXPECT_EQ(expr("(iff p q)", env), iff(p, q));
  EXPECT_EQ(expr("(delta p)", env), negate(Expr::nabla(negate(p))));
  EXPECT_EQ(expr("(and p q p)", env), conj(p, conj(q, p)));
}

TEST(Parse, SyntaxErrorCarriesPosition) {
  const ParseError e = parse_error("(goal\n  (=> false false)");
  EXPECT_EQ(e.code, ParseError::Code::Syntax);
  EXPECT_EQ(e.line, 1);
  EXPECT_EQ(e.column, 1);
  const ParseError f = parse_error("(goal false)\n(goal (=> false ))");
  EXPECT_EQ(f.line, 2);
}

TEST(Parse, UnknownSymbol) {
  const ParseError e = parse_error("(goal (= q 0))");
  EXPECT_EQ(e.code, ParseError::Code::UnknownSymbol);
  EXPECT_EQ(e.line, 1);
  EXPECT_EQ(e.column, 10);
}

TEST(Parse, ArityMismatch) {
  EXPECT_EQ(parse_error("(declare-op f 2) (goal (= (f 0) 0))").code, ParseError::Code::UnknownSymbol);
  EXPECT_EQ(parse_error("(declare-op 0 0) (declare-op f 2) (goal (= (f 0) 0))").code, ParseError::Code::Arity);
  EXPECT_EQ(parse_error("(define (d x y) (= x y)) (goal (d false))").code, ParseError::Code::Arity);
}

TEST(Parse, NestedPrimeRejected) {
  EXPECT_EQ(parse_error("(declare-flex v) (goal (prime (= v (prime v))))").code, ParseError::Code::NestedPrime);
  EXPECT_EQ(parse_error("(declare-flex v) (define (n x) (prime (= x v))) (goal (prime (n v)))").code,
            ParseError::Code::NestedPrime);
}

TEST(Parse, StrayRigidVariableInDefinition) {
  EXPECT_EQ(parse_error("(declare-rigid a) (define (d x) (= x a)) (goal false)").code,
            ParseError::Code::StrayVariable);
}

TEST(Parse, DuplicateNamesRejected) {
  EXPECT_THROW(parse_problem("(declare-flex v) (declare-rigid v) (goal false)"), ParseError);
  EXPECT_THROW(parse_problem("(declare-op f 1) (define (f x) x) (goal false)"), ParseError);
}

TEST(FreeRigidVars, Examples) {
  EXPECT_EQ(free_rigid_vars(Expr::forall("x", Expr::eq(x("x"), x("y")))), std::vector<std::string>{"y"});
  EXPECT_EQ(free_rigid_vars(Expr::nabla(Expr::eq(v(), x("x")))), std::vector<std::string>{"x"});
}

TEST(FreeRigidVars, DefinitionApplicationMatchesExpansion) {
  const auto& env = fuzz_environment();
  const Expr app = Expr::def("cst", {Expr::op("f", {x("x")})});
  EXPECT_EQ(free_rigid_vars(app), std::vector<std::string>{"x"});
  EXPECT_EQ(free_rigid_vars(app), free_rigid_vars(expand_definitions(app, env)));
}

TEST(Substitute, AvoidsCapture) {
  const Expr e = Expr::forall("y", Expr::eq(x("x"), x("y")));
  const Expr r = substitute(e, {{"x", x("y")}});
  ASSERT_TRUE(r.is(Kind::Forall));
  EXPECT_NE(r.name(), "y");
  EXPECT_EQ(r.arg(0), Expr::eq(x("y"), x(r.name().c_str())));
}

TEST(Substitute, InstantiatesDefinitionBody) {
  const auto& env = fuzz_environment();
  const Expr body = env.definition("cst").body;
  const Expr u = Expr::flex("u");
  const Expr expected = exists("y", Expr::nabla(Expr::eq(u, x("y"))));
  EXPECT_TRUE(alpha_equal(substitute(body, {{"x", u}}), expected));
}

TEST(Substitute, EmptyIsIdentity) {
  const Expr e = Expr::forall("y", Expr::eq(x("x"), x("y")));
  EXPECT_EQ(substitute(e, {}), e);
}

TEST(AlphaEqual, Examples) {
  EXPECT_TRUE(alpha_equal(Expr::forall("x", Expr::nabla(Expr::eq(v(), x("x")))),
                          Expr::forall("y", Expr::nabla(Expr::eq(v(), x("y"))))));
  EXPECT_TRUE(alpha_equal(Expr::forall("x", Expr::eq(x("x"), x("x"))), Expr::forall("y", Expr::eq(x("y"), x("y")))));
  EXPECT_FALSE(alpha_equal(Expr::eq(x("a"), x("b")), Expr::eq(x("b"), x("a"))));
  EXPECT_FALSE(alpha_equal(Expr::forall("x", Expr::eq(x("x"), x("y"))), Expr::forall("y", Expr::eq(x("y"), x("y")))));
}

TEST(ExpandDefinitions, Examples) {
  const auto& env = fuzz_environment();
  const Expr u = Expr::flex("u");
  EXPECT_TRUE(alpha_equal(expand_definitions(Expr::def("cst", {u}), env),
                          exists("y", Expr::nabla(Expr::eq(u, x("y"))))));
  const Expr plain = Expr::nabla(Expr::eq(u, zero()));
  EXPECT_EQ(expand_definitions(plain, env), plain);
}

TEST(ExpandDefinitions, NestedMatchesStepwiseUnfolding) {
  const Obligation ob = parse_problem(
      "(declare-op f 1) (define (d1 x) (exists y (nabla (= (f x) y)))) (define (d2 x) (d1 (d1 x))) "
      "(define (d3 x y) (forall z (d2 (d1 (f z))))) (goal false)");
  for (const char* text : {"(d2 false)", "(d3 false (d1 false))", "(forall y (d2 (d2 y)))"}) {
    const Expr e = expr(text, ob.env);
    const Expr full = expand_definitions(e, ob.env);
    EXPECT_TRUE(alpha_equal(full, unfold_to_fixpoint(e, ob.env))) << text;
    EXPECT_FALSE(contains_kind(full, Kind::Def));
  }
}

TEST(IsRigid, Examples) {
  const auto& env = fuzz_environment();
  EXPECT_TRUE(is_rigid(Expr::eq(x("x"), x("y")), env));
  EXPECT_FALSE(is_rigid(Expr::nabla(truth()), env));
  EXPECT_FALSE(is_rigid(Expr::def("cst", {zero()}), env));
  EXPECT_TRUE(is_rigid(Expr::def("id", {zero()}), env));
  EXPECT_FALSE(is_rigid(Expr::def("id", {v()}), env));
}

class SyntaxProperties : public ::testing::Test {
 protected:
  const DefinitionEnvironment& env = fuzz_environment();
};

TEST_F(SyntaxProperties, PrintParseRoundTrip) {
  SplitMix64 rng(11);
  ExprGen gen(rng, env);
  for (int i = 0; i < 3000; ++i) {
    const Expr e = gen.expr();
    EXPECT_TRUE(alpha_equal(parse_expression(to_string(e), env), e)) << to_string(e);
    EXPECT_EQ(parse_expression(to_core_string(e), env), e) << to_core_string(e);
  }
}

TEST_F(SyntaxProperties, AlphaRenamingIsAlphaEqual) {
  SplitMix64 rng(12);
  ExprGen gen(rng, env);
  for (int i = 0; i < 2000; ++i) {
    const Expr e = gen.expr();
    int counter = 0;
    const Expr r = rename_bound(e, counter, {});
    EXPECT_TRUE(alpha_equal(e, r)) << to_string(e) << " vs " << to_string(r);
    EXPECT_EQ(canonical(e), canonical(r));
  }
}

TEST_F(SyntaxProperties, SubstitutionRespectsAlphaEquivalence) {
  SplitMix64 rng(13);
  ExprGen gen(rng, env);
  for (int i = 0; i < 2000; ++i) {
    const Expr e = gen.expr();
    int counter = 0;
    const Expr r = rename_bound(e, counter, {});
    // Images mention the binder names x, y, z so capture is a real threat.
    const Substitution sigma = {{"a", Expr::op("g", {x("x"), x("y")})}, {"b", x("z")}};
    EXPECT_TRUE(alpha_equal(substitute(e, sigma), substitute(r, sigma))) << to_string(e);
  }
}

TEST_F(SyntaxProperties, SubstitutionAgreesWithValuationUpdate) {
  SplitMix64 rng(14);
  ExprGen gen(rng, env);
  for (int i = 0; i < 2000; ++i) {
    const Expr e = gen.expr();
    const KripkeModel m = random_model(rng, env);
    const Expr t = Expr::op("g", {x("b"), x("b")});
    KripkeModel m2 = m;
    m2.xi["a"] = eval(m, 0, t, env);
    for (int w = 0; w < static_cast<int>(m.num_states()); ++w)
      EXPECT_EQ(eval(m, w, substitute(e, {{"a", t}}), env), eval(m2, w, e, env)) << to_string(e);
  }
}

TEST_F(SyntaxProperties, ExpansionIsIdempotentAndRigidityIsAScan) {
  SplitMix64 rng(15);
  ExprGen gen(rng, env);
  for (int i = 0; i < 2000; ++i) {
    const Expr e = gen.expr();
    const Expr once = expand_definitions(e, env);
    EXPECT_EQ(expand_definitions(once, env), once);
    EXPECT_EQ(is_rigid(e, env), scan_rigid(once)) << to_string(e);
  }
}

TEST(SExpr, ReaderPositionsAndComments) {
  const auto forms = read_sexprs("; header\n(a b)\n  (c (d e))");
  ASSERT_EQ(forms.size(), 2U);
  EXPECT_EQ(forms[1].line, 3);
  EXPECT_EQ(forms[1].column, 3);
  EXPECT_EQ(forms[1].items[1].items[0].atom, "d");
  EXPECT_THROW(read_sexprs("(a"), ParseError);
  EXPECT_THROW(read_sexprs(")"), ParseError);
}
