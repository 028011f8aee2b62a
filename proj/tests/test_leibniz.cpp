#include <gtest/gtest.h>

#include "foml/fuzz.hpp"
#include "foml/leibniz.hpp"
#include "foml/problem.hpp"
#include "support.hpp"

using namespace foml;

namespace {

// Oracle: parameter i is Leibniz iff it never occurs free under a modality
// in the full expansion of d(x1..xn).
bool under_modality(const Expr& e, const std::string& x, bool modal) {
  switch (e.kind()) {
    case Kind::RigidVar: return modal && e.name() == x;
    case Kind::Forall: return e.name() != x && under_modality(e.arg(0), x, modal);
    default:
      for (const auto& a : e.args())
        if (under_modality(a, x, modal || e.is_modal())) return true;
      return false;
  }
}

std::vector<bool> oracle_positions(const Definition& d, const DefinitionEnvironment& env) {
  std::vector<Expr> params;
  for (const auto& p : d.params) params.push_back(Expr::rigid(p));
  const Expr full = expand_definitions(Expr::def(d.name, params), env);
  std::vector<bool> out;
  for (const auto& p : d.params) out.push_back(!under_modality(full, p, false));
  return out;
}

}  // namespace

TEST(Leibniz, Examples) {
  const auto& env = fuzz_environment();
  const LeibnizTable t = compute_leibniz(env);
  EXPECT_EQ(t.positions("cst"), std::vector<bool>{false});
  EXPECT_EQ(t.positions("id"), std::vector<bool>{true});
  EXPECT_EQ(t.positions("gd"), (std::vector<bool>{true, false}));
}

TEST(Leibniz, AgreesWithExpansionOracle) {
  const Obligation ob = parse_problem(R"(
    (declare-op 0 0) (declare-op f 1) (declare-flex v)
    (define (cst x) (exists y (nabla (= x y))))
    (define (g x y) (=> (= x 0) (nabla (= y 0))))
    (define (h a b c) (and (g b a) (cst (f c))))
    (define (k a b) (forall y (h y a (f b))))
    (define (unused a b) (nabla (= v 0)))
    (define (pr a b) (prime (= a (f b))))
    (define (outer a b) (and (pr a 0) (g (unused a b) b)))
    (goal false))");
  const LeibnizTable t = compute_leibniz(ob.env);
  for (const auto& d : ob.env.definitions()) EXPECT_EQ(t.positions(d.name), oracle_positions(d, ob.env)) << d.name;
  for (const auto* env : {&fuzz_environment(), &action_environment()}) {
    const LeibnizTable u = compute_leibniz(*env);
    for (const auto& d : env->definitions()) EXPECT_EQ(u.positions(d.name), oracle_positions(d, *env)) << d.name;
  }
}

TEST(Leibniz, ModalityFreeBodiesAreAllLeibniz) {
  const Obligation ob = parse_problem(R"(
    (declare-op f 2) (declare-flex v)
    (define (a x y) (= (f x v) y))
    (define (b x y z) (forall w (=> (a x w) (a z y))))
    (goal false))");
  const LeibnizTable t = compute_leibniz(ob.env);
  for (const auto& d : ob.env.definitions())
    for (bool p : t.positions(d.name)) EXPECT_TRUE(p) << d.name;
}

TEST(ClassifyArgs, Examples) {
  const auto& env = fuzz_environment();
  const LeibnizTable t = compute_leibniz(env);
  const Expr u = Expr::flex("u");
  const Expr flexible[] = {u};
  const auto eps = classify_args("cst", flexible, t, env);
  ASSERT_EQ(eps.size(), 1U);
  ASSERT_TRUE(eps[0].has_value());
  EXPECT_EQ(*eps[0], u);

  const Expr rigid[] = {Expr::rigid("x")};
  EXPECT_FALSE(classify_args("cst", rigid, t, env)[0].has_value());

  const Expr flex_v[] = {Expr::flex("v")};
  EXPECT_FALSE(classify_args("id", flex_v, t, env)[0].has_value());

  const Expr mixed[] = {Expr::flex("v"), Expr::flex("u")};
  const auto g = classify_args("gd", mixed, t, env);
  EXPECT_FALSE(g[0].has_value());
  EXPECT_TRUE(g[1].has_value());
}

TEST(Leibniz, Format) {
  const Obligation ob = parse_problem(testing_support::read_problem("cst_flex.foml"));
  EXPECT_EQ(format_leibniz(compute_leibniz(ob.env), ob.env), "cst: N\n");
  const auto& env = fuzz_environment();
  const std::string all = format_leibniz(compute_leibniz(env), env);
  EXPECT_NE(all.find("gd: L N\n"), std::string::npos);
  EXPECT_NE(all.find("id: L\n"), std::string::npos);
}
