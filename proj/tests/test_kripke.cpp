#include <gtest/gtest.h>

#include "foml/fuzz.hpp"
#include "foml/kripke.hpp"
#include "foml/problem.hpp"
#include "foml/search.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace foml;
using testing_support::expr;

namespace {

KripkeModel two_state_model() {
  KripkeModel m;
  m.universe = Universe::standard(2);
  m.ops["0"] = OpTable::constant(m.universe.ff);
  m.states = {"s0", "s1"};
  m.r = Relation(2);
  m.r.add(0, 1);
  m.zeta["v"] = {m.universe.ff, m.universe.tt};
  return m;
}

// Every model of the expression's signature within the bounds satisfies it everywhere.
void expect_valid_on_all_models(const Expr& e, std::size_t u, std::size_t s) {
  Signature sig;
  sig.add(e);
  SearchBounds b;
  b.max_universe = u;
  b.max_states = s;
  std::uint64_t failures = 0;
  const auto count = for_each_kripke_model(sig, b, [&](const KripkeModel& m) {
    for (int w = 0; w < static_cast<int>(m.num_states()); ++w)
      if (eval_expanded(m, w, e) != m.universe.tt) ++failures;
    return true;
  });
  ASSERT_TRUE(count.has_value());
  EXPECT_GT(*count, 0U);
  EXPECT_EQ(failures, 0U) << to_string(e);
}

}  // namespace

TEST(Eval, FalseIsFf) {
  const KripkeModel m = two_state_model();
  EXPECT_EQ(eval(m, 0, Expr::falsum(), {}), m.universe.ff);
  EXPECT_EQ(eval(m, 1, truth(), {}), m.universe.tt);
}

TEST(Eval, NablaOverSuccessors) {
  const Obligation ob = parse_problem(testing_support::read_problem("sec22.foml"));
  const KripkeModel m = two_state_model();
  // At s0, v = 0 (both ff), but the successor s1 has v = tt != 0.
  EXPECT_EQ(eval(m, 0, ob.goal, ob.env), m.universe.ff);
  // s1 has no successors, so the box is vacuous.
  EXPECT_EQ(eval(m, 1, ob.goal, ob.env), m.universe.tt);
}

TEST(Eval, NablaOfNonBooleanSetIsFf) {
  KripkeModel m = two_state_model();
  m.universe = Universe::standard(3);
  m.ops["0"] = OpTable::constant(2);
  DefinitionEnvironment env;
  env.declare_op("0", 0);
  EXPECT_EQ(eval(m, 0, Expr::nabla(Expr::op("0")), env), m.universe.ff);
}

TEST(Eval, PrimeNeedsRelation) {
  const KripkeModel m = two_state_model();
  EXPECT_THROW(eval_expanded(m, 0, Expr::prime(Expr::flex("v"))), EvalError);
}

TEST(Eval, BarcanValidOnAllSmallModels) {
  const Obligation ob = parse_problem(testing_support::read_problem("barcan.foml"));
  expect_valid_on_all_models(ob.goal, 2, 2);
  DefinitionEnvironment env;
  env.declare_op("P", 1);
  expect_valid_on_all_models(expr("(iff (exists x (nabla (P x))) (exists x (nabla (P x))))", env), 2, 2);
}

TEST(Eval, RigidBoxValidOnAllSmallModels) {
  const Obligation ob = parse_problem(testing_support::read_problem("rigid_box.foml"));
  expect_valid_on_all_models(ob.goal, 2, 2);
}

TEST(EvalMl, Examples) {
  PropModel k;
  k.states = {"w0", "w1"};
  k.r = Relation(2);
  k.r.add(0, 1);
  k.zeta["p"] = {true, false};
  EXPECT_TRUE(eval_ml(k, 1, Expr::nabla(Expr::falsum())));
  EXPECT_FALSE(eval_ml(k, 0, Expr::nabla(Expr::falsum())));
  EXPECT_TRUE(eval_ml(k, 0, Expr::flex("p")));
  EXPECT_FALSE(eval_ml(k, 0, Expr::nabla(Expr::flex("p"))));
}

TEST(EvalMl, Eq5WithoutHypothesisFailsOnTwoStates) {
  const Expr p = Expr::flex("p");
  const Expr goal = Expr::implies(conj(p, Expr::nabla(delta(truth()))), Expr::nabla(delta(p)));
  const auto r = oracle::ml_countermodel(MLSequent{{}, goal}, 2);
  EXPECT_TRUE(r.found);
  EXPECT_EQ(r.states, 2U);
  // A concrete witness: p flips along a loop-free edge into a reflexive state.
  PropModel k;
  k.states = {"w0", "w1"};
  k.r = Relation(2);
  k.r.add(0, 1);
  k.r.add(1, 1);
  k.zeta["p"] = {true, false};
  EXPECT_FALSE(eval_ml(k, 0, goal));
}

TEST(EvalFol, Examples) {
  FolStructure s;
  s.universe = Universe::standard(3);
  EXPECT_EQ(eval_fol(s, truth()), s.universe.tt);
  EXPECT_EQ(eval_fol(s, Expr::forall("x", Expr::eq(Expr::rigid("x"), Expr::rigid("x")))), s.universe.tt);
  EXPECT_THROW(eval_fol(s, Expr::nabla(truth())), Error);
}

TEST(FindCountermodel, Examples) {
  const Obligation sec22 = parse_problem(testing_support::read_problem("sec22.foml"));
  const auto r = find_countermodel(sec22, SearchBounds{});
  ASSERT_EQ(r.status, SearchStatus::Found);
  ASSERT_TRUE(r.model);
  EXPECT_EQ(r.model->num_states(), 2U);
  EXPECT_NE(eval(*r.model, r.state, sec22.goal, sec22.env), r.model->universe.tt);

  const Obligation trivial = parse_problem("(goal true)");
  EXPECT_EQ(find_countermodel(trivial, SearchBounds{}).status, SearchStatus::NoneWithinBounds);

  const Obligation barcan = parse_problem(testing_support::read_problem("barcan.foml"));
  EXPECT_EQ(find_countermodel(barcan, SearchBounds{}).status, SearchStatus::NoneWithinBounds);
}

TEST(FindCountermodel, HypothesesHoldEverywhere) {
  const Obligation ob = parse_problem(
      "(declare-op 0 0) (declare-flex v) (assume (= v 0)) (goal (nabla (= v 0)))");
  EXPECT_EQ(find_countermodel(ob, SearchBounds{}).status, SearchStatus::NoneWithinBounds);
}

TEST(FindCountermodel, ResourceCapIsDistinct) {
  SearchBounds b;
  b.max_universe = 3;
  b.max_models = 10;
  const Obligation ob = parse_problem("(declare-op f 2) (goal (forall x (= (f x x) (f x x))))");
  EXPECT_EQ(find_countermodel(ob, b).status, SearchStatus::ResourceOut);
}

TEST(FindCountermodel, FirstOrderSearchRejectsModalInput) {
  EXPECT_THROW(find_fol_countermodel({}, Expr::nabla(truth()), 2), Error);
}

TEST(Frames, AdmitsMatchesRelationShape) {
  Relation r(2);
  r.add(0, 0);
  r.add(1, 1);
  EXPECT_TRUE(frame_admits(Frame::S4, r));
  r.add(0, 1);
  EXPECT_TRUE(frame_admits(Frame::S4, r));
  Relation k(2);
  k.add(0, 1);
  EXPECT_TRUE(frame_admits(Frame::K4, k));
  EXPECT_FALSE(frame_admits(Frame::T, k));
  EXPECT_EQ(parse_frame("s4"), Frame::S4);
  EXPECT_THROW(parse_frame("s5"), Error);
}

class KripkeProperties : public ::testing::Test {
 protected:
  const DefinitionEnvironment& env = fuzz_environment();
};

TEST_F(KripkeProperties, NablaClause) {
  SplitMix64 rng(21);
  ExprGen gen(rng, env);
  for (int i = 0; i < 2000; ++i) {
    const Expr e = gen.expr();
    const KripkeModel m = random_model(rng, env);
    for (int w = 0; w < static_cast<int>(m.num_states()); ++w) {
      bool all = true;
      bool some = false;
      for (int s : m.r.succ[static_cast<std::size_t>(w)]) {
        const bool t = eval(m, s, e, env) == m.universe.tt;
        all = all && t;
        some = some || t;
      }
      EXPECT_EQ(eval(m, w, Expr::nabla(e), env) == m.universe.tt, all);
      EXPECT_EQ(eval(m, w, delta(e), env) == m.universe.tt, some);
    }
  }
}

TEST_F(KripkeProperties, RigidExpressionsAreStable) {
  SplitMix64 rng(22);
  ExprGen gen(rng, env);
  int checked = 0;
  for (int i = 0; i < 4000; ++i) {
    const Expr e = i % 2 ? gen.rigid_expr() : gen.expr();
    if (!is_rigid(e, env)) continue;
    ++checked;
    const KripkeModel m = random_model(rng, env);
    for (int w = 1; w < static_cast<int>(m.num_states()); ++w) EXPECT_EQ(eval(m, w, e, env), eval(m, 0, e, env));
  }
  EXPECT_GT(checked, 1000);
}

TEST_F(KripkeProperties, FirstOrderViewAgreesOnRigidNablaFreeExpressions) {
  SplitMix64 rng(23);
  ExprGen gen(rng, env);
  for (int i = 0; i < 2000; ++i) {
    const Expr e = gen.rigid_expr();
    const KripkeModel m = random_model(rng, env);
    for (int w = 0; w < static_cast<int>(m.num_states()); ++w) {
      const FolStructure s = fol_view(m, w);
      EXPECT_EQ(eval_fol(s, e), eval(m, w, e, env));
      EXPECT_EQ(oracle::fol_value(s, e), eval_fol(s, e));
    }
  }
}

TEST_F(KripkeProperties, FlexibleFirstOrderAgreesWithOracle) {
  SplitMix64 rng(24);
  GenOptions opt;
  opt.nabla = opt.prime = opt.definitions = false;
  ExprGen gen(rng, env, opt);
  for (int i = 0; i < 2000; ++i) {
    const Expr e = gen.expr();
    const KripkeModel m = random_model(rng, env);
    const int w = static_cast<int>(rng.below(m.num_states()));
    EXPECT_EQ(oracle::fol_value(fol_view(m, w), e), eval(m, w, e, env)) << to_string(e);
  }
}

TEST_F(KripkeProperties, ModelFilesRoundTrip) {
  SplitMix64 rng(25);
  for (int i = 0; i < 500; ++i) {
    const KripkeModel m = random_model(rng, env);
    const std::string text = print_model(m);
    const KripkeModel back = parse_model(text);
    EXPECT_EQ(back, m);
    EXPECT_EQ(print_model(back), text);
  }
}

TEST(ModelFiles, RejectsMalformedModels) {
  EXPECT_THROW(parse_model("(model (universe a) (tt a) (ff a) (states s))"), Error);
  EXPECT_THROW(parse_model("(model (universe a b) (tt a) (ff b) (states))"), Error);
  EXPECT_THROW(parse_model("(model (universe a b) (tt a) (ff b) (states s) (R (s t)))"), Error);
}
