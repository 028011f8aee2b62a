#include <gtest/gtest.h>

#include "foml/coalesce_ml.hpp"
#include "foml/emitters.hpp"
#include "foml/fuzz.hpp"
#include "foml/kripke.hpp"
#include "foml/prime_pipeline.hpp"
#include "foml/problem.hpp"
#include "foml/search.hpp"
#include "support.hpp"

using namespace foml;
using testing_support::expr;
using testing_support::strip_hashes;

namespace {

DefinitionEnvironment arith() {
  DefinitionEnvironment env;
  env.declare_op("0", 0);
  env.declare_op("+", 2);
  env.declare_rigid("c");
  env.declare_flex("x");
  env.declare_flex("y");
  return env;
}

SymbolTable action_table() { return SymbolTable(CoalesceOptions{CanonicalOrder::Innermost, true}); }

// Every prime in e wraps a flexible variable.
bool primes_on_variables(const Expr& e) {
  if (e.is(Kind::Prime)) return e.arg(0).is(Kind::FlexVar);
  for (const auto& a : e.args())
    if (!primes_on_variables(a)) return false;
  return true;
}

struct SafetyFile {
  DefinitionEnvironment env;
  SafetySpec spec;
};

SafetyFile load_safety(const std::string& text) {
  SafetyFile f;
  f.spec = parse_safety(text, f.env);
  return f;
}

bool no_fol_countermodel(const Obligation& ob, std::size_t universe) {
  return find_fol_countermodel(ob.hypotheses, ob.goal, universe).status == SearchStatus::NoneWithinBounds;
}

}  // namespace

TEST(DistributePrime, Examples) {
  const auto env = arith();
  EXPECT_EQ(to_string(distribute_prime(expr("(prime (+ x y))", env), env)), "(+ (prime x) (prime y))");
  EXPECT_EQ(to_string(distribute_prime(expr("(prime c)", env), env)), "c");
  EXPECT_EQ(to_string(distribute_prime(expr("(prime (+ c 0))", env), env)), "(+ c 0)");
  EXPECT_EQ(to_string(distribute_prime(expr("(prime (+ x c))", env), env)), "(+ (prime x) c)");
  EXPECT_EQ(to_string(distribute_prime(expr("(prime x)", env), env)), "(prime x)");
  EXPECT_EQ(to_string(distribute_prime(expr("(=> (= x 0) (prime (= x 0)))", env), env)),
            "(=> (= x 0) (= (prime x) 0))");
  EXPECT_EQ(to_string(distribute_prime(expr("(prime (forall z (= z x)))", env), env)),
            "(forall z (= z (prime x)))");
  EXPECT_EQ(distribute_prime(Expr::falsum(), env), Expr::falsum());
}

TEST(DistributePrime, RejectsNonActions) {
  const auto env = arith();
  EXPECT_THROW(distribute_prime(expr("(nabla (= x 0))", env), env), Error);
  EXPECT_THROW(distribute_prime(expr("(prime (= (prime x) 0))", env), env), Error);
  const Obligation ob = parse_problem(testing_support::read_problem("counter_step.foml"));
  EXPECT_THROW(distribute_prime(ob.goal, ob.env), Error);
  EXPECT_NO_THROW(distribute_prime(expand_definitions(ob.goal, ob.env), ob.env));
}

TEST(DistributePrime, PreservesValuesUnderFunctionalPrime) {
  const auto& env = action_environment();
  SplitMix64 rng(61);
  GenOptions gopt;
  gopt.nabla = false;
  ExprGen gen(rng, env, gopt);
  ModelOptions mopt;
  mopt.functional_prime = true;
  int primed = 0;
  for (int i = 0; i < 2000; ++i) {
    const Expr e = expand_definitions(gen.expr(), env);
    const KripkeModel m = random_model(rng, env, mopt);
    const Expr d = distribute_prime(e, env);
    ASSERT_TRUE(primes_on_variables(d)) << to_string(d);
    if (contains_kind(e, Kind::Prime)) ++primed;
    for (int w = 0; w < static_cast<int>(m.num_states()); ++w)
      EXPECT_EQ(eval_expanded(m, w, d), eval_expanded(m, w, e)) << to_string(e);
  }
  EXPECT_GT(primed, 300);
}

TEST(CoalesceAction, PrimedVariablesBecomeConstants) {
  const auto env = arith();
  SymbolTable t = action_table();
  const Expr out = translate_action(expr("(=> (= x y) (prime (= (+ x x) y)))", env), t, env);
  EXPECT_EQ(to_string(out), "(=> (= x y) (= (+ x' x') y'))");
  ASSERT_EQ(t.size(), 2U);
  EXPECT_EQ(t.entries()[0].arity, 0U);
  EXPECT_EQ(format_symbols(t), "(symbols\n  (x' (prime x))\n  (y' (prime y)))\n");
  EXPECT_FALSE(contains_kind(out, Kind::Prime));
}

TEST(CoalesceAction, NoPrimeNoSymbols) {
  const auto env = arith();
  SymbolTable t = action_table();
  const Expr e = expr("(forall z (=> (= z x) (= (+ z c) (+ x c))))", env);
  EXPECT_EQ(translate_action(e, t, env), e);
  EXPECT_EQ(t.size(), 0U);
}

TEST(CoalesceAction, NeedsPrimeNames) {
  const auto env = arith();
  SymbolTable t;
  EXPECT_THROW(coalesce_action(expr("(prime x)", env), t, env), Error);
}

TEST(CoalesceAction, PrimedNameAvoidsDeclaredNames) {
  DefinitionEnvironment env = arith();
  env.declare_op("x'", 0);
  SymbolTable t = action_table();
  const Expr out = translate_action(expr("(= (prime x) x')", env), t, env);
  ASSERT_EQ(t.size(), 1U);
  EXPECT_NE(t.entries()[0].name, "x'");
  EXPECT_EQ(to_string(out), "(= " + t.entries()[0].name + " x')");
}

TEST(CoalesceAction, SafePreservedByStuttering) {
  DefinitionEnvironment env = arith();
  env.add_definition(Definition{"Safe", {}, expr("(= x 0)", env)});
  SymbolTable t = action_table();
  const Expr c = expr("(=> (and (Safe) (= (prime x) x)) (prime (Safe)))", env);
  const Expr out = translate_action(c, t, env);
  EXPECT_EQ(to_string(out), "(=> (and (= x 0) (= x' x)) (= x' 0))");
  EXPECT_EQ(find_fol_countermodel({}, out, 3).status, SearchStatus::NoneWithinBounds);
}

TEST(CoalesceAction, CounterStepGolden) {
  const Obligation ob = parse_problem(testing_support::read_problem("counter_step.foml"));
  SymbolTable t = action_table();
  const Expr out = translate_action(ob.goal, t, ob.env);
  EXPECT_EQ(to_string(out), "(=> (and (= x y) (and (= x' (succ x)) (= y' (succ y)))) (= x' y'))");
  EXPECT_EQ(find_fol_countermodel({}, out, 3).status, SearchStatus::NoneWithinBounds);
}

TEST(LiftAction, CountermodelsTransfer) {
  const DefinitionEnvironment env = arith();
  const Expr c = expr("(=> (= x y) (prime (= (+ x y) 0)))", env);
  SymbolTable t = action_table();
  const Expr out = translate_action(c, t, env);
  const auto r = find_fol_countermodel({}, out, 2);
  ASSERT_EQ(r.status, SearchStatus::Found);
  ASSERT_TRUE(r.structure);
  const KripkeModel m = lift_action_structure(*r.structure, t, env);
  EXPECT_NO_THROW(m.validate());
  ASSERT_TRUE(m.prime_r);
  EXPECT_TRUE(m.prime_r->is_functional());
  EXPECT_NE(eval(m, 0, c, env), m.universe.tt);
  for (const auto& v : {"x", "y"}) {
    EXPECT_EQ(m.zeta.at(v)[0], r.structure->xi.at(v));
    EXPECT_EQ(m.zeta.at(v)[1], r.structure->ops.at(std::string(v) + "'").values[0]);
  }
}

TEST(LiftAction, FuzzBothDirections) {
  for (std::uint64_t i = 0; i < 200; ++i) {
    const auto failure = check_case(Property::ActionLifting, case_seed(62, i));
    EXPECT_FALSE(failure.has_value()) << *failure;
  }
}

TEST(StutteringStep, Shape) {
  const auto env = arith();
  const Expr next = expr("(= (prime x) (+ x y))", env);
  EXPECT_EQ(to_string(stuttering_step(next, {"x", "y"})),
            "(or (= (prime x) (+ x y)) (and (= (prime x) x) (= (prime y) y)))");
  EXPECT_EQ(to_string(stuttering_step(next, {"x"})), "(or (= (prime x) (+ x y)) (= (prime x) x))");
}

TEST(Safety, CounterGolden) {
  const SafetyFile f = load_safety(testing_support::read_problem("counter.foml"));
  const SafetyObligations s = safety_obligations(f.spec, f.env);
  EXPECT_EQ(to_string(s.fol[0].goal), "(=> (and (= x 0) (= y 0)) (= x y))");
  EXPECT_EQ(to_string(s.fol[1].goal),
            "(=> (and (= x y) (or (and (= x' (succ x)) (= y' (succ y))) (and (= x' x) (= y' y)))) (= x' y'))");
  EXPECT_EQ(to_string(s.fol[2].goal), "(=> (= x y) (= (succ x) (succ y)))");
  EXPECT_EQ(s.raw[1].mode, Mode::Action);
  EXPECT_EQ(to_string(s.raw[1].goal),
            "(=> (and (= x y) (or (and (= (prime x) (succ x)) (= (prime y) (succ y))) "
            "(and (= (prime x) x) (= (prime y) y)))) (prime (= x y)))");
  for (const auto& ob : s.fol) {
    EXPECT_FALSE(contains_kind(ob.goal, Kind::Prime));
    EXPECT_FALSE(contains_kind(ob.goal, Kind::Nabla));
    EXPECT_TRUE(no_fol_countermodel(ob, 3)) << to_string(ob.goal);
  }
  EXPECT_EQ(s.action_symbols.size(), 2U);
}

TEST(Safety, BrokenInvariantIsRefuted) {
  const SafetyFile f = load_safety(R"(
    (declare-op 0 0) (declare-op succ 1) (declare-flex x) (declare-flex y)
    (vars x y)
    (init (and (= x 0) (= y 0)))
    (next (and (= (prime x) (succ x)) (= (prime y) y)))
    (iinv (= x y))
    (inv (= x y)))");
  const SafetyObligations s = safety_obligations(f.spec, f.env);
  EXPECT_TRUE(no_fol_countermodel(s.fol[0], 3));
  EXPECT_FALSE(no_fol_countermodel(s.fol[1], 3));
  EXPECT_TRUE(no_fol_countermodel(s.fol[2], 3));
}

TEST(Safety, TrueInductiveInvariant) {
  const SafetyFile f = load_safety(R"(
    (declare-op 0 0) (declare-op succ 1) (declare-flex x)
    (vars x)
    (init (= x 0))
    (next (= (prime x) (succ x)))
    (iinv true)
    (inv (= x 0)))");
  const SafetyObligations s = safety_obligations(f.spec, f.env);
  EXPECT_TRUE(no_fol_countermodel(s.fol[0], 3));
  EXPECT_TRUE(no_fol_countermodel(s.fol[1], 3));
  EXPECT_FALSE(no_fol_countermodel(s.fol[2], 3));
}

TEST(Safety, RejectsModalStatePredicates) {
  DefinitionEnvironment env;
  SafetySpec spec = parse_safety(R"(
    (declare-op 0 0) (declare-flex x) (vars x)
    (init (nabla (= x 0))) (next (= (prime x) x)) (iinv true) (inv true))", env);
  EXPECT_THROW(safety_obligations(spec, env), Error);
}

TEST(Safety, GlueSequent) {
  const SafetyFile f = load_safety(testing_support::read_problem("counter.foml"));
  const SafetyObligations s = safety_obligations(f.spec, f.env);
  const MLSequent& g = s.glue;
  EXPECT_EQ(g.frame, Frame::S4);
  EXPECT_EQ(g.prime_frame, Frame::K);
  ASSERT_EQ(g.hypotheses.size(), 3U);
  EXPECT_NO_THROW(check_ml_formula(g.goal));
  for (const auto& h : g.hypotheses) EXPECT_NO_THROW(check_ml_formula(h));
  EXPECT_TRUE(contains_kind(g.hypotheses[1], Kind::Prime));
  ASSERT_TRUE(g.goal.is(Kind::Implies));
  EXPECT_TRUE(g.goal.arg(1).is(Kind::Nabla));
  EXPECT_EQ(s.glue_atoms.size(), 8U);
  EXPECT_EQ(parse_ml_sequent(emit_ml(g)), g);
}
