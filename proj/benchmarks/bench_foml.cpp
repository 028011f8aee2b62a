#include <benchmark/benchmark.h>

#include <vector>

#include "foml/coalesce_fol.hpp"
#include "foml/coalesce_ml.hpp"
#include "foml/fuzz.hpp"
#include "foml/kripke.hpp"
#include "foml/modal_prover.hpp"
#include "foml/problem.hpp"
#include "foml/search.hpp"

using namespace foml;

namespace {

std::vector<Expr> sample_exprs(std::size_t n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  ExprGen gen(rng, fuzz_environment());
  std::vector<Expr> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(gen.expr());
  return out;
}

void BM_CoalesceFol(benchmark::State& state) {
  const auto exprs = sample_exprs(256, 1);
  const auto& env = fuzz_environment();
  for (auto _ : state) {
    SymbolTable table;
    for (const auto& e : exprs) benchmark::DoNotOptimize(coalesce_fol(e, {}, table, env));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * exprs.size()));
}
BENCHMARK(BM_CoalesceFol);

void BM_CoalesceMl(benchmark::State& state) {
  const auto exprs = sample_exprs(256, 2);
  const auto& env = fuzz_environment();
  for (auto _ : state) {
    AtomTable table;
    for (const auto& e : exprs) benchmark::DoNotOptimize(coalesce_ml(e, table, env));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * exprs.size()));
}
BENCHMARK(BM_CoalesceMl);

void BM_Eval(benchmark::State& state) {
  const auto exprs = sample_exprs(256, 3);
  const auto& env = fuzz_environment();
  SplitMix64 rng(4);
  const KripkeModel m = random_model(rng, env);
  for (auto _ : state)
    for (const auto& e : exprs) benchmark::DoNotOptimize(eval(m, 0, e, env));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * exprs.size()));
}
BENCHMARK(BM_Eval);

void BM_FuzzProperty(benchmark::State& state) {
  const Property p = all_properties()[static_cast<std::size_t>(state.range(0))];
  state.SetLabel(property_name(p));
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(check_case(p, case_seed(5, i++)));
}
BENCHMARK(BM_FuzzProperty)->DenseRange(0, 6);

void BM_ProveEq5(benchmark::State& state) {
  const Obligation ob = parse_problem(R"(
    (declare-rigid x) (declare-rigid y)
    (goal (=> (and (= x y) (nabla (delta true))) (nabla (delta (= x y))))))");
  const MlCoalesced c = coalesce_obligation_ml(ob);
  const MLSequent s{c.h, c.goal};
  for (auto _ : state) benchmark::DoNotOptimize(prove_ml(s));
}
BENCHMARK(BM_ProveEq5);

// A chain of n global implications p_i => nabla p_{i+1}, asking for
// p_0 => nabla^n p_n.
void BM_ProveChain(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto frame = static_cast<Frame>(state.range(1));
  MLSequent s;
  s.frame = frame;
  Expr goal = Expr::flex("p" + std::to_string(n));
  for (int i = 0; i < n; ++i) {
    s.hypotheses.push_back(
        Expr::implies(Expr::flex("p" + std::to_string(i)), Expr::nabla(Expr::flex("p" + std::to_string(i + 1)))));
    goal = Expr::nabla(goal);
  }
  s.goal = Expr::implies(Expr::flex("p0"), goal);
  state.SetLabel(frame_name(frame));
  for (auto _ : state) benchmark::DoNotOptimize(prove_ml(s));
}
BENCHMARK(BM_ProveChain)->ArgsProduct({{2, 4, 8, 16}, {0, 3}});

void BM_KripkeSearch(benchmark::State& state) {
  const Obligation ob = parse_problem(R"(
    (declare-op P 1)
    (goal (iff (forall x (nabla (P x))) (nabla (forall x (P x))))))");
  SearchBounds b;
  b.max_universe = 2;
  b.max_states = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(find_countermodel(ob, b));
}
BENCHMARK(BM_KripkeSearch)->DenseRange(1, 2);

}  // namespace
BENCHMARK_MAIN();
