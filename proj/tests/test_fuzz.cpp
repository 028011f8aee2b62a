#include <gtest/gtest.h>

#include <set>

#include "foml/fuzz.hpp"
#include "foml/leibniz.hpp"

using namespace foml;

namespace {

std::size_t defs_in(const Expr& e) {
  std::size_t n = e.is(Kind::Def);
  for (const auto& a : e.args()) n += defs_in(a);
  return n;
}

}  // namespace

TEST(Rng, Deterministic) {
  SplitMix64 a(5);
  SplitMix64 b(5);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
  EXPECT_NE(case_seed(1, 0), case_seed(1, 1));
  EXPECT_NE(case_seed(1, 0), case_seed(2, 0));
  SplitMix64 c(9);
  for (int i = 0; i < 1000; ++i) EXPECT_LT(c.below(7), 7U);
}

TEST(Properties, Names) {
  for (Property p : all_properties()) EXPECT_EQ(parse_property(property_name(p)), p);
  EXPECT_EQ(all_properties().size(), 7U);
  EXPECT_FALSE(parse_property("nope").has_value());
}

TEST(Generator, CoversTheGrammar) {
  const auto& env = fuzz_environment();
  SplitMix64 rng(91);
  ExprGen gen(rng, env);
  std::set<Kind> kinds;
  std::set<std::string> defs;
  std::size_t with_defs = 0;
  for (int i = 0; i < 3000; ++i) {
    const Expr e = gen.expr();
    EXPECT_NO_THROW(expand_definitions(e, env));
    with_defs += defs_in(e) > 0;
    std::vector<Expr> stack{e};
    while (!stack.empty()) {
      const Expr x = stack.back();
      stack.pop_back();
      kinds.insert(x.kind());
      if (x.is(Kind::Def)) defs.insert(x.name());
      for (const auto& a : x.args()) stack.push_back(a);
    }
  }
  EXPECT_EQ(kinds.size(), 10U);
  EXPECT_EQ(defs.size(), env.definitions().size());
  EXPECT_GT(with_defs, 500U);
}

TEST(Generator, RigidExpressionsAreRigid) {
  const auto& env = fuzz_environment();
  SplitMix64 rng(92);
  ExprGen gen(rng, env);
  for (int i = 0; i < 1000; ++i) {
    const Expr e = gen.rigid_expr();
    EXPECT_TRUE(is_rigid(e, env)) << to_string(e);
    EXPECT_FALSE(contains_kind(e, Kind::Def));
  }
}

TEST(Generator, RandomModelsAreValid) {
  const auto& env = fuzz_environment();
  SplitMix64 rng(93);
  std::set<std::size_t> sizes;
  for (int i = 0; i < 500; ++i) {
    const KripkeModel m = random_model(rng, env);
    EXPECT_NO_THROW(m.validate());
    EXPECT_LE(m.universe.size(), 3U);
    EXPECT_LE(m.num_states(), 3U);
    sizes.insert(m.universe.size() * 10 + m.num_states());
  }
  EXPECT_GE(sizes.size(), 6U);
}

TEST(Fuzz, RunIsDeterministic) {
  const FuzzReport a = run_fuzz(11, 50, all_properties());
  const FuzzReport b = run_fuzz(11, 50, all_properties());
  EXPECT_EQ(a.cases, 350U);
  EXPECT_EQ(a.cases, b.cases);
  EXPECT_EQ(a.failures.size(), b.failures.size());
}

TEST(Fuzz, CaseSeedsReplay) {
  for (std::uint64_t i = 0; i < 50; ++i)
    for (Property p : all_properties()) {
      const std::uint64_t s = case_seed(case_seed(12, i), static_cast<std::uint64_t>(p));
      EXPECT_EQ(check_case(p, s), check_case(p, s));
    }
}

class FuzzProperty : public ::testing::TestWithParam<Property> {};

TEST_P(FuzzProperty, ThousandCasesWithoutDiscrepancy) {
  const FuzzReport r = run_fuzz(2026, 1000, {GetParam()});
  EXPECT_EQ(r.cases, 1000U);
  for (const auto& f : r.failures) ADD_FAILURE() << property_name(f.property) << " case " << f.case_seed << "\n" << f.detail;
}

INSTANTIATE_TEST_SUITE_P(All, FuzzProperty, ::testing::ValuesIn(all_properties()),
                         [](const auto& info) {
                           std::string n = property_name(info.param);
                           for (auto& c : n)
                             if (c == '-') c = '_';
                           return n;
                         });
