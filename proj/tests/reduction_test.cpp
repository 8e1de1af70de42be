#include <gtest/gtest.h>

#include <set>

#include "fd/reduction.hpp"
#include "support.hpp"

using namespace fd;
using fdtest::term;

namespace {

NodePtr eval(const Env& env, const std::string& s, std::size_t fuel = 10000) {
  WhnfResult r = whnf(env, term(s), fuel);
  EXPECT_EQ(r.kind, WhnfResult::Value) << s;
  return r.node;
}

}  // namespace

TEST(Reduction, Booleans) {
  Env env = fdtest::prelude();
  EXPECT_TRUE(node_eq(eval(env, "not True"), term("False")));
  EXPECT_TRUE(node_eq(eval(env, "xor True False"), term("True")));
  EXPECT_TRUE(node_eq(eval(env, "or False False"), term("False")));
}

TEST(Reduction, ClassMethods) {
  Env env = fdtest::prelude(PreludeKind::EqOrd);
  EXPECT_TRUE(node_eq(eval(env, "lte [Bool] dOrdBool False True"), term("True")));
  EXPECT_TRUE(node_eq(eval(env, "lte [Bool] dOrdBool True False"), term("False")));
  EXPECT_TRUE(node_eq(eval(env, "eq [Bool] (EqBool [Bool] refl(Bool)) True True"),
                      term("True")));
  EXPECT_TRUE(node_eq(eval(env, "eq [Bool] (ordEq [Bool] dOrdBool) False True"),
                      term("False")));
}

TEST(Reduction, FundepImprovement) {
  Env env = fdtest::prelude(PreludeKind::Fundep);
  EXPECT_TRUE(node_eq(
      eval(env, "f [Bool] (FIB [Int] [Bool] refl(Int) refl(Bool)) True"), term("False")));
}

TEST(Reduction, Values) {
  Env env = fdtest::prelude();
  for (const char* v : {"True", "\\x:Bool. x", "/\\a:*. \\x:a. x", "refl(Bool)",
                        "Just [Bool] (not True)", "True <+> False", "Just [Bool]"})
    EXPECT_TRUE(is_value(env, term(v))) << v;
  for (const char* n : {"not True", "0", "True <+> 0", "True |> refl(Bool)", "not"})
    EXPECT_FALSE(is_value(env, term(n))) << n;
  EXPECT_TRUE(is_type_value(fdtest::type("Maybe Bool")));
}

TEST(Reduction, ValuesAndZeroDoNotStep) {
  Env env = fdtest::prelude();
  EXPECT_TRUE(step_all(env, term("Just [Bool] (not True)")).empty());
  EXPECT_EQ(step_det(env, term("True")).kind, StepOutcome::IsValue);
  EXPECT_EQ(step_det(env, term("0")).kind, StepOutcome::IsZero);
}

TEST(Reduction, GuardMissIsZero) {
  Env env = fdtest::prelude();
  WhnfResult r = whnf(env, term("guard True is False then True"));
  EXPECT_EQ(r.kind, WhnfResult::ZeroResult);
}

TEST(Reduction, MatchPattern) {
  Env env = fdtest::prelude();
  NodePtr m = term("if Just [Bool] True is Just [Bool] then not else False");
  MatchResult hit = match_pattern(env, m->kid(0), m->pattern());
  EXPECT_EQ(hit.kind, MatchResult::Hit);
  ASSERT_EQ(hit.residual.size(), 1u);
  EXPECT_TRUE(node_eq(hit.residual[0], term("True")));
  NodePtr n = term("if Just [Bool] True is Nothing [Bool] then True else False");
  EXPECT_EQ(match_pattern(env, n->kid(0), n->pattern()).kind, MatchResult::Miss);
  NodePtr s = term("if not True is True then True else False");
  EXPECT_EQ(match_pattern(env, s->kid(0), s->pattern()).kind, MatchResult::NotReady);
}

TEST(Reduction, CongruenceRecordsPath) {
  Env env = fdtest::prelude();
  auto steps = step_all(env, term("not (not True)"));
  bool inner = false;
  for (const auto& s : steps)
    if (!s.path.empty()) inner = true;
  EXPECT_TRUE(inner);
  StepOutcome o = step_det(env, term("if not True is True then True else False"));
  EXPECT_EQ(o.kind, StepOutcome::Stepped);
  EXPECT_EQ(o.path, (std::vector<int>{0, 0}));
}

TEST(Reduction, ChoiceExploresBothSides) {
  Env env = fdtest::prelude();
  Exploration e = explore(env, term("(not <+> (\\x:Bool. x)) True"));
  EXPECT_FALSE(e.exhausted);
  std::set<std::string> vals;
  for (const auto& v : e.values) vals.insert(print_core(v));
  EXPECT_TRUE(vals.count("False <+> True") || (vals.count("False") && vals.count("True")))
      << vals.size();
}

TEST(Reduction, FuelRunsOut) {
  Env env = fdtest::prelude(PreludeKind::Fundep);
  WhnfResult r = whnf(env, term("absurdCo [Bool] [Int]"), 50);
  EXPECT_EQ(r.kind, WhnfResult::OutOfFuel);
  EXPECT_EQ(r.steps, 50u);
}

TEST(Reduction, TraceSeesEveryStep) {
  Env env = fdtest::prelude();
  std::size_t n = 0;
  WhnfResult r = whnf(env, term("not True"), 100, [&](const StepOutcome&) { ++n; });
  EXPECT_EQ(n, r.steps);
  EXPECT_GT(n, 0u);
}

TEST(Reduction, DeterministicStepIsAmongAllSteps) {
  Env env = fdtest::prelude(PreludeKind::EqOrd);
  NodePtr m = term("lte [Bool] dOrdBool False True");
  for (int i = 0; i < 200; ++i) {
    StepOutcome o = step_det(env, m);
    if (o.kind != StepOutcome::Stepped) break;
    bool found = false;
    for (const auto& s : step_all(env, m)) found = found || node_eq(s.result, o.node);
    ASSERT_TRUE(found) << print_core(m);
    m = o.node;
  }
}

TEST(Reduction, AHoles) {
  EXPECT_EQ(a_holes(term("0 True")), std::vector<int>{0});
  EXPECT_EQ(a_holes(term("True |> refl(Bool)")), std::vector<int>{1});
  EXPECT_EQ(a_holes(term("refl(Bool) ;; refl(Bool)")), (std::vector<int>{0, 1}));
  EXPECT_TRUE(a_holes(term("\\x:Bool. x")).empty());
  EXPECT_EQ(e_holes(term("True <+> False")), (std::vector<int>{0, 1}));
}
