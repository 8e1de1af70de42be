#include <gtest/gtest.h>

#include "fd/analysis.hpp"
#include "fd/reduction.hpp"
#include "support.hpp"

using namespace fd;
using fdtest::term;

namespace {

Env with_core(const Env& base, const std::string& text) {
  CheckReport r = check_program(parse_core(text).value(), base);
  if (!r.ok()) throw FdError(r.diagnostics.front());
  return r.env;
}

std::string drop_line_containing(std::string text, const std::string& needle) {
  auto at = text.find(needle);
  if (at == std::string::npos) return text;
  auto start = text.rfind('\n', at);
  start = start == std::string::npos ? 0 : start + 1;
  auto end = text.find('\n', at);
  text.erase(start, end - start + 1);
  return text;
}

}  // namespace

TEST(Analysis, DictionaryParams) {
  Env env = fdtest::prelude(PreludeKind::Fundep);
  EXPECT_EQ(dictionary_params(env, env.method_type("fdFwd")), (std::vector<std::size_t>{0, 1}));
  EXPECT_TRUE(dictionary_params(env, env.method_type("absurdCo")).empty());
  EXPECT_EQ(dictionary_params(env, env.let("f")->type), std::vector<std::size_t>{0});
}

TEST(Analysis, Preamble) {
  Env env = fdtest::prelude(PreludeKind::Fundep);
  const NodeList& bodies = env.instances("fdFwd");
  ASSERT_EQ(bodies.size(), 4u);
  GuardPreamble g = extract_preamble(env, "fdFwd", bodies[0]);
  EXPECT_EQ(g.patterns, (std::vector<std::string>{"FIB", "FIB"}));
  g = extract_preamble(env, "fdFwd", bodies[2]);
  EXPECT_EQ(g.patterns, (std::vector<std::string>{"FIB", "FMM"}));
}

TEST(Analysis, GoldenProgramsAreHssdi) {
  for (PreludeKind k : {PreludeKind::EqOrd, PreludeKind::Fundep}) {
    Env env = fdtest::prelude(k);
    HssdiReport h = check_hssdi(env);
    EXPECT_TRUE(h.ok()) << h.to_string();
    HssdiReport s = check_saturation(env);
    EXPECT_TRUE(s.ok()) << s.to_string();
  }
  HssdiReport h = check_hssdi(fdtest::prelude(PreludeKind::Fundep));
  ASSERT_NE(h.find("fdFwd"), nullptr);
  EXPECT_EQ(h.find("fdFwd")->tuples, 4u);
  EXPECT_EQ(h.find("absurdCo")->tuples, 0u);
}

TEST(Analysis, DroppedInstanceIsUnsaturated) {
  std::string text = drop_line_containing(
      fdtest::read_corpus("fundeps.fd"),
      "guard d1 is FIB [t] [u] then \\h1:Int ~ t. \\h2:Bool ~ u. guard d2 is FMM [t] [v]");
  ASSERT_NE(text, fdtest::read_corpus("fundeps.fd"));
  Env env = with_core(fdtest::prelude(), text);
  HssdiReport s = check_saturation(env);
  ASSERT_FALSE(s.ok());
  const FunctionReport* fwd = s.find("fdFwd");
  ASSERT_NE(fwd, nullptr);
  ASSERT_EQ(fwd->missing.size(), 1u);
  EXPECT_EQ(fwd->missing[0], (std::vector<std::string>{"FIB", "FMM"}));
  EXPECT_TRUE(s.find("fdBwd")->ok());
  EXPECT_FALSE(check_hssdi(env).ok());
}

TEST(Analysis, NonDecreasingRecursionFlagged) {
  Env env = with_core(fdtest::prelude(),
                      "open C : * -> *;\n"
                      "method m : forall a:*. C a -> Bool;\n"
                      "openctor CB : forall a:*. Bool ~ a -> C a;\n"
                      "instance m = /\\a:*. \\d:C a. guard d is CB [a] then "
                      "\\h:Bool ~ a. m [Maybe (Maybe a)] (CB [Maybe (Maybe a)] 0);\n");
  HssdiReport h = check_hssdi(env);
  ASSERT_FALSE(h.ok());
  EXPECT_FALSE(h.find("m")->condition1.empty());
}

TEST(Analysis, NoZeroSyntactic) {
  Env env = fdtest::prelude(PreludeKind::EqOrd);
  EXPECT_TRUE(check_no_zero_syntactic(env, term("(\\x:Bool. x) True")));
  EXPECT_FALSE(check_no_zero_syntactic(env, term("not True")));
  EXPECT_FALSE(check_no_zero_syntactic(env, term("0 <+> True")));
  EXPECT_FALSE(check_no_zero_syntactic(env, term("eq [Bool] (EqBool [Bool] refl(Bool))")));
}

TEST(Analysis, SpecializeRemovesDispatch) {
  Env env = fdtest::prelude(PreludeKind::EqOrd);
  NodePtr m = term("lte [Bool] dOrdBool False True");
  auto s = specialize(env, m);
  ASSERT_TRUE(s.ok()) << s.error().to_string();
  EXPECT_TRUE(check_no_zero_syntactic(env, *s));
  EXPECT_TRUE(check_term(env, *s, fdtest::type("Bool")).ok());
  WhnfResult a = whnf(env, m);
  WhnfResult b = whnf(env, *s);
  ASSERT_EQ(b.kind, WhnfResult::Value);
  EXPECT_TRUE(node_eq(a.node, b.node));
  EXPECT_LT(b.steps, a.steps);
}

TEST(Analysis, SpecializeOpenDictionaryFails) {
  Env env = fdtest::prelude(PreludeKind::EqOrd);
  NodePtr m = term("/\\a:*. \\d:Eq a. eq [a] d");
  auto s = specialize(env, m);
  if (s.ok()) EXPECT_FALSE(check_no_zero_syntactic(env, *s));
}
