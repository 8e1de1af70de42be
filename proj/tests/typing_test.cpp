#include <gtest/gtest.h>

#include "fd/typing.hpp"
#include "support.hpp"

using namespace fd;
using fdtest::term;
using fdtest::type;

namespace {

TypeResult infer(const Env& env, const std::string& s) {
  auto r = infer_term(env, term(s));
  if (!r.ok()) throw FdError(r.error());
  return *r;
}

std::string error_code(const Env& env, const std::string& m, const std::string& t) {
  auto r = check_term(env, term(m), type(t));
  return r.ok() ? "" : r.error().code;
}

}  // namespace

TEST(Typing, PreludesLoad) {
  for (PreludeKind k : all_preludes()) {
    auto env = load_prelude(k);
    EXPECT_TRUE(env.ok()) << prelude_name(k);
  }
}

TEST(Typing, CorpusCoreFilesCheck) {
  Env base = fdtest::prelude();
  for (const char* f : {"superclasses.fd", "fundeps.fd"}) {
    auto p = parse_core(fdtest::read_corpus(f));
    ASSERT_TRUE(p.ok()) << f;
    CheckReport r = check_program(*p, base);
    EXPECT_TRUE(r.ok()) << f << ": " << r.diagnostics.front().to_string();
  }
}

TEST(Typing, BrokenLetRejected) {
  auto p = parse_core(fdtest::read_corpus("broken.fd"));
  ASSERT_TRUE(p.ok());
  CheckReport r = check_program(*p, fdtest::prelude());
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].code, "TypeMismatch");
  EXPECT_EQ(r.diagnostics[0].line, 3);
  EXPECT_TRUE(r.env.is_let("same"));
  EXPECT_FALSE(r.env.is_let("wrap"));
}

TEST(Typing, InstanceMutantWithSwappedBindersRejected) {
  std::string text = fdtest::read_corpus("superclasses.fd");
  const std::string from = "(\\b:Bool. \\c:Bool. not (xor b c)) |> refl((->)) @ h";
  const std::string to = "(\\b:Bool. \\c:Bool. not (xor b c)) |> refl((->)) @ sym h";
  auto at = text.find(from);
  ASSERT_NE(at, std::string::npos);
  text.replace(at, from.size(), to);
  CheckReport r = check_program(parse_core(text).value(), fdtest::prelude());
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.diagnostics.front().line, 4);
}

TEST(Typing, SimpleInference) {
  Env env = fdtest::prelude();
  EXPECT_TRUE(node_eq(infer(env, "not True").type, type("Bool")));
  EXPECT_TRUE(node_eq(infer(env, "Just [Bool]").type, type("Bool -> Maybe Bool")));
  EXPECT_TRUE(node_eq(infer(env, "/\\a:*. \\x:a. x").type, type("forall a:*. a -> a")));
  EXPECT_TRUE(node_eq(infer(env, "refl(Maybe) @ refl(Bool)").type,
                      type("Maybe Bool ~ Maybe Bool")));
  EXPECT_TRUE(node_eq(infer(env, "sim(refl(Bool), refl(Int))").type,
                      type("(Bool ~ Int) ~ (Bool ~ Int)")));
}

TEST(Typing, ZeroHasAnyType) {
  Env env = fdtest::prelude();
  EXPECT_EQ(infer(env, "0").kind, TypeResult::AnyType);
  EXPECT_TRUE(check_term(env, term("0"), type("Maybe Bool")).ok());
  EXPECT_TRUE(node_eq(infer(env, "0 <+> True").type, type("Bool")));
}

TEST(Typing, HolesInCoercions) {
  Env env = fdtest::prelude();
  EXPECT_TRUE(check_term(env, term("not |> (refl((->)) @ 0 @ refl(Bool))"),
                         type("Bool -> Bool"))
                  .ok());
  EXPECT_TRUE(check_term(env, term("True |> 0"), type("Int")).ok());
  EXPECT_TRUE(check_term(env, term("sym 0"), type("Bool ~ Int")).ok());
  TypeResult r = infer(env, "True |> (refl(Bool) ;; 0)");
  EXPECT_FALSE(r.is_exact());
  EXPECT_EQ(error_code(env, "True |> (refl(Bool) ;; 0) ;; refl(Int)", "Bool"),
            "TypeMismatch");
}

TEST(Typing, Errors) {
  Env env = fdtest::prelude();
  EXPECT_EQ(error_code(env, "not Nothing [Bool]", "Bool"), "TypeMismatch");
  EXPECT_EQ(error_code(env, "True False", "Bool"), "NotAFunction");
  EXPECT_EQ(error_code(env, "nope", "Bool"), "UnknownConstant");
  EXPECT_EQ(error_code(env, "True |> refl(Int)", "Bool"), "TypeMismatch");
  EXPECT_NE(error_code(env, "refl(Maybe) @ refl(Maybe)", "Bool"), "");
  auto k = kind_of(env, type("Maybe Maybe"));
  ASSERT_FALSE(k.ok());
  EXPECT_EQ(k.error().code, "KindMismatch");
}

TEST(Typing, PatternRefinement) {
  Env env = fdtest::prelude(PreludeKind::EqOrd);
  NodePtr m = term(
      "/\\a:*. \\d:Eq a. \\x:a. guard d is EqBool [a] then \\h:Bool ~ a. "
      "(not (x |> sym h)) |> h");
  auto r = infer_term(env, m);
  ASSERT_TRUE(r.ok()) << r.error().to_string();
  EXPECT_TRUE(node_eq(r->type, type("forall a:*. Eq a -> a -> a")));
}

TEST(Typing, PatternTypeResidual) {
  Env env = fdtest::prelude(PreludeKind::Fundep);
  Pattern p{"FMM", {type("Maybe Int"), type("Maybe Bool")}};
  auto pt = pattern_type(env, p, type("F (Maybe Int) (Maybe Bool)"));
  ASSERT_TRUE(pt.ok()) << pt.error().to_string();
  EXPECT_EQ(pt->residual_kinds.size(), 2u);
  EXPECT_EQ(pt->arg_types.size(), 3u);
}

TEST(Typing, OpenAndDataHeads) {
  Env env = fdtest::prelude(PreludeKind::EqOrd);
  EXPECT_TRUE(is_data_head(env, type("Maybe Bool")));
  EXPECT_FALSE(is_open_head(env, type("Maybe Bool")));
  EXPECT_TRUE(is_open_head(env, type("Eq Bool")));
}

TEST(Typing, DuplicateDeclaration) {
  auto p = parse_core("data T : *;\ndata T : *;\n");
  CheckReport r = check_program(p.value(), Env());
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.diagnostics.front().code, "DuplicateName");
}
