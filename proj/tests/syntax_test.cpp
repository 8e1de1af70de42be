#include <gtest/gtest.h>

#include "fd/core_text.hpp"
#include "fd/syntax.hpp"
#include "support.hpp"

using namespace fd;
using fdtest::term;
using fdtest::type;

TEST(Syntax, BinderNamesIgnoredByEquality) {
  EXPECT_TRUE(node_eq(term("\\x:Bool. x"), term("\\y:Bool. y")));
  EXPECT_TRUE(node_eq(type("forall a:*. a -> a"), type("forall b:*. b -> b")));
  EXPECT_FALSE(node_eq(term("\\x:Bool. True"), term("\\x:Bool. False")));
}

TEST(Syntax, FreeBoundAndSize) {
  NodePtr closed = term("\\x:Bool. x");
  EXPECT_EQ(closed->free_bound(), 0u);
  EXPECT_EQ(closed->size(), 3u);
  NodePtr open = app(var(2), var(0));
  EXPECT_EQ(open->free_bound(), 3u);
  EXPECT_EQ(lam(tcon("Bool"), var(1))->free_bound(), 1u);
  EXPECT_EQ(tylam(star(), tvar(0))->free_bound(), 0u);
}

TEST(Syntax, ArrowIsAppliedConstant) {
  NodePtr t = type("Bool -> Maybe Bool");
  ASSERT_TRUE(t->is(Tag::TApp));
  EXPECT_TRUE(node_eq(t, arrow(tcon("Bool"), tapp(tcon("Maybe"), tcon("Bool")))));
  EXPECT_EQ(print_core(t), "Bool -> Maybe Bool");
}

TEST(Syntax, RebuildKeepsIdentityWhenUnchanged) {
  NodePtr m = term("not True");
  EXPECT_EQ(rebuild(m, m->kids()), m);
  NodePtr r = rebuild(m, {m->kid(0), con("False")});
  EXPECT_TRUE(node_eq(r, term("not False")));
}

TEST(Syntax, PrintParseRoundTripTerms) {
  const char* samples[] = {
      "\\x:Bool. if x is True then False else True",
      "/\\a:*. \\d:Eq a. guard d is EqBool [a] then \\h:Bool ~ a. h",
      "True |> refl(Bool) ;; sym refl(Bool)",
      "0 <+> (False <+> True)",
      "forallc a:*. refl(Maybe a) @[Bool]",
      "sim(refl(Bool), refl(Int)).1",
      "refl((->)) @ refl(Bool) @ refl(Bool)",
  };
  for (const char* s : samples) {
    NodePtr m = term(s);
    std::string printed = print_core(m);
    EXPECT_TRUE(node_eq(term(printed), m)) << s << " printed as " << printed;
    EXPECT_EQ(print_core(term(printed)), printed);
  }
}

TEST(Syntax, PrintParseRoundTripCorpus) {
  for (const char* f : {"prelude.fd", "superclasses.fd", "fundeps.fd"}) {
    std::string text = fdtest::read_corpus(f);
    auto p = parse_core(text);
    ASSERT_TRUE(p.ok()) << f << ": " << p.error().to_string();
    auto q = parse_core(print_core(*p));
    ASSERT_TRUE(q.ok()) << f;
    ASSERT_EQ(p->size(), q->size());
    for (std::size_t i = 0; i < p->size(); ++i) EXPECT_TRUE(decl_eq((*p)[i], (*q)[i])) << f;
  }
}

TEST(Syntax, GoldenFilesPrintByteIdentical) {
  for (const char* f : {"superclasses.fd", "fundeps.fd"}) {
    std::string text = fdtest::read_corpus(f);
    EXPECT_EQ(print_core(parse_core(text).value()), text) << f;
  }
}

TEST(Syntax, ScopedParseUsesIndices) {
  NodePtr m = term("x y", {{"x", false}, {"y", false}});
  EXPECT_TRUE(node_eq(m, app(var(1), var(0))));
  NodePtr t = type("a", {{"a", true}, {"x", false}});
  EXPECT_TRUE(node_eq(t, tvar(1)));
}

TEST(Syntax, ParseErrorsCarryPosition) {
  auto r = parse_core("data Bool : *;\nctor True Bool;\n");
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.error().code, "ParseError");
  EXPECT_EQ(r.error().line, 2);
}

TEST(Syntax, PatternPrinting) {
  NodePtr m = term("if Nothing [Bool] is Just [Bool] then \\x:Bool. x else True");
  ASSERT_TRUE(m->has_pattern());
  EXPECT_EQ(m->pattern().head, "Just");
  EXPECT_EQ(print_pattern(m->pattern()), "Just [Bool]");
}
