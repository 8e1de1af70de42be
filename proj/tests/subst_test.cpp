#include <gtest/gtest.h>

#include "fd/subst.hpp"
#include "subst_oracle.hpp"
#include "support.hpp"

using namespace fd;
using fdtest::term;

TEST(Subst, ShiftRespectsCutoff) {
  NodePtr m = app(var(0), var(3));
  EXPECT_TRUE(node_eq(shift(m, 2, 1), app(var(0), var(5))));
  EXPECT_TRUE(node_eq(shift(lam(tcon("Bool"), app(var(0), var(1))), 1),
                      lam(tcon("Bool"), app(var(0), var(2)))));
}

TEST(Subst, InstantiateBeta) {
  NodePtr body = term("\\y:Bool. x y", {{"x", false}});
  EXPECT_TRUE(node_eq(instantiate(body, con("not")), term("\\y:Bool. not y")));
  NodePtr open = app(var(0), var(4));
  EXPECT_TRUE(node_eq(instantiate(open, var(7)), app(var(7), var(3))));
}

TEST(Subst, InstantiateManyOrder) {
  NodePtr body = app(var(1), var(0));
  NodeList args = {con("A"), con("B")};
  EXPECT_TRUE(node_eq(instantiate_many(body, args), app(con("A"), con("B"))));
}

TEST(Subst, StrengthenAndOccurs) {
  NodePtr m = app(var(2), var(1));
  EXPECT_FALSE(strengthen(m, 2).has_value());
  auto s = strengthen(m, 1);
  ASSERT_TRUE(s.has_value());
  EXPECT_TRUE(node_eq(*s, app(var(1), var(0))));
  EXPECT_TRUE(occurs(m, 2));
  EXPECT_FALSE(occurs(m, 0));
  EXPECT_FALSE(occurs(lam(tcon("Bool"), var(0)), 0));
}

TEST(Subst, SingleMatchesInstantiate) {
  NodePtr body = term("\\z:Bool. x z", {{"x", false}});
  EXPECT_TRUE(node_eq(Subst::single(con("not")).apply(body), instantiate(body, con("not"))));
}

TEST(Subst, NormalizedIsEquivalent) {
  fdtest::SyntaxGen g(7);
  for (int i = 0; i < 300; ++i) {
    NodePtr n = g.node(1 + i % 16, 5);
    Subst s = g.subst(5).build();
    EXPECT_TRUE(node_eq(s.apply(n), s.normalized().apply(n)));
    EXPECT_EQ(s.normalized().lifted(), 0u);
  }
}

TEST(SubstOracle, ShiftAndInstantiateAgree) {
  fdtest::SyntaxGen g(11);
  for (int i = 0; i < 1000; ++i) {
    NodePtr n = g.node(1 + i % 20, 4);
    std::uint32_t k = static_cast<std::uint32_t>(i % 3);
    std::uint32_t c = static_cast<std::uint32_t>(i % 4);
    ASSERT_TRUE(node_eq(shift(n, k, c), fdtest::oracle_shift(n, k, c)))
        << print_core(n);
    NodePtr arg = g.node(1 + i % 6, 3);
    ASSERT_TRUE(node_eq(instantiate(n, arg), fdtest::oracle_instantiate(n, arg)))
        << print_core(n) << " with " << print_core(arg);
  }
}

TEST(SubstOracle, ApplyLiftAndCompose) {
  fdtest::SyntaxGen g(13);
  for (int i = 0; i < 2000; ++i) {
    NodePtr n = g.node(1 + i % 20, 4);
    fdtest::SubstSpec a = g.subst(4);
    fdtest::SubstSpec b = g.subst(6);
    Subst sa = a.build();
    Subst sb = b.build();
    for (std::uint32_t j = 0; j < 8; ++j) {
      SubstAction act = sa.lookup(j);
      fdtest::Image im = a.image(j);
      ASSERT_EQ(act.kind == SubstAction::Rename, im.rename);
      if (im.rename)
        ASSERT_EQ(act.index, im.index);
      else
        ASSERT_TRUE(node_eq(act.node, im.node));
    }
    NodePtr once = fdtest::oracle_apply(n, a);
    ASSERT_TRUE(node_eq(sa.apply(n), once));
    ASSERT_TRUE(node_eq(Subst::compose(sa, sb).apply(n), fdtest::oracle_apply(once, b)));
    ASSERT_TRUE(node_eq(Subst::identity().apply(n), n));
    ASSERT_TRUE(node_eq(Subst::compose(Subst::identity(), sa).apply(n), once));
    ASSERT_TRUE(node_eq(Subst::compose(sa, Subst::identity()).apply(n), once));
  }
}

TEST(SubstOracle, ComposeIsAssociative) {
  fdtest::SyntaxGen g(17);
  for (int i = 0; i < 500; ++i) {
    NodePtr n = g.node(1 + i % 16, 4);
    Subst a = g.subst(4).build();
    Subst b = g.subst(4).build();
    Subst c = g.subst(4).build();
    ASSERT_TRUE(node_eq(Subst::compose(Subst::compose(a, b), c).apply(n),
                        Subst::compose(a, Subst::compose(b, c)).apply(n)));
  }
}
