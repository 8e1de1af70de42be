#include <gtest/gtest.h>

#include "fd/propcheck.hpp"
#include "fd/reduction.hpp"
#include "support.hpp"

using namespace fd;
using fdtest::term;

TEST(Propcheck, GeneratedTermsCheck) {
  for (PreludeKind k : all_preludes()) {
    Env env = fdtest::prelude(k);
    GenConfig cfg;
    cfg.seed = 3;
    cfg.prelude = k;
    Generator g(env, cfg);
    for (int i = 0; i < 100; ++i) {
      auto gen = g.term();
      if (!gen) continue;
      EXPECT_EQ(gen->term->free_bound(), 0u);
      EXPECT_TRUE(check_term(env, gen->term, gen->type).ok())
          << print_core(gen->term) << " : " << print_core(gen->type);
    }
  }
}

TEST(Propcheck, GoalsProduceRequestedShapes) {
  Env env = fdtest::prelude(PreludeKind::EqOrd);
  GenConfig cfg;
  cfg.prelude = PreludeKind::EqOrd;
  Generator g(env, cfg);
  for (int i = 0; i < 50; ++i) {
    auto c = g.term(Goal::Coercion);
    if (c) EXPECT_TRUE(c->type->is(Tag::EqTy)) << print_core(c->type);
    auto f = g.term(Goal::Function);
    if (f) EXPECT_TRUE(f->type->is(Tag::TApp) || f->type->is(Tag::Forall));
  }
}

TEST(Propcheck, GeneratedTypesAreClosedAndKinded) {
  Env env = fdtest::prelude();
  Generator g(env, GenConfig{});
  for (int i = 0; i < 100; ++i) {
    NodePtr t = g.type(star());
    EXPECT_EQ(t->free_bound(), 0u);
    auto k = kind_of(env, t);
    ASSERT_TRUE(k.ok());
    EXPECT_TRUE((*k)->is(Tag::Star));
  }
}

TEST(Propcheck, EveryPropertyPassesSmallRun) {
  for (const auto& name : property_names()) {
    for (PreludeKind k : all_preludes()) {
      GenConfig cfg;
      cfg.seed = 5;
      cfg.size = 20;
      cfg.prelude = k;
      PropResult r = run_property(name, fdtest::prelude(k), cfg, 60);
      EXPECT_TRUE(r.passed) << name << " [" << prelude_name(k) << "] " << r.detail
                            << " on " << r.counterexample;
      EXPECT_EQ(r.cases, 60u);
    }
  }
}

TEST(Propcheck, RunsReplay) {
  Env env = fdtest::prelude(PreludeKind::Maybe);
  GenConfig cfg;
  cfg.seed = 99;
  Generator a(env, cfg);
  Generator b(env, cfg);
  for (int i = 0; i < 30; ++i) {
    auto x = a.term();
    auto y = b.term();
    ASSERT_EQ(x.has_value(), y.has_value());
    if (x) EXPECT_TRUE(node_eq(x->term, y->term));
  }
  PropResult r1 = run_property("progress", env, cfg, 40);
  PropResult r2 = run_property("progress", env, cfg, 40);
  EXPECT_EQ(r1.cases, r2.cases);
  EXPECT_EQ(r1.skipped, r2.skipped);
}

TEST(Propcheck, UnknownPropertyFails) {
  PropResult r = run_property("nope", fdtest::prelude(), GenConfig{}, 1);
  EXPECT_FALSE(r.passed);
}

TEST(Propcheck, CanonicalForms) {
  Env env = fdtest::prelude();
  EXPECT_TRUE(canonical_coercion(term("refl(Bool)")));
  EXPECT_TRUE(canonical_coercion(term("refl(Bool) <+> refl(Bool)")));
  EXPECT_FALSE(canonical_coercion(term("sym refl(Bool)")));
  EXPECT_TRUE(canonical_function(env, term("\\x:Bool. x")));
  EXPECT_TRUE(canonical_function(env, term("Just [Bool]")));
  EXPECT_TRUE(canonical_function(env, term("(\\x:Bool. x) <+> (\\y:Bool. True)")));
  EXPECT_FALSE(canonical_function(env, term("refl(Bool)")));
  EXPECT_FALSE(canonical_function(env, term("not True")));
}
