#include <gtest/gtest.h>

#include <algorithm>

#include "fd/elaborate.hpp"
#include "fd/surface.hpp"
#include "support.hpp"

using namespace fd;
using fdtest::elaborate_text;
using fdtest::type;

namespace {

const char* kEqClass =
    "class Eq a where {\n"
    "  eq :: a -> a -> Bool;\n"
    "};\n"
    "instance Eq Bool as EqBool where {\n"
    "  eq = ((\\b :: Bool. \\c :: Bool. not (xor b c)) :: Bool -> Bool -> Bool);\n"
    "};\n";

const char* kEqAll =
    "instance Eq a as EqAll where {\n"
    "  eq = ((\\x :: a. \\y :: a. True) :: a -> a -> Bool);\n"
    "};\n";

bool has_code(const std::vector<Diagnostic>& ds, const std::string& code) {
  return std::any_of(ds.begin(), ds.end(), [&](const Diagnostic& d) { return d.code == code; });
}

}  // namespace

TEST(Surface, ParsePrintRoundTrip) {
  for (const char* f : {"superclasses.hsk", "fundeps.hsk", "fundeps_bad.hsk"}) {
    auto p = parse_surface(fdtest::read_corpus(f));
    ASSERT_TRUE(p.ok()) << f << ": " << p.error().to_string();
    auto q = parse_surface(print_surface(*p));
    ASSERT_TRUE(q.ok()) << f << ": " << print_surface(*p);
    EXPECT_TRUE(surface_eq(*p, *q)) << f;
  }
}

TEST(Surface, CorpusValidates) {
  for (const char* f : {"superclasses.hsk", "fundeps.hsk", "fundeps_bad.hsk"})
    EXPECT_TRUE(validate_surface(parse_surface(fdtest::read_corpus(f)).value()).empty()) << f;
}

TEST(Surface, ValidationRejects) {
  auto check = [](const std::string& text, const std::string& code) {
    auto p = parse_surface(text);
    ASSERT_TRUE(p.ok()) << p.error().to_string();
    EXPECT_TRUE(has_code(validate_surface(*p), code)) << text;
  };
  check("class G a b | a -> a;", "FundepBounds");
  check(std::string(kEqClass) + "instance Eq (Maybe a) => Eq a as Bad;", "PatersonViolation");
  check(std::string("class Eq a where { eq :: a -> a -> Bool; };\n") +
            "instance Eq Bool as EqBool where {\n"
            "  eq = ((\\b :: Bool. \\c :: Bool. b) :: Bool -> Bool -> Bool);\n"
            "  eq = ((\\b :: Bool. \\c :: Bool. c) :: Bool -> Bool -> Bool);\n"
            "};\n",
        "DuplicateMethod");
}

TEST(Elaborate, EqOrdGolden) {
  ElabReport r = elaborate_text(fdtest::read_corpus("superclasses.hsk"), fdtest::prelude());
  ASSERT_TRUE(r.ok()) << r.diagnostics.front().to_string();
  EXPECT_EQ(print_core(r.program), fdtest::read_corpus("superclasses.fd"));
}

TEST(Elaborate, FundepGolden) {
  ElabReport r = elaborate_text(fdtest::read_corpus("fundeps.hsk"), fdtest::prelude());
  ASSERT_TRUE(r.ok()) << r.diagnostics.front().to_string();
  EXPECT_EQ(print_core(r.program), fdtest::read_corpus("fundeps.fd"));
  EXPECT_EQ(r.env.instances("fdFwd").size(), 4u);
  EXPECT_EQ(r.env.instances("fdBwd").size(), 4u);
}

TEST(Elaborate, ErroneousInstanceRejected) {
  ElabReport r = elaborate_text(fdtest::read_corpus("fundeps_bad.hsk"), fdtest::prelude());
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics[0].code, "FundepViolation");
  EXPECT_EQ(r.diagnostics[0].line, 5);
  EXPECT_TRUE(r.program.empty());
}

TEST(Elaborate, AbsurdOmitSkipsInconsistentPairs) {
  ElabOptions opts;
  opts.absurd_omit = true;
  ElabReport r = elaborate_text(fdtest::read_corpus("fundeps.hsk"), fdtest::prelude(), opts);
  ASSERT_TRUE(r.ok()) << r.diagnostics.front().to_string();
  EXPECT_EQ(r.env.instances("fdFwd").size(), 2u);
  EXPECT_FALSE(r.env.is_method("absurdCo"));
}

TEST(Elaborate, MissingInstance) {
  ElabReport r = elaborate_text(std::string(kEqClass) + "let d :: Eq Int = (_ :: Eq Int);\n",
                                fdtest::prelude());
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.diagnostics.front().code, "NoInstance");
}

TEST(Elaborate, OverlapRejectOrFirst) {
  std::string text = std::string(kEqClass) + kEqAll + "let d :: Eq Bool = (_ :: Eq Bool);\n";
  ElabReport reject = elaborate_text(text, fdtest::prelude());
  ASSERT_FALSE(reject.ok());
  EXPECT_EQ(reject.diagnostics.front().code, "Ambiguous");

  ElabOptions opts;
  opts.overlap_first = true;
  ElabReport first = elaborate_text(text, fdtest::prelude(), opts);
  ASSERT_TRUE(first.ok()) << first.diagnostics.front().to_string();
  const LetDef* d = first.env.let("d");
  ASSERT_NE(d, nullptr);
  EXPECT_TRUE(fdtest::contains_subterm(d->body, con("EqBool")));
}

TEST(Elaborate, MissingMethod) {
  ElabReport r = elaborate_text("class Eq a where { eq :: a -> a -> Bool; };\n"
                                "instance Eq Bool as EqBool;\n",
                                fdtest::prelude());
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.diagnostics.front().code, "MissingMethod");
}

TEST(Elaborate, SynthesizesCoercionsFromFundeps) {
  auto sp = parse_surface(fdtest::read_corpus("fundeps.hsk")).value();
  ElabState st;
  st.env = fdtest::prelude();
  for (const auto& d : sp) {
    if (d.kind == SDecl::Let) continue;
    auto decls = d.kind == SDecl::Class ? elaborate_class(st, d.cls)
                                        : elaborate_instance(st, d.inst);
    ASSERT_TRUE(decls.ok());
    for (const auto& decl : *decls) st.env = check_decl(st.env, decl).value();
  }
  Context ctx = {{true, star(), "t"}, {false, type("F Int t", {{"t", true}}), "d"}};
  auto co = synth_coercion(st, ctx, type("Bool"), tvar(1));
  ASSERT_TRUE(co.ok()) << co.error().to_string();
  auto ct = coerce_type(st.env, *co, ctx);
  ASSERT_TRUE(ct.ok()) << ct.error().to_string() << " in " << print_core(*co, context_names(ctx));
  EXPECT_TRUE(node_eq(ct->lhs, type("Bool")));
  EXPECT_TRUE(node_eq(ct->rhs, tvar(1)));
  auto none = synth_coercion(st, ctx, type("Int"), tvar(1));
  ASSERT_FALSE(none.ok());
  EXPECT_EQ(none.error().code, "NoCoercion");
}

TEST(Elaborate, ResolvesSuperclassDictionaries) {
  std::string text = fdtest::read_corpus("superclasses.hsk") +
                     "let useEq :: forall a. Ord a => a -> Bool =\n"
                     "  /\\a :: *. \\d :: Ord a. \\x :: a. eq [a] (_ :: Eq a) x x;\n";
  ElabReport r = elaborate_text(text, fdtest::prelude());
  ASSERT_TRUE(r.ok()) << r.diagnostics.front().to_string();
  const LetDef* u = r.env.let("useEq");
  ASSERT_NE(u, nullptr);
  EXPECT_TRUE(fdtest::contains_subterm(u->body, con("ordEq")));
}
