// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "fd/analysis.hpp"
#include "fd/propcheck.hpp"
#include "fd/reduction.hpp"
#include "subst_oracle.hpp"
#include "support.hpp"

using namespace fd;
using fdtest::term;
using fdtest::type;

namespace {

struct Outcome {
  bool ok = true;
  std::string note;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      note = what;
    }
  }
};

using Check = std::function<void(Outcome&)>;

bool run(int id, const char* title, double budget_s, const Check& check) {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  try {
    check(o);
  } catch (const std::exception& e) {
    o.require(false, std::string("exception: ") + e.what());
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  char budget[64];
  std::snprintf(budget, sizeof budget, "%.2f s > %.0f s budget", secs, budget_s);
  o.require(secs <= budget_s, budget);
  std::printf("%s %d %s (%.2f s)%s%s\n", o.ok ? "PASS" : "FAIL", id, title, secs,
              o.ok ? "" : ": ", o.note.c_str());
  std::fflush(stdout);
  return o.ok;
}

// 1 ------------------------------------------------------------------------

void golden_eq_ord(Outcome& o) {
  Env base = fdtest::prelude();
  ElabReport er = fdtest::elaborate_text(fdtest::read_corpus("superclasses.hsk"), base);
  o.require(er.ok(), "elaboration failed");
  if (!er.ok()) return;
  std::string text = print_core(er.program);
  o.require(text == fdtest::read_corpus("superclasses.fd"), "output differs from golden");
  o.require(check_program(er.program, base).ok(), "output does not typecheck");

  const Decl* eq_open = fdtest::find_decl(er.program, DeclKind::OpenType, "Eq");
  o.require(eq_open && node_eq(eq_open->type, fd::parse_kind("* -> *").value()),
            "open Eq : * -> * missing");
  const Decl* eq = fdtest::find_decl(er.program, DeclKind::Method, "eq");
  o.require(eq && node_eq(eq->type, type("forall a:*. Eq a -> a -> a -> Bool")),
            "method eq has the wrong type");
  const Decl* proj = fdtest::find_decl(er.program, DeclKind::Method, "ordEq");
  o.require(proj && node_eq(proj->type, type("forall a:*. Ord a -> Eq a")),
            "ordEq projection missing");

  NodePtr dbl = term("refl((->)) @ h @ (refl((->)) @ h @ refl(Bool))", {{"h", false}});
  bool found = false;
  for (const auto& d : er.program)
    if (d.kind == DeclKind::Instance && d.name == "eq" && d.body)
      found = found || fdtest::contains_subterm(d.body, dbl);
  o.require(found, "double cast missing from the eq instance");
}

// 2 ------------------------------------------------------------------------

std::vector<std::string> guard_heads(NodePtr n) {
  std::vector<std::string> out;
  while (out.size() < 2) {
    if (n->is(Tag::Guard)) {
      out.push_back(n->pattern().head);
      n = n->kid(1);
    } else if (n->is(Tag::Lam) || n->is(Tag::TyLam)) {
      n = n->kid(1);
    } else {
      break;
    }
  }
  return out;
}

void golden_fundeps(Outcome& o) {
  Env base = fdtest::prelude();
  ElabReport er = fdtest::elaborate_text(fdtest::read_corpus("fundeps.hsk"), base);
  o.require(er.ok(), "elaboration failed");
  if (!er.ok()) return;
  o.require(print_core(er.program) == fdtest::read_corpus("fundeps.fd"),
            "output differs from golden");
  o.require(check_program(er.program, base).ok(), "output does not typecheck");

  o.require(node_eq(er.env.method_type("fdFwd"),
                    type("forall t:*. forall u:*. forall v:*. F t u -> F t v -> u ~ v")),
            "fdFwd type");
  o.require(node_eq(er.env.method_type("fdBwd"),
                    type("forall t:*. forall u:*. forall v:*. F t u -> F v u -> t ~ v")),
            "fdBwd type");

  std::set<std::vector<std::string>> pairs;
  for (const auto& body : er.env.instances("fdFwd")) pairs.insert(guard_heads(body));
  std::set<std::vector<std::string>> want = {
      {"FIB", "FIB"}, {"FIB", "FMM"}, {"FMM", "FIB"}, {"FMM", "FMM"}};
  o.require(pairs == want, "fdFwd instances do not cover the 4 constructor pairs");
  const FunctionReport* fr = check_hssdi(er.env).find("fdFwd");
  o.require(fr && fr->ok() && fr->missing.empty(), "HSSDI rejects fdFwd");
}

// 3 ------------------------------------------------------------------------

void fundep_violation(Outcome& o) {
  ElabReport er =
      fdtest::elaborate_text(fdtest::read_corpus("fundeps_bad.hsk"), fdtest::prelude());
  o.require(!er.ok(), "erroneous instance accepted");
  bool found = std::any_of(er.diagnostics.begin(), er.diagnostics.end(),
                           [](const Diagnostic& d) { return d.code == "FundepViolation"; });
  o.require(found, "no FundepViolation diagnostic");
  o.require(er.program.empty(), "declarations emitted despite the error");
}

// 4 ------------------------------------------------------------------------

const char* kFibCall = "FIB [Int] [Bool] refl(Int) refl(Bool)";

void improvement(Outcome& o) {
  ElabReport er = fdtest::elaborate_text(fdtest::read_corpus("fundeps.hsk"), fdtest::prelude());
  o.require(er.ok(), "elaboration failed");
  if (!er.ok()) return;
  const LetDef* f = er.env.let("f");
  o.require(f != nullptr, "f missing");
  if (!f) return;
  NodePtr witness = term(std::string("fdFwd [Int] [Bool] [t] (") + kFibCall + ") d",
                         {{"t", true}, {"d", false}});
  o.require(f->body->is(Tag::TyLam) && f->body->kid(1)->is(Tag::Lam) &&
                fdtest::contains_subterm(f->body->kid(1)->kid(1), witness),
            "f does not use the fdFwd witness");

  NodePtr call = term(std::string("f [Bool] (") + kFibCall + ") True");
  o.require(check_term(er.env, call, type("Bool")).ok(), "call does not typecheck");
  WhnfResult r = whnf(er.env, call, 10000);
  o.require(r.kind == WhnfResult::Value && node_eq(r.node, term("False")),
            "f [Bool] FIB True does not evaluate to False");
}

// 5 ------------------------------------------------------------------------

void metatheory_fuzz(Outcome& o) {
  const std::vector<std::string> props = {
      "progress",           "preservation",        "value_soundness",
      "canonicity_coercion", "canonicity_function", "uniqueness_mod_zero",
      "types_are_values"};
  std::vector<Env> envs;
  for (PreludeKind k : all_preludes()) envs.push_back(fdtest::prelude(k));
  const std::size_t njobs = envs.size() * props.size();
  std::vector<PropResult> results(njobs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j; (j = next++) < njobs;) {
      std::size_t i = j / props.size();
      GenConfig cfg;
      cfg.seed = 42;
      cfg.size = 30;
      cfg.prelude = all_preludes()[i];
      results[j] = run_property(props[j % props.size()], envs[i], cfg, 1000);
    }
  };
  std::vector<std::thread> pool;
  unsigned width = std::max(1u, std::thread::hardware_concurrency());
  for (unsigned t = 0; t < width; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  std::size_t total = 0;
  for (const auto& r : results) {
    total += r.cases;
    o.require(r.passed, r.name + " [" + r.prelude + "]: " + r.detail + " on " +
                            r.counterexample);
    o.require(r.cases == 1000 && r.skipped == 0,
              r.name + " [" + r.prelude + "] ran " + std::to_string(r.cases) +
                  " cases with " + std::to_string(r.skipped) + " skipped");
  }
  o.require(total == props.size() * envs.size() * 1000, "case count");
}

// 6 ------------------------------------------------------------------------

void subst_laws(Outcome& o) {
  fdtest::SyntaxGen g(20261016);
  for (int i = 0; i < 10000 && o.ok; ++i) {
    NodePtr n = g.node(1 + i % 24, 4);
    fdtest::SubstSpec s1 = g.subst(4);
    fdtest::SubstSpec s2 = g.subst(8);
    Subst a = s1.build();
    Subst b = s2.build();
    std::string at = " (pair " + std::to_string(i) + ")";
    o.require(node_eq(Subst::identity().apply(n), n), "identity law" + at);
    NodePtr once = a.apply(n);
    o.require(node_eq(once, fdtest::oracle_apply(n, s1)), "apply vs oracle" + at);
    NodePtr twice = fdtest::oracle_apply(fdtest::oracle_apply(n, s1), s2);
    o.require(node_eq(Subst::compose(a, b).apply(n), twice), "composition law" + at);
    o.require(node_eq(b.apply(once), twice), "sequential apply" + at);
  }
}

// 7 ------------------------------------------------------------------------

void specialization(Outcome& o) {
  struct Site {
    PreludeKind prelude;
    std::string call;
  };
  const std::vector<Site> sites = {
      {PreludeKind::EqOrd, "lte [Bool] dOrdBool True False"},
      {PreludeKind::EqOrd, "lte [Bool] (OrdBool [Bool] refl(Bool)) False False"},
      {PreludeKind::EqOrd, "eq [Bool] (EqBool [Bool] refl(Bool)) True True"},
      {PreludeKind::EqOrd, "eq [Bool] (ordEq [Bool] dOrdBool) False True"},
      {PreludeKind::Fundep, std::string("f [Bool] (") + kFibCall + ") True"},
      {PreludeKind::Fundep, std::string("f [Bool] (") + kFibCall + ") False"},
  };
  for (const auto& s : sites) {
    Env env = fdtest::prelude(s.prelude);
    NodePtr m = term(s.call);
    auto spec = specialize(env, m);
    o.require(spec.ok(), s.call + ": specialize failed");
    if (!spec.ok()) continue;
    o.require(check_no_zero_syntactic(env, *spec), s.call + ": 0 remains");
    auto t0 = infer_term(env, m);
    auto t1 = infer_term(env, *spec);
    o.require(t0.ok() && t1.ok() && t0->is_exact() && t1->is_exact() &&
                  node_eq(t0->type, t1->type),
              s.call + ": type changed");
    WhnfResult w0 = whnf(env, m);
    WhnfResult w1 = whnf(env, *spec);
    o.require(w0.kind == WhnfResult::Value && w1.kind == WhnfResult::Value &&
                  node_eq(w0.node, w1.node),
              s.call + ": whnf disagrees");
  }
}

// 8 ------------------------------------------------------------------------

bool has_step(const Env& env, const NodePtr& m, Rule r, const NodePtr& expect) {
  for (const auto& s : step_all(env, m))
    if (s.rule == r && s.path.empty() && node_eq(s.result, expect)) return true;
  return false;
}

NodePtr raw(Tag t) {
  return std::make_shared<const Node>(t, 0, "", NodeList(3, zero()), nullptr);
}

void reduction_table(Outcome& o) {
  Env env = fdtest::prelude(PreludeKind::EqOrd);
  struct Row {
    Rule rule;
    std::string redex;
    std::string result;
  };
  const std::vector<Row> rows = {
      {Rule::BetaArrow, "(\\x:Bool. not x) True", "not True"},
      {Rule::BetaForall, "(/\\a:*. \\x:a. x) [Bool]", "\\x:Bool. x"},
      {Rule::DeltaRefl, "sym refl(Bool)", "refl(Bool)"},
      {Rule::DeltaTrans, "refl(Bool) ;; refl(Bool)", "refl(Bool)"},
      {Rule::DeltaApp, "refl(Maybe) @ refl(Bool)", "refl(Maybe Bool)"},
      {Rule::DeltaInst, "refl(forall a:*. a -> a) @[Bool]", "refl(Bool -> Bool)"},
      {Rule::DeltaFst, "refl(Maybe Bool).1", "refl(Maybe)"},
      {Rule::DeltaSnd, "refl(Maybe Bool).2", "refl(Bool)"},
      {Rule::DeltaSim, "sim(refl(Bool), refl(Maybe Bool))", "refl(Bool ~ Maybe Bool)"},
      {Rule::DeltaForall, "forallc a:*. refl(a -> a)", "refl(forall a:*. a -> a)"},
      {Rule::DeltaCast, "True |> refl(Bool)", "True"},
      {Rule::BetaZero1, "0 <+> True", "True"},
      {Rule::BetaZero2, "False <+> 0", "False"},
      {Rule::DeltaIf1, "if Just [Bool] True is Just [Bool] then not else False",
       "not True"},
      {Rule::DeltaIf2, "if Nothing [Bool] is Just [Bool] then not else False", "False"},
      {Rule::DeltaGuard1,
       "guard EqBool [Bool] refl(Bool) is EqBool [Bool] then \\h:Bool ~ Bool. True",
       "(\\h:Bool ~ Bool. True) refl(Bool)"},
      {Rule::DeltaGuard2, "guard True is False then True", "0"},
      {Rule::BetaLet, "not", ""},
      {Rule::BetaOpen, "eq", ""},
      {Rule::Kappa, "True |> (refl(Bool) <+> refl(Bool))",
       "(True |> refl(Bool)) <+> (True |> refl(Bool))"},
      {Rule::Kappa, "(not <+> (\\x:Bool. x)) True", "not True <+> (\\x:Bool. x) True"},
  };
  std::set<Rule> seen;
  for (const auto& row : rows) {
    NodePtr m = term(row.redex);
    NodePtr want;
    if (row.rule == Rule::BetaLet) {
      want = env.let("not")->body;
    } else if (row.rule == Rule::BetaOpen) {
      const NodeList& inst = env.instances("eq");
      o.require(inst.size() == 1, "eq should have one instance");
      want = choice(zero(), inst.front());
    } else {
      want = term(row.result);
    }
    bool hit = has_step(env, m, row.rule, want);
    o.require(hit, std::string(rule_name(row.rule)) + " on " + row.redex);
    if (hit) seen.insert(row.rule);
  }

  // ζ through every A-frame position.
  const std::vector<std::string> frames = {
      "0 True",
      "0 [Bool]",
      "if 0 is True then True else False",
      "guard 0 is True then True",
      "True |> 0",
      "sym 0",
      "(0).1",
      "(0).2",
      "0 @[Bool]",
      "forallc a:*. 0",
      "0 ;; refl(Bool)",
      "refl(Bool) ;; 0",
      "0 @ refl(Bool)",
      "refl(Maybe) @ 0",
      "sim(0, True)",
      "sim(True, 0)",
  };
  std::set<std::pair<Tag, int>> covered;
  for (const auto& f : frames) {
    NodePtr m = term(f);
    for (int h : a_holes(m))
      if (m->kid(h)->is(Tag::Zero)) covered.insert({m->tag(), h});
    bool hit = has_step(env, m, Rule::Zeta, zero());
    o.require(hit, "ζ on " + f);
    if (hit) seen.insert(Rule::Zeta);
  }
  for (int t = 0; t < kTagCount; ++t) {
    Tag tag = static_cast<Tag>(t);
    for (int h : a_holes(raw(tag)))
      o.require(covered.count({tag, h}) == 1,
                "no ζ case for hole " + std::to_string(h) + " of " +
                    std::string(tag_name(tag)));
  }

  for (int r = 0; r < kRuleCount; ++r)
    o.require(seen.count(static_cast<Rule>(r)) == 1,
              "rule " + std::string(rule_name(static_cast<Rule>(r))) + " not exercised");
}

}  // namespace

int main() {
  bool ok = true;
  ok &= run(1, "golden elaboration Eq/Ord", 1, golden_eq_ord);
  ok &= run(2, "golden elaboration fundeps", 1, golden_fundeps);
  ok &= run(3, "erroneous instance rejected", 1, fundep_violation);
  ok &= run(4, "improvement typing and evaluation of f", 1, improvement);
  ok &= run(5, "metatheory fuzz", 120, metatheory_fuzz);
  ok &= run(6, "substitution laws", 10, subst_laws);
  ok &= run(7, "specialization", 5, specialization);
  ok &= run(8, "reduction table", 1, reduction_table);
  return ok ? 0 : 1;
}
