#include "fd/typing.hpp"

#include "fd/core_text.hpp"
#include "fd/subst.hpp"

namespace fd {

std::vector<std::string> context_names(const Context& ctx) {
  std::vector<std::string> out;
  out.reserve(ctx.size());
  for (const auto& b : ctx) out.push_back(b.name.empty() ? "_" : b.name);
  return out;
}

namespace {

bool well_formed_kind(const NodePtr& k) {
  if (k->is(Tag::Star)) return true;
  return k->is(Tag::KArrow) && well_formed_kind(k->kid(0)) &&
         well_formed_kind(k->kid(1));
}

class Checker {
 public:
  Checker(const Env& env, Context ctx) : env_(env), ctx_(std::move(ctx)) {}

  [[noreturn]] void err(std::string code, std::string msg,
                        std::string expected = {}, std::string found = {}) {
    Diagnostic d;
    d.code = std::move(code);
    d.message = std::move(msg);
    d.expected = std::move(expected);
    d.found = std::move(found);
    d.path = path_;
    throw FdError(std::move(d));
  }

  std::string show(const NodePtr& n) {
    return print_core(n, context_names(ctx_));
  }

  // Kinding ---------------------------------------------------------------

  NodePtr kind(const NodePtr& t) {
    switch (t->tag()) {
      case Tag::TVar: {
        const Binding& b = binding(t->index());
        if (!b.is_type)
          err("SortMismatch", "term variable used as a type", "type variable",
              show(t));
        return b.annot;
      }
      case Tag::TCon: {
        NodePtr k = env_.type_kind(t->name());
        if (!k) err("UnknownConstant", "unknown type constant '" + t->name() + "'");
        return k;
      }
      case Tag::TApp: {
        NodePtr kf = at(0, [&] { return kind(t->kid(0)); });
        NodePtr ka = at(1, [&] { return kind(t->kid(1)); });
        if (!kf->is(Tag::KArrow))
          err("KindMismatch", "type applied to too many arguments",
              "arrow kind", print_core(kf));
        if (!node_eq(kf->kid(0), ka))
          err("KindMismatch", "argument kind mismatch in " + show(t),
              print_core(kf->kid(0)), print_core(ka));
        return kf->kid(1);
      }
      case Tag::Forall: {
        check_kind_wf(t->kid(0));
        NodePtr kb = under(true, t->kid(0), t->name(),
                           [&] { return at(1, [&] { return kind(t->kid(1)); }); });
        if (!kb->is(Tag::Star))
          err("KindMismatch", "quantified type must have kind *", "*",
              print_core(kb));
        return star();
      }
      case Tag::EqTy: {
        check_kind_wf(t->kid(2));
        NodePtr kl = at(0, [&] { return kind(t->kid(0)); });
        NodePtr kr = at(1, [&] { return kind(t->kid(1)); });
        if (!node_eq(kl, t->kid(2)) || !node_eq(kr, t->kid(2)))
          err("KindMismatch", "equality sides must have the annotated kind",
              print_core(t->kid(2)),
              print_core(node_eq(kl, t->kid(2)) ? kr : kl));
        return star();
      }
      default:
        err("SortMismatch", "expected a type", "type", show(t));
    }
  }

  void check_kind_wf(const NodePtr& k) {
    if (!well_formed_kind(k))
      err("SortMismatch", "expected a kind", "kind", show(k));
  }

  void check_star(const NodePtr& t) {
    NodePtr k = kind(t);
    if (!k->is(Tag::Star))
      err("KindMismatch", "type must have kind *", "*", print_core(k));
  }

  // Patterns --------------------------------------------------------------

  PatternType pattern(const Pattern& p, const NodePtr& scrut) {
    const CtorSig* c = env_.ctor(p.head);
    if (!c) err("UnknownConstant", "unknown constructor '" + p.head + "'");
    Telescope tel = split_telescope(c->type);
    std::size_t n = tel.binder_kinds.size();
    std::size_t m = p.type_args.size();
    if (m > n)
      err("PatternMismatch", "too many type arguments in pattern for '" +
                                 p.head + "'");
    for (std::size_t j = 0; j < m; ++j) {
      NodePtr k = kind(p.type_args[j]);
      if (!node_eq(k, tel.binder_kinds[j]))
        err("KindMismatch", "pattern type argument kind mismatch",
            print_core(tel.binder_kinds[j]), print_core(k));
    }
    std::uint32_t r = static_cast<std::uint32_t>(n - m);
    std::vector<SubstAction> acts;
    for (std::uint32_t i = 0; i < r; ++i) acts.push_back(SubstAction::rename(i));
    for (std::size_t j = 0; j < m; ++j)
      acts.push_back(SubstAction::replace(shift(p.type_args[m - 1 - j], r)));
    Subst s(std::move(acts), r);
    PatternType out;
    out.residual_kinds.assign(tel.binder_kinds.begin() + m, tel.binder_kinds.end());
    out.residual_names.assign(tel.binder_names.begin() + m, tel.binder_names.end());
    for (const auto& a : tel.args) out.arg_types.push_back(s.apply(a));
    NodePtr res = s.apply(tel.result);
    if (scrut && !node_eq(res, shift(scrut, r)))
      err("PatternMismatch",
          "pattern '" + p.head + "' does not match the scrutinee type",
          show(scrut), print_core(res));
    return out;
  }

  /// Scrutinee type implied by a pattern alone (when the scrutinee is 0).
  NodePtr pattern_result(const Pattern& p) {
    const CtorSig* c = env_.ctor(p.head);
    if (!c) err("UnknownConstant", "unknown constructor '" + p.head + "'");
    Telescope tel = split_telescope(c->type);
    std::size_t n = tel.binder_kinds.size();
    std::size_t m = p.type_args.size();
    if (m > n) err("PatternMismatch", "too many type arguments in pattern");
    std::vector<SubstAction> acts;
    std::uint32_t r = static_cast<std::uint32_t>(n - m);
    for (std::uint32_t i = 0; i < r; ++i) acts.push_back(SubstAction::rename(i));
    for (std::size_t j = 0; j < m; ++j)
      acts.push_back(SubstAction::replace(shift(p.type_args[m - 1 - j], r)));
    NodePtr res = Subst(std::move(acts), r).apply(tel.result);
    auto s = strengthen(res, r);
    if (!s) err("Undetermined", "cannot determine the scrutinee type");
    return *s;
  }

  NodePtr consequent_type(const PatternType& pt, const NodePtr& result) {
    Telescope t;
    t.binder_kinds = pt.residual_kinds;
    t.binder_names = pt.residual_names;
    t.args = pt.arg_types;
    t.result = shift(result, static_cast<std::uint32_t>(pt.residual_kinds.size()));
    return build_telescope(t);
  }

  NodePtr peel(const PatternType& pt, NodePtr rho) {
    for (const auto& k : pt.residual_kinds) {
      if (!rho->is(Tag::Forall) || !node_eq(rho->kid(0), k))
        err("PatternMismatch", "consequent does not bind the pattern's type arguments",
            "forall", print_core(rho));
      rho = rho->kid(1);
    }
    for (const auto& a : pt.arg_types) {
      if (!is_arrow(rho) || !node_eq(arrow_dom(rho), a))
        err("PatternMismatch", "consequent does not accept the pattern's fields",
            print_core(a), print_core(rho));
      rho = arrow_cod(rho);
    }
    auto s = strengthen(rho, static_cast<std::uint32_t>(pt.residual_kinds.size()));
    if (!s)
      err("Escape", "result type mentions a pattern-bound type variable",
          {}, print_core(rho));
    return *s;
  }

  PatternType scrutinee(const NodePtr& m, bool want_open) {
    TypeResult st = at(0, [&] { return infer(m->kid(0)); });
    NodePtr sty = st.is_exact() ? st.type : pattern_result(m->pattern());
    if (want_open ? !is_open_head(env_, sty) : !is_data_head(env_, sty))
      err(want_open ? "NotOpen" : "NotData",
          std::string(want_open ? "guard" : "if") +
              " scrutinee must have " + (want_open ? "an open" : "a data") +
              " type",
          {}, show(sty));
    return pattern(m->pattern(), sty);
  }

  // Terms -------------------------------------------------------------------

  TypeResult infer(const NodePtr& m) {
    switch (m->tag()) {
      case Tag::Var: {
        const Binding& b = binding(m->index());
        if (b.is_type)
          err("SortMismatch", "type variable used as a term", "term", show(m));
        return TypeResult::exactly(shift(b.annot, m->index() + 1));
      }
      case Tag::Con: {
        NodePtr t = env_.term_type(m->name());
        if (!t) err("UnknownConstant", "unknown term constant '" + m->name() + "'");
        return TypeResult::exactly(shift(t, static_cast<std::uint32_t>(ctx_.size())));
      }
      case Tag::Lam: {
        at(0, [&] { check_star(m->kid(0)); return 0; });
        TypeResult rb = under(false, m->kid(0), m->name(),
                              [&] { return at(1, [&] { return infer(m->kid(1)); }); });
        if (!rb.is_exact()) return TypeResult::partial();
        auto cod = strengthen(rb.type, 1);
        if (!cod) err("Escape", "result type mentions a term variable");
        return TypeResult::exactly(arrow(m->kid(0), *cod));
      }
      case Tag::TyLam: {
        check_kind_wf(m->kid(0));
        TypeResult rb = under(true, m->kid(0), m->name(),
                              [&] { return at(1, [&] { return infer(m->kid(1)); }); });
        if (!rb.is_exact()) return TypeResult::partial();
        return TypeResult::exactly(forall_(m->kid(0), rb.type, m->name()));
      }
      case Tag::App: {
        TypeResult rf = at(0, [&] { return infer(m->kid(0)); });
        if (rf.is_exact()) {
          if (!is_arrow(rf.type))
            err("NotAFunction", "applied term is not a function", "function type",
                show(rf.type));
          at(1, [&] { check(m->kid(1), arrow_dom(rf.type)); return 0; });
          return TypeResult::exactly(arrow_cod(rf.type));
        }
        if (rf.type && is_arrow(rf.type)) {
          NodePtr dom = arrow_dom(rf.type);
          at(1, [&] { cast_subject(m->kid(1), dom); return 0; });
          return shaped(arrow_cod(rf.type));
        }
        if (rf.type && rf.type->is(Tag::TApp) && is_hole(rf.type->kid(0))) {
          at(1, [&] { return infer(m->kid(1)); });
          return shaped(rf.type->kid(1));
        }
        at(1, [&] { return infer(m->kid(1)); });
        return rf.kind == TypeResult::AnyType ? TypeResult::any()
                                              : TypeResult::partial();
      }
      case Tag::TyApp: {
        TypeResult rf = at(0, [&] { return infer(m->kid(0)); });
        NodePtr k = at(1, [&] { return kind(m->kid(1)); });
        if (!rf.type) return rf;
        if (!rf.is_exact()) {
          if (!rf.type->is(Tag::Forall)) return TypeResult::partial();
          meet_or(rf.type->kid(0), k, "KindMismatch", "type argument kind mismatch",
                  true);
          return shaped(instantiate(rf.type->kid(1), m->kid(1)));
        }
        if (!rf.type->is(Tag::Forall))
          err("NotPolymorphic", "type applied to a non-polymorphic term",
              "forall type", show(rf.type));
        if (!node_eq(rf.type->kid(0), k))
          err("KindMismatch", "type argument kind mismatch",
              print_core(rf.type->kid(0)), print_core(k));
        return TypeResult::exactly(instantiate(rf.type->kid(1), m->kid(1)));
      }
      case Tag::Cast: {
        CoercionType ct = at(1, [&] { return cast_coercion(m->kid(1)); });
        at(0, [&] { cast_subject(m->kid(0), ct.lhs); return 0; });
        return shaped(ct.rhs);
      }
      case Tag::If: {
        PatternType pt = scrutinee(m, false);
        TypeResult ra = at(2, [&] { return infer(m->kid(2)); });
        if (ra.is_exact()) {
          at(1, [&] { check(m->kid(1), consequent_type(pt, ra.type)); return 0; });
          return ra;
        }
        TypeResult rc = at(1, [&] { return infer(m->kid(1)); });
        if (rc.is_exact()) {
          NodePtr u = at(1, [&] { return peel(pt, rc.type); });
          at(2, [&] { check(m->kid(2), u); return 0; });
          return TypeResult::exactly(u);
        }
        if (ra.kind == TypeResult::AnyType && rc.kind == TypeResult::AnyType)
          return TypeResult::any();
        return TypeResult::partial();
      }
      case Tag::Guard: {
        PatternType pt = scrutinee(m, true);
        TypeResult rc = at(1, [&] { return infer(m->kid(1)); });
        if (!rc.is_exact()) return rc;
        return TypeResult::exactly(at(1, [&] { return peel(pt, rc.type); }));
      }
      case Tag::Zero:
        return TypeResult::any();
      case Tag::Choice: {
        TypeResult rl = at(0, [&] { return infer(m->kid(0)); });
        if (rl.is_exact()) {
          at(1, [&] { check(m->kid(1), rl.type); return 0; });
          return rl;
        }
        TypeResult rr = at(1, [&] { return infer(m->kid(1)); });
        if (rr.is_exact()) {
          if (rl.kind == TypeResult::Partial)
            at(0, [&] { check(m->kid(0), rr.type); return 0; });
          return rr;
        }
        if (rl.kind == TypeResult::AnyType) return rr;
        if (rr.kind == TypeResult::AnyType) return rl;
        if (rl.type && rr.type)
          return shaped(meet_or(rl.type, rr.type, "TypeMismatch",
                                "choice sides differ", false));
        return TypeResult::partial(rl.type ? rl.type : rr.type);
      }
      default:
        break;
    }
    if (m->is_coercion_form()) {
      CoercionType ct = coerce(m);
      return shaped(eqty(ct.lhs, ct.rhs, ct.kind));
    }
    err("SortMismatch", "expected a term", "term", show(m));
  }

  void check(const NodePtr& m, const NodePtr& expected) {
    switch (m->tag()) {
      case Tag::Zero:
        return;
      case Tag::Choice:
        at(0, [&] { check(m->kid(0), expected); return 0; });
        at(1, [&] { check(m->kid(1), expected); return 0; });
        return;
      case Tag::Lam: {
        if (!is_arrow(expected))
          err("TypeMismatch", "lambda checked against a non-function type",
              show(expected), "function");
        if (!node_eq(m->kid(0), arrow_dom(expected)))
          err("TypeMismatch", "lambda annotation differs from expected domain",
              show(arrow_dom(expected)), show(m->kid(0)));
        at(0, [&] { check_star(m->kid(0)); return 0; });
        NodePtr cod = shift(arrow_cod(expected), 1);
        under(false, m->kid(0), m->name(), [&] {
          return at(1, [&] { check(m->kid(1), cod); return 0; });
        });
        return;
      }
      case Tag::TyLam: {
        if (!expected->is(Tag::Forall) || !node_eq(expected->kid(0), m->kid(0)))
          err("TypeMismatch", "type abstraction checked against a different type",
              show(expected), "forall");
        under(true, m->kid(0), m->name(), [&] {
          return at(1, [&] { check(m->kid(1), expected->kid(1)); return 0; });
        });
        return;
      }
      case Tag::If: {
        PatternType pt = scrutinee(m, false);
        at(1, [&] { check(m->kid(1), consequent_type(pt, expected)); return 0; });
        at(2, [&] { check(m->kid(2), expected); return 0; });
        return;
      }
      case Tag::Guard: {
        PatternType pt = scrutinee(m, true);
        at(1, [&] { check(m->kid(1), consequent_type(pt, expected)); return 0; });
        return;
      }
      case Tag::Cast: {
        CoercionType ct = at(1, [&] { return cast_coercion(m->kid(1)); });
        if (!meet(ct.rhs, expected))
          err("TypeMismatch", "type mismatch", show(expected), show(ct.rhs));
        at(0, [&] { cast_subject(m->kid(0), ct.lhs); return 0; });
        return;
      }
      case Tag::App: {
        TypeResult rf = at(0, [&] { return infer(m->kid(0)); });
        if (rf.is_exact()) {
          if (!is_arrow(rf.type))
            err("NotAFunction", "applied term is not a function", "function type",
                show(rf.type));
          at(1, [&] { check(m->kid(1), arrow_dom(rf.type)); return 0; });
          if (!node_eq(arrow_cod(rf.type), expected))
            err("TypeMismatch", "type mismatch", show(expected),
                show(arrow_cod(rf.type)));
          return;
        }
        if (rf.kind == TypeResult::AnyType) {
          at(1, [&] { return infer(m->kid(1)); });
          return;
        }
        TypeResult ra = at(1, [&] { return infer(m->kid(1)); });
        if (!ra.is_exact()) err("Undetermined", "cannot determine argument type");
        at(0, [&] { check(m->kid(0), arrow(ra.type, expected)); return 0; });
        return;
      }
      default:
        break;
    }
    if (m->is_coercion_form()) {
      check_coercion(m, expected);
      return;
    }
    TypeResult r = infer(m);
    if (r.kind == TypeResult::AnyType) return;
    if (r.kind == TypeResult::Partial) {
      if (!r.type)
        err("Undetermined", "cannot determine the type of this term", show(expected));
      if (!meet(r.type, expected))
        err("TypeMismatch", "type mismatch", show(expected), show(r.type));
      return;
    }
    if (!node_eq(r.type, expected))
      err("TypeMismatch", "type mismatch", show(expected), show(r.type));
  }

  // Coercions ---------------------------------------------------------------

  // Coercion types may contain holes standing for the unconstrained type of a
  // 0 subterm. A hole meets anything.

  static const NodePtr& hole() {
    static const NodePtr h = tcon("?");
    return h;
  }
  static bool is_hole(const NodePtr& t) {
    return t->is(Tag::TCon) && t->name() == "?";
  }
  static bool has_hole(const NodePtr& t) {
    if (is_hole(t)) return true;
    for (std::size_t i = 0; i < t->arity(); ++i)
      if (has_hole(t->kid(i))) return true;
    return false;
  }
  static NodePtr meet(const NodePtr& a, const NodePtr& b) {
    if (is_hole(a)) return b;
    if (is_hole(b)) return a;
    if (a->tag() != b->tag() || a->arity() != b->arity() ||
        a->index() != b->index() ||
        (a->is(Tag::TCon) && a->name() != b->name()))
      return nullptr;
    if (!has_hole(a) && !has_hole(b)) return node_eq(a, b) ? a : nullptr;
    NodeList kids;
    for (std::size_t i = 0; i < a->arity(); ++i) {
      NodePtr k = meet(a->kid(i), b->kid(i));
      if (!k) return nullptr;
      kids.push_back(std::move(k));
    }
    return rebuild(a, std::move(kids));
  }
  NodePtr meet_or(const NodePtr& a, const NodePtr& b, const char* code,
                  const char* what, bool kinds) {
    NodePtr m = meet(a, b);
    if (!m)
      err(code, what, kinds ? print_core(a) : show(a),
          kinds ? print_core(b) : show(b));
    return m;
  }
  NodePtr kind_or_hole(const NodePtr& t) {
    return has_hole(t) ? hole() : kind(t);
  }

  static TypeResult shaped(const NodePtr& t) {
    if (is_hole(t)) return TypeResult::any();
    if (has_hole(t)) return TypeResult::partial(t);
    return TypeResult::exactly(t);
  }

  CoercionType cast_coercion(const NodePtr& c) {
    CoercionType ct = coerce(c);
    ct.kind = meet_or(ct.kind, star(), "KindMismatch",
                      "cast coercion must relate types of kind *", true);
    return ct;
  }

  void cast_subject(const NodePtr& m, const NodePtr& lhs) {
    if (!has_hole(lhs)) {
      check(m, lhs);
      return;
    }
    TypeResult r = infer(m);
    if (r.kind == TypeResult::Partial && !r.type)
      err("Undetermined", "cannot determine the type of this term");
    if (r.type) meet_or(r.type, lhs, "TypeMismatch", "type mismatch", false);
  }

  void check_coercion(const NodePtr& c, const NodePtr& expected) {
    CoercionType ct = coerce(c);
    if (!meet(eqty(ct.lhs, ct.rhs, ct.kind), expected))
      err("TypeMismatch", "type mismatch", show(expected),
          show(eqty(ct.lhs, ct.rhs, ct.kind)));
  }

  CoercionType coerce(const NodePtr& c) {
    switch (c->tag()) {
      case Tag::Zero:
        return {hole(), hole(), hole()};
      case Tag::Choice: {
        CoercionType a = at(0, [&] { return coerce(c->kid(0)); });
        CoercionType b = at(1, [&] { return coerce(c->kid(1)); });
        return {meet_or(a.lhs, b.lhs, "TypeMismatch", "choice sides differ", false),
                meet_or(a.rhs, b.rhs, "TypeMismatch", "choice sides differ", false),
                meet_or(a.kind, b.kind, "KindMismatch", "choice sides differ", true)};
      }
      case Tag::Refl: {
        NodePtr k = at(0, [&] { return kind(c->kid(0)); });
        return {c->kid(0), c->kid(0), k};
      }
      case Tag::Sym: {
        CoercionType t = at(0, [&] { return coerce(c->kid(0)); });
        return {t.rhs, t.lhs, t.kind};
      }
      case Tag::Trans: {
        CoercionType a = at(0, [&] { return coerce(c->kid(0)); });
        CoercionType b = at(1, [&] { return coerce(c->kid(1)); });
        meet_or(a.rhs, b.lhs, "CoercionMismatch", "transitivity endpoints differ",
                false);
        NodePtr k = meet_or(a.kind, b.kind, "KindMismatch",
                            "transitivity kinds differ", true);
        return {a.lhs, b.rhs, k};
      }
      case Tag::CApp: {
        CoercionType a = at(0, [&] { return coerce(c->kid(0)); });
        CoercionType b = at(1, [&] { return coerce(c->kid(1)); });
        NodePtr k = hole();
        if (!is_hole(a.kind)) {
          if (!a.kind->is(Tag::KArrow))
            err("KindMismatch", "coercion application head must have arrow kind",
                "arrow kind", print_core(a.kind));
          meet_or(a.kind->kid(0), b.kind, "KindMismatch",
                  "coercion application argument kind mismatch", true);
          k = a.kind->kid(1);
        }
        return {tapp(a.lhs, b.lhs), tapp(a.rhs, b.rhs), k};
      }
      case Tag::Fst:
      case Tag::Snd: {
        CoercionType a = at(0, [&] { return coerce(c->kid(0)); });
        int side = c->is(Tag::Fst) ? 0 : 1;
        auto project = [&](const NodePtr& t) {
          if (is_hole(t)) return hole();
          if (!t->is(Tag::TApp))
            err("CoercionMismatch", "projection needs type applications on both sides",
                "application ~ application", show(eqty(a.lhs, a.rhs, a.kind)));
          return t->kid(side);
        };
        NodePtr l = project(a.lhs);
        NodePtr r = project(a.rhs);
        NodePtr k = meet_or(kind_or_hole(l), kind_or_hole(r), "KindMismatch",
                            "projected sides have different kinds", true);
        return {l, r, k};
      }
      case Tag::Univ: {
        check_kind_wf(c->kid(0));
        CoercionType b = under(true, c->kid(0), c->name(), [&] {
          return at(1, [&] { return coerce(c->kid(1)); });
        });
        return {forall_(c->kid(0), b.lhs, c->name()),
                forall_(c->kid(0), b.rhs, c->name()), b.kind};
      }
      case Tag::CInst: {
        CoercionType a = at(0, [&] { return coerce(c->kid(0)); });
        NodePtr k = at(1, [&] { return kind(c->kid(1)); });
        auto inst = [&](const NodePtr& t) {
          if (is_hole(t)) return hole();
          if (!t->is(Tag::Forall))
            err("CoercionMismatch",
                "instantiation needs quantified types of the same kind on both sides",
                "forall ~ forall", show(eqty(a.lhs, a.rhs, a.kind)));
          if (!node_eq(k, t->kid(0)))
            err("KindMismatch", "instantiation kind mismatch", print_core(t->kid(0)),
                print_core(k));
          return instantiate(t->kid(1), c->kid(1));
        };
        return {inst(a.lhs), inst(a.rhs), a.kind};
      }
      case Tag::Sim: {
        CoercionType a = at(0, [&] { return coerce(c->kid(0)); });
        CoercionType b = at(1, [&] { return coerce(c->kid(1)); });
        NodePtr k = meet_or(a.kind, b.kind, "KindMismatch",
                            "sim sides have different kinds", true);
        return {eqty(a.lhs, b.lhs, k), eqty(a.rhs, b.rhs, k), star()};
      }
      default:
        break;
    }
    TypeResult r = infer(c);
    if (!r.is_exact()) return {hole(), hole(), hole()};
    if (!r.type->is(Tag::EqTy))
      err("TypeMismatch", "expected a coercion", "equality type", show(r.type));
    return {r.type->kid(0), r.type->kid(1), r.type->kid(2)};
  }

  // Declarations --------------------------------------------------------------

  void decl(const Decl& d) {
    switch (d.kind) {
      case DeclKind::Data:
      case DeclKind::OpenType:
        check_kind_wf(d.type);
        break;
      case DeclKind::Ctor:
      case DeclKind::OpenCtor: {
        check_star(d.type);
        Telescope t = split_telescope(d.type);
        auto head = type_head_name(t.result);
        bool open = d.kind == DeclKind::OpenCtor;
        bool good = head && (open ? env_.is_open_type(*head)
                                  : env_.is_data_type(*head));
        if (!good)
          err(open ? "NotOpen" : "NotData",
              std::string("constructor result must be ") +
                  (open ? "an open type" : "a data type"),
              {}, print_core(t.result, t.binder_names));
        break;
      }
      case DeclKind::Method:
        check_star(d.type);
        break;
      case DeclKind::Instance: {
        NodePtr t = env_.method_type(d.name);
        if (!t) err("UnknownMethod", "instance of undeclared method '" + d.name + "'");
        check(d.body, t);
        break;
      }
      case DeclKind::Let:
        check_star(d.type);
        check(d.body, d.type);
        break;
    }
  }

 private:
  const Binding& binding(std::uint32_t i) {
    if (i >= ctx_.size())
      err("UnboundVariable", "unbound variable #" + std::to_string(i - ctx_.size()));
    return ctx_[ctx_.size() - 1 - i];
  }

  template <typename F>
  auto at(int child, F&& f) -> decltype(f()) {
    path_.push_back(child);
    auto r = f();
    path_.pop_back();
    return r;
  }

  template <typename F>
  auto under(bool is_type, const NodePtr& annot, const std::string& name, F&& f)
      -> decltype(f()) {
    ctx_.push_back({is_type, annot, name, false});
    auto r = f();
    ctx_.pop_back();
    return r;
  }

  const Env& env_;
  Context ctx_;
  std::vector<int> path_;
};

}  // namespace

Result<NodePtr> kind_of(const Env& env, const NodePtr& type, const Context& ctx) {
  return capture([&] { return Checker(env, ctx).kind(type); });
}

Result<TypeResult> infer_term(const Env& env, const NodePtr& m,
                              const Context& ctx) {
  return capture([&] { return Checker(env, ctx).infer(m); });
}

Status check_term(const Env& env, const NodePtr& m, const NodePtr& expected,
                  const Context& ctx) {
  return capture([&] {
    Checker c(env, ctx);
    c.check_star(expected);
    c.check(m, expected);
    return Unit{};
  });
}

Result<CoercionType> coerce_type(const Env& env, const NodePtr& eta,
                                 const Context& ctx) {
  return capture([&] { return Checker(env, ctx).coerce(eta); });
}

Result<PatternType> pattern_type(const Env& env, const Pattern& p,
                                 const NodePtr& scrut_type, const Context& ctx) {
  return capture([&] { return Checker(env, ctx).pattern(p, scrut_type); });
}

bool is_data_head(const Env& env, const NodePtr& type) {
  auto h = type_head_name(type);
  return h && env.is_data_type(*h);
}

bool is_open_head(const Env& env, const NodePtr& type) {
  auto h = type_head_name(type);
  return h && env.is_open_type(*h);
}

Result<Env> check_decl(const Env& env, const Decl& d) {
  return capture([&] {
    try {
      Checker(env, {}).decl(d);
      Env out = env;
      out.add(d);
      return out;
    } catch (FdError& e) {
      e.diagnostic().line = d.line;
      e.diagnostic().column = d.column;
      if (e.diagnostic().message.find(d.name) == std::string::npos)
        e.diagnostic().message += " (in " + std::string(decl_keyword(d.kind)) +
                                  " " + d.name + ")";
      throw;
    }
  });
}

Status check_env(const Env& env) {
  return capture([&] {
    Env fresh;
    for (const auto& d : env.decls()) fresh = check_decl(fresh, d).value();
    return Unit{};
  });
}

CheckReport check_program(const Program& p, const Env& base) {
  CheckReport rep{base, {}};
  for (const auto& d : p) {
    auto r = check_decl(rep.env, d);
    if (r.ok()) {
      rep.env = std::move(r).value();
    } else {
      rep.diagnostics.push_back(r.error());
    }
  }
  return rep;
}

}  // namespace fd
