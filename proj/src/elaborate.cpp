#include "fd/elaborate.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "fd/core_text.hpp"
#include "fd/subst.hpp"

namespace fd {

namespace {

NodePtr type_apps(NodePtr m, const NodeList& tys) {
  for (const auto& t : tys) m = tyapp(std::move(m), t);
  return m;
}

NodePtr class_app(const std::string& cls, const NodeList& args) {
  NodePtr t = tcon(cls);
  for (const auto& a : args) t = tapp(t, a);
  return t;
}

std::string lower_first(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::tolower(s[0]));
  return s;
}

// ---------------------------------------------------------------------------
// Terms

class TermElab {
 public:
  TermElab(const ElabState& st, Context ctx) : st_(st), ctx_(std::move(ctx)) {}

  NodePtr check(const STermPtr& s, const NodePtr& expected) {
    auto [m, t] = infer(s, expected);
    if (node_eq(t, expected)) return m;
    auto eta = EqGraph(st_, ctx_).synth(t, expected);
    if (!eta) rethrow(eta.error(), s);
    return cast(m, *eta);
  }

  std::pair<NodePtr, NodePtr> infer(const STermPtr& s, const NodePtr& hint) {
    try {
      return infer_inner(s, hint);
    } catch (FdError& e) {
      if (e.diagnostic().line == 0 && s->line != 0) {
        e.diagnostic().line = s->line;
        e.diagnostic().column = s->column;
      }
      throw;
    }
  }

 private:
  [[noreturn]] void rethrow(Diagnostic d, const STermPtr& s) {
    if (d.line == 0) {
      d.line = s->line;
      d.column = s->column;
    }
    throw FdError(d);
  }

  std::string show(const NodePtr& t) {
    return print_core(t, context_names(ctx_));
  }

  std::pair<NodePtr, NodePtr> infer_inner(const STermPtr& s,
                                          const NodePtr& hint) {
    switch (s->kind) {
      case STerm::Var: {
        if (s->index >= ctx_.size())
          fail("UnboundVariable", "unbound variable #" + std::to_string(s->index));
        const Binding& b = ctx_[ctx_.size() - 1 - s->index];
        if (b.is_type) fail("SortMismatch", "type variable used as a term");
        return {var(s->index), shift(b.annot, s->index + 1)};
      }
      case STerm::Con: {
        NodePtr t = st_.env.term_type(s->name);
        if (!t) fail("UnknownConstant", "unknown constant " + s->name);
        return {con(s->name), t};
      }
      case STerm::Lam: {
        NodePtr cod_hint;
        if (hint && is_arrow(hint)) cod_hint = shift(arrow_cod(hint), 1);
        ctx_.push_back({false, s->type, s->name, false});
        NodePtr body;
        NodePtr bt;
        if (cod_hint) {
          body = check(s->kids[0], cod_hint);
          bt = cod_hint;
        } else {
          std::tie(body, bt) = infer(s->kids[0], nullptr);
        }
        ctx_.pop_back();
        auto down = strengthen(bt, 1);
        if (!down) fail("Escape", "result type mentions the bound variable");
        return {lam(s->type, body, s->name), arrow(s->type, *down)};
      }
      case STerm::TyLam: {
        NodePtr body_hint;
        if (hint && hint->is(Tag::Forall)) body_hint = hint->kid(1);
        ctx_.push_back({true, s->type, s->name, false});
        NodePtr body;
        NodePtr bt;
        if (body_hint) {
          body = check(s->kids[0], body_hint);
          bt = body_hint;
        } else {
          std::tie(body, bt) = infer(s->kids[0], nullptr);
        }
        ctx_.pop_back();
        return {tylam(s->type, body, s->name), forall_(s->type, bt, s->name)};
      }
      case STerm::App: {
        auto [f, ft] = infer(s->kids[0], nullptr);
        if (!is_arrow(ft))
          fail("NotAFunction", "applied term has type " + show(ft));
        NodePtr a = check(s->kids[1], arrow_dom(ft));
        return {app(f, a), arrow_cod(ft)};
      }
      case STerm::TyApp: {
        auto [f, ft] = infer(s->kids[0], nullptr);
        if (!ft->is(Tag::Forall))
          fail("NotPolymorphic", "type-applied term has type " + show(ft));
        auto k = kind_of(st_.env, s->type, ctx_);
        if (!k) throw FdError(k.error());
        if (!node_eq(*k, ft->kid(0)))
          fail("KindMismatch", "type argument " + show(s->type) +
                                   " has the wrong kind");
        return {tyapp(f, s->type), instantiate(ft->kid(1), s->type)};
      }
      case STerm::Hole: {
        auto r = EqGraph(st_, ctx_).resolve(s->type);
        if (!r) rethrow(r.error(), s);
        return {*r, s->type};
      }
      case STerm::Annot:
        return {check(s->kids[0], s->type), s->type};
      case STerm::If:
        return if_term(s);
    }
    fail("Internal", "unknown surface term");
  }

  std::pair<NodePtr, NodePtr> if_term(const STermPtr& s) {
    auto [scrut, st] = infer(s->kids[0], nullptr);
    const STerm* p = s->kids[1].get();
    while (p->kind == STerm::Annot) p = p->kids[0].get();
    Pattern pat;
    NodeList rev_args;
    while (p->kind == STerm::TyApp) {
      rev_args.push_back(p->type);
      p = p->kids[0].get();
    }
    if (p->kind != STerm::Con)
      fail("BadPattern", "a pattern is a constructor applied to types");
    pat.head = p->name;
    pat.type_args.assign(rev_args.rbegin(), rev_args.rend());
    auto pt = pattern_type(st_.env, pat, st, ctx_);
    if (!pt) throw FdError(pt.error());
    auto [cons, ct] = infer(s->kids[2], nullptr);
    NodePtr res = ct;
    const std::size_t r = pt->residual_kinds.size();
    for (std::size_t i = 0; i < r; ++i) {
      if (!res->is(Tag::Forall))
        fail("PatternMismatch", "consequent does not bind the pattern's types");
      res = res->kid(1);
    }
    for (std::size_t i = 0; i < pt->arg_types.size(); ++i) {
      if (!is_arrow(res))
        fail("PatternMismatch", "consequent does not bind the pattern's fields");
      res = arrow_cod(res);
    }
    auto out = strengthen(res, static_cast<std::uint32_t>(r));
    if (!out) fail("Escape", "if result type mentions pattern variables");
    NodePtr alt = check(s->kids[3], *out);
    return {if_(scrut, pat, cons, alt), *out};
  }

  const ElabState& st_;
  Context ctx_;
};

// ---------------------------------------------------------------------------
// Binder telescopes for generated instances

class Builder {
 public:
  int push_type(NodePtr kind, std::string name) {
    frames_.push_back({Frame::TyLam, kind, name, {}, nullptr});
    ctx_.push_back({true, std::move(kind), std::move(name), false});
    return static_cast<int>(ctx_.size()) - 1;
  }
  int push_term(NodePtr type, std::string name, bool guarded = false) {
    frames_.push_back({Frame::Lam, type, name, {}, nullptr});
    ctx_.push_back({false, std::move(type), std::move(name), guarded});
    return static_cast<int>(ctx_.size()) - 1;
  }
  void guard_on(int pos, Pattern p) {
    frames_.push_back({Frame::Guard, nullptr, {}, std::move(p), ref_term(pos)});
  }
  NodePtr ref_type(int pos) const { return tvar(index(pos)); }
  NodePtr ref_term(int pos) const { return var(index(pos)); }
  /// Moves a node defined when the context had `depth` binders.
  NodePtr lift(const NodePtr& n, std::size_t depth) const {
    return shift(n, static_cast<std::uint32_t>(ctx_.size() - depth));
  }
  std::size_t depth() const { return ctx_.size(); }
  const Context& ctx() const { return ctx_; }

  NodePtr close(NodePtr body) const {
    for (auto it = frames_.rbegin(); it != frames_.rend(); ++it) {
      switch (it->kind) {
        case Frame::TyLam:
          body = tylam(it->annot, body, it->name);
          break;
        case Frame::Lam:
          body = lam(it->annot, body, it->name);
          break;
        case Frame::Guard:
          body = guard(it->scrut, it->pattern, body);
          break;
      }
    }
    return body;
  }

 private:
  struct Frame {
    enum Kind { TyLam, Lam, Guard } kind;
    NodePtr annot;
    std::string name;
    Pattern pattern;
    NodePtr scrut;
  };
  std::uint32_t index(int pos) const {
    return static_cast<std::uint32_t>(ctx_.size() - 1 - pos);
  }
  Context ctx_;
  std::vector<Frame> frames_;
};

std::vector<std::string> numbered(const std::string& base, std::size_t n) {
  if (n == 1) return {base};
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back(base + std::to_string(i));
  return out;
}

/// Binds the class parameters and returns their positions.
std::vector<int> bind_params(Builder& b, const ClassInfo& c) {
  std::vector<int> pos;
  for (std::size_t i = 0; i < c.param_names.size(); ++i)
    pos.push_back(b.push_type(c.param_kinds[i], c.param_names[i]));
  return pos;
}

/// `guard d is K [args] then /\v̄. \h̄. \ē.` Returns the depth at which the
/// instance variables are all bound.
std::size_t guard_preamble(Builder& b, const ElabState& st, int dict,
                           const InstanceInfo& inst, const ClassInfo& cls,
                           const std::vector<int>& args, const std::string& h,
                           const std::string& e) {
  Pattern p;
  p.head = inst.ctor;
  for (int a : args) p.type_args.push_back(b.ref_type(a));
  b.guard_on(dict, p);
  for (std::size_t j = 0; j < inst.var_names.size(); ++j)
    b.push_type(inst.var_kinds[j], inst.var_names[j]);
  const std::size_t vdepth = b.depth();
  auto hn = numbered(h, inst.head.size());
  for (std::size_t i = 0; i < inst.head.size(); ++i) {
    b.push_term(eqty(b.lift(inst.head[i], vdepth), b.ref_type(args[i]),
                     cls.param_kinds[i]),
                hn[i]);
  }
  for (const auto& c : inst.context) b.push_term(b.lift(c, vdepth), e);
  (void)st;
  return vdepth;
}

std::vector<std::string> fresh_names(const std::vector<std::string>& taken,
                                     std::size_t n) {
  static const char* pool[] = {"v", "w", "x", "y", "z"};
  std::vector<std::string> out;
  auto used = [&](const std::string& s) {
    return std::find(taken.begin(), taken.end(), s) != taken.end() ||
           std::find(out.begin(), out.end(), s) != out.end();
  };
  for (const char* c : pool) {
    if (out.size() == n) break;
    if (!used(c)) out.push_back(c);
  }
  for (int k = 1; out.size() < n; ++k) {
    std::string s = "q" + std::to_string(k);
    if (!used(s)) out.push_back(s);
  }
  return out;
}

NodePtr close_foralls(NodePtr body, const NodeList& kinds,
                      const std::vector<std::string>& names) {
  for (std::size_t i = kinds.size(); i-- > 0;)
    body = forall_(kinds[i], body, names[i]);
  return body;
}

NodePtr class_kind(const ClassInfo& c) {
  NodePtr k = star();
  for (std::size_t i = c.param_kinds.size(); i-- > 0;)
    k = karrow(c.param_kinds[i], k);
  return k;
}

void infer_var_kinds(const Env& env, const NodePtr& t, const NodePtr& expected,
                     NodeList& kinds) {
  const auto m = static_cast<std::uint32_t>(kinds.size());
  Spine sp = type_spine(t);
  if (sp.head->is(Tag::TVar) && sp.head->index() < m) {
    NodePtr k = expected;
    for (std::size_t i = sp.args.size(); i-- > 0;) k = karrow(star(), k);
    NodePtr& slot = kinds[m - 1 - sp.head->index()];
    if (!slot) slot = k;
    for (const auto& a : sp.args) infer_var_kinds(env, a, star(), kinds);
    return;
  }
  if (sp.head->is(Tag::TCon)) {
    NodePtr k = env.type_kind(sp.head->name());
    for (const auto& a : sp.args) {
      if (k && k->is(Tag::KArrow)) {
        infer_var_kinds(env, a, k->kid(0), kinds);
        k = k->kid(1);
      } else {
        infer_var_kinds(env, a, star(), kinds);
      }
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------

Result<NodePtr> elaborate_term(const ElabState& st, const Context& ctx,
                               const STermPtr& s, const NodePtr& expected) {
  return capture([&] { return TermElab(st, ctx).check(s, expected); });
}

Result<Program> elaborate_class(ElabState& st, const SClassDecl& c) {
  return capture([&] {
    if (st.classes.count(c.name) || st.env.has_type_name(c.name))
      fail("DuplicateName", "type " + c.name + " is already defined");
    ClassInfo info;
    info.name = c.name;
    for (const auto& [n, k] : c.params) {
      info.param_names.push_back(n);
      info.param_kinds.push_back(k);
    }
    info.supers = c.supers;
    info.methods = c.methods;
    const std::size_t n = c.params.size();

    Program out;
    out.push_back({DeclKind::OpenType, c.name, class_kind(info), nullptr});
    NodeList params;
    for (std::size_t i = 0; i < n; ++i)
      params.push_back(tvar(static_cast<std::uint32_t>(n - 1 - i)));
    NodePtr self = class_app(c.name, params);

    for (std::size_t j = 0; j < c.supers.size(); ++j) {
      auto h = type_head_name(c.supers[j]);
      if (!h) fail("NotAClass", "superclass constraint must name a class");
      std::string name = lower_first(c.name) + *h;
      while (std::find(info.super_methods.begin(), info.super_methods.end(),
                       name) != info.super_methods.end())
        name += "'";
      info.super_methods.push_back(name);
      out.push_back({DeclKind::Method, name,
                     close_foralls(arrow(self, c.supers[j]), info.param_kinds,
                                   info.param_names),
                     nullptr});
    }
    for (const auto& [m, ty] : c.methods) {
      out.push_back({DeclKind::Method, m,
                     close_foralls(arrow(self, ty), info.param_kinds,
                                   info.param_names),
                     nullptr});
    }
    for (std::size_t f = 0; f < c.fundeps.size(); ++f) {
      const FunDep& fd = c.fundeps[f];
      FundepInfo fi;
      fi.from = fd.from;
      fi.to = fd.to;
      fi.method = fd.name.empty() ? "fd" + c.name + std::to_string(f + 1)
                                  : fd.name;
      std::vector<bool> det(n, false);
      for (int i : fd.from) det.at(i) = true;
      std::vector<std::size_t> free_pos;
      for (std::size_t i = 0; i < n; ++i)
        if (!det[i]) free_pos.push_back(i);
      const std::size_t r = free_pos.size();
      const std::size_t total = n + r;
      auto qnames = fresh_names(info.param_names, r);
      NodeList first;
      NodeList second;
      NodePtr q_to;
      for (std::size_t i = 0; i < n; ++i)
        first.push_back(tvar(static_cast<std::uint32_t>(total - 1 - i)));
      for (std::size_t i = 0, j = 0; i < n; ++i) {
        if (det[i]) {
          second.push_back(first[i]);
        } else {
          NodePtr q = tvar(static_cast<std::uint32_t>(r - 1 - j++));
          if (static_cast<int>(i) == fd.to) q_to = q;
          second.push_back(q);
        }
      }
      NodePtr body = arrow(class_app(c.name, first),
                           arrow(class_app(c.name, second),
                                 eqty(first[fd.to], q_to,
                                      info.param_kinds[fd.to])));
      NodeList kinds = info.param_kinds;
      std::vector<std::string> names = info.param_names;
      for (std::size_t j = 0; j < r; ++j) {
        kinds.push_back(info.param_kinds[free_pos[j]]);
        names.push_back(qnames[j]);
      }
      out.push_back({DeclKind::Method, fi.method,
                     close_foralls(body, kinds, names), nullptr});
      info.fundeps.push_back(fi);
    }
    st.classes[c.name] = info;
    return out;
  });
}

namespace {

Program absurd_decls(ElabState& st, const NodePtr& kind,
                     std::string& name_out) {
  std::string key = print_core(kind);
  if (auto it = st.absurd.find(key); it != st.absurd.end()) {
    name_out = it->second;
    return {};
  }
  std::string name = "absurdCo";
  for (int k = 1; st.env.has_term_name(name) ||
                  std::any_of(st.absurd.begin(), st.absurd.end(),
                              [&](const auto& e) { return e.second == name; });
       ++k)
    name = "absurdCo" + std::to_string(k);
  st.absurd[key] = name;
  name_out = name;
  NodePtr type = forall_(kind, forall_(kind, eqty(tvar(1), tvar(0), kind), "b"),
                         "a");
  NodePtr body = tylam(
      kind, tylam(kind, tyapp(tyapp(con(name), tvar(1)), tvar(0)), "b"), "a");
  return {{DeclKind::Method, name, type, nullptr},
          {DeclKind::Instance, name, nullptr, body}};
}

}  // namespace

Result<Program> elaborate_instance(ElabState& st, const SInstanceDecl& in) {
  return capture([&] {
    auto cit = st.classes.find(in.cls);
    if (cit == st.classes.end())
      fail("UnknownClass", in.cls + " is not a class");
    ClassInfo& cls = cit->second;
    const std::size_t n = cls.param_names.size();
    if (in.head.size() != n)
      fail("ArityMismatch", "instance of " + in.cls + " needs " +
                                std::to_string(n) + " type arguments");

    InstanceInfo inst;
    inst.cls = in.cls;
    inst.ctor = in.name.empty() ? "K_" + in.cls + "_" +
                                      std::to_string(cls.instances.size() + 1)
                                : in.name;
    if (st.env.has_term_name(inst.ctor) || st.instances.count(inst.ctor))
      fail("DuplicateName", inst.ctor + " is already defined");
    const std::size_t m = in.vars.size();
    NodeList kinds(m);
    for (std::size_t j = 0; j < m; ++j) kinds[j] = in.vars[j].second;
    for (std::size_t i = 0; i < n; ++i)
      infer_var_kinds(st.env, in.head[i], cls.param_kinds[i], kinds);
    for (const auto& c : in.context) infer_var_kinds(st.env, c, star(), kinds);
    for (std::size_t j = 0; j < m; ++j) {
      inst.var_names.push_back(in.vars[j].first);
      inst.var_kinds.push_back(kinds[j] ? kinds[j] : star());
    }
    inst.head = in.head;
    inst.context = in.context;
    for (const auto& [name, body] : in.methods) {
      bool known = std::any_of(cls.methods.begin(), cls.methods.end(),
                               [&](const auto& e) { return e.first == name; });
      if (!known)
        fail("UnknownMethod", name + " is not a method of class " + in.cls);
    }

    Program out;
    {
      // ∀p̄ v̄. (H_i ~ p_i) → ctx → C p̄
      const std::size_t total = n + m;
      NodeList ps;
      for (std::size_t i = 0; i < n; ++i)
        ps.push_back(tvar(static_cast<std::uint32_t>(total - 1 - i)));
      NodePtr body = class_app(in.cls, ps);
      for (std::size_t j = in.context.size(); j-- > 0;)
        body = arrow(in.context[j], body);
      for (std::size_t i = n; i-- > 0;)
        body = arrow(eqty(in.head[i], ps[i], cls.param_kinds[i]), body);
      NodeList ks = cls.param_kinds;
      std::vector<std::string> names = cls.param_names;
      ks.insert(ks.end(), inst.var_kinds.begin(), inst.var_kinds.end());
      names.insert(names.end(), inst.var_names.begin(), inst.var_names.end());
      out.push_back({DeclKind::OpenCtor, inst.ctor,
                     close_foralls(body, ks, names), nullptr});
    }
    st.instances[inst.ctor] = inst;
    cls.instances.push_back(inst.ctor);

    auto method_preamble = [&](Builder& b) {
      std::vector<int> ps = bind_params(b, cls);
      NodeList refs;
      for (int p : ps) refs.push_back(b.ref_type(p));
      int d = b.push_term(class_app(in.cls, refs), "d", true);
      return guard_preamble(b, st, d, inst, cls, ps, "h", "e");
    };

    for (const auto& [mname, mtype] : cls.methods) {
      auto it = std::find_if(in.methods.begin(), in.methods.end(),
                             [&](const auto& e) { return e.first == mname; });
      if (it == in.methods.end())
        fail("MissingMethod", "instance " + inst.ctor + " does not define " +
                                  mname);
      Builder b;
      std::size_t vdepth = method_preamble(b);
      NodePtr expected = b.lift(mtype, n);
      STermPtr body = sterm_shift(it->second,
                                  static_cast<std::uint32_t>(b.depth() - vdepth));
      auto core = elaborate_term(st, b.ctx(), body, expected);
      if (!core) throw FdError(core.error());
      out.push_back({DeclKind::Instance, mname, nullptr, b.close(*core)});
    }
    for (std::size_t j = 0; j < cls.supers.size(); ++j) {
      Builder b;
      method_preamble(b);
      auto core = resolve_hole(st, b.ctx(), b.lift(cls.supers[j], n));
      if (!core) throw FdError(core.error());
      out.push_back(
          {DeclKind::Instance, cls.super_methods[j], nullptr, b.close(*core)});
    }

    // Fundep witnesses for every ordered pair involving the new constructor.
    std::vector<std::pair<std::string, std::string>> pairs;
    pairs.emplace_back(inst.ctor, inst.ctor);
    for (const auto& k : cls.instances) {
      if (k == inst.ctor) continue;
      pairs.emplace_back(k, inst.ctor);
      pairs.emplace_back(inst.ctor, k);
    }
    for (const auto& fd : cls.fundeps) {
      std::vector<bool> det(n, false);
      for (int i : fd.from) det[i] = true;
      std::size_t r = 0;
      for (std::size_t i = 0; i < n; ++i) r += det[i] ? 0 : 1;
      auto qnames = fresh_names(cls.param_names, r);
      for (const auto& [k1, k2] : pairs) {
        const InstanceInfo& i1 = st.instances.at(k1);
        const InstanceInfo& i2 = st.instances.at(k2);
        Builder b;
        std::vector<int> ps = bind_params(b, cls);
        std::vector<int> second;
        int q_to = -1;
        for (std::size_t i = 0, j = 0; i < n; ++i) {
          if (det[i]) continue;
          int q = b.push_type(cls.param_kinds[i], qnames[j++]);
          if (static_cast<int>(i) == fd.to) q_to = q;
        }
        for (std::size_t i = 0, j = 0; i < n; ++i)
          second.push_back(det[i] ? ps[i] : ps.back() + 1 + static_cast<int>(j++));
        NodeList r1;
        NodeList r2;
        for (int p : ps) r1.push_back(b.ref_type(p));
        int d1 = b.push_term(class_app(in.cls, r1), "d1", true);
        for (int p : second) r2.push_back(b.ref_type(p));
        int d2 = b.push_term(class_app(in.cls, r2), "d2", true);
        guard_preamble(b, st, d1, i1, cls, ps, "h", "e1");
        guard_preamble(b, st, d2, i2, cls, second, "k", "e2");
        NodePtr from = b.ref_type(ps[fd.to]);
        NodePtr to = b.ref_type(q_to);
        EqGraph g(st, b.ctx());
        NodePtr body;
        if (g.inconsistent()) {
          if (st.opts.absurd_omit) continue;
          std::string name;
          Program extra = absurd_decls(st, cls.param_kinds[fd.to], name);
          out.insert(out.end(), extra.begin(), extra.end());
          body = type_apps(con(name), {from, to});
        } else {
          auto co = g.synth(from, to);
          if (!co) {
            auto names = context_names(b.ctx());
            fail("FundepViolation",
                 "instances " + k1 + " and " + k2 + " violate the dependency " +
                     fd.method + ": cannot show " + print_core(from, names) +
                     " ~ " + print_core(to, names));
          }
          body = *co;
        }
        out.push_back({DeclKind::Instance, fd.method, nullptr, b.close(body)});
      }
    }
    return out;
  });
}

ElabReport elaborate_program(const SurfaceProgram& p, const Env& base,
                             const ElabOptions& opts) {
  ElabState st;
  st.env = base;
  st.opts = opts;
  ElabReport rep;
  auto emit = [&](const Program& decls, const SDecl& src) {
    for (Decl d : decls) {
      d.line = src.line;
      d.column = src.column;
      auto next = check_decl(st.env, d);
      if (!next) {
        Diagnostic diag = next.error();
        diag.message += " (in generated " + std::string(decl_keyword(d.kind)) +
                        " " + d.name + ")";
        rep.diagnostics.push_back(diag);
        return false;
      }
      st.env = *next;
      rep.program.push_back(d);
    }
    return true;
  };
  for (const auto& d : p) {
    Result<Program> decls = Program{};
    switch (d.kind) {
      case SDecl::Data: {
        Program out{{DeclKind::Data, d.data.name, d.data.kind, nullptr}};
        for (const auto& [k, ty] : d.data.ctors)
          out.push_back({DeclKind::Ctor, k, ty, nullptr});
        decls = out;
        break;
      }
      case SDecl::Class:
        decls = elaborate_class(st, d.cls);
        break;
      case SDecl::Instance:
        decls = elaborate_instance(st, d.inst);
        break;
      case SDecl::Let: {
        auto body = elaborate_term(st, {}, d.let.body, d.let.type);
        if (body) {
          decls = Program{{DeclKind::Let, d.let.name, d.let.type, *body}};
        } else {
          decls = body.error();
        }
        break;
      }
    }
    if (!decls) {
      Diagnostic diag = decls.error();
      if (diag.line == 0) {
        diag.line = d.line;
        diag.column = d.column;
      }
      rep.diagnostics.push_back(diag);
    } else if (emit(*decls, d)) {
      continue;
    }
    rep.program.clear();
    break;
  }
  rep.env = st.env;
  return rep;
}

}  // namespace fd
