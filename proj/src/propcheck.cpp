#include "fd/propcheck.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "fd/core_text.hpp"
#include "fd/reduction.hpp"
#include "fd/subst.hpp"

namespace fd {

namespace {

constexpr int kCallLimit = 1000;
constexpr int kAttempts = 60;
constexpr int kPathLength = 25;
constexpr std::size_t kWalkSizeCap = 1500;

// ---------------------------------------------------------------------------
// Placeholder unification. Unknown type arguments are closed constants named
// `?k`, which the parser never produces.

using Binds = std::map<int, NodePtr>;

std::optional<int> meta_id(const NodePtr& n) {
  if (!n->is(Tag::TCon) || n->name().empty() || n->name()[0] != '?')
    return std::nullopt;
  return std::stoi(n->name().substr(1));
}

NodePtr meta(int k) { return tcon("?" + std::to_string(k)); }

NodePtr fill(const NodePtr& n, const Binds& b, std::uint32_t depth = 0,
             int guard = 0) {
  if (auto k = meta_id(n)) {
    auto it = b.find(*k);
    if (it == b.end() || guard > 16) return n;
    return shift(fill(it->second, b, 0, guard + 1), depth);
  }
  if (n->arity() == 0) return n;
  NodeList kids;
  const bool binds = n->is_binder();
  for (std::size_t i = 0; i < n->arity(); ++i)
    kids.push_back(fill(n->kid(i), b, depth + (binds && i == 1 ? 1 : 0), guard));
  return rebuild(n, std::move(kids));
}

bool has_meta(const NodePtr& n, const Binds& b) {
  if (auto k = meta_id(n)) return !b.count(*k);
  return std::any_of(n->kids().begin(), n->kids().end(),
                     [&](const NodePtr& c) { return has_meta(c, b); });
}

bool match(const NodePtr& pat, const NodePtr& tgt, Binds& b,
           std::uint32_t depth = 0) {
  if (auto k = meta_id(pat)) {
    auto down = strengthen(tgt, depth);
    if (!down) return false;
    auto it = b.find(*k);
    if (it != b.end()) return node_eq(fill(it->second, b), fill(*down, b));
    b[*k] = *down;
    return true;
  }
  if (pat->tag() != tgt->tag() || pat->arity() != tgt->arity()) return false;
  if (pat->is(Tag::TVar) && pat->index() != tgt->index()) return false;
  if (pat->is(Tag::TCon) && pat->name() != tgt->name()) return false;
  const bool binds = pat->is_binder();
  for (std::size_t i = 0; i < pat->arity(); ++i)
    if (!match(pat->kid(i), tgt->kid(i), b, depth + (binds && i == 1 ? 1 : 0)))
      return false;
  return true;
}

/// Binds placeholders through equality premises `L ~ R`.
void solve_premises(const NodeList& doms, Binds& b) {
  for (bool progress = true; progress;) {
    progress = false;
    for (const auto& d : doms) {
      if (!d->is(Tag::EqTy)) continue;
      NodePtr l = fill(d->kid(0), b);
      NodePtr r = fill(d->kid(1), b);
      bool lm = has_meta(l, b);
      bool rm = has_meta(r, b);
      if (lm == rm && !(lm && (meta_id(l) || meta_id(r)))) continue;
      Binds trial = b;
      bool ok = false;
      if (lm && !rm) {
        ok = match(l, r, trial);
      } else if (rm && !lm) {
        ok = match(r, l, trial);
      } else if (auto k = meta_id(r)) {
        trial[*k] = l;
        ok = true;
      } else if (auto k2 = meta_id(l)) {
        trial[*k2] = r;
        ok = true;
      }
      if (ok && trial.size() > b.size()) {
        b = std::move(trial);
        progress = true;
      }
    }
  }
}

std::vector<std::string> all_constants(const Env& env) {
  std::vector<std::string> out;
  for (const auto& t : env.type_names())
    for (const auto& k : env.ctors_of(t)) out.push_back(k);
  for (const auto& m : env.method_names()) out.push_back(m);
  for (const auto& l : env.let_names()) out.push_back(l);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Generator

std::vector<Generator::Peel> Generator::peel_type(const NodePtr& type) {
  std::vector<Peel> out;
  NodePtr cur = type;
  int next_meta = 0;
  std::size_t term_args = 0;
  for (std::size_t steps = 0;; ++steps) {
    out.push_back({cur, term_args});
    if (steps >= 8) break;
    if (cur->is(Tag::Forall)) {
      cur = instantiate(cur->kid(1), meta(next_meta++));
    } else if (is_arrow(cur)) {
      cur = arrow_cod(cur);
      ++term_args;
    } else {
      break;
    }
  }
  return out;
}

Generator::Generator(const Env& env, const GenConfig& cfg)
    : env_(env), cfg_(cfg), rng_(cfg.seed) {
  for (const auto& c : all_constants(env_)) {
    NodePtr t = env_.term_type(c);
    constants_.push_back({con(c), t, peel_type(t)});
  }
}

int Generator::pick(int n) {
  return std::uniform_int_distribution<int>(0, n - 1)(rng_);
}

bool Generator::chance(int num, int den) { return pick(den) < num; }

NodePtr Generator::kind_in_ctx(const NodePtr& type) {
  auto k = kind_of(env_, type, ctx_);
  return k ? *k : nullptr;
}

NodePtr Generator::type(const NodePtr& kind, int depth) {
  ctx_.clear();
  return rtype(kind, depth);
}

NodePtr Generator::rtype(const NodePtr& kind, int depth) {
  std::vector<std::pair<int, std::function<NodePtr()>>> opts;
  for (std::size_t i = 0; i < ctx_.size(); ++i) {
    const Binding& b = ctx_[ctx_.size() - 1 - i];
    if (b.is_type && node_eq(b.annot, kind))
      opts.push_back({3, [i] { return tvar(static_cast<std::uint32_t>(i)); }});
  }
  for (const auto& name : env_.type_names()) {
    NodePtr k = env_.type_kind(name);
    const int w = env_.is_open_type(name) ? 1 : 4;
    if (node_eq(k, kind)) opts.push_back({w, [name] { return tcon(name); }});
    if (depth <= 0 || !kind->is(Tag::Star) || !k->is(Tag::KArrow)) continue;
    opts.push_back({w, [this, name, k, depth]() -> NodePtr {
                      NodePtr t = tcon(name);
                      NodePtr cur = k;
                      while (cur->is(Tag::KArrow)) {
                        NodePtr a = rtype(cur->kid(0), depth - 1);
                        if (!a) return nullptr;
                        t = tapp(t, a);
                        cur = cur->kid(1);
                      }
                      return t;
                    }});
  }
  if (kind->is(Tag::Star) && depth > 0) {
    opts.push_back({3, [this, depth]() -> NodePtr {
                      NodePtr a = rtype(star(), depth - 1);
                      NodePtr b = rtype(star(), depth - 1);
                      return a && b ? arrow(a, b) : nullptr;
                    }});
    opts.push_back({1, [this, depth]() -> NodePtr {
                      ctx_.push_back({true, star(), "t", false});
                      NodePtr body = rtype(star(), depth - 1);
                      ctx_.pop_back();
                      return body ? forall_(star(), body, "t") : nullptr;
                    }});
    opts.push_back({1, [this, depth]() -> NodePtr {
                      NodePtr a = rtype(star(), depth - 1);
                      if (!a) return nullptr;
                      NodePtr b = chance(1, 2) ? a : rtype(star(), depth - 1);
                      return b ? eqty(a, b, star()) : nullptr;
                    }});
  }
  int total = 0;
  for (const auto& o : opts) total += o.first;
  while (total > 0) {
    int r = pick(total);
    std::size_t i = 0;
    while (r >= opts[i].first) r -= opts[i++].first;
    if (NodePtr t = opts[i].second()) return t;
    total -= opts[i].first;
    opts.erase(opts.begin() + static_cast<std::ptrdiff_t>(i));
  }
  return nullptr;
}

std::optional<Generated> Generator::term(Goal goal) {
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    ctx_.clear();
    calls_ = 0;
    NodePtr ty;
    switch (goal) {
      case Goal::Any:
        ty = rtype(star(), 2);
        break;
      case Goal::Coercion: {
        NodePtr k = chance(1, 4) ? karrow(star(), star()) : star();
        NodePtr t = rtype(k, 2);
        if (!t) {
          k = star();
          t = rtype(k, 2);
        }
        ty = eqty(t, t, k);
        break;
      }
      case Goal::Function: {
        NodePtr a = rtype(star(), 1);
        NodePtr b = rtype(star(), 1);
        ty = arrow(a, b);
        break;
      }
    }
    if (!ty) continue;
    if (NodePtr m = gen(ty, cfg_.size)) return Generated{m, ty};
  }
  ++exhausted_;
  return std::nullopt;
}

NodePtr Generator::gen(const NodePtr& ty, int size) {
  if (++calls_ > kCallLimit) return nullptr;
  enum { kVar, kHead, kLam, kTyLam, kRedex, kIf, kGuard, kCast, kChoice, kZero, kCo };
  const RuleWeights& w = cfg_.weights;
  std::vector<std::pair<int, int>> rules;
  auto add = [&](int rule, int weight, bool ok) {
    if (ok && weight > 0) rules.push_back({weight, rule});
  };
  add(kVar, w.var, true);
  add(kHead, w.head, true);
  add(kLam, w.lam * 2, is_arrow(ty));
  add(kTyLam, w.tylam * 2, ty->is(Tag::Forall));
  add(kRedex, w.redex, size >= 3);
  add(kIf, w.if_, size >= 4);
  add(kGuard, w.guard, size >= 4);
  add(kCast, w.cast, size >= 2);
  add(kChoice, w.choice, size >= 3);
  add(kZero, w.zero, size >= 2);
  add(kCo, w.coercion * 2, ty->is(Tag::EqTy));
  int total = 0;
  for (const auto& r : rules) total += r.first;
  while (total > 0) {
    int x = pick(total);
    std::size_t i = 0;
    while (x >= rules[i].first) x -= rules[i++].first;
    if (NodePtr m = gen_rule(rules[i].second, ty, size)) return m;
    if (calls_ > kCallLimit) return nullptr;
    total -= rules[i].first;
    rules.erase(rules.begin() + static_cast<std::ptrdiff_t>(i));
  }
  return nullptr;
}

NodePtr Generator::gen_rule(int rule, const NodePtr& ty, int size) {
  switch (rule) {
    case 0: return var_leaf(ty);
    case 1: return head(ty, size);
    case 2: return lam(ty, size);
    case 3: return tylam(ty, size);
    case 4: return redex(ty, size);
    case 5: return branch(ty, size, false);
    case 6: return branch(ty, size, true);
    case 7: return cast(ty, size);
    case 8: return choice(ty, size, false);
    case 9: return choice(ty, size, true);
    case 10: return coercion(ty, size);
  }
  return nullptr;
}

NodePtr Generator::var_leaf(const NodePtr& ty) {
  std::vector<std::uint32_t> hits;
  for (std::size_t i = 0; i < ctx_.size(); ++i) {
    const Binding& b = ctx_[ctx_.size() - 1 - i];
    if (!b.is_type &&
        node_eq(shift(b.annot, static_cast<std::uint32_t>(i + 1)), ty))
      hits.push_back(static_cast<std::uint32_t>(i));
  }
  if (hits.empty()) return nullptr;
  return var(hits[pick(static_cast<int>(hits.size()))]);
}

NodePtr Generator::head(const NodePtr& ty, int size) {
  struct Option {
    NodePtr head;
    NodePtr type;
    std::size_t steps;
    Binds binds;
  };
  std::vector<Option> options;
  auto consider = [&](const NodePtr& h, const NodePtr& type,
                      const std::vector<Peel>& peels) {
    for (std::size_t steps = 0; steps < peels.size(); ++steps) {
      const Peel& p = peels[steps];
      if (p.term_args > 0 && size <= 0) break;
      if (!meta_id(p.type) && (p.type->tag() != ty->tag() ||
                               p.type->arity() != ty->arity()))
        continue;
      Binds b;
      if (match(p.type, ty, b)) options.push_back({h, type, steps, std::move(b)});
    }
  };
  for (std::size_t i = 0; i < ctx_.size(); ++i) {
    const Binding& b = ctx_[ctx_.size() - 1 - i];
    if (b.is_type) continue;
    NodePtr t = shift(b.annot, static_cast<std::uint32_t>(i + 1));
    consider(var(static_cast<std::uint32_t>(i)), t, peel_type(t));
  }
  for (const auto& c : constants_) consider(c.head, c.type, c.peels);
  if (options.empty()) return nullptr;
  Option& o = options[pick(static_cast<int>(options.size()))];

  // Replay the peeling to collect binder kinds and argument types.
  Binds b = o.binds;
  NodePtr cur = o.type;
  std::vector<std::pair<bool, NodePtr>> steps;  // (is_type, kind or type)
  int next_meta = 0;
  for (std::size_t s = 0; s < o.steps; ++s) {
    if (cur->is(Tag::Forall)) {
      steps.push_back({true, cur->kid(0)});
      cur = instantiate(cur->kid(1), meta(next_meta++));
    } else {
      steps.push_back({false, arrow_dom(cur)});
      cur = arrow_cod(cur);
    }
  }
  NodeList doms;
  for (const auto& [is_type, t] : steps)
    if (!is_type) doms.push_back(t);
  solve_premises(doms, b);
  std::vector<int> metas_in_order;
  int m = 0;
  for (const auto& [is_type, k] : steps) {
    if (!is_type) continue;
    if (!b.count(m)) {
      NodePtr t = rtype(k, 1);
      if (!t) return nullptr;
      b[m] = t;
    }
    ++m;
  }
  const int nargs = static_cast<int>(doms.size());
  NodePtr out = o.head;
  m = 0;
  for (const auto& [is_type, t] : steps) {
    if (is_type) {
      out = tyapp(out, fill(b.at(m++), b));
      continue;
    }
    int budget = nargs > 0 ? (size - 1) / nargs : 0;
    NodePtr arg = gen(fill(t, b), budget + (chance(1, 3) ? 1 : 0));
    if (!arg) return nullptr;
    out = app(out, arg);
  }
  return out;
}

NodePtr Generator::lam(const NodePtr& ty, int size) {
  if (!is_arrow(ty)) return nullptr;
  std::string name = "x" + std::to_string(ctx_.size());
  ctx_.push_back({false, arrow_dom(ty), name, false});
  NodePtr body = gen(shift(arrow_cod(ty), 1), size - 1);
  ctx_.pop_back();
  return body ? fd::lam(arrow_dom(ty), body, name) : nullptr;
}

NodePtr Generator::tylam(const NodePtr& ty, int size) {
  if (!ty->is(Tag::Forall)) return nullptr;
  std::string name = "t" + std::to_string(ctx_.size());
  ctx_.push_back({true, ty->kid(0), name, false});
  NodePtr body = gen(ty->kid(1), size - 1);
  ctx_.pop_back();
  return body ? fd::tylam(ty->kid(0), body, name) : nullptr;
}

NodePtr Generator::redex(const NodePtr& ty, int size) {
  if (chance(1, 2)) {
    NodePtr a = rtype(star(), 1);
    if (!a) return nullptr;
    std::string name = "x" + std::to_string(ctx_.size());
    ctx_.push_back({false, a, name, false});
    NodePtr body = gen(shift(ty, 1), size / 2);
    ctx_.pop_back();
    if (!body) return nullptr;
    NodePtr arg = gen(a, size / 2 - 1);
    return arg ? app(fd::lam(a, body, name), arg) : nullptr;
  }
  NodePtr tau = rtype(star(), 1);
  if (!tau) return nullptr;
  // Abstract the occurrences of τ so the body depends on the binder.
  std::function<NodePtr(const NodePtr&, std::uint32_t)> abstract =
      [&](const NodePtr& n, std::uint32_t depth) -> NodePtr {
    if (node_eq(n, shift(tau, depth + 1))) return tvar(depth);
    if (n->arity() == 0) return n;
    NodeList kids;
    const bool binds = n->is_binder();
    for (std::size_t i = 0; i < n->arity(); ++i)
      kids.push_back(abstract(n->kid(i), depth + (binds && i == 1 ? 1 : 0)));
    return rebuild(n, std::move(kids));
  };
  NodePtr body_ty = shift(ty, 1);
  if (chance(2, 3)) body_ty = abstract(body_ty, 0);
  std::string name = "t" + std::to_string(ctx_.size());
  ctx_.push_back({true, star(), name, false});
  NodePtr body = gen(body_ty, size - 2);
  ctx_.pop_back();
  return body ? tyapp(fd::tylam(star(), body, name), tau) : nullptr;
}

std::optional<NodeList> Generator::scrutinee_args(const std::string& ctor) {
  NodePtr cur = env_.term_type(ctor);
  Binds b;
  NodeList kinds;
  NodeList doms;
  while (cur->is(Tag::Forall)) {
    kinds.push_back(cur->kid(0));
    cur = instantiate(cur->kid(1), meta(static_cast<int>(kinds.size()) - 1));
  }
  while (is_arrow(cur)) {
    doms.push_back(arrow_dom(cur));
    cur = arrow_cod(cur);
  }
  solve_premises(doms, b);
  for (std::size_t k = 0; k < kinds.size(); ++k) {
    if (b.count(static_cast<int>(k))) continue;
    NodePtr t = rtype(kinds[k], 1);
    if (!t) return std::nullopt;
    b[static_cast<int>(k)] = t;
  }
  NodePtr res = fill(cur, b);
  if (has_meta(res, b)) return std::nullopt;
  return type_spine(res).args;
}

NodePtr Generator::branch(const NodePtr& ty, int size, bool open) {
  std::vector<std::string> types;
  for (const auto& t : env_.type_names()) {
    if (open != env_.is_open_type(t)) continue;
    if (!env_.ctors_of(t).empty()) types.push_back(t);
  }
  if (types.empty()) return nullptr;
  const std::string& tname = types[pick(static_cast<int>(types.size()))];
  auto ctors = env_.ctors_of(tname);
  NodeList args;
  if (open) {
    auto a = scrutinee_args(ctors[pick(static_cast<int>(ctors.size()))]);
    if (!a) return nullptr;
    args = *a;
  } else {
    NodePtr k = env_.type_kind(tname);
    while (k->is(Tag::KArrow)) {
      NodePtr a = rtype(k->kid(0), 1);
      if (!a) return nullptr;
      args.push_back(a);
      k = k->kid(1);
    }
  }
  NodePtr scrut_ty = tcon(tname);
  for (const auto& a : args) scrut_ty = tapp(scrut_ty, a);
  Pattern p;
  p.head = ctors[pick(static_cast<int>(ctors.size()))];
  p.type_args = args;
  auto pt = pattern_type(env_, p, scrut_ty, ctx_);
  if (!pt) return nullptr;
  const auto r = static_cast<std::uint32_t>(pt->residual_kinds.size());
  NodePtr cons_ty = shift(ty, r);
  for (std::size_t i = pt->arg_types.size(); i-- > 0;)
    cons_ty = arrow(pt->arg_types[i], cons_ty);
  for (std::size_t i = r; i-- > 0;)
    cons_ty = forall_(pt->residual_kinds[i], cons_ty, pt->residual_names[i]);
  const int part = std::max(0, (size - 1) / (open ? 2 : 3));
  NodePtr scrut = gen(scrut_ty, part);
  if (!scrut) return nullptr;
  NodePtr cons = gen(cons_ty, part + static_cast<int>(pt->arg_types.size()) + 1);
  if (!cons) return nullptr;
  if (open) return guard(scrut, p, cons);
  NodePtr alt = gen(ty, part);
  return alt ? if_(scrut, p, cons, alt) : nullptr;
}

NodePtr Generator::cast(const NodePtr& ty, int size) {
  std::vector<std::pair<NodePtr, NodePtr>> via;  // (source type, coercion)
  for (std::size_t i = 0; i < ctx_.size(); ++i) {
    const Binding& b = ctx_[ctx_.size() - 1 - i];
    if (b.is_type || !b.annot->is(Tag::EqTy)) continue;
    NodePtr t = shift(b.annot, static_cast<std::uint32_t>(i + 1));
    if (!t->kid(2)->is(Tag::Star)) continue;
    NodePtr h = var(static_cast<std::uint32_t>(i));
    if (node_eq(t->kid(1), ty)) via.push_back({t->kid(0), h});
    if (node_eq(t->kid(0), ty)) via.push_back({t->kid(1), sym(h)});
  }
  NodePtr from = ty;
  NodePtr co;
  if (!via.empty() && chance(2, 3)) {
    auto& v = via[pick(static_cast<int>(via.size()))];
    from = v.first;
    co = v.second;
  } else {
    co = gen(eqty(ty, ty, star()), std::min(size / 3, 6));
    if (!co) return nullptr;
  }
  NodePtr m = gen(from, size - 2);
  return m ? fd::cast(m, co) : nullptr;
}

NodePtr Generator::choice(const NodePtr& ty, int size, bool with_zero) {
  if (with_zero) {
    NodePtr m = gen(ty, size - 1);
    if (!m) return nullptr;
    return chance(1, 2) ? fd::choice(zero(), m) : fd::choice(m, zero());
  }
  NodePtr l = gen(ty, size / 2);
  if (!l) return nullptr;
  NodePtr r = gen(ty, size / 2);
  return r ? fd::choice(l, r) : nullptr;
}

NodePtr Generator::coercion(const NodePtr& ty, int size) {
  if (!ty->is(Tag::EqTy)) return nullptr;
  const NodePtr& l = ty->kid(0);
  const NodePtr& r = ty->kid(1);
  const NodePtr& k = ty->kid(2);
  if (node_eq(l, r) && (size <= 1 || chance(1, 2))) return refl(l);
  if (size <= 1) return nullptr;
  const int sub = size - 1;
  std::vector<std::function<NodePtr()>> opts;
  opts.push_back([&] {
    NodePtr c = gen(eqty(r, l, k), sub);
    return c ? sym(c) : nullptr;
  });
  opts.push_back([&]() -> NodePtr {
    NodePtr mid = chance(1, 2) ? l : r;
    NodePtr a = gen(eqty(l, mid, k), sub / 2);
    if (!a) return nullptr;
    NodePtr b = gen(eqty(mid, r, k), sub / 2);
    return b ? trans(a, b) : nullptr;
  });
  if (l->is(Tag::TApp) && r->is(Tag::TApp)) {
    opts.push_back([&]() -> NodePtr {
      NodePtr kf = kind_in_ctx(l->kid(0));
      NodePtr ka = kind_in_ctx(l->kid(1));
      if (!kf || !ka || !node_eq(kf, kind_in_ctx(r->kid(0))) ||
          !node_eq(ka, kind_in_ctx(r->kid(1))))
        return nullptr;
      NodePtr a = gen(eqty(l->kid(0), r->kid(0), kf), sub / 2);
      if (!a) return nullptr;
      NodePtr b = gen(eqty(l->kid(1), r->kid(1), ka), sub / 2);
      return b ? capp(a, b) : nullptr;
    });
  }
  if (k->is(Tag::KArrow) && k->kid(1)->is(Tag::Star)) {
    opts.push_back([&]() -> NodePtr {
      NodePtr x = rtype(k->kid(0), 1);
      if (!x) return nullptr;
      NodePtr c = gen(eqty(tapp(l, x), tapp(r, x), star()), sub);
      return c ? fst(c) : nullptr;
    });
  }
  std::vector<std::string> wrappers;
  for (const auto& t : env_.type_names()) {
    NodePtr tk = env_.type_kind(t);
    if (tk->is(Tag::KArrow) && node_eq(tk->kid(0), k) && tk->kid(1)->is(Tag::Star))
      wrappers.push_back(t);
  }
  if (!wrappers.empty()) {
    opts.push_back([&]() -> NodePtr {
      NodePtr f = tcon(wrappers[pick(static_cast<int>(wrappers.size()))]);
      NodePtr c = gen(eqty(tapp(f, l), tapp(f, r), star()), sub);
      return c ? snd(c) : nullptr;
    });
  }
  if (l->is(Tag::Forall) && r->is(Tag::Forall) && node_eq(l->kid(0), r->kid(0))) {
    opts.push_back([&]() -> NodePtr {
      ctx_.push_back({true, l->kid(0), "t", false});
      NodePtr c = gen(eqty(l->kid(1), r->kid(1), star()), sub);
      ctx_.pop_back();
      return c ? univ(l->kid(0), c, "t") : nullptr;
    });
  }
  if (k->is(Tag::Star)) {
    opts.push_back([&]() -> NodePtr {
      NodePtr tau = rtype(star(), 1);
      if (!tau) return nullptr;
      NodePtr c = gen(eqty(forall_(star(), shift(l, 1), "t"),
                           forall_(star(), shift(r, 1), "t"), star()),
                      sub);
      return c ? cinst(c, tau) : nullptr;
    });
  }
  if (l->is(Tag::EqTy) && r->is(Tag::EqTy) && node_eq(l->kid(2), r->kid(2))) {
    opts.push_back([&]() -> NodePtr {
      NodePtr a = gen(eqty(l->kid(0), r->kid(0), l->kid(2)), sub / 2);
      if (!a) return nullptr;
      NodePtr b = gen(eqty(l->kid(1), r->kid(1), l->kid(2)), sub / 2);
      return b ? sim(a, b) : nullptr;
    });
  }
  std::shuffle(opts.begin(), opts.end(), rng_);
  for (auto& o : opts)
    if (NodePtr c = o()) return c;
  return node_eq(l, r) ? refl(l) : nullptr;
}

// ---------------------------------------------------------------------------
// Properties

bool canonical_coercion(const NodePtr& v) {
  if (v->is(Tag::Refl)) return true;
  return v->is(Tag::Choice) && canonical_coercion(v->kid(0)) &&
         canonical_coercion(v->kid(1));
}

bool canonical_function(const Env& env, const NodePtr& v) {
  if (v->is(Tag::Lam) || v->is(Tag::TyLam)) return true;
  if (v->is(Tag::Choice))
    return canonical_function(env, v->kid(0)) && canonical_function(env, v->kid(1));
  Spine s = term_spine(v);
  return s.head->is(Tag::Con) && env.is_ctor(s.head->name());
}

namespace {

struct Failure {
  std::string detail;
};
using Check = std::function<std::optional<Failure>(const NodePtr& m,
                                                   const NodePtr& type)>;

std::string show_step(const Step& s) {
  std::string p;
  for (int i : s.path) p += " " + std::to_string(i);
  return std::string(rule_name(s.rule)) + (p.empty() ? "" : " at" + p);
}

/// Follows random successors, calling `visit` on every state (the first is
/// `m` itself). Stops at terminal states, after `length` steps or once the
/// term outgrows kWalkSizeCap nodes.
template <typename Visit>
std::optional<Failure> random_path(const Env& env, NodePtr m, std::size_t length,
                                   std::mt19937_64& rng, Visit visit) {
  for (std::size_t i = 0;; ++i) {
    std::vector<Step> steps = step_all(env, m);
    if (auto f = visit(m, steps)) return f;
    if (steps.empty() || i >= length || m->size() > kWalkSizeCap)
      return std::nullopt;
    m = steps[std::uniform_int_distribution<std::size_t>(0, steps.size() - 1)(rng)]
            .result;
  }
}

std::optional<Failure> well_typed(const Env& env, const NodePtr& m,
                                  const NodePtr& type) {
  auto st = check_term(env, m, type);
  if (!st) return Failure{"generator produced an ill-typed term: " +
                          st.error().to_string()};
  return std::nullopt;
}

void type_nodes(const NodePtr& n, NodeList& out, bool in_type = false) {
  if (n->is_kind()) return;
  if (n->is_type()) {
    if (!in_type) out.push_back(n);
    return;
  }
  if (n->has_pattern())
    for (const auto& t : n->pattern().type_args) out.push_back(t);
  for (const auto& k : n->kids()) type_nodes(k, out, false);
}

// Direct substitution oracle over an explicit action table.
struct Table {
  std::vector<SubstAction> prefix;
  std::uint32_t tail = 0;
  std::uint32_t lift = 0;
};

NodePtr o_shift(const NodePtr& n, std::uint32_t k, std::uint32_t cutoff) {
  if (n->is(Tag::Var) || n->is(Tag::TVar)) {
    if (n->index() < cutoff) return n;
    return n->is(Tag::Var) ? var(n->index() + k) : tvar(n->index() + k);
  }
  NodeList kids;
  const bool binds = n->is_binder();
  for (std::size_t i = 0; i < n->arity(); ++i)
    kids.push_back(o_shift(n->kid(i), k, cutoff + (binds && i == 1 ? 1 : 0)));
  NodeList pargs;
  if (n->has_pattern())
    for (const auto& t : n->pattern().type_args) pargs.push_back(o_shift(t, k, cutoff));
  return rebuild(n, std::move(kids), std::move(pargs));
}

SubstAction o_lookup(const Table& s, std::uint32_t i) {
  if (i < s.lift) return SubstAction::rename(i);
  std::uint32_t j = i - s.lift;
  SubstAction a = j < s.prefix.size()
                      ? s.prefix[j]
                      : SubstAction::rename(j - static_cast<std::uint32_t>(s.prefix.size()) + s.tail);
  if (a.kind == SubstAction::Rename) return SubstAction::rename(a.index + s.lift);
  return SubstAction::replace(o_shift(a.node, s.lift, 0));
}

NodePtr o_apply(const Table& s, const NodePtr& n, std::uint32_t depth = 0) {
  if (n->is(Tag::Var) || n->is(Tag::TVar)) {
    if (n->index() < depth) return n;
    SubstAction a = o_lookup(s, n->index() - depth);
    if (a.kind == SubstAction::Replace) return o_shift(a.node, depth, 0);
    return n->is(Tag::Var) ? var(a.index + depth) : tvar(a.index + depth);
  }
  NodeList kids;
  const bool binds = n->is_binder();
  for (std::size_t i = 0; i < n->arity(); ++i)
    kids.push_back(o_apply(s, n->kid(i), depth + (binds && i == 1 ? 1 : 0)));
  NodeList pargs;
  if (n->has_pattern())
    for (const auto& t : n->pattern().type_args) pargs.push_back(o_apply(s, t, depth));
  return rebuild(n, std::move(kids), std::move(pargs));
}

class RawGen {
 public:
  explicit RawGen(std::mt19937_64& rng) : rng_(rng) {}

  NodePtr type(int depth) {
    int c = pick(depth > 0 ? 6 : 2);
    switch (c) {
      case 0: return tvar(static_cast<std::uint32_t>(pick(6)));
      case 1: return tcon(pick(2) ? "Bool" : "Maybe");
      case 2: return tapp(type(depth - 1), type(depth - 1));
      case 3: return arrow(type(depth - 1), type(depth - 1));
      case 4: return forall_(star(), type(depth - 1));
      default: return eqty(type(depth - 1), type(depth - 1), star());
    }
  }

  NodePtr term(int depth) {
    int c = pick(depth > 0 ? 14 : 3);
    switch (c) {
      case 0: return var(static_cast<std::uint32_t>(pick(6)));
      case 1: return con(pick(2) ? "True" : "f");
      case 2: return pick(2) ? zero() : refl(type(1));
      case 3: return lam(type(1), term(depth - 1));
      case 4: return tylam(star(), term(depth - 1));
      case 5: return app(term(depth - 1), term(depth - 1));
      case 6: return tyapp(term(depth - 1), type(1));
      case 7: return cast(term(depth - 1), term(depth - 1));
      case 8: return if_(term(depth - 1), pattern(), term(depth - 1), term(depth - 1));
      case 9: return guard(term(depth - 1), pattern(), term(depth - 1));
      case 10: return choice(term(depth - 1), term(depth - 1));
      case 11: return univ(star(), term(depth - 1));
      case 12: return trans(sym(term(depth - 1)), cinst(term(depth - 1), type(1)));
      default: return capp(fst(term(depth - 1)), snd(term(depth - 1)));
    }
  }

  NodePtr replacement() { return pick(2) ? type(2) : term(2); }

  Table table() {
    Table t;
    int n = pick(5);
    for (int i = 0; i < n; ++i) {
      t.prefix.push_back(pick(2) ? SubstAction::rename(static_cast<std::uint32_t>(pick(8)))
                                 : SubstAction::replace(replacement()));
    }
    t.tail = static_cast<std::uint32_t>(pick(4));
    return t;
  }

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

 private:
  Pattern pattern() {
    Pattern p;
    p.head = "Just";
    for (int i = pick(3); i > 0; --i) p.type_args.push_back(type(1));
    return p;
  }
  std::mt19937_64& rng_;
};

std::optional<Failure> subst_case(std::mt19937_64& rng) {
  RawGen g(rng);
  NodePtr n = g.pick(3) ? g.term(4) : g.type(4);
  if (!node_eq(Subst::identity().apply(n), n))
    return Failure{"identity substitution changed " + print_core(n)};
  Table t1 = g.table();
  Table t2 = g.table();
  Subst s1(t1.prefix, t1.tail);
  Subst s2(t2.prefix, t2.tail);
  t1.lift = static_cast<std::uint32_t>(g.pick(3));
  Subst s1l = s1.lift(t1.lift);
  if (!node_eq(s1l.apply(n), o_apply(t1, n)))
    return Failure{"lifted substitution disagrees with the oracle on " +
                   print_core(n)};
  NodePtr direct = o_apply(t2, o_apply(t1, n));
  if (!node_eq(Subst::compose(s1l, s2).apply(n), direct))
    return Failure{"composition disagrees with sequential application on " +
                   print_core(n)};
  return std::nullopt;
}

std::uint64_t case_seed(std::uint64_t seed, std::size_t i) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (i + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Smallest closed subterm that still fails, best effort.
std::pair<NodePtr, NodePtr> shrink(
    const Env& env, NodePtr m, NodePtr type,
    const std::function<bool(const NodePtr&, const NodePtr&)>& fails) {
  for (bool again = true; again;) {
    again = false;
    std::vector<NodePtr> subs;
    std::function<void(const NodePtr&)> collect = [&](const NodePtr& n) {
      for (const auto& k : n->kids()) {
        if (!k->is_type() && !k->is_kind() && k->free_bound() == 0)
          subs.push_back(k);
        collect(k);
      }
    };
    collect(m);
    std::sort(subs.begin(), subs.end(),
              [](const NodePtr& a, const NodePtr& b) { return a->size() < b->size(); });
    for (const auto& s : subs) {
      auto r = infer_term(env, s);
      if (!r || !r->is_exact()) continue;
      if (fails(s, r->type)) {
        m = s;
        type = r->type;
        again = true;
        break;
      }
    }
  }
  return {m, type};
}

}  // namespace

const std::vector<std::string>& property_names() {
  static const std::vector<std::string> names = {
      "progress",           "preservation",        "value_soundness",
      "canonicity_coercion", "canonicity_function", "uniqueness_mod_zero",
      "types_are_values",   "subst_laws"};
  return names;
}

PropResult run_property(const std::string& name, const Env& env,
                        const GenConfig& cfg, std::size_t count) {
  PropResult res;
  res.name = name;
  res.prelude = std::string(prelude_name(cfg.prelude));
  if (std::find(property_names().begin(), property_names().end(), name) ==
      property_names().end()) {
    res.passed = false;
    res.detail = "unknown property " + name;
    return res;
  }
  Goal goal = name == "canonicity_coercion"   ? Goal::Coercion
              : name == "canonicity_function" ? Goal::Function
                                              : Goal::Any;

  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t seed = case_seed(cfg.seed, i);
    GenConfig c = cfg;
    c.seed = seed;
    Generator gen(env, c);
    std::mt19937_64 walk(seed ^ 0x5bd1e995ULL);

    if (name == "subst_laws") {
      ++res.cases;
      if (auto f = subst_case(gen.rng())) {
        res.passed = false;
        res.case_seed = seed;
        res.detail = f->detail;
        return res;
      }
      continue;
    }

    auto g = gen.term(goal);
    if (!g) {
      ++res.skipped;
      continue;
    }
    ++res.cases;

    Check check = [&](const NodePtr& m, const NodePtr& ty) -> std::optional<Failure> {
      if (auto f = well_typed(env, m, ty)) return f;
      if (name == "progress") {
        return random_path(env, m, kPathLength, walk,
                           [&](const NodePtr& s, const std::vector<Step>& steps)
                               -> std::optional<Failure> {
          const int branches = (is_value(env, s) ? 1 : 0) +
                               (s->is(Tag::Zero) ? 1 : 0) + (steps.empty() ? 0 : 1);
          if (branches != 1)
            return Failure{"trichotomy fails (" + std::to_string(branches) +
                           " branches) at " + print_core(s)};
          return std::nullopt;
        });
      }
      if (name == "preservation") {
        return random_path(env, m, kPathLength, walk,
                           [&](const NodePtr&, const std::vector<Step>& steps)
                               -> std::optional<Failure> {
          for (const auto& st : steps) {
            auto ok = check_term(env, st.result, ty);
            if (!ok)
              return Failure{"step " + show_step(st) + " to " +
                             print_core(st.result) + " breaks typing: " +
                             ok.error().message};
          }
          return std::nullopt;
        });
      }
      if (name == "value_soundness" || name == "canonicity_coercion" ||
          name == "canonicity_function") {
        return random_path(env, m, 200, walk,
                           [&](const NodePtr& s, const std::vector<Step>& steps)
                               -> std::optional<Failure> {
          if (!is_value(env, s)) return std::nullopt;
          if (name == "value_soundness") {
            if (!steps.empty())
              return Failure{"value " + print_core(s) + " steps by " +
                             show_step(steps.front())};
            if (s->is(Tag::Zero)) return Failure{"0 classified as a value"};
          } else if (name == "canonicity_coercion" && !canonical_coercion(s)) {
            return Failure{"non-canonical coercion value " + print_core(s)};
          } else if (name == "canonicity_function" && !canonical_function(env, s)) {
            return Failure{"non-canonical function value " + print_core(s)};
          }
          return std::nullopt;
        });
      }
      if (name == "uniqueness_mod_zero") {
        std::vector<NodePtr> subjects;
        if (!contains_tag(m, Tag::Zero)) subjects.push_back(m);
        std::function<void(const NodePtr&)> neutral = [&](const NodePtr& n) {
          if ((n->is(Tag::App) || n->is(Tag::TyApp)) && n->free_bound() == 0 &&
              term_spine(n).head->is(Tag::Con))
            subjects.push_back(n);
          for (const auto& k : n->kids()) neutral(k);
        };
        neutral(m);
        for (const auto& s : subjects) {
          auto a = infer_term(env, s);
          auto b = infer_term(env, s);
          if (!a || !a->is_exact())
            return Failure{"no exact type for " + print_core(s)};
          if (!b || !b->is_exact() || !node_eq(a->type, b->type))
            return Failure{"inference disagrees with itself on " + print_core(s)};
          if (s == m && !node_eq(a->type, ty))
            return Failure{"inferred " + print_core(a->type) + " for a term of type " +
                           print_core(ty)};
        }
        return std::nullopt;
      }
      // types_are_values
      NodeList types;
      type_nodes(m, types);
      types.push_back(ty);
      for (const auto& t : types)
        if (!is_type_value(t))
          return Failure{"type " + print_core(t) + " is not a value"};
      return std::nullopt;
    };

    if (name == "types_are_values") {
      NodePtr k = gen.rng()() % 4 == 0 ? karrow(star(), star()) : star();
      if (NodePtr t = gen.type(k, 3)) {
        auto kk = kind_of(env, t);
        if (!kk || !node_eq(*kk, k) || !is_type_value(t)) {
          res.passed = false;
          res.case_seed = seed;
          res.counterexample = print_core(t);
          res.detail = "generated type is ill-kinded or not a value";
          return res;
        }
      }
    }

    if (auto f = check(g->term, g->type)) {
      res.passed = false;
      res.case_seed = seed;
      res.detail = f->detail;
      auto [m, t] = shrink(env, g->term, g->type,
                           [&](const NodePtr& a, const NodePtr& b) {
                             return check(a, b).has_value();
                           });
      res.counterexample = print_core(m) + " : " + print_core(t);
      return res;
    }
  }
  return res;
}

}  // namespace fd
