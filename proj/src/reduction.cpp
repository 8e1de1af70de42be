#include "fd/reduction.hpp"

#include <deque>
#include <unordered_set>

#include "fd/subst.hpp"

namespace fd {

std::string_view rule_name(Rule r) {
  switch (r) {
    case Rule::BetaArrow: return "β→";
    case Rule::BetaForall: return "β∀";
    case Rule::DeltaRefl: return "δ_refl";
    case Rule::DeltaTrans: return "δ_;";
    case Rule::DeltaApp: return "δ_@";
    case Rule::DeltaInst: return "δ_@[]";
    case Rule::DeltaFst: return "δ_fst";
    case Rule::DeltaSnd: return "δ_snd";
    case Rule::DeltaSim: return "δ_~";
    case Rule::DeltaForall: return "δ_∀";
    case Rule::DeltaCast: return "δ_▷";
    case Rule::BetaZero1: return "β_0-1";
    case Rule::BetaZero2: return "β_0-2";
    case Rule::Zeta: return "ζ";
    case Rule::DeltaIf1: return "δ_if-1";
    case Rule::DeltaIf2: return "δ_if-2";
    case Rule::DeltaGuard1: return "δ_guard-1";
    case Rule::DeltaGuard2: return "δ_guard-2";
    case Rule::BetaOpen: return "β_open";
    case Rule::BetaLet: return "β_let";
    case Rule::Kappa: return "κ";
  }
  return "?";
}

bool is_value(const Env& env, const NodePtr& m) {
  switch (m->tag()) {
    case Tag::Lam:
    case Tag::TyLam:
    case Tag::Refl:
      return true;
    case Tag::Choice:
      return is_value(env, m->kid(0)) && is_value(env, m->kid(1));
    case Tag::Con:
    case Tag::App:
    case Tag::TyApp: {
      const Node* h = m.get();
      while (h->is(Tag::App) || h->is(Tag::TyApp)) h = h->kid(0).get();
      return h->is(Tag::Con) && env.is_ctor(h->name());
    }
    default:
      return false;
  }
}

bool is_type_value(const NodePtr& t) {
  switch (t->tag()) {
    case Tag::TVar:
    case Tag::TCon:
    case Tag::Forall:
      return true;
    case Tag::TApp:
      return is_type_value(t->kid(0)) && is_type_value(t->kid(1));
    case Tag::EqTy:
      return is_type_value(t->kid(0)) && is_type_value(t->kid(1));
    default:
      return false;
  }
}

MatchResult match_pattern(const Env& env, const NodePtr& scrut,
                          const Pattern& p) {
  MatchResult out;
  Spine s = term_spine(scrut);
  if (!s.head->is(Tag::Con) || !env.is_ctor(s.head->name())) return out;
  std::size_t ntype = 0;
  while (ntype < s.args.size() && s.is_type_arg[ntype]) ++ntype;
  std::size_t want = p.type_args.size();
  bool hit = s.head->name() == p.head && ntype >= want;
  for (std::size_t i = 0; hit && i < want; ++i)
    hit = node_eq(s.args[i], p.type_args[i]);
  if (!hit) {
    out.kind = MatchResult::Miss;
    return out;
  }
  out.kind = MatchResult::Hit;
  out.residual.assign(s.args.begin() + want, s.args.end());
  out.residual_is_type.assign(s.is_type_arg.begin() + want, s.is_type_arg.end());
  return out;
}

std::vector<int> a_holes(const NodePtr& n) {
  switch (n->tag()) {
    case Tag::App:
    case Tag::TyApp:
    case Tag::If:
    case Tag::Guard:
    case Tag::Sym:
    case Tag::Fst:
    case Tag::Snd:
    case Tag::CInst:
      return {0};
    case Tag::Cast:
    case Tag::Univ:
      return {1};
    case Tag::Trans:
    case Tag::CApp:
    case Tag::Sim:
      return {0, 1};
    default:
      return {};
  }
}

std::vector<int> e_holes(const NodePtr& n) {
  if (n->is(Tag::Choice)) return {0, 1};
  return a_holes(n);
}

namespace {

using Ctx = Context;

struct Redex {
  NodePtr result;
  Rule rule;
};

bool is_refl(const NodePtr& n) { return n->is(Tag::Refl); }

void push_redex(std::vector<Redex>& out, NodePtr r, Rule rule) {
  out.push_back({std::move(r), rule});
}

/// Top-level rules at `n` (everything except ζ, κ and ξ).
std::vector<Redex> redexes(const Env& env, const NodePtr& n, const Ctx& ctx) {
  std::vector<Redex> out;
  switch (n->tag()) {
    case Tag::App:
      if (n->kid(0)->is(Tag::Lam))
        push_redex(out, instantiate(n->kid(0)->kid(1), n->kid(1)), Rule::BetaArrow);
      break;
    case Tag::TyApp:
      if (n->kid(0)->is(Tag::TyLam))
        push_redex(out, instantiate(n->kid(0)->kid(1), n->kid(1)), Rule::BetaForall);
      break;
    case Tag::Sym:
      if (is_refl(n->kid(0))) push_redex(out, n->kid(0), Rule::DeltaRefl);
      break;
    case Tag::Trans:
      if (is_refl(n->kid(0)) && is_refl(n->kid(1)) &&
          node_eq(n->kid(0)->kid(0), n->kid(1)->kid(0)))
        push_redex(out, n->kid(0), Rule::DeltaTrans);
      break;
    case Tag::CApp:
      if (is_refl(n->kid(0)) && is_refl(n->kid(1)))
        push_redex(out, refl(tapp(n->kid(0)->kid(0), n->kid(1)->kid(0))),
                   Rule::DeltaApp);
      break;
    case Tag::CInst:
      if (is_refl(n->kid(0)) && n->kid(0)->kid(0)->is(Tag::Forall))
        push_redex(out, refl(instantiate(n->kid(0)->kid(0)->kid(1), n->kid(1))),
                   Rule::DeltaInst);
      break;
    case Tag::Fst:
    case Tag::Snd:
      if (is_refl(n->kid(0)) && n->kid(0)->kid(0)->is(Tag::TApp)) {
        bool f = n->is(Tag::Fst);
        push_redex(out, refl(n->kid(0)->kid(0)->kid(f ? 0 : 1)),
                   f ? Rule::DeltaFst : Rule::DeltaSnd);
      }
      break;
    case Tag::Sim:
      if (is_refl(n->kid(0)) && is_refl(n->kid(1))) {
        const NodePtr& l = n->kid(0)->kid(0);
        const NodePtr& r = n->kid(1)->kid(0);
        auto k = kind_of(env, l, ctx);
        if (k.ok()) push_redex(out, refl(eqty(l, r, *k)), Rule::DeltaSim);
      }
      break;
    case Tag::Univ:
      if (is_refl(n->kid(1)))
        push_redex(out, refl(forall_(n->kid(0), n->kid(1)->kid(0), n->name())),
                   Rule::DeltaForall);
      break;
    case Tag::Cast:
      if (is_refl(n->kid(1))) push_redex(out, n->kid(0), Rule::DeltaCast);
      break;
    case Tag::Choice:
      if (n->kid(0)->is(Tag::Zero)) push_redex(out, n->kid(1), Rule::BetaZero1);
      if (n->kid(1)->is(Tag::Zero)) push_redex(out, n->kid(0), Rule::BetaZero2);
      break;
    case Tag::If:
    case Tag::Guard: {
      MatchResult mr = match_pattern(env, n->kid(0), n->pattern());
      bool is_if = n->is(Tag::If);
      if (mr.kind == MatchResult::Hit)
        push_redex(out, apply_spine(n->kid(1), mr.residual, mr.residual_is_type),
                   is_if ? Rule::DeltaIf1 : Rule::DeltaGuard1);
      else if (mr.kind == MatchResult::Miss)
        push_redex(out, is_if ? n->kid(2) : zero(),
                   is_if ? Rule::DeltaIf2 : Rule::DeltaGuard2);
      break;
    }
    case Tag::Con:
      if (env.is_method(n->name())) {
        const NodeList& inst = env.instances(n->name());
        NodePtr r;
        for (std::size_t i = inst.size(); i-- > 0;)
          r = r ? choice(inst[i], r) : inst[i];
        push_redex(out, r ? choice(zero(), r) : zero(), Rule::BetaOpen);
      } else if (const LetDef* l = env.let(n->name())) {
        push_redex(out, l->body, Rule::BetaLet);
      }
      break;
    default:
      break;
  }
  return out;
}

struct APos {
  std::vector<int> path;
  NodePtr node;
};

/// Positions reachable from `n` through one or more A frames.
void a_reachable(const NodePtr& n, std::vector<int>& path, std::vector<APos>& out) {
  for (int c : a_holes(n)) {
    path.push_back(c);
    out.push_back({path, n->kid(c)});
    a_reachable(n->kid(c), path, out);
    path.pop_back();
  }
}

NodePtr replace_at(const NodePtr& n, const std::vector<int>& path, std::size_t i,
                   const NodePtr& with) {
  if (i == path.size()) return with;
  NodeList kids = n->kids();
  kids[path[i]] = replace_at(n->kid(path[i]), path, i + 1, with);
  return rebuild(n, std::move(kids));
}

NodePtr with_kid(const NodePtr& n, int c, NodePtr k) {
  NodeList kids = n->kids();
  kids[c] = std::move(k);
  return rebuild(n, std::move(kids));
}

Ctx child_ctx(const NodePtr& n, int c, const Ctx& ctx) {
  if (!(n->is_binder() && c == 1)) return ctx;
  Ctx out = ctx;
  out.push_back({n->is(Tag::Univ) || n->is(Tag::TyLam) || n->is(Tag::Forall),
                 n->kid(0), n->name()});
  return out;
}

void all_steps(const Env& env, const NodePtr& n, const Ctx& ctx,
               std::vector<Step>& out) {
  for (auto& r : redexes(env, n, ctx)) out.push_back({r.result, r.rule, {}});
  std::vector<APos> reach;
  std::vector<int> path;
  a_reachable(n, path, reach);
  bool zeta = false;
  for (const auto& p : reach) {
    if (p.node->is(Tag::Zero) && !zeta) {
      out.push_back({zero(), Rule::Zeta, {}});
      zeta = true;
    }
    if (p.node->is(Tag::Choice)) {
      NodePtr l = replace_at(n, p.path, 0, p.node->kid(0));
      NodePtr r = replace_at(n, p.path, 0, p.node->kid(1));
      out.push_back({choice(l, r), Rule::Kappa, {}});
    }
  }
  for (int c : e_holes(n)) {
    std::vector<Step> sub;
    all_steps(env, n->kid(c), child_ctx(n, c, ctx), sub);
    for (auto& s : sub) {
      s.path.insert(s.path.begin(), c);
      out.push_back({with_kid(n, c, s.result), s.rule, std::move(s.path)});
    }
  }
}

StepOutcome det_step(const Env& env, const NodePtr& n, const Ctx& ctx) {
  StepOutcome o;
  auto rs = redexes(env, n, ctx);
  if (!rs.empty()) {
    o.kind = StepOutcome::Stepped;
    o.node = rs.front().result;
    o.rule = rs.front().rule;
    return o;
  }
  std::vector<APos> reach;
  std::vector<int> path;
  a_reachable(n, path, reach);
  for (const auto& p : reach) {
    if (p.node->is(Tag::Zero)) {
      o.kind = StepOutcome::Stepped;
      o.node = zero();
      o.rule = Rule::Zeta;
      return o;
    }
  }
  for (const auto& p : reach) {
    if (p.node->is(Tag::Choice) && is_value(env, p.node)) {
      o.kind = StepOutcome::Stepped;
      o.node = choice(replace_at(n, p.path, 0, p.node->kid(0)),
                      replace_at(n, p.path, 0, p.node->kid(1)));
      o.rule = Rule::Kappa;
      return o;
    }
  }
  for (int c : e_holes(n)) {
    StepOutcome sub = det_step(env, n->kid(c), child_ctx(n, c, ctx));
    if (sub.kind == StepOutcome::Stepped) {
      sub.node = with_kid(n, c, sub.node);
      sub.path.insert(sub.path.begin(), c);
      return sub;
    }
  }
  if (n->is(Tag::Zero)) {
    o.kind = StepOutcome::IsZero;
  } else if (is_value(env, n)) {
    o.kind = StepOutcome::IsValue;
  } else {
    o.kind = StepOutcome::Stuck;
  }
  o.node = n;
  return o;
}

}  // namespace

std::vector<Step> step_all(const Env& env, const NodePtr& m) {
  std::vector<Step> raw;
  all_steps(env, m, {}, raw);
  std::vector<Step> out;
  for (auto& s : raw) {
    bool dup = false;
    for (const auto& o : out)
      if (node_eq(o.result, s.result)) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(std::move(s));
  }
  return out;
}

StepOutcome step_det(const Env& env, const NodePtr& m) {
  return det_step(env, m, {});
}

WhnfResult whnf(const Env& env, const NodePtr& m, std::size_t fuel,
                const TraceFn& trace) {
  WhnfResult r;
  NodePtr cur = m;
  for (;;) {
    StepOutcome o = step_det(env, cur);
    switch (o.kind) {
      case StepOutcome::IsValue:
        r.kind = WhnfResult::Value;
        r.node = cur;
        return r;
      case StepOutcome::IsZero:
        r.kind = WhnfResult::ZeroResult;
        r.node = cur;
        return r;
      case StepOutcome::Stuck:
        r.kind = WhnfResult::Stuck;
        r.node = cur;
        return r;
      case StepOutcome::Stepped:
        break;
    }
    if (r.steps == fuel) {
      r.kind = WhnfResult::OutOfFuel;
      r.node = cur;
      return r;
    }
    if (trace) trace(o);
    cur = o.node;
    ++r.steps;
  }
}

Exploration explore(const Env& env, const NodePtr& m, std::size_t fuel) {
  Exploration ex;
  std::unordered_set<NodePtr, NodeHash, NodeEq> seen{m};
  std::deque<NodePtr> queue{m};
  std::size_t expanded = 0;
  while (!queue.empty()) {
    if (expanded == fuel) {
      ex.exhausted = true;
      break;
    }
    NodePtr cur = queue.front();
    queue.pop_front();
    ++expanded;
    if (cur->is(Tag::Zero)) {
      ex.reached_zero = true;
      continue;
    }
    if (is_value(env, cur)) {
      ex.values.push_back(cur);
      continue;
    }
    auto steps = step_all(env, cur);
    if (steps.empty()) {
      ex.stuck.push_back(cur);
      continue;
    }
    for (auto& s : steps)
      if (seen.insert(s.result).second) queue.push_back(s.result);
  }
  return ex;
}

}  // namespace fd
