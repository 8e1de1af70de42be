#include <algorithm>
#include <deque>
#include <set>

#include "fd/core_text.hpp"
#include "fd/elaborate.hpp"
#include "fd/subst.hpp"

namespace fd {

namespace {

NodePtr reverse(const NodePtr& co) {
  return co->is(Tag::Sym) ? co->kid(0) : sym(co);
}

NodePtr chain(NodePtr a, const NodePtr& b) {
  if (!a) return b;
  if (!b) return a;
  return trans(std::move(a), b);
}

NodePtr type_apps(NodePtr m, const NodeList& tys) {
  for (const auto& t : tys) m = tyapp(std::move(m), t);
  return m;
}

std::optional<std::string> rigid_head(const NodePtr& t) {
  if (t->is(Tag::Forall)) return "forall";
  if (t->is(Tag::EqTy)) return "~";
  return type_head_name(t);
}

std::size_t constructor_count(const NodePtr& t) {
  std::size_t n = t->is(Tag::TCon) ? 1 : 0;
  for (const auto& k : t->kids()) n += constructor_count(k);
  return n;
}

constexpr int kImproveDepth = 8;

}  // namespace

EqGraph::EqGraph(const ElabState& st, Context ctx)
    : st_(st), ctx_(std::move(ctx)) {
  const std::size_t depth = ctx_.size();
  for (std::size_t a = 0; a < depth; ++a) {
    const Binding& b = ctx_[a];
    if (b.is_type || !b.annot->is(Tag::EqTy)) continue;
    NodePtr ty = shift(b.annot, static_cast<std::uint32_t>(depth - a));
    add_edge(ty->kid(0), ty->kid(1),
             var(static_cast<std::uint32_t>(depth - 1 - a)));
  }
  saturate();
}

int EqGraph::node(const NodePtr& t) {
  auto it = ids_.find(t);
  if (it != ids_.end()) return it->second;
  int id = static_cast<int>(nodes_.size());
  nodes_.push_back(t);
  ids_.emplace(t, id);
  adj_.emplace_back();
  parent_.push_back(id);
  return id;
}

int EqGraph::find(const NodePtr& t) const {
  auto it = ids_.find(t);
  return it == ids_.end() ? -1 : it->second;
}

int EqGraph::root(int i) const {
  while (parent_[i] != i) {
    parent_[i] = parent_[parent_[i]];
    i = parent_[i];
  }
  return i;
}

bool EqGraph::add_edge(const NodePtr& a, const NodePtr& b, const NodePtr& co) {
  int ia = node(a);
  int ib = node(b);
  if (connected(ia, ib)) return false;
  parent_[root(ia)] = root(ib);
  adj_[ia].push_back({ib, co});
  adj_[ib].push_back({ia, reverse(co)});
  return true;
}

NodePtr EqGraph::path(int a, int b) const {
  if (a == b) return nullptr;
  std::vector<int> prev(nodes_.size(), -1);
  std::vector<NodePtr> via(nodes_.size());
  std::deque<int> queue{a};
  prev[a] = a;
  while (!queue.empty()) {
    int x = queue.front();
    queue.pop_front();
    if (x == b) break;
    for (const auto& e : adj_[x]) {
      if (prev[e.to] != -1) continue;
      prev[e.to] = x;
      via[e.to] = e.co;
      queue.push_back(e.to);
    }
  }
  if (prev[b] == -1) return nullptr;
  std::vector<NodePtr> steps;
  for (int x = b; x != a; x = prev[x]) steps.push_back(via[x]);
  NodePtr out;
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) out = chain(out, *it);
  return out;
}

std::vector<int> EqGraph::members(const NodePtr& t) const {
  std::vector<int> out;
  int id = find(t);
  if (id < 0) return out;
  for (int i = 0; i < static_cast<int>(nodes_.size()); ++i)
    if (connected(i, id)) out.push_back(i);
  return out;
}

NodePtr EqGraph::kind(const NodePtr& t) const {
  auto k = kind_of(st_.env, t, ctx_);
  return k ? *k : nullptr;
}

bool EqGraph::inconsistent() const {
  std::map<int, std::string> heads;
  for (int i = 0; i < static_cast<int>(nodes_.size()); ++i) {
    auto h = rigid_head(nodes_[i]);
    if (!h) continue;
    auto [it, fresh] = heads.emplace(root(i), *h);
    if (!fresh && it->second != *h) return true;
  }
  return false;
}

void EqGraph::saturate() {
  for (int round = 0; round < 64; ++round) {
    bool changed = decompose();
    changed = improve() || changed;
    if (!changed) break;
  }
}

bool EqGraph::decompose() {
  bool changed = false;
  const int n = static_cast<int>(nodes_.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const NodePtr x = nodes_[i];
      const NodePtr y = nodes_[j];
      if (!x->is(Tag::TApp) || !y->is(Tag::TApp) || !connected(i, j)) continue;
      NodePtr kx = kind(x->kid(0));
      NodePtr ky = kind(y->kid(0));
      if (!kx || !ky || !node_eq(kx, ky)) continue;
      NodePtr c = path(i, j);
      if (!node_eq(x->kid(0), y->kid(0)))
        changed = add_edge(x->kid(0), y->kid(0), fst(c)) || changed;
      if (!node_eq(x->kid(1), y->kid(1)))
        changed = add_edge(x->kid(1), y->kid(1), snd(c)) || changed;
    }
  }
  return changed;
}

std::vector<EqGraph::Dict> EqGraph::local_dicts() const {
  std::vector<Dict> out;
  const std::size_t depth = ctx_.size();
  for (std::size_t a = 0; a < depth; ++a) {
    const Binding& b = ctx_[a];
    if (b.is_type || b.guarded) continue;
    NodePtr ty = shift(b.annot, static_cast<std::uint32_t>(depth - a));
    auto h = type_head_name(ty);
    if (!h || !st_.classes.count(*h)) continue;
    out.push_back({var(static_cast<std::uint32_t>(depth - 1 - a)), ty});
  }
  return out;
}

void EqGraph::supers_of(const Dict& d, std::vector<Dict>& out,
                        int depth) const {
  if (depth <= 0) return;
  auto h = type_head_name(d.type);
  const ClassInfo& info = st_.classes.at(*h);
  NodeList args = type_spine(d.type).args;
  for (std::size_t j = 0; j < info.supers.size(); ++j) {
    NodePtr ty = instantiate_many(info.supers[j], args);
    bool seen = std::any_of(out.begin(), out.end(), [&](const Dict& e) {
      return node_eq(e.type, ty);
    });
    if (seen) continue;
    Dict s{app(type_apps(con(info.super_methods[j]), args), d.term), ty};
    out.push_back(s);
    supers_of(s, out, depth - 1);
  }
}

bool EqGraph::improve() {
  std::vector<Dict> dicts = local_dicts();
  {
    std::vector<Dict> supers;
    for (const auto& d : dicts) supers_of(d, supers, 4);
    dicts.insert(dicts.end(), supers.begin(), supers.end());
  }
  bool changed = false;
  auto try_pair = [&](const Dict& x, const Dict& y, const ClassInfo& info,
                      const FundepInfo& fd) {
    NodeList tx = type_spine(x.type).args;
    NodeList ty = type_spine(y.type).args;
    const std::size_t n = info.param_names.size();
    if (tx.size() != n || ty.size() != n) return;
    int a = find(tx[fd.to]);
    int b = find(ty[fd.to]);
    if (node_eq(tx[fd.to], ty[fd.to]) || (a >= 0 && b >= 0 && connected(a, b)))
      return;
    NodeList det(n);
    bool cast_needed = false;
    for (int i : fd.from) {
      det[i] = synth_at(tx[i], ty[i], kImproveDepth);
      if (!det[i]) return;
      if (!det[i]->is(Tag::Refl)) cast_needed = true;
    }
    NodeList args;
    std::vector<bool> is_det(n, false);
    for (int i : fd.from) is_det[i] = true;
    for (std::size_t i = 0; i < n; ++i) args.push_back(is_det[i] ? ty[i] : tx[i]);
    for (std::size_t i = 0; i < n; ++i)
      if (!is_det[i]) args.push_back(ty[i]);
    NodePtr first = x.term;
    if (cast_needed) {
      NodePtr co = refl(tcon(info.name));
      for (std::size_t i = 0; i < n; ++i)
        co = capp(co, is_det[i] ? det[i] : refl(tx[i]));
      first = cast(first, co);
    }
    NodePtr w = app(app(type_apps(con(fd.method), args), first), y.term);
    changed = add_edge(tx[fd.to], ty[fd.to], w) || changed;
  };

  // Dictionaries built from instances that agree with a local one on the
  // determining positions come first.
  for (const auto& y : dicts) {
    const ClassInfo& info = st_.classes.at(*type_head_name(y.type));
    NodeList targs = type_spine(y.type).args;
    for (const auto& fd : info.fundeps) {
      for (const auto& k : info.instances) {
        const InstanceInfo& inst = st_.instances.at(k);
        if (inst.head.size() != targs.size()) continue;
        NodeList sigma(inst.var_names.size());
        bool ok = true;
        for (int i : fd.from)
          ok = ok && match_head(inst.head[i], targs[i], 0, sigma);
        if (!ok || std::any_of(sigma.begin(), sigma.end(),
                               [](const NodePtr& s) { return !s; }))
          continue;
        NodePtr goal = tcon(info.name);
        for (const auto& h : inst.head)
          goal = tapp(goal, instantiate_many(h, sigma));
        NodePtr term = resolve_at(goal, st_.opts.resolve_depth);
        if (!term) continue;
        try_pair({term, goal}, y, info, fd);
      }
    }
  }
  for (const auto& x : dicts) {
    for (const auto& y : dicts) {
      if (&x == &y) continue;
      auto hx = type_head_name(x.type);
      if (*hx != *type_head_name(y.type)) continue;
      const ClassInfo& info = st_.classes.at(*hx);
      for (const auto& fd : info.fundeps) try_pair(x, y, info, fd);
    }
  }
  return changed;
}

NodePtr EqGraph::synth_at(const NodePtr& from, const NodePtr& to,
                          int depth) const {
  if (node_eq(from, to)) return refl(from);
  if (depth <= 0) return nullptr;
  int a = find(from);
  int b = find(to);
  if (a >= 0 && b >= 0 && connected(a, b)) return path(a, b);
  if (NodePtr c = congruence(from, to, depth - 1)) return c;
  std::vector<int> fs = members(from);
  std::vector<int> ts = members(to);
  if (a < 0) fs.push_back(-1);
  if (b < 0) ts.push_back(-1);
  for (int x : fs) {
    const NodePtr& X = x < 0 ? from : nodes_[x];
    for (int y : ts) {
      const NodePtr& Y = y < 0 ? to : nodes_[y];
      if (x == a && y == b) continue;
      if (X->tag() != Y->tag() || X->is(Tag::TVar) || X->is(Tag::TCon))
        continue;
      NodePtr c = congruence(X, Y, depth - 1);
      if (!c) continue;
      NodePtr pre = x < 0 || x == a ? nullptr : path(a, x);
      NodePtr post = y < 0 || y == b ? nullptr : path(y, b);
      return chain(chain(pre, c), post);
    }
  }
  return nullptr;
}

NodePtr EqGraph::congruence(const NodePtr& from, const NodePtr& to,
                            int depth) const {
  if (from->tag() != to->tag()) return nullptr;
  switch (from->tag()) {
    case Tag::TApp: {
      NodePtr kf = kind(from->kid(0));
      NodePtr kt = kind(to->kid(0));
      if (!kf || !kt || !node_eq(kf, kt)) return nullptr;
      NodePtr l = synth_at(from->kid(0), to->kid(0), depth);
      if (!l) return nullptr;
      NodePtr r = synth_at(from->kid(1), to->kid(1), depth);
      if (!r) return nullptr;
      return capp(l, r);
    }
    case Tag::Forall: {
      if (!node_eq(from->kid(0), to->kid(0))) return nullptr;
      Context inner = ctx_;
      inner.push_back({true, from->kid(0), from->name(), false});
      EqGraph g(st_, std::move(inner));
      NodePtr body = g.synth_at(from->kid(1), to->kid(1), depth);
      if (!body) return nullptr;
      return univ(from->kid(0), body, from->name());
    }
    case Tag::EqTy: {
      if (!node_eq(from->kid(2), to->kid(2))) return nullptr;
      NodePtr l = synth_at(from->kid(0), to->kid(0), depth);
      if (!l) return nullptr;
      NodePtr r = synth_at(from->kid(1), to->kid(1), depth);
      if (!r) return nullptr;
      return sim(l, r);
    }
    default:
      return nullptr;
  }
}

bool EqGraph::match_head(const NodePtr& pat, const NodePtr& ty,
                         std::uint32_t depth, NodeList& sigma) const {
  const auto m = static_cast<std::uint32_t>(sigma.size());
  if (pat->is(Tag::TVar) && pat->index() >= depth &&
      pat->index() < depth + m) {
    std::size_t slot = m - 1 - (pat->index() - depth);
    if (!sigma[slot]) {
      sigma[slot] = ty;
      return true;
    }
    if (node_eq(sigma[slot], ty)) return true;
    int a = find(sigma[slot]);
    int b = find(ty);
    return a >= 0 && b >= 0 && connected(a, b);
  }
  auto structural = [&](const NodePtr& t) {
    if (pat->tag() != t->tag()) return false;
    if (pat->is(Tag::TCon)) return pat->name() == t->name();
    if (pat->is(Tag::TApp))
      return match_head(pat->kid(0), t->kid(0), depth, sigma) &&
             match_head(pat->kid(1), t->kid(1), depth, sigma);
    return node_eq(pat, t);
  };
  NodeList saved = sigma;
  if (structural(ty)) return true;
  sigma = saved;
  for (int i : members(ty)) {
    if (node_eq(nodes_[i], ty)) continue;
    if (structural(nodes_[i])) return true;
    sigma = saved;
  }
  return false;
}

NodePtr EqGraph::resolve_at(const NodePtr& goal, int depth,
                            std::vector<std::string>* ambiguous) const {
  if (depth <= 0) return nullptr;
  auto h = type_head_name(goal);
  if (!h) return nullptr;
  auto cit = st_.classes.find(*h);
  if (cit == st_.classes.end()) return nullptr;
  const ClassInfo& info = cit->second;
  NodeList targs = type_spine(goal).args;

  auto coerce = [&](const Dict& d) -> NodePtr {
    if (*type_head_name(d.type) != info.name) return nullptr;
    NodeList dargs = type_spine(d.type).args;
    if (dargs.size() != targs.size()) return nullptr;
    NodePtr co = refl(tcon(info.name));
    for (std::size_t i = 0; i < dargs.size(); ++i) {
      NodePtr c = synth_at(dargs[i], targs[i], st_.opts.synth_depth);
      if (!c) return nullptr;
      co = capp(co, c);
    }
    return cast(d.term, co);
  };

  std::vector<Dict> locals = local_dicts();
  for (const auto& d : locals)
    if (node_eq(d.type, goal)) return d.term;
  for (const auto& d : locals)
    if (NodePtr c = coerce(d)) return c;
  std::vector<Dict> supers;
  for (const auto& d : locals) supers_of(d, supers, 4);
  for (const auto& d : supers)
    if (node_eq(d.type, goal)) return d.term;
  for (const auto& d : supers)
    if (NodePtr c = coerce(d)) return c;

  struct Candidate {
    std::string ctor;
    NodePtr term;
    std::size_t specificity;
  };
  std::vector<Candidate> found;
  for (const auto& k : info.instances) {
    const InstanceInfo& inst = st_.instances.at(k);
    if (inst.head.size() != targs.size()) continue;
    NodeList sigma(inst.var_names.size());
    bool ok = true;
    for (std::size_t i = 0; ok && i < targs.size(); ++i)
      ok = match_head(inst.head[i], targs[i], 0, sigma);
    if (!ok || std::any_of(sigma.begin(), sigma.end(),
                           [](const NodePtr& s) { return !s; }))
      continue;
    NodePtr term = type_apps(type_apps(con(k), targs), sigma);
    for (std::size_t i = 0; ok && i < targs.size(); ++i) {
      NodePtr c = synth_at(instantiate_many(inst.head[i], sigma), targs[i],
                           st_.opts.synth_depth);
      if (c) {
        term = app(term, c);
      } else {
        ok = false;
      }
    }
    for (std::size_t j = 0; ok && j < inst.context.size(); ++j) {
      NodePtr e = resolve_at(instantiate_many(inst.context[j], sigma),
                             depth - 1);
      if (e) {
        term = app(term, e);
      } else {
        ok = false;
      }
    }
    if (!ok) continue;
    std::size_t spec = 0;
    for (const auto& hd : inst.head) spec += constructor_count(hd);
    found.push_back({k, term, spec});
  }
  if (found.empty()) return nullptr;
  if (found.size() == 1) return found[0].term;
  if (st_.opts.overlap_first) {
    auto best = std::max_element(
        found.begin(), found.end(), [](const Candidate& a, const Candidate& b) {
          return a.specificity < b.specificity;
        });
    return best->term;
  }
  if (ambiguous) {
    for (const auto& c : found) ambiguous->push_back(c.ctor);
  }
  return nullptr;
}

Result<NodePtr> EqGraph::synth(const NodePtr& from, const NodePtr& to) const {
  NodePtr c = synth_at(from, to, st_.opts.synth_depth);
  if (c) return c;
  auto names = context_names(ctx_);
  Diagnostic d;
  d.code = "NoCoercion";
  d.message = "cannot synthesize a coercion between " + print_core(from, names) +
              " and " + print_core(to, names);
  d.expected = print_core(to, names);
  d.found = print_core(from, names);
  return d;
}

Result<NodePtr> EqGraph::resolve(const NodePtr& goal) const {
  if (goal->is(Tag::EqTy)) return synth(goal->kid(0), goal->kid(1));
  std::vector<std::string> amb;
  NodePtr t = resolve_at(goal, st_.opts.resolve_depth, &amb);
  if (t) return t;
  auto names = context_names(ctx_);
  Diagnostic d;
  if (!amb.empty()) {
    d.code = "Ambiguous";
    d.message = "several instances match " + print_core(goal, names) + ":";
    for (const auto& a : amb) d.message += " " + a;
  } else {
    d.code = "NoInstance";
    d.message = "no instance for " + print_core(goal, names);
  }
  return d;
}

Result<NodePtr> synth_coercion(const ElabState& st, const Context& ctx,
                               const NodePtr& from, const NodePtr& to) {
  return EqGraph(st, ctx).synth(from, to);
}

Result<NodePtr> resolve_hole(const ElabState& st, const Context& ctx,
                             const NodePtr& goal) {
  return EqGraph(st, ctx).resolve(goal);
}

}  // namespace fd
