#include "fd/analysis.hpp"

#include <algorithm>
#include <functional>

#include "fd/core_text.hpp"
#include "fd/elaborate.hpp"
#include "fd/reduction.hpp"
#include "fd/subst.hpp"
#include "fd/typing.hpp"

namespace fd {

namespace {

std::size_t count_tcons(const NodePtr& n) {
  if (!n) return 0;
  std::size_t k = n->is(Tag::TCon) ? 1 : 0;
  for (const auto& c : n->kids()) k += count_tcons(c);
  return k;
}

std::size_t evidence_nodes(const Env& env, const NodePtr& n) {
  std::size_t k = n->is(Tag::TCon) || (n->is(Tag::Con) && env.is_ctor(n->name()))
                      ? 1
                      : 0;
  for (const auto& c : n->kids()) k += evidence_nodes(env, c);
  return k;
}

std::string tuple_text(const std::vector<std::string>& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? ", " : "") + t[i];
  return s + ")";
}

NodePtr strip_casts(NodePtr n) {
  while (n->is(Tag::Cast)) n = n->kid(0);
  return n;
}

/// Term arguments of a spine, in order.
NodeList term_args(const Spine& s) {
  NodeList out;
  for (std::size_t i = 0; i < s.args.size(); ++i)
    if (!s.is_type_arg[i]) out.push_back(s.args[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Condition 3

std::vector<std::vector<std::string>> cartesian(
    const std::vector<std::vector<std::string>>& sets) {
  std::vector<std::vector<std::string>> out{{}};
  for (const auto& set : sets) {
    std::vector<std::vector<std::string>> next;
    for (const auto& prefix : out) {
      for (const auto& c : set) {
        next.push_back(prefix);
        next.back().push_back(c);
      }
    }
    out = std::move(next);
  }
  return out;
}

/// The premises of matching every dictionary parameter against the tuple's
/// constructors are contradictory.
bool tuple_inconsistent(const Env& env, const Telescope& tel,
                        const std::vector<std::size_t>& dicts,
                        const std::vector<std::string>& tuple) {
  Context ctx;
  for (std::size_t i = 0; i < tel.binder_kinds.size(); ++i)
    ctx.push_back({true, tel.binder_kinds[i], tel.binder_names[i], false});
  const std::size_t base = ctx.size();
  std::vector<std::size_t> dict_pos;
  for (std::size_t j = 0; j < dicts.size(); ++j) {
    dict_pos.push_back(ctx.size());
    ctx.push_back({false,
                   shift(tel.args[dicts[j]],
                         static_cast<std::uint32_t>(ctx.size() - base)),
                   "d", false});
  }
  for (std::size_t j = 0; j < dicts.size(); ++j) {
    NodePtr ty = shift(ctx[dict_pos[j]].annot,
                       static_cast<std::uint32_t>(ctx.size() - dict_pos[j]));
    Pattern p;
    p.head = tuple[j];
    p.type_args = type_spine(ty).args;
    auto pt = pattern_type(env, p, ty, ctx);
    if (!pt) return false;
    for (std::size_t i = 0; i < pt->residual_kinds.size(); ++i)
      ctx.push_back({true, pt->residual_kinds[i], pt->residual_names[i], false});
    for (std::size_t i = 0; i < pt->arg_types.size(); ++i)
      ctx.push_back({false, shift(pt->arg_types[i], static_cast<std::uint32_t>(i)),
                     "h", false});
  }
  ElabState st;
  st.env = env;
  return EqGraph(st, ctx).inconsistent();
}

void saturation(const Env& env, const std::string& method, FunctionReport& r) {
  Telescope tel = split_telescope(env.method_type(method));
  std::vector<std::size_t> dicts = dictionary_params(env, env.method_type(method));
  if (dicts.empty()) return;
  std::vector<std::vector<std::string>> sets;
  for (std::size_t d : dicts) {
    auto h = type_head_name(tel.args[d]);
    std::vector<std::string> ks;
    for (const auto& k : env.ctors_of(*h))
      if (env.ctor(k)->open) ks.push_back(k);
    sets.push_back(std::move(ks));
  }
  std::vector<std::vector<std::string>> covered;
  const NodeList& bodies = env.instances(method);
  for (std::size_t i = 0; i < bodies.size(); ++i)
    covered.push_back(extract_preamble(env, method, bodies[i]).patterns);
  auto tuples = cartesian(sets);
  auto is_covered = [&](const std::vector<std::string>& t) {
    return std::find(covered.begin(), covered.end(), t) != covered.end();
  };
  // A method that already answers contradictory tuples must answer all.
  bool absurd_mode = std::any_of(tuples.begin(), tuples.end(), [&](const auto& t) {
    return is_covered(t) && tuple_inconsistent(env, tel, dicts, t);
  });
  for (const auto& t : tuples) {
    if (is_covered(t)) {
      ++r.tuples;
      continue;
    }
    if (!absurd_mode && tuple_inconsistent(env, tel, dicts, t)) continue;
    ++r.tuples;
    r.missing.push_back(t);
  }
}

// ---------------------------------------------------------------------------
// Conditions 1 and 2

class CallSites {
 public:
  CallSites(const Env& env, HssdiReport& rep) : env_(env), rep_(rep) {}

  void instance(const std::string& method, std::size_t index,
                const NodePtr& body) {
    where_ = "instance " + std::to_string(index + 1) + " of " + method;
    self_ = method;
    mark_params_ = false;
    preamble(body, 0);
  }

  void let(const std::string& name, const NodePtr& body) {
    where_ = "let " + name;
    self_.clear();
    mark_params_ = true;
    preamble(body, 0);
  }

 private:
  struct Bound {
    NodePtr type;
    bool evidence = false;
  };

  FunctionReport& report(const std::string& method) {
    for (auto& f : rep_.functions)
      if (f.method == method) return f;
    rep_.functions.push_back({});
    rep_.functions.back().method = method;
    return rep_.functions.back();
  }

  // Leading binders and guards: parameters scrutinised by a guard and the
  // fields bound by a guard's consequent are evidence.
  void preamble(const NodePtr& n, std::size_t guard_size) {
    if (n->is(Tag::TyLam) || n->is(Tag::Lam)) {
      bool evidence = mark_params_ && n->is(Tag::Lam) && in_guard_ == 0;
      if (in_guard_ > 0) evidence = true;
      scope_.push_back({n->kid(0), evidence});
      if (in_guard_ > 0 && n->is(Tag::Lam) && n->kid(0)->is(Tag::EqTy))
        guard_size += count_tcons(n->kid(0)->kid(0));
      preamble(n->kid(1), guard_size);
      scope_.pop_back();
      return;
    }
    if (n->is(Tag::Guard) && n->kid(0)->is(Tag::Var) &&
        n->kid(0)->index() < scope_.size()) {
      scope_[scope_.size() - 1 - n->kid(0)->index()].evidence = true;
      ++in_guard_;
      preamble(n->kid(1), guard_size + 1);
      --in_guard_;
      return;
    }
    std::size_t saved = guards_;
    guards_ = guard_size;
    walk(n);
    guards_ = saved;
  }

  void walk(const NodePtr& n) {
    if (n->is(Tag::App) || n->is(Tag::TyApp)) {
      Spine s = term_spine(n);
      if (s.head->is(Tag::Con)) call(s);
      for (std::size_t i = 0; i < s.args.size(); ++i)
        if (!s.is_type_arg[i]) walk(s.args[i]);
      if (!s.head->is(Tag::Con)) walk(s.head);
      return;
    }
    if (n->is(Tag::Con) && env_.is_method(n->name())) {
      Spine s{n, {}, {}};
      call(s);
      return;
    }
    const bool binds = n->is_binder();
    for (std::size_t i = 0; i < n->arity(); ++i) {
      if (binds && i == 1) scope_.push_back({n->kid(0), false});
      walk(n->kid(i));
      if (binds && i == 1) scope_.pop_back();
    }
  }

  bool evidence_ok(const NodePtr& arg) const {
    NodePtr a = strip_casts(arg);
    if (a->is(Tag::Var))
      return a->index() < scope_.size() &&
             scope_[scope_.size() - 1 - a->index()].evidence;
    Spine s = term_spine(a);
    if (!s.head->is(Tag::Con)) return false;
    if (env_.is_ctor(s.head->name())) return true;
    if (!env_.is_method(s.head->name())) return false;
    NodeList args = term_args(s);
    for (std::size_t d : dictionary_params(env_, env_.method_type(s.head->name()))) {
      if (d >= args.size() || !evidence_ok(args[d])) return false;
    }
    return true;
  }

  std::size_t evidence_size(const NodePtr& arg) const {
    NodePtr a = strip_casts(arg);
    if (a->is(Tag::Var) && a->index() < scope_.size())
      return count_tcons(scope_[scope_.size() - 1 - a->index()].type);
    return evidence_nodes(env_, a);
  }

  void call(const Spine& s) {
    const std::string& f = s.head->name();
    NodePtr type = env_.term_type(f);
    if (!type || (!env_.is_method(f) && !env_.is_let(f))) return;
    NodeList args = term_args(s);
    std::vector<std::size_t> dicts = dictionary_params(env_, type);
    if (dicts.empty()) return;
    std::size_t size = 0;
    for (std::size_t d : dicts) {
      if (d >= args.size()) {
        if (env_.is_method(f))
          report(f).condition2.push_back(where_ + ": call to " + f +
                                         " lacks dictionary argument " +
                                         std::to_string(d + 1));
        return;
      }
      if (!evidence_ok(args[d])) {
        report(f).condition2.push_back(where_ + ": dictionary argument " +
                                  std::to_string(d + 1) + " of " + f +
                                  " is neither constructor evidence nor "
                                  "guard-bound");
      }
      size += evidence_size(args[d]);
    }
    if (!self_.empty() && f == self_ && size >= guards_) {
      report(self_).condition1.push_back(
          where_ + ": recursive call with evidence size " +
          std::to_string(size) + " not below " + std::to_string(guards_));
    }
  }

  const Env& env_;
  HssdiReport& rep_;
  std::string where_;
  std::string self_;
  bool mark_params_ = false;
  int in_guard_ = 0;
  std::size_t guards_ = 0;
  std::vector<Bound> scope_;
};

// ---------------------------------------------------------------------------
// Specialization

class Specializer {
 public:
  Specializer(const Env& env, std::size_t fuel) : env_(env), fuel_(fuel) {}

  NodePtr run(const NodePtr& m) { return norm(m); }

 private:
  void tick() {
    if (fuel_ == 0) fail("SpecializationFuel", "specialization ran out of fuel");
    --fuel_;
  }

  NodePtr norm(const NodePtr& n) {
    tick();
    if (n->is(Tag::Con)) {
      if (const LetDef* l = env_.let(n->name())) return norm(l->body);
      return unfold(n);
    }
    if (n->is_type() || n->is_kind()) return n;
    NodeList kids;
    kids.reserve(n->arity());
    for (const auto& k : n->kids()) kids.push_back(norm(k));
    NodePtr m = rebuild(n, std::move(kids));
    return root(m);
  }

  NodePtr root(const NodePtr& m) {
    for (int h : a_holes(m))
      if (m->kid(h)->is(Tag::Zero)) return zero();
    switch (m->tag()) {
      case Tag::App:
        if (m->kid(0)->is(Tag::Lam))
          return norm(instantiate(m->kid(0)->kid(1), m->kid(1)));
        return unfold(m);
      case Tag::TyApp:
        if (m->kid(0)->is(Tag::TyLam))
          return norm(instantiate(m->kid(0)->kid(1), m->kid(1)));
        return unfold(m);
      case Tag::Choice:
        if (m->kid(0)->is(Tag::Zero)) return m->kid(1);
        if (m->kid(1)->is(Tag::Zero)) return m->kid(0);
        return m;
      case Tag::Guard: {
        MatchResult r = match_pattern(env_, m->kid(0), m->pattern());
        if (r.kind == MatchResult::Miss) return zero();
        if (r.kind == MatchResult::Hit)
          return norm(apply_spine(m->kid(1), r.residual, r.residual_is_type));
        return m;
      }
      default:
        return m;
    }
  }

  /// An open function applied to all of its dictionaries, each a value.
  NodePtr unfold(const NodePtr& m) {
    Spine s = term_spine(m);
    if (!s.head->is(Tag::Con) || !env_.is_method(s.head->name())) return m;
    const std::string& f = s.head->name();
    NodeList args = term_args(s);
    auto dicts = dictionary_params(env_, env_.method_type(f));
    if (dicts.empty()) return m;
    for (std::size_t d : dicts)
      if (d >= args.size() || !is_value(env_, args[d])) return m;
    const NodeList& bodies = env_.instances(f);
    NodePtr r;
    for (std::size_t i = bodies.size(); i-- > 0;) {
      NodePtr b = apply_spine(bodies[i], s.args, s.is_type_arg);
      r = r ? choice(b, r) : b;
    }
    NodePtr out = r ? norm(r) : zero();
    if (out->is(Tag::Zero))
      fail("Unsaturated", "no instance of " + f + " matches " +
                              print_core(m));
    return out;
  }

  const Env& env_;
  std::size_t fuel_;
};

bool mentions_zero_sources(const Env& env, const NodePtr& n) {
  if (n->is(Tag::Guard) || n->is(Tag::Zero)) return true;
  if (n->is(Tag::Con) && (env.is_method(n->name()) || env.is_let(n->name())))
    return true;
  return std::any_of(n->kids().begin(), n->kids().end(),
                     [&](const NodePtr& k) { return mentions_zero_sources(env, k); });
}

}  // namespace

std::vector<std::size_t> dictionary_params(const Env& env, const NodePtr& type) {
  std::vector<std::size_t> out;
  if (!type) return out;
  Telescope tel = split_telescope(type);
  for (std::size_t i = 0; i < tel.args.size(); ++i)
    if (is_open_head(env, tel.args[i])) out.push_back(i);
  return out;
}

GuardPreamble extract_preamble(const Env& env, const std::string& method,
                               const NodePtr& body) {
  GuardPreamble g;
  g.method = method;
  auto dicts = dictionary_params(env, env.method_type(method));
  g.patterns.assign(dicts.size(), {});
  // Context position of each dictionary parameter.
  std::vector<std::size_t> pos(dicts.size(), SIZE_MAX);
  std::size_t depth = 0;
  std::size_t term_params = 0;
  bool guarded = false;
  NodePtr n = body;
  for (;;) {
    if (n->is(Tag::TyLam) || n->is(Tag::Lam)) {
      if (n->is(Tag::Lam) && !guarded) {
        auto it = std::find(dicts.begin(), dicts.end(), term_params);
        if (it != dicts.end()) pos[it - dicts.begin()] = depth;
        ++term_params;
      }
      ++depth;
      n = n->kid(1);
    } else if (n->is(Tag::Guard)) {
      guarded = true;
      if (n->kid(0)->is(Tag::Var) && n->kid(0)->index() < depth) {
        std::size_t at = depth - 1 - n->kid(0)->index();
        for (std::size_t j = 0; j < pos.size(); ++j)
          if (pos[j] == at) g.patterns[j] = n->pattern().head;
      }
      n = n->kid(1);
    } else {
      break;
    }
  }
  return g;
}

bool HssdiReport::ok() const {
  return std::all_of(functions.begin(), functions.end(),
                     [](const FunctionReport& f) { return f.ok(); });
}

const FunctionReport* HssdiReport::find(const std::string& method) const {
  for (const auto& f : functions)
    if (f.method == method) return &f;
  return nullptr;
}

std::string HssdiReport::to_string() const {
  std::string s;
  for (const auto& f : functions) {
    s += f.method + ": " + (f.ok() ? "ok" : "violations") + " (" +
         std::to_string(f.tuples) + " tuples)\n";
    for (const auto& v : f.condition1) s += "  condition 1: " + v + "\n";
    for (const auto& v : f.condition2) s += "  condition 2: " + v + "\n";
    for (const auto& t : f.missing)
      s += "  condition 3: no instance for " + tuple_text(t) + "\n";
  }
  return s;
}

HssdiReport check_saturation(const Env& env) {
  HssdiReport rep;
  for (const auto& m : env.method_names()) {
    FunctionReport r;
    r.method = m;
    saturation(env, m, r);
    rep.functions.push_back(std::move(r));
  }
  return rep;
}

HssdiReport check_hssdi(const Env& env) {
  HssdiReport rep = check_saturation(env);
  CallSites sites(env, rep);
  for (const auto& m : env.method_names()) {
    const NodeList& bodies = env.instances(m);
    for (std::size_t i = 0; i < bodies.size(); ++i)
      sites.instance(m, i, bodies[i]);
  }
  for (const auto& l : env.let_names()) sites.let(l, env.let(l)->body);
  return rep;
}

bool check_no_zero_syntactic(const Env& env, const NodePtr& m) {
  return !mentions_zero_sources(env, m);
}

Result<NodePtr> specialize(const Env& env, const NodePtr& m, std::size_t fuel) {
  return capture([&] {
    NodePtr out = Specializer(env, fuel).run(m);
    std::function<void(const NodePtr&)> scan = [&](const NodePtr& n) {
      if (n->is(Tag::Con) && env.is_method(n->name()))
        fail("NotHssdi", "call to " + n->name() +
                             " has no constructor evidence after inlining");
      for (const auto& k : n->kids()) scan(k);
    };
    scan(out);
    return out;
  });
}

}  // namespace fd
