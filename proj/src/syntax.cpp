#include "fd/syntax.hpp"

#include <algorithm>
#include <cassert>
#include <functional>

namespace fd {

std::string_view tag_name(Tag t) {
  switch (t) {
    case Tag::Star: return "Star";
    case Tag::KArrow: return "KArrow";
    case Tag::TVar: return "TVar";
    case Tag::TCon: return "TCon";
    case Tag::TApp: return "TApp";
    case Tag::EqTy: return "EqTy";
    case Tag::Forall: return "Forall";
    case Tag::Var: return "Var";
    case Tag::Con: return "Con";
    case Tag::Lam: return "Lam";
    case Tag::App: return "App";
    case Tag::TyLam: return "TyLam";
    case Tag::TyApp: return "TyApp";
    case Tag::Cast: return "Cast";
    case Tag::If: return "If";
    case Tag::Guard: return "Guard";
    case Tag::Zero: return "Zero";
    case Tag::Choice: return "Choice";
    case Tag::Refl: return "Refl";
    case Tag::Sym: return "Sym";
    case Tag::Trans: return "Trans";
    case Tag::CApp: return "CApp";
    case Tag::Fst: return "Fst";
    case Tag::Snd: return "Snd";
    case Tag::Univ: return "Univ";
    case Tag::CInst: return "CInst";
    case Tag::Sim: return "Sim";
  }
  return "?";
}

namespace {

bool binds(Tag t) {
  return t == Tag::Forall || t == Tag::Lam || t == Tag::TyLam ||
         t == Tag::Univ;
}

}  // namespace

Node::Node(Tag tag, std::uint32_t index, std::string name, NodeList kids,
           std::shared_ptr<const Pattern> pattern)
    : tag_(tag),
      index_(index),
      name_(std::move(name)),
      kids_(std::move(kids)),
      pattern_(std::move(pattern)) {
  if (tag_ == Tag::Var || tag_ == Tag::TVar) {
    free_bound_ = index_ + 1;
    return;
  }
  for (std::size_t i = 0; i < kids_.size(); ++i) {
    const auto& k = kids_[i];
    assert(k);
    std::uint32_t fb = k->free_bound();
    if (binds(tag_) && i == 1) fb = fb > 0 ? fb - 1 : 0;
    free_bound_ = std::max(free_bound_, fb);
    size_ += k->size();
  }
  if (pattern_) {
    for (const auto& a : pattern_->type_args) {
      free_bound_ = std::max(free_bound_, a->free_bound());
      size_ += a->size();
    }
  }
}

bool Node::is_binder() const { return binds(tag_); }

bool Node::is_type() const {
  switch (tag_) {
    case Tag::TVar:
    case Tag::TCon:
    case Tag::TApp:
    case Tag::EqTy:
    case Tag::Forall:
      return true;
    default:
      return false;
  }
}

bool Node::is_coercion_form() const {
  switch (tag_) {
    case Tag::Refl:
    case Tag::Sym:
    case Tag::Trans:
    case Tag::CApp:
    case Tag::Fst:
    case Tag::Snd:
    case Tag::Univ:
    case Tag::CInst:
    case Tag::Sim:
      return true;
    default:
      return false;
  }
}

namespace {

NodePtr make(Tag t, NodeList kids, std::string name = {},
             std::uint32_t index = 0,
             std::shared_ptr<const Pattern> p = nullptr) {
  return std::make_shared<const Node>(t, index, std::move(name),
                                      std::move(kids), std::move(p));
}

}  // namespace

NodePtr star() {
  static const NodePtr s = make(Tag::Star, {});
  return s;
}
NodePtr karrow(NodePtr d, NodePtr c) {
  return make(Tag::KArrow, {std::move(d), std::move(c)});
}
NodePtr tvar(std::uint32_t i) { return make(Tag::TVar, {}, {}, i); }
NodePtr tcon(std::string name) { return make(Tag::TCon, {}, std::move(name)); }
NodePtr tapp(NodePtr f, NodePtr a) {
  return make(Tag::TApp, {std::move(f), std::move(a)});
}
NodePtr arrow(NodePtr d, NodePtr c) {
  static const NodePtr arr = tcon(std::string(kArrowName));
  return tapp(tapp(arr, std::move(d)), std::move(c));
}
NodePtr eqty(NodePtr l, NodePtr r, NodePtr k) {
  return make(Tag::EqTy, {std::move(l), std::move(r), std::move(k)});
}
NodePtr forall_(NodePtr k, NodePtr body, std::string hint) {
  return make(Tag::Forall, {std::move(k), std::move(body)}, std::move(hint));
}
NodePtr var(std::uint32_t i) { return make(Tag::Var, {}, {}, i); }
NodePtr con(std::string name) { return make(Tag::Con, {}, std::move(name)); }
NodePtr lam(NodePtr ty, NodePtr body, std::string hint) {
  return make(Tag::Lam, {std::move(ty), std::move(body)}, std::move(hint));
}
NodePtr app(NodePtr f, NodePtr a) {
  return make(Tag::App, {std::move(f), std::move(a)});
}
NodePtr tylam(NodePtr k, NodePtr body, std::string hint) {
  return make(Tag::TyLam, {std::move(k), std::move(body)}, std::move(hint));
}
NodePtr tyapp(NodePtr m, NodePtr ty) {
  return make(Tag::TyApp, {std::move(m), std::move(ty)});
}
NodePtr cast(NodePtr m, NodePtr eta) {
  return make(Tag::Cast, {std::move(m), std::move(eta)});
}
NodePtr if_(NodePtr scrut, Pattern p, NodePtr cons, NodePtr alt) {
  return make(Tag::If, {std::move(scrut), std::move(cons), std::move(alt)}, {},
              0, std::make_shared<const Pattern>(std::move(p)));
}
NodePtr guard(NodePtr scrut, Pattern p, NodePtr cons) {
  return make(Tag::Guard, {std::move(scrut), std::move(cons)}, {}, 0,
              std::make_shared<const Pattern>(std::move(p)));
}
NodePtr zero() {
  static const NodePtr z = make(Tag::Zero, {});
  return z;
}
NodePtr choice(NodePtr l, NodePtr r) {
  return make(Tag::Choice, {std::move(l), std::move(r)});
}
NodePtr refl(NodePtr ty) { return make(Tag::Refl, {std::move(ty)}); }
NodePtr sym(NodePtr c) { return make(Tag::Sym, {std::move(c)}); }
NodePtr trans(NodePtr l, NodePtr r) {
  return make(Tag::Trans, {std::move(l), std::move(r)});
}
NodePtr capp(NodePtr l, NodePtr r) {
  return make(Tag::CApp, {std::move(l), std::move(r)});
}
NodePtr fst(NodePtr c) { return make(Tag::Fst, {std::move(c)}); }
NodePtr snd(NodePtr c) { return make(Tag::Snd, {std::move(c)}); }
NodePtr univ(NodePtr k, NodePtr body, std::string hint) {
  return make(Tag::Univ, {std::move(k), std::move(body)}, std::move(hint));
}
NodePtr cinst(NodePtr c, NodePtr ty) {
  return make(Tag::CInst, {std::move(c), std::move(ty)});
}
NodePtr sim(NodePtr l, NodePtr r) {
  return make(Tag::Sim, {std::move(l), std::move(r)});
}

NodePtr rebuild(const NodePtr& n, NodeList kids, NodeList pattern_args) {
  bool same = kids.size() == n->arity();
  for (std::size_t i = 0; same && i < kids.size(); ++i)
    same = kids[i] == n->kid(i);
  std::shared_ptr<const Pattern> p;
  if (n->has_pattern()) {
    const auto& old = n->pattern().type_args;
    if (pattern_args.size() != old.size()) {
      same = false;
      pattern_args.resize(old.size());
      for (std::size_t i = 0; i < old.size(); ++i)
        if (!pattern_args[i]) pattern_args[i] = old[i];
    }
    for (std::size_t i = 0; same && i < old.size(); ++i)
      same = pattern_args[i] == old[i];
    if (!same)
      p = std::make_shared<const Pattern>(
          Pattern{n->pattern().head, std::move(pattern_args)});
  }
  if (same) return n;
  return make(n->tag(), std::move(kids), n->name(), n->index(), std::move(p));
}

bool pattern_eq(const Pattern& a, const Pattern& b) {
  if (a.head != b.head || a.type_args.size() != b.type_args.size())
    return false;
  for (std::size_t i = 0; i < a.type_args.size(); ++i)
    if (!node_eq(a.type_args[i], b.type_args[i])) return false;
  return true;
}

bool node_eq(const Node& a, const Node& b) {
  if (&a == &b) return true;
  if (a.tag() != b.tag() || a.arity() != b.arity() ||
      a.size() != b.size() || a.free_bound() != b.free_bound())
    return false;
  switch (a.tag()) {
    case Tag::Var:
    case Tag::TVar:
      return a.index() == b.index();
    case Tag::Con:
    case Tag::TCon:
      return a.name() == b.name();
    default:
      break;
  }
  if (a.has_pattern() && !pattern_eq(a.pattern(), b.pattern())) return false;
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (!node_eq(a.kid(i), b.kid(i))) return false;
  return true;
}

std::size_t NodeHash::operator()(const NodePtr& n) const {
  std::size_t h = static_cast<std::size_t>(n->tag()) * 0x9e3779b97f4a7c15ULL;
  auto mix = [&h](std::size_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  };
  switch (n->tag()) {
    case Tag::Var:
    case Tag::TVar:
      mix(n->index());
      break;
    case Tag::Con:
    case Tag::TCon:
      mix(std::hash<std::string>{}(n->name()));
      break;
    default:
      break;
  }
  for (const auto& k : n->kids()) mix((*this)(k));
  if (n->has_pattern()) {
    mix(std::hash<std::string>{}(n->pattern().head));
    for (const auto& a : n->pattern().type_args) mix((*this)(a));
  }
  return h;
}

bool is_arrow(const NodePtr& t) {
  return t->is(Tag::TApp) && t->kid(0)->is(Tag::TApp) &&
         t->kid(0)->kid(0)->is(Tag::TCon) &&
         t->kid(0)->kid(0)->name() == kArrowName;
}
const NodePtr& arrow_dom(const NodePtr& t) { return t->kid(0)->kid(1); }
const NodePtr& arrow_cod(const NodePtr& t) { return t->kid(1); }

Spine term_spine(const NodePtr& m) {
  Spine s;
  NodePtr cur = m;
  while (cur->is(Tag::App) || cur->is(Tag::TyApp)) {
    s.args.push_back(cur->kid(1));
    s.is_type_arg.push_back(cur->is(Tag::TyApp));
    cur = cur->kid(0);
  }
  s.head = cur;
  std::reverse(s.args.begin(), s.args.end());
  std::reverse(s.is_type_arg.begin(), s.is_type_arg.end());
  return s;
}

Spine type_spine(const NodePtr& t) {
  Spine s;
  NodePtr cur = t;
  while (cur->is(Tag::TApp)) {
    s.args.push_back(cur->kid(1));
    s.is_type_arg.push_back(true);
    cur = cur->kid(0);
  }
  s.head = cur;
  std::reverse(s.args.begin(), s.args.end());
  return s;
}

NodePtr apply_spine(NodePtr head, const NodeList& args,
                    const std::vector<bool>& is_type_arg) {
  for (std::size_t i = 0; i < args.size(); ++i)
    head = is_type_arg[i] ? tyapp(std::move(head), args[i])
                          : app(std::move(head), args[i]);
  return head;
}

bool contains_tag(const NodePtr& n, Tag t) {
  if (n->is(t)) return true;
  for (const auto& k : n->kids())
    if (contains_tag(k, t)) return true;
  return false;
}

std::string_view decl_keyword(DeclKind k) {
  switch (k) {
    case DeclKind::Data: return "data";
    case DeclKind::Ctor: return "ctor";
    case DeclKind::OpenType: return "open";
    case DeclKind::OpenCtor: return "openctor";
    case DeclKind::Method: return "method";
    case DeclKind::Instance: return "instance";
    case DeclKind::Let: return "let";
  }
  return "?";
}

bool decl_eq(const Decl& a, const Decl& b) {
  if (a.kind != b.kind || a.name != b.name) return false;
  if ((a.type == nullptr) != (b.type == nullptr)) return false;
  if ((a.body == nullptr) != (b.body == nullptr)) return false;
  if (a.type && !node_eq(a.type, b.type)) return false;
  if (a.body && !node_eq(a.body, b.body)) return false;
  return true;
}

}  // namespace fd
