#include "fd/subst.hpp"

namespace fd {

Subst::Subst(std::vector<SubstAction> prefix, std::uint32_t tail_shift)
    : prefix_(std::make_shared<const std::vector<SubstAction>>(
          std::move(prefix))),
      tail_(tail_shift) {}

Subst Subst::single(NodePtr arg) {
  return Subst({SubstAction::replace(std::move(arg))}, 0);
}

Subst Subst::lift(std::uint32_t by) const {
  Subst s = *this;
  s.lift_ += by;
  return s;
}

SubstAction Subst::lookup(std::uint32_t i) const {
  if (i < lift_) return SubstAction::rename(i);
  std::uint32_t j = i - lift_;
  std::uint32_t n = prefix_size();
  if (j >= n) return SubstAction::rename(j - n + tail_ + lift_);
  const SubstAction& a = (*prefix_)[j];
  if (a.kind == SubstAction::Rename)
    return SubstAction::rename(a.index + lift_);
  return SubstAction::replace(lift_ ? fd::shift(a.node, lift_) : a.node);
}

namespace {

NodePtr apply_at(const Subst& s, const NodePtr& n, std::uint32_t depth) {
  if (n->free_bound() <= depth + s.lifted()) return n;
  if (n->is(Tag::Var) || n->is(Tag::TVar)) {
    SubstAction a = s.lift(depth).lookup(n->index());
    if (a.kind == SubstAction::Replace) return a.node;
    if (a.index == n->index()) return n;
    return n->is(Tag::Var) ? var(a.index) : tvar(a.index);
  }
  NodeList kids;
  kids.reserve(n->arity());
  for (std::size_t i = 0; i < n->arity(); ++i) {
    bool under = n->is_binder() && i == 1;
    kids.push_back(apply_at(s, n->kid(i), depth + (under ? 1 : 0)));
  }
  NodeList pargs;
  if (n->has_pattern())
    for (const auto& a : n->pattern().type_args)
      pargs.push_back(apply_at(s, a, depth));
  return rebuild(n, std::move(kids), std::move(pargs));
}

}  // namespace

NodePtr Subst::apply(const NodePtr& n) const {
  if (is_identity()) return n;
  return apply_at(*this, n, 0);
}

Subst Subst::normalized() const {
  if (lift_ == 0) return *this;
  std::vector<SubstAction> p;
  p.reserve(lift_ + prefix_size());
  for (std::uint32_t i = 0; i < lift_; ++i) p.push_back(SubstAction::rename(i));
  for (std::uint32_t j = 0; j < prefix_size(); ++j) p.push_back(lookup(lift_ + j));
  return Subst(std::move(p), tail_ + lift_);
}

Subst Subst::compose(const Subst& a, const Subst& b) {
  Subst s1 = a.normalized();
  Subst s2 = b.normalized();
  std::uint32_t n1 = s1.prefix_size(), k1 = s1.tail_;
  std::uint32_t n2 = s2.prefix_size(), k2 = s2.tail_;
  std::uint32_t m = std::max<std::int64_t>(
      n1, static_cast<std::int64_t>(n1) + n2 - k1);
  std::vector<SubstAction> p;
  p.reserve(m);
  for (std::uint32_t i = 0; i < m; ++i) {
    SubstAction x = s1.lookup(i);
    if (x.kind == SubstAction::Rename) {
      p.push_back(s2.lookup(x.index));
    } else {
      p.push_back(SubstAction::replace(s2.apply(x.node)));
    }
  }
  return Subst(std::move(p), m - n1 + k1 - n2 + k2);
}

namespace {

// Rebuilds `n` with every variable at or above the binder depth replaced by
// leaf(variable, depth).
template <class Leaf>
NodePtr map_free(const NodePtr& n, std::uint32_t depth, const Leaf& leaf) {
  if (n->free_bound() <= depth) return n;
  if (n->is(Tag::Var) || n->is(Tag::TVar)) return leaf(n, depth);
  NodeList kids;
  kids.reserve(n->arity());
  for (std::size_t i = 0; i < n->arity(); ++i) {
    bool under = n->is_binder() && i == 1;
    kids.push_back(map_free(n->kid(i), depth + (under ? 1 : 0), leaf));
  }
  NodeList pargs;
  if (n->has_pattern())
    for (const auto& a : n->pattern().type_args)
      pargs.push_back(map_free(a, depth, leaf));
  return rebuild(n, std::move(kids), std::move(pargs));
}

NodePtr renamed(const NodePtr& v, std::uint32_t index) {
  return v->is(Tag::Var) ? var(index) : tvar(index);
}

}  // namespace

NodePtr shift(const NodePtr& n, std::uint32_t k, std::uint32_t cutoff) {
  if (k == 0) return n;
  return map_free(n, cutoff, [k](const NodePtr& v, std::uint32_t) {
    return renamed(v, v->index() + k);
  });
}

NodePtr instantiate(const NodePtr& body, const NodePtr& arg) {
  return map_free(body, 0, [&arg](const NodePtr& v, std::uint32_t depth) {
    if (v->index() == depth) return shift(arg, depth);
    return renamed(v, v->index() - 1);
  });
}

NodePtr instantiate_many(const NodePtr& body, const NodeList& args) {
  std::vector<SubstAction> p;
  p.reserve(args.size());
  for (std::size_t i = args.size(); i-- > 0;)
    p.push_back(SubstAction::replace(args[i]));
  return Subst(std::move(p), 0).apply(body);
}

namespace {

bool strengthen_at(const NodePtr& n, std::uint32_t k, std::uint32_t depth,
                   NodePtr& out) {
  if (n->free_bound() <= depth) {
    out = n;
    return true;
  }
  if (n->is(Tag::Var) || n->is(Tag::TVar)) {
    std::uint32_t i = n->index();
    if (i - depth < k) return false;
    out = n->is(Tag::Var) ? var(i - k) : tvar(i - k);
    return true;
  }
  NodeList kids(n->arity());
  for (std::size_t i = 0; i < n->arity(); ++i) {
    bool under = n->is_binder() && i == 1;
    if (!strengthen_at(n->kid(i), k, depth + (under ? 1 : 0), kids[i]))
      return false;
  }
  NodeList pargs;
  if (n->has_pattern()) {
    for (const auto& a : n->pattern().type_args) {
      pargs.emplace_back();
      if (!strengthen_at(a, k, depth, pargs.back())) return false;
    }
  }
  out = rebuild(n, std::move(kids), std::move(pargs));
  return true;
}

bool occurs_at(const NodePtr& n, std::uint32_t i) {
  if (n->free_bound() <= i) return false;
  if (n->is(Tag::Var) || n->is(Tag::TVar)) return n->index() == i;
  for (std::size_t c = 0; c < n->arity(); ++c) {
    bool under = n->is_binder() && c == 1;
    if (occurs_at(n->kid(c), i + (under ? 1 : 0))) return true;
  }
  if (n->has_pattern())
    for (const auto& a : n->pattern().type_args)
      if (occurs_at(a, i)) return true;
  return false;
}

}  // namespace

std::optional<NodePtr> strengthen(const NodePtr& n, std::uint32_t k) {
  if (k == 0) return n;
  NodePtr out;
  if (!strengthen_at(n, k, 0, out)) return std::nullopt;
  return out;
}

bool occurs(const NodePtr& n, std::uint32_t i) { return occurs_at(n, i); }

}  // namespace fd
