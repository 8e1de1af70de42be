#include "subst_oracle.hpp"

#include <memory>

namespace fdtest {

using fd::NodeList;
using fd::NodePtr;
using fd::Tag;

namespace {

const char kBound = 'b';
const char kFree = 'f';

std::string marker(char k, std::uint64_t n) {
  return std::string("%") + k + std::to_string(n);
}

bool is_marker(const NodePtr& n, char k) {
  return (n->is(Tag::Con) || n->is(Tag::TCon)) && n->name().size() > 2 &&
         n->name()[0] == '%' && n->name()[1] == k;
}

std::uint64_t marker_num(const NodePtr& n) { return std::stoull(n->name().substr(2)); }

NodePtr leaf(bool type_level, const std::string& name) {
  return type_level ? fd::tcon(name) : fd::con(name);
}

NodePtr make(const NodePtr& like, std::string name, NodeList kids,
             const NodeList* pattern_args) {
  std::shared_ptr<const fd::Pattern> p;
  if (like->has_pattern())
    p = std::make_shared<const fd::Pattern>(
        fd::Pattern{like->pattern().head, pattern_args ? *pattern_args
                                                      : like->pattern().type_args});
  return std::make_shared<const fd::Node>(like->tag(), like->index(), std::move(name),
                                          std::move(kids), std::move(p));
}

struct Namer {
  std::uint64_t next = 0;
};

NodePtr to_named(const NodePtr& n, std::vector<std::string>& scope, Namer& nm) {
  if (n->is(Tag::Var) || n->is(Tag::TVar)) {
    std::uint32_t i = n->index();
    bool ty = n->is(Tag::TVar);
    if (i < scope.size()) return leaf(ty, scope[scope.size() - 1 - i]);
    return leaf(ty, marker(kFree, i - scope.size()));
  }
  NodeList kids;
  std::string name = n->name();
  for (std::size_t c = 0; c < n->arity(); ++c) {
    if (n->is_binder() && c == 1) {
      name = marker(kBound, nm.next++);
      scope.push_back(name);
      kids.push_back(to_named(n->kid(c), scope, nm));
      scope.pop_back();
    } else {
      kids.push_back(to_named(n->kid(c), scope, nm));
    }
  }
  NodeList pargs;
  if (n->has_pattern())
    for (const auto& a : n->pattern().type_args) pargs.push_back(to_named(a, scope, nm));
  return make(n, name, std::move(kids), &pargs);
}

NodePtr from_named(const NodePtr& n, std::vector<std::string>& scope) {
  if (is_marker(n, kBound)) {
    for (std::size_t i = scope.size(); i-- > 0;)
      if (scope[i] == n->name()) {
        auto d = static_cast<std::uint32_t>(scope.size() - 1 - i);
        return n->is(Tag::TCon) ? fd::tvar(d) : fd::var(d);
      }
    throw std::logic_error("unbound marker " + n->name());
  }
  if (is_marker(n, kFree)) {
    auto d = static_cast<std::uint32_t>(marker_num(n) + scope.size());
    return n->is(Tag::TCon) ? fd::tvar(d) : fd::var(d);
  }
  NodeList kids;
  for (std::size_t c = 0; c < n->arity(); ++c) {
    if (n->is_binder() && c == 1) {
      scope.push_back(n->name());
      kids.push_back(from_named(n->kid(c), scope));
      scope.pop_back();
    } else {
      kids.push_back(from_named(n->kid(c), scope));
    }
  }
  NodeList pargs;
  if (n->has_pattern())
    for (const auto& a : n->pattern().type_args) pargs.push_back(from_named(a, scope));
  return make(n, n->is_binder() ? "x" : n->name(), std::move(kids), &pargs);
}

NodePtr replace_free(const NodePtr& n, const Mapping& m, Namer& nm) {
  if (is_marker(n, kFree)) {
    Image im = m(static_cast<std::uint32_t>(marker_num(n)));
    if (im.rename) return leaf(n->is(Tag::TCon), marker(kFree, im.index));
    std::vector<std::string> scope;
    return to_named(im.node, scope, nm);
  }
  NodeList kids;
  for (const auto& k : n->kids()) kids.push_back(replace_free(k, m, nm));
  NodeList pargs;
  if (n->has_pattern())
    for (const auto& a : n->pattern().type_args) pargs.push_back(replace_free(a, m, nm));
  return make(n, n->name(), std::move(kids), &pargs);
}

}  // namespace

NodePtr oracle_apply(const NodePtr& n, const Mapping& m) {
  Namer nm;
  std::vector<std::string> scope;
  NodePtr named = to_named(n, scope, nm);
  NodePtr out = replace_free(named, m, nm);
  return from_named(out, scope);
}

NodePtr oracle_shift(const NodePtr& n, std::uint32_t k, std::uint32_t cutoff) {
  return oracle_apply(n, [&](std::uint32_t j) {
    return Image{true, j >= cutoff ? j + k : j, nullptr};
  });
}

NodePtr oracle_instantiate(const NodePtr& body, const NodePtr& arg) {
  return oracle_apply(body, [&](std::uint32_t j) {
    if (j == 0) return Image{false, 0, arg};
    return Image{true, j - 1, nullptr};
  });
}

fd::Subst SubstSpec::build() const {
  fd::Subst s(prefix, tail);
  return lift ? s.lift(lift) : s;
}

Image SubstSpec::image(std::uint32_t i) const {
  if (i < lift) return {true, i, nullptr};
  std::uint32_t j = i - lift;
  auto n = static_cast<std::uint32_t>(prefix.size());
  if (j >= n) return {true, j - n + tail + lift, nullptr};
  const fd::SubstAction& a = prefix[j];
  if (a.kind == fd::SubstAction::Rename) return {true, a.index + lift, nullptr};
  return {false, 0, oracle_shift(a.node, lift, 0)};
}

NodePtr oracle_apply(const NodePtr& n, const SubstSpec& s) {
  return oracle_apply(n, [&](std::uint32_t i) { return s.image(i); });
}

// Generation ---------------------------------------------------------------

NodePtr SyntaxGen::kind(int size) {
  if (size <= 1 || pick(3) > 0) return fd::star();
  return fd::karrow(kind(size / 2), kind(size / 2));
}

NodePtr SyntaxGen::type(int size, std::uint32_t free) {
  if (size <= 1) {
    if (free > 0 && pick(3) > 0) return fd::tvar(pick(static_cast<int>(free)));
    return fd::tcon(pick(2) ? "Bool" : "Maybe");
  }
  switch (pick(4)) {
    case 0:
      return fd::tapp(type(size / 2, free), type(size / 2, free));
    case 1:
      return fd::forall_(kind(2), type(size - 1, free + 1), "a");
    case 2:
      return fd::eqty(type(size / 2, free), type(size / 2, free), kind(2));
    default:
      return fd::arrow(type(size / 2, free), type(size / 2, free));
  }
}

NodePtr SyntaxGen::coercion(int size, std::uint32_t free) {
  if (size <= 1) {
    if (free > 0 && pick(2)) return fd::var(pick(static_cast<int>(free)));
    return fd::refl(type(2, free));
  }
  switch (pick(8)) {
    case 0:
      return fd::sym(coercion(size - 1, free));
    case 1:
      return fd::trans(coercion(size / 2, free), coercion(size / 2, free));
    case 2:
      return fd::capp(coercion(size / 2, free), coercion(size / 2, free));
    case 3:
      return pick(2) ? fd::fst(coercion(size - 1, free)) : fd::snd(coercion(size - 1, free));
    case 4:
      return fd::univ(kind(2), coercion(size - 1, free + 1), "a");
    case 5:
      return fd::cinst(coercion(size - 1, free), type(3, free));
    case 6:
      return fd::sim(term(size / 2, free), term(size / 2, free));
    default:
      return fd::refl(type(size, free));
  }
}

NodePtr SyntaxGen::term(int size, std::uint32_t free) {
  if (size <= 1) {
    if (free > 0 && pick(3) > 0) return fd::var(pick(static_cast<int>(free)));
    return pick(4) ? fd::con(pick(2) ? "True" : "False") : fd::zero();
  }
  switch (pick(9)) {
    case 0:
      return fd::lam(type(3, free), term(size - 1, free + 1));
    case 1:
      return fd::app(term(size / 2, free), term(size / 2, free));
    case 2:
      return fd::tylam(kind(2), term(size - 1, free + 1), "a");
    case 3:
      return fd::tyapp(term(size - 1, free), type(3, free));
    case 4:
      return fd::cast(term(size / 2, free), coercion(size / 2, free));
    case 5:
      return fd::if_(term(size / 3, free), fd::Pattern{"Just", {type(2, free)}},
                     term(size / 3, free), term(size / 3, free));
    case 6:
      return fd::guard(term(size / 2, free), fd::Pattern{"EqBool", {type(2, free)}},
                       term(size / 2, free));
    case 7:
      return fd::choice(term(size / 2, free), term(size / 2, free));
    default:
      return coercion(size, free);
  }
}

NodePtr SyntaxGen::node(int size, std::uint32_t free) {
  return pick(4) ? term(size, free) : type(size, free);
}

SubstSpec SyntaxGen::subst(std::uint32_t free) {
  SubstSpec s;
  int n = pick(5);
  for (int i = 0; i < n; ++i) {
    if (pick(2))
      s.prefix.push_back(fd::SubstAction::rename(static_cast<std::uint32_t>(pick(6))));
    else
      s.prefix.push_back(fd::SubstAction::replace(node(1 + pick(8), free)));
  }
  s.tail = static_cast<std::uint32_t>(pick(4));
  s.lift = static_cast<std::uint32_t>(pick(3));
  return s;
}

}  // namespace fdtest
