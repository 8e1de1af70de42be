#include "fd/env.hpp"

#include "fd/diagnostic.hpp"

namespace fd {

namespace {
const NodeList kNoInstances;
}

Env::Env() {
  data_.emplace(std::string(kArrowName), karrow(star(), karrow(star(), star())));
}

bool Env::has_type_name(std::string_view n) const {
  return data_.count(n) || open_.count(n);
}

bool Env::has_term_name(std::string_view n) const {
  return ctors_.count(n) || methods_.count(n) || lets_.count(n);
}

NodePtr Env::type_kind(std::string_view n) const {
  if (auto it = data_.find(n); it != data_.end()) return it->second;
  if (auto it = open_.find(n); it != open_.end()) return it->second;
  return nullptr;
}

bool Env::is_data_type(std::string_view n) const {
  return n != kArrowName && data_.count(n);
}

bool Env::is_open_type(std::string_view n) const { return open_.count(n); }

const CtorSig* Env::ctor(std::string_view n) const {
  auto it = ctors_.find(n);
  return it == ctors_.end() ? nullptr : &it->second;
}

NodePtr Env::method_type(std::string_view n) const {
  auto it = methods_.find(n);
  return it == methods_.end() ? nullptr : it->second;
}

const NodeList& Env::instances(std::string_view n) const {
  auto it = instances_.find(n);
  return it == instances_.end() ? kNoInstances : it->second;
}

const LetDef* Env::let(std::string_view n) const {
  auto it = lets_.find(n);
  return it == lets_.end() ? nullptr : &it->second;
}

NodePtr Env::term_type(std::string_view n) const {
  if (const CtorSig* c = ctor(n)) return c->type;
  if (NodePtr t = method_type(n)) return t;
  if (const LetDef* l = let(n)) return l->type;
  return nullptr;
}

std::vector<std::string> Env::ctors_of(std::string_view type_name) const {
  std::vector<std::string> out;
  for (const auto& k : ctor_order_)
    if (ctors_.at(k).owner == type_name) out.push_back(k);
  return out;
}

void Env::add(const Decl& d) {
  auto dup = [&](bool type_ns) {
    if (type_ns ? has_type_name(d.name) : has_term_name(d.name))
      fail("DuplicateName", "'" + d.name + "' is already declared");
  };
  switch (d.kind) {
    case DeclKind::Data:
      dup(true);
      data_.emplace(d.name, d.type);
      type_order_.push_back(d.name);
      break;
    case DeclKind::OpenType:
      dup(true);
      open_.emplace(d.name, d.type);
      type_order_.push_back(d.name);
      break;
    case DeclKind::Ctor:
    case DeclKind::OpenCtor: {
      dup(false);
      Telescope t = split_telescope(d.type);
      CtorSig sig{d.name, d.type, d.kind == DeclKind::OpenCtor,
                  type_head_name(t.result).value_or("")};
      ctors_.emplace(d.name, std::move(sig));
      ctor_order_.push_back(d.name);
      break;
    }
    case DeclKind::Method:
      dup(false);
      methods_.emplace(d.name, d.type);
      method_order_.push_back(d.name);
      break;
    case DeclKind::Instance:
      if (!methods_.count(d.name))
        fail("UnknownMethod", "instance of undeclared method '" + d.name + "'");
      instances_[d.name].push_back(d.body);
      break;
    case DeclKind::Let:
      dup(false);
      lets_.emplace(d.name, LetDef{d.type, d.body});
      let_order_.push_back(d.name);
      break;
  }
  decls_.push_back(d);
}

std::optional<std::string> type_head_name(const NodePtr& t) {
  const Node* n = t.get();
  while (n->is(Tag::TApp)) n = n->kid(0).get();
  if (n->is(Tag::TCon)) return n->name();
  return std::nullopt;
}

Telescope split_telescope(const NodePtr& type) {
  Telescope t;
  NodePtr cur = type;
  while (cur->is(Tag::Forall)) {
    t.binder_kinds.push_back(cur->kid(0));
    t.binder_names.push_back(cur->name());
    cur = cur->kid(1);
  }
  while (is_arrow(cur)) {
    t.args.push_back(arrow_dom(cur));
    cur = arrow_cod(cur);
  }
  t.result = cur;
  return t;
}

NodePtr build_telescope(const Telescope& t) {
  NodePtr cur = t.result;
  for (std::size_t i = t.args.size(); i-- > 0;) cur = arrow(t.args[i], cur);
  for (std::size_t i = t.binder_kinds.size(); i-- > 0;) {
    std::string name = i < t.binder_names.size() ? t.binder_names[i] : "t";
    cur = forall_(t.binder_kinds[i], cur, name);
  }
  return cur;
}

}  // namespace fd
