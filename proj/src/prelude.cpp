#include "fd/prelude.hpp"

#include <algorithm>

#include "fd/core_text.hpp"
#include "fd/typing.hpp"

namespace fd {

namespace {

bool mentions(const NodePtr& n, const std::vector<std::string>& names) {
  if (!n) return false;
  if ((n->is(Tag::TCon) || n->is(Tag::Con)) &&
      std::find(names.begin(), names.end(), n->name()) != names.end())
    return true;
  return std::any_of(n->kids().begin(), n->kids().end(),
                     [&](const NodePtr& k) { return mentions(k, names); });
}

}  // namespace

const std::vector<PreludeKind>& all_preludes() {
  static const std::vector<PreludeKind> all = {
      PreludeKind::Bool, PreludeKind::Maybe, PreludeKind::EqOrd,
      PreludeKind::Fundep};
  return all;
}

std::string_view prelude_name(PreludeKind k) {
  switch (k) {
    case PreludeKind::Bool: return "bool";
    case PreludeKind::Maybe: return "maybe";
    case PreludeKind::EqOrd: return "eq-ord";
    case PreludeKind::Fundep: return "fundep";
  }
  return "?";
}

std::optional<PreludeKind> parse_prelude_name(std::string_view s) {
  for (PreludeKind k : all_preludes())
    if (prelude_name(k) == s) return k;
  return std::nullopt;
}

Result<Env> load_prelude(PreludeKind k, std::optional<std::string_view> text) {
  auto base = parse_core(text ? *text : bundled_source(BundledFile::Prelude));
  if (!base) return base.error();
  Program prog;
  if (k == PreludeKind::Bool) {
    const std::vector<std::string> drop = {"Maybe", "Just", "Nothing", "Int"};
    for (const auto& d : *base) {
      bool named = std::find(drop.begin(), drop.end(), d.name) != drop.end();
      if (!named && !mentions(d.type, drop) && !mentions(d.body, drop))
        prog.push_back(d);
    }
  } else {
    prog = *base;
  }
  if (k == PreludeKind::EqOrd || k == PreludeKind::Fundep) {
    auto extra = parse_core(bundled_source(
        k == PreludeKind::EqOrd ? BundledFile::Superclasses : BundledFile::Fundeps));
    if (!extra) return extra.error();
    prog.insert(prog.end(), extra->begin(), extra->end());
  }
  CheckReport rep = check_program(prog);
  if (!rep.ok()) return rep.diagnostics.front();
  return rep.env;
}

}  // namespace fd
