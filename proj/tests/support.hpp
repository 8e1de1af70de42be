#pragma once

// Helpers shared by the test binaries: corpus access, parsing shortcuts and
// the elaboration pipeline used by the CLI.

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "fd/core_text.hpp"
#include "fd/elaborate.hpp"
#include "fd/prelude.hpp"
#include "fd/surface.hpp"
#include "fd/typing.hpp"

#ifndef FD_CORPUS_DIR
#define FD_CORPUS_DIR "corpus"
#endif

namespace fdtest {

inline std::string corpus_path(const std::string& name) {
  return std::string(FD_CORPUS_DIR) + "/" + name;
}

inline std::string read_corpus(const std::string& name) {
  std::ifstream in(corpus_path(name), std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + corpus_path(name));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline fd::Env prelude(fd::PreludeKind k = fd::PreludeKind::Maybe) {
  return fd::load_prelude(k).value();
}

inline fd::NodePtr term(const std::string& text, const fd::ParseScope& scope = {}) {
  return fd::parse_term(text, scope).value();
}

inline fd::NodePtr type(const std::string& text, const fd::ParseScope& scope = {}) {
  return fd::parse_type(text, scope).value();
}

/// parse_surface, validate_surface, then elaborate against `base`.
inline fd::ElabReport elaborate_text(const std::string& text, const fd::Env& base,
                                     const fd::ElabOptions& opts = {}) {
  auto sp = fd::parse_surface(text);
  if (!sp) {
    fd::ElabReport r;
    r.env = base;
    r.diagnostics.push_back(sp.error());
    return r;
  }
  auto problems = fd::validate_surface(*sp);
  if (!problems.empty()) {
    fd::ElabReport r;
    r.env = base;
    r.diagnostics = problems;
    return r;
  }
  return fd::elaborate_program(*sp, base, opts);
}

inline const fd::Decl* find_decl(const fd::Program& p, fd::DeclKind k,
                                 const std::string& name) {
  for (const auto& d : p)
    if (d.kind == k && d.name == name) return &d;
  return nullptr;
}

/// Some subterm of `hay` equals `needle` (indices compared as written).
inline bool contains_subterm(const fd::NodePtr& hay, const fd::NodePtr& needle) {
  if (fd::node_eq(hay, needle)) return true;
  for (const auto& k : hay->kids())
    if (contains_subterm(k, needle)) return true;
  return false;
}

}  // namespace fdtest
