#pragma once

// Kinding, term and coercion typing, and declaration checking.

#include <string>
#include <vector>

#include "fd/diagnostic.hpp"
#include "fd/env.hpp"
#include "fd/syntax.hpp"

namespace fd {

/// A local binder. `annot` is the kind (type binder) or type (term binder),
/// expressed in the scope of the binders before it.
struct Binding {
  bool is_type = false;
  NodePtr annot;
  std::string name;
  /// Dictionary already scrutinised by an enclosing guard; ignored by
  /// dictionary search during elaboration.
  bool guarded = false;
};
/// Local binders, innermost last. Index i refers to ctx[size - 1 - i].
using Context = std::vector<Binding>;

std::vector<std::string> context_names(const Context& ctx);

/// Result of inference. `Partial` marks a term whose type is only fixed by a
/// surrounding check (e.g. `\x:Bool. 0`).
struct TypeResult {
  enum Kind { Exactly, AnyType, Partial } kind = AnyType;
  NodePtr type;

  static TypeResult exactly(NodePtr t) { return {Exactly, std::move(t)}; }
  static TypeResult any() { return {AnyType, nullptr}; }
  /// Partial results may carry a type whose holes (the type constant `?`)
  /// stand for unknown parts.
  static TypeResult partial(NodePtr t = nullptr) { return {Partial, std::move(t)}; }
  bool is_exact() const { return kind == Exactly; }
};

struct CoercionType {
  NodePtr lhs;
  NodePtr rhs;
  NodePtr kind;
};

struct PatternType {
  NodeList residual_kinds;  // outermost first
  std::vector<std::string> residual_names;
  NodeList arg_types;  // under the residual binders
};

Result<NodePtr> kind_of(const Env& env, const NodePtr& type,
                        const Context& ctx = {});
Result<TypeResult> infer_term(const Env& env, const NodePtr& m,
                              const Context& ctx = {});
Status check_term(const Env& env, const NodePtr& m, const NodePtr& expected,
                  const Context& ctx = {});
Result<CoercionType> coerce_type(const Env& env, const NodePtr& eta,
                                 const Context& ctx = {});
Result<PatternType> pattern_type(const Env& env, const Pattern& p,
                                 const NodePtr& scrut_type,
                                 const Context& ctx = {});

bool is_data_head(const Env& env, const NodePtr& type);
bool is_open_head(const Env& env, const NodePtr& type);

/// Checks one declaration and returns the extended environment.
Result<Env> check_decl(const Env& env, const Decl& d);
/// Re-checks every declaration recorded in `env` from scratch.
Status check_env(const Env& env);

struct CheckReport {
  Env env;  // holds every declaration that checked
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return diagnostics.empty(); }
};
/// Checks declarations in order, continuing past failures.
CheckReport check_program(const Program& p, const Env& base = Env());

}  // namespace fd
