#pragma once

// Global environment: the named part of a typing context, built from
// declarations in program order. Local binders live in the checker.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fd/syntax.hpp"

namespace fd {

struct CtorSig {
  std::string name;
  NodePtr type;
  bool open = false;
  std::string owner;  // head constant of the codomain
};

struct LetDef {
  NodePtr type;
  NodePtr body;
};

class Env {
 public:
  /// Contains only `(->) : * -> * -> *`.
  Env();

  bool has_type_name(std::string_view n) const;
  bool has_term_name(std::string_view n) const;

  /// Kind of a data or open type constant.
  NodePtr type_kind(std::string_view n) const;
  bool is_data_type(std::string_view n) const;
  bool is_open_type(std::string_view n) const;

  const CtorSig* ctor(std::string_view n) const;
  NodePtr method_type(std::string_view n) const;
  const NodeList& instances(std::string_view n) const;
  const LetDef* let(std::string_view n) const;
  bool is_ctor(std::string_view n) const { return ctor(n) != nullptr; }
  bool is_method(std::string_view n) const { return method_type(n) != nullptr; }
  bool is_let(std::string_view n) const { return let(n) != nullptr; }

  /// Declared type of a constructor, method or let; null when unknown.
  NodePtr term_type(std::string_view n) const;

  /// Constructors whose codomain head is `type_name`, in declaration order.
  std::vector<std::string> ctors_of(std::string_view type_name) const;
  /// Data and open type names, in declaration order (without `->`).
  const std::vector<std::string>& type_names() const { return type_order_; }
  const std::vector<std::string>& method_names() const { return method_order_; }
  const std::vector<std::string>& let_names() const { return let_order_; }

  /// Appends a declaration without checking it. Duplicate names throw
  /// FdError(DuplicateName).
  void add(const Decl& d);

  const Program& decls() const { return decls_; }

 private:
  std::map<std::string, NodePtr, std::less<>> data_;
  std::map<std::string, NodePtr, std::less<>> open_;
  std::map<std::string, CtorSig, std::less<>> ctors_;
  std::map<std::string, NodePtr, std::less<>> methods_;
  std::map<std::string, NodeList, std::less<>> instances_;
  std::map<std::string, LetDef, std::less<>> lets_;
  std::vector<std::string> type_order_;
  std::vector<std::string> ctor_order_;
  std::vector<std::string> method_order_;
  std::vector<std::string> let_order_;
  Program decls_;
};

/// Head constant name of a type application spine, if any.
std::optional<std::string> type_head_name(const NodePtr& t);

/// `∀t̄:κ̄. τ̄ → υ` with arrows peeled fully. Binder kinds are outermost first;
/// argument types and the codomain live under all binders.
struct Telescope {
  NodeList binder_kinds;
  std::vector<std::string> binder_names;
  NodeList args;
  NodePtr result;
};
Telescope split_telescope(const NodePtr& type);
NodePtr build_telescope(const Telescope& t);

}  // namespace fd
