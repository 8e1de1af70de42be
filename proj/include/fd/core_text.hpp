#pragma once

// Concrete syntax of the core language (.fd files).
//
//   data T : κ;   ctor K : σ;   open C : κ;   openctor K : σ;
//   instance K : σ;  (same as openctor)
//   method x : σ;   instance x = M;   let x : σ = M;
//
// Terms: \x:σ. M   /\t:κ. M   M N   M [σ]   M |> η   0   M <+> N
//        if M is P then N else N'   guard M is P then N
// Coercions: refl(τ)  sym η  η ;; η  η @ η  η.1  η.2  forallc t:κ. η
//            η @[τ]  sim(η, η)
// Types: t  T  τ υ  σ -> τ  τ ~[κ] υ  (~ alone means kind *)  forall t:κ. σ
// Free de Bruijn variables print as #k (k counted from the print position).

#include <string>
#include <string_view>
#include <vector>

#include "fd/diagnostic.hpp"
#include "fd/syntax.hpp"

namespace fd {

Result<Program> parse_core(std::string_view text);

/// Standalone term/type/kind parsers. `scope` names enclosing binders,
/// innermost last; each entry is (name, is_type_binder).
using ParseScope = std::vector<std::pair<std::string, bool>>;
Result<NodePtr> parse_term(std::string_view text, const ParseScope& scope = {});
Result<NodePtr> parse_type(std::string_view text, const ParseScope& scope = {});
Result<NodePtr> parse_kind(std::string_view text);

/// Prints a node; `scope` gives display names for free de Bruijn variables
/// (innermost last).
std::string print_core(const NodePtr& n,
                       const std::vector<std::string>& scope = {});
std::string print_pattern(const Pattern& p,
                          const std::vector<std::string>& scope = {});
std::string print_decl(const Decl& d);
std::string print_core(const Program& p);

}  // namespace fd
