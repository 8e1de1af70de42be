#pragma once

// Translation of surface programs into the core: classes become open types
// and open functions, instances become open constructors plus guarded
// instances, holes are filled by instance resolution and type mismatches by
// synthesized coercions.

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "fd/diagnostic.hpp"
#include "fd/env.hpp"
#include "fd/surface.hpp"
#include "fd/syntax.hpp"
#include "fd/typing.hpp"

namespace fd {

struct ElabOptions {
  bool overlap_first = false;  // pick the most specific candidate
  bool absurd_omit = false;    // skip instances for inconsistent pairs
  int synth_depth = 64;
  int resolve_depth = 32;
};

struct FundepInfo {
  std::vector<int> from;
  int to = 0;
  std::string method;
};

struct ClassInfo {
  std::string name;
  std::vector<std::string> param_names;
  NodeList param_kinds;
  NodeList supers;  // under the parameters
  std::vector<std::string> super_methods;
  std::vector<std::pair<std::string, NodePtr>> methods;  // under the params
  std::vector<FundepInfo> fundeps;
  std::vector<std::string> instances;  // constructor names, in order
};

struct InstanceInfo {
  std::string ctor;
  std::string cls;
  std::vector<std::string> var_names;
  NodeList var_kinds;
  NodeList head;     // under the instance variables
  NodeList context;  // under the instance variables
};

struct ElabState {
  Env env;
  std::map<std::string, ClassInfo> classes;
  std::map<std::string, InstanceInfo> instances;
  std::map<std::string, std::string> absurd;  // printed kind -> method name
  ElabOptions opts;
};

/// Types equated by the coercions in scope, closed under decomposition and
/// functional-dependency improvement. Every edge carries a coercion whose
/// type is exactly `from ~ to` in the given context.
class EqGraph {
 public:
  EqGraph(const ElabState& st, Context ctx);

  /// Some two types of one component have distinct rigid heads.
  bool inconsistent() const;
  Result<NodePtr> synth(const NodePtr& from, const NodePtr& to) const;
  Result<NodePtr> resolve(const NodePtr& goal) const;

  const Context& context() const { return ctx_; }

 private:
  struct Edge {
    int to;
    NodePtr co;
  };
  struct Dict {
    NodePtr term;
    NodePtr type;
  };

  int node(const NodePtr& t);
  int find(const NodePtr& t) const;  // -1 when absent
  int root(int i) const;
  bool connected(int a, int b) const { return root(a) == root(b); }
  bool add_edge(const NodePtr& a, const NodePtr& b, const NodePtr& co);
  NodePtr path(int a, int b) const;
  std::vector<int> members(const NodePtr& t) const;

  void saturate();
  bool decompose();
  bool improve();
  std::vector<Dict> local_dicts() const;
  void supers_of(const Dict& d, std::vector<Dict>& out, int depth) const;

  NodePtr synth_at(const NodePtr& from, const NodePtr& to, int depth) const;
  NodePtr congruence(const NodePtr& from, const NodePtr& to, int depth) const;
  NodePtr resolve_at(const NodePtr& goal, int depth,
                     std::vector<std::string>* ambiguous = nullptr) const;
  bool match_head(const NodePtr& pat, const NodePtr& ty, std::uint32_t depth,
                  NodeList& sigma) const;
  NodePtr kind(const NodePtr& t) const;

  const ElabState& st_;
  Context ctx_;
  std::vector<NodePtr> nodes_;
  std::unordered_map<NodePtr, int, NodeHash, NodeEq> ids_;
  std::vector<std::vector<Edge>> adj_;
  mutable std::vector<int> parent_;
};

Result<NodePtr> synth_coercion(const ElabState& st, const Context& ctx,
                               const NodePtr& from, const NodePtr& to);
Result<NodePtr> resolve_hole(const ElabState& st, const Context& ctx,
                             const NodePtr& goal);
/// Elaborates `s` (scoped by `ctx`) at type `expected`.
Result<NodePtr> elaborate_term(const ElabState& st, const Context& ctx,
                               const STermPtr& s, const NodePtr& expected);

Result<Program> elaborate_class(ElabState& st, const SClassDecl& c);
Result<Program> elaborate_instance(ElabState& st, const SInstanceDecl& i);

struct ElabReport {
  Program program;  // emitted declarations only (empty on failure)
  Env env;          // base plus emitted declarations
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return diagnostics.empty(); }
};
/// Stops at the first failing declaration. Every emitted declaration is
/// re-checked with check_decl.
ElabReport elaborate_program(const SurfaceProgram& p, const Env& base,
                             const ElabOptions& opts = {});

}  // namespace fd
