#pragma once

// Type-directed generation of well-typed closed terms and the metatheory
// property suites run over them.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fd/env.hpp"
#include "fd/prelude.hpp"
#include "fd/syntax.hpp"
#include "fd/typing.hpp"

namespace fd {

struct RuleWeights {
  int var = 6;
  int head = 8;  // constants and variables applied to arguments
  int lam = 4;
  int tylam = 3;
  int redex = 3;  // (\x. M) N and (/\t. M) [τ]
  int if_ = 2;
  int guard = 2;
  int cast = 2;
  int choice = 1;
  int zero = 1;  // only as one side of a choice
  int coercion = 4;
};

struct GenConfig {
  std::uint64_t seed = 1;
  int size = 30;
  PreludeKind prelude = PreludeKind::Maybe;
  RuleWeights weights;
};

/// What the generated term's type must look like.
enum class Goal { Any, Coercion, Function };

struct Generated {
  NodePtr term;
  NodePtr type;
};

class Generator {
 public:
  Generator(const Env& env, const GenConfig& cfg);

  /// A closed term checked at its type; nullopt after retry exhaustion.
  std::optional<Generated> term(Goal goal = Goal::Any);
  /// A closed, well-kinded type of the given kind.
  NodePtr type(const NodePtr& kind, int depth = 2);

  std::mt19937_64& rng() { return rng_; }
  std::size_t exhausted() const { return exhausted_; }

 private:
  struct Peel {
    NodePtr type;  // after instantiating leading foralls with placeholders
    std::size_t term_args;
  };
  struct Constant {
    NodePtr head;
    NodePtr type;
    std::vector<Peel> peels;
  };
  static std::vector<Peel> peel_type(const NodePtr& type);

  NodePtr gen(const NodePtr& ty, int size);
  NodePtr gen_rule(int rule, const NodePtr& ty, int size);
  NodePtr var_leaf(const NodePtr& ty);
  NodePtr head(const NodePtr& ty, int size);
  NodePtr lam(const NodePtr& ty, int size);
  NodePtr tylam(const NodePtr& ty, int size);
  NodePtr redex(const NodePtr& ty, int size);
  NodePtr branch(const NodePtr& ty, int size, bool open);
  NodePtr cast(const NodePtr& ty, int size);
  NodePtr choice(const NodePtr& ty, int size, bool with_zero);
  NodePtr coercion(const NodePtr& ty, int size);
  NodePtr rtype(const NodePtr& kind, int depth);
  std::optional<NodeList> scrutinee_args(const std::string& ctor);
  int pick(int n);
  bool chance(int num, int den);
  NodePtr kind_in_ctx(const NodePtr& type);

  const Env& env_;
  GenConfig cfg_;
  std::mt19937_64 rng_;
  std::vector<Constant> constants_;
  Context ctx_;
  int calls_ = 0;
  std::size_t exhausted_ = 0;
};

struct PropResult {
  std::string name;
  std::string prelude;
  std::size_t cases = 0;
  std::size_t skipped = 0;  // generator retry exhaustion
  bool passed = true;
  std::uint64_t case_seed = 0;
  std::string counterexample;  // printed term and type
  std::string detail;          // failing step
};

const std::vector<std::string>& property_names();

/// Runs `count` cases of the property. Case i is generated from a seed
/// derived from cfg.seed and i, so a run replays exactly.
PropResult run_property(const std::string& name, const Env& env,
                        const GenConfig& cfg, std::size_t count);

/// A value of coercion type that is refl or a choice tree of such values.
bool canonical_coercion(const NodePtr& v);
/// A value of function type that is an abstraction, a constructor spine or a
/// choice tree of such values.
bool canonical_function(const Env& env, const NodePtr& v);

}  // namespace fd
