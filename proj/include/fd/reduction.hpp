#pragma once

// Values, evaluation contexts and the small-step relation.

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "fd/env.hpp"
#include "fd/syntax.hpp"
#include "fd/typing.hpp"

namespace fd {

enum class Rule {
  BetaArrow,
  BetaForall,
  DeltaRefl,
  DeltaTrans,
  DeltaApp,
  DeltaInst,
  DeltaFst,
  DeltaSnd,
  DeltaSim,
  DeltaForall,
  DeltaCast,
  BetaZero1,
  BetaZero2,
  Zeta,
  DeltaIf1,
  DeltaIf2,
  DeltaGuard1,
  DeltaGuard2,
  BetaOpen,
  BetaLet,
  Kappa,
};
inline constexpr int kRuleCount = static_cast<int>(Rule::Kappa) + 1;

std::string_view rule_name(Rule r);

/// Constructor-headed spines (lazy in their arguments), abstractions, refl
/// and choices of values. Constant names are resolved through `env`.
bool is_value(const Env& env, const NodePtr& m);
bool is_type_value(const NodePtr& t);

struct MatchResult {
  enum Kind { Hit, Miss, NotReady } kind = NotReady;
  NodeList residual;  // remaining type args, then term args
  std::vector<bool> residual_is_type;
};
MatchResult match_pattern(const Env& env, const NodePtr& scrut,
                          const Pattern& p);

/// Child positions that are absorptive (A) holes of a node.
std::vector<int> a_holes(const NodePtr& n);
/// A holes plus both sides of a choice.
std::vector<int> e_holes(const NodePtr& n);

struct Step {
  NodePtr result;
  Rule rule;
  std::vector<int> path;  // position of the contracted redex; non-empty = ξ
};

/// Every one-step successor (deduplicated up to node_eq).
std::vector<Step> step_all(const Env& env, const NodePtr& m);

struct StepOutcome {
  enum Kind { Stepped, IsValue, IsZero, Stuck } kind = Stuck;
  NodePtr node;
  Rule rule = Rule::BetaArrow;
  std::vector<int> path;
};
StepOutcome step_det(const Env& env, const NodePtr& m);

inline constexpr std::size_t kDefaultFuel = 100000;

struct WhnfResult {
  enum Kind { Value, ZeroResult, OutOfFuel, Stuck } kind = Stuck;
  NodePtr node;
  std::size_t steps = 0;
};
using TraceFn = std::function<void(const StepOutcome&)>;
WhnfResult whnf(const Env& env, const NodePtr& m,
                std::size_t fuel = kDefaultFuel, const TraceFn& trace = {});

/// Breadth-first exploration of step_all. Returns the distinct terminal terms
/// (values, 0, stuck terms) reached after at most `fuel` expansions.
struct Exploration {
  NodeList values;
  bool reached_zero = false;
  NodeList stuck;
  bool exhausted = false;  // fuel ran out before the frontier emptied
};
Exploration explore(const Env& env, const NodePtr& m,
                    std::size_t fuel = kDefaultFuel);

}  // namespace fd
