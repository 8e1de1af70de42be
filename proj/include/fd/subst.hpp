#pragma once

// Parallel de Bruijn substitutions.
//
// A Subst maps every index i to either Rename(j) or Replace(N). It is stored
// as a finite prefix of actions, a tail shift k and a lift count L:
//
//   s(i) = i < L ? Rename(i) : shift_L(base(i - L))
//   base(j) = j < n ? prefix[j] : Rename(j - n + k)
//
// Lifting under a binder only bumps L.

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "fd/syntax.hpp"

namespace fd {

struct SubstAction {
  enum Kind { Rename, Replace } kind;
  std::uint32_t index = 0;  // Rename
  NodePtr node;             // Replace

  static SubstAction rename(std::uint32_t i) { return {Rename, i, nullptr}; }
  static SubstAction replace(NodePtr n) { return {Replace, 0, std::move(n)}; }
};

class Subst {
 public:
  Subst() : prefix_(std::make_shared<std::vector<SubstAction>>()) {}
  Subst(std::vector<SubstAction> prefix, std::uint32_t tail_shift);

  static Subst identity() { return {}; }
  static Subst shift(std::uint32_t k) { return Subst({}, k); }
  /// Replaces index 0 by `arg` and decrements the rest.
  static Subst single(NodePtr arg);

  Subst lift(std::uint32_t by = 1) const;
  SubstAction lookup(std::uint32_t i) const;
  NodePtr apply(const NodePtr& n) const;

  bool is_identity() const { return prefix_->empty() && tail_ == 0; }
  std::uint32_t prefix_size() const {
    return static_cast<std::uint32_t>(prefix_->size());
  }
  std::uint32_t tail_shift() const { return tail_; }
  std::uint32_t lifted() const { return lift_; }

  /// Equivalent substitution with lift count 0.
  Subst normalized() const;

  /// `compose(s1, s2).apply(M) == s2.apply(s1.apply(M))`.
  static Subst compose(const Subst& s1, const Subst& s2);

 private:
  std::shared_ptr<const std::vector<SubstAction>> prefix_;
  std::uint32_t tail_ = 0;
  std::uint32_t lift_ = 0;
};

/// Adds `k` to every free index >= `cutoff`.
NodePtr shift(const NodePtr& n, std::uint32_t k = 1, std::uint32_t cutoff = 0);

/// `body` with index 0 replaced by `arg` (the body sits under one binder).
NodePtr instantiate(const NodePtr& body, const NodePtr& arg);

/// Instantiates the indices 0..args.size()-1 at once; args[0] replaces the
/// outermost of them (index args.size()-1).
NodePtr instantiate_many(const NodePtr& body, const NodeList& args);

/// Removes `k` binders' worth of indices; fails if any index < k is free.
std::optional<NodePtr> strengthen(const NodePtr& n, std::uint32_t k = 1);

/// True when free index `i` occurs in `n`.
bool occurs(const NodePtr& n, std::uint32_t i);

}  // namespace fd
