#pragma once

// Named-variable substitution used as an oracle for the de Bruijn library.
// Terms are converted to a form where every variable is a named marker
// constant, substituted by name (binder names are globally fresh, so no
// capture can happen), then converted back.

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fd/subst.hpp"
#include "fd/syntax.hpp"

namespace fdtest {

/// Image of a free index: a renamed index or a replacement term living in the
/// scope outside the substituted term.
struct Image {
  bool rename = true;
  std::uint32_t index = 0;
  fd::NodePtr node;
};
using Mapping = std::function<Image(std::uint32_t)>;

fd::NodePtr oracle_apply(const fd::NodePtr& n, const Mapping& m);

/// Description of a Subst by its documented components.
struct SubstSpec {
  std::vector<fd::SubstAction> prefix;
  std::uint32_t tail = 0;
  std::uint32_t lift = 0;

  fd::Subst build() const;
  /// The documented meaning, computed without the library.
  Image image(std::uint32_t i) const;
};

fd::NodePtr oracle_apply(const fd::NodePtr& n, const SubstSpec& s);
fd::NodePtr oracle_shift(const fd::NodePtr& n, std::uint32_t k, std::uint32_t cutoff);
fd::NodePtr oracle_instantiate(const fd::NodePtr& body, const fd::NodePtr& arg);

/// Random syntax trees (not necessarily well typed) with free indices below
/// `free`, and random substitutions over them.
class SyntaxGen {
 public:
  explicit SyntaxGen(std::uint64_t seed) : rng_(seed) {}
  fd::NodePtr node(int size, std::uint32_t free);
  SubstSpec subst(std::uint32_t free);
  std::mt19937_64& rng() { return rng_; }

 private:
  fd::NodePtr type(int size, std::uint32_t free);
  fd::NodePtr term(int size, std::uint32_t free);
  fd::NodePtr coercion(int size, std::uint32_t free);
  fd::NodePtr kind(int size);
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  std::mt19937_64 rng_;
};

}  // namespace fdtest
