#pragma once

// Static analyses over checked programs: the HSSDI conditions, saturation,
// the syntactic no-zero check and the specializer.

#include <string>
#include <vector>

#include "fd/diagnostic.hpp"
#include "fd/env.hpp"
#include "fd/syntax.hpp"

namespace fd {

/// Leading guards of one instance body. `patterns[j]` is the constructor the
/// j-th dictionary parameter is matched against, or empty when unguarded.
struct GuardPreamble {
  std::string method;
  std::size_t instance = 0;
  std::vector<std::string> patterns;
};

/// Positions (among term arguments) of the dictionary parameters of an open
/// function or let, i.e. arguments whose type is headed by an open type.
std::vector<std::size_t> dictionary_params(const Env& env, const NodePtr& type);

GuardPreamble extract_preamble(const Env& env, const std::string& method,
                               const NodePtr& body);

struct FunctionReport {
  std::string method;
  std::vector<std::string> condition1;  // non-decreasing recursive calls
  std::vector<std::string> condition2;  // non-concrete call sites
  std::vector<std::vector<std::string>> missing;  // uncovered tuples
  std::size_t tuples = 0;                         // tuples that need cover
  bool ok() const {
    return condition1.empty() && condition2.empty() && missing.empty();
  }
};

struct HssdiReport {
  std::vector<FunctionReport> functions;  // one per method, in order
  bool ok() const;
  const FunctionReport* find(const std::string& method) const;
  std::string to_string() const;
};

HssdiReport check_hssdi(const Env& env);
/// Condition 3 alone; the other condition lists stay empty.
HssdiReport check_saturation(const Env& env);

/// No guards, no 0, and no references to methods or lets.
bool check_no_zero_syntactic(const Env& env, const NodePtr& m);

/// Inlines lets and unfolds open functions applied to constructor evidence,
/// resolving guards and eliminating 0. Errors: NotHssdi, Unsaturated,
/// SpecializationFuel.
Result<NodePtr> specialize(const Env& env, const NodePtr& m,
                           std::size_t fuel = 100000);

}  // namespace fd
