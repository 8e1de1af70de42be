#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace fd {

/// A single checker/analysis failure. `path` addresses the offending child
/// inside the declaration body (child indices from the root).
struct Diagnostic {
  std::string code;
  std::string message;
  std::vector<int> path;
  std::string expected;
  std::string found;
  std::string file;
  int line = 0;
  int column = 0;

  std::string to_string() const;
  std::string to_json() const;
};

/// Thrown internally by checkers and parsers; public entry points convert it
/// into a Result.
class FdError : public std::runtime_error {
 public:
  explicit FdError(Diagnostic d)
      : std::runtime_error(d.message), diag_(std::move(d)) {}
  const Diagnostic& diagnostic() const { return diag_; }
  Diagnostic& diagnostic() { return diag_; }

 private:
  Diagnostic diag_;
};

[[noreturn]] void fail(std::string code, std::string message,
                       std::string expected = {}, std::string found = {});

struct Unit {};

template <typename T>
class Result {
 public:
  Result(T value) : v_(std::move(value)) {}  // NOLINT
  Result(Diagnostic d) : v_(std::move(d)) {}  // NOLINT

  bool ok() const { return v_.index() == 0; }
  explicit operator bool() const { return ok(); }

  const T& value() const& {
    if (!ok()) throw FdError(std::get<1>(v_));
    return std::get<0>(v_);
  }
  T&& value() && {
    if (!ok()) throw FdError(std::get<1>(v_));
    return std::get<0>(std::move(v_));
  }
  const T& operator*() const& { return value(); }
  const T* operator->() const { return &value(); }

  const Diagnostic& error() const { return std::get<1>(v_); }

 private:
  std::variant<T, Diagnostic> v_;
};

using Status = Result<Unit>;

/// Runs `f`, converting a thrown FdError into an error Result.
template <typename F>
auto capture(F&& f) -> Result<decltype(f())> {
  try {
    return f();
  } catch (const FdError& e) {
    return e.diagnostic();
  }
}

}  // namespace fd
