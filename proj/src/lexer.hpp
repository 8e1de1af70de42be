#pragma once

// Tokenizer shared by the core (.fd) and surface (.hsk) parsers.

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "fd/diagnostic.hpp"

namespace fd::detail {

enum class Tok {
  Ident,
  Keyword,
  Hash,  // #k raw de Bruijn index
  Zero,
  Sym,  // punctuation; text holds the symbol
  End,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

std::vector<Token> tokenize(std::string_view src,
                            const std::set<std::string, std::less<>>& keywords);

/// Cursor over a token stream with expected-token bookkeeping for errors.
class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    expected_.clear();
    return t;
  }
  bool at_sym(std::string_view s, std::size_t ahead = 0) {
    if (ahead == 0) expected_.insert("'" + std::string(s) + "'");
    const Token& t = peek(ahead);
    return t.kind == Tok::Sym && t.text == s;
  }
  bool at_kw(std::string_view s) {
    expected_.insert("'" + std::string(s) + "'");
    const Token& t = peek();
    return t.kind == Tok::Keyword && t.text == s;
  }
  bool at_ident() {
    expected_.insert("identifier");
    return peek().kind == Tok::Ident;
  }
  bool accept_sym(std::string_view s) {
    if (!at_sym(s)) return false;
    next();
    return true;
  }
  bool accept_kw(std::string_view s) {
    if (!at_kw(s)) return false;
    next();
    return true;
  }
  void expect_sym(std::string_view s) {
    if (!accept_sym(s)) error();
  }
  void expect_kw(std::string_view s) {
    if (!accept_kw(s)) error();
  }
  std::string expect_ident() {
    if (!at_ident()) error();
    return next().text;
  }
  std::size_t mark() const { return pos_; }
  void reset(std::size_t pos) {
    pos_ = pos;
    expected_.clear();
  }
  void note_expected(std::string what) { expected_.insert(std::move(what)); }
  [[noreturn]] void error() const;
  [[noreturn]] void error(const std::string& message) const;

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::set<std::string> expected_;
};

}  // namespace fd::detail
