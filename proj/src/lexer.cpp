#include "lexer.hpp"

#include <cctype>

namespace fd::detail {

namespace {

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

// Longest match first.
constexpr std::string_view kSymbols[] = {
    "<+>", "(->)", "/\\", "->", "=>", "::", ";;", "|>", "@[", ".1", ".2",
    "\\",  ".",    ":",   ";",  "=",  "(",  ")",  "[",  "]",  "@",  "~",
    "*",   ",",    "|",   "{",  "}",
};

}  // namespace

std::vector<Token> tokenize(
    std::string_view src, const std::set<std::string, std::less<>>& keywords) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (src.substr(i, 2) == "--") {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    int tl = line;
    int tc = col;
    if (ident_start(c)) {
      std::size_t j = i + 1;
      while (j < src.size() && ident_char(src[j])) ++j;
      std::string text(src.substr(i, j - i));
      Tok k = keywords.count(text) ? Tok::Keyword : Tok::Ident;
      if (text == "_") k = Tok::Sym;
      out.push_back({k, std::move(text), tl, tc});
      advance(j - i);
      continue;
    }
    if (c == '#') {
      std::size_t j = i + 1;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
        ++j;
      if (j == i + 1) {
        Diagnostic d;
        d.code = "ParseError";
        d.message = "expected digits after '#'";
        d.line = tl;
        d.column = tc;
        throw FdError(d);
      }
      out.push_back({Tok::Hash, std::string(src.substr(i + 1, j - i - 1)), tl,
                     tc});
      advance(j - i);
      continue;
    }
    if (c == '0' && (i + 1 >= src.size() || !ident_char(src[i + 1]))) {
      out.push_back({Tok::Zero, "0", tl, tc});
      advance(1);
      continue;
    }
    bool matched = false;
    for (std::string_view s : kSymbols) {
      if (src.substr(i, s.size()) == s) {
        // `.1`/`.2` only as postfix projections, not `.12` or `.1x`.
        if ((s == ".1" || s == ".2") && i + 2 < src.size() &&
            ident_char(src[i + 2]))
          continue;
        out.push_back({Tok::Sym, std::string(s), tl, tc});
        advance(s.size());
        matched = true;
        break;
      }
    }
    if (!matched) {
      Diagnostic d;
        d.code = "ParseError";
        d.message = std::string("unexpected character '") + c + "'";
      d.line = tl;
      d.column = tc;
      throw FdError(d);
    }
  }
  out.push_back({Tok::End, "<end of input>", line, col});
  return out;
}

void TokenStream::error() const {
  std::string exp;
  for (const auto& e : expected_) {
    if (!exp.empty()) exp += ", ";
    exp += e;
  }
  const Token& t = peek();
  Diagnostic d;
        d.code = "ParseError";
        d.message = "unexpected '" + t.text + "'";
  d.expected = exp;
  d.found = t.text;
  d.line = t.line;
  d.column = t.column;
  throw FdError(d);
}

void TokenStream::error(const std::string& message) const {
  const Token& t = peek();
  Diagnostic d;
        d.code = "ParseError";
        d.message = message;
  d.found = t.text;
  d.line = t.line;
  d.column = t.column;
  throw FdError(d);
}

}  // namespace fd::detail
