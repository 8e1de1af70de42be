#include <optional>
#include <set>
#include <string>

#include "fd/core_text.hpp"
#include "lexer.hpp"

namespace fd {

namespace {

using detail::Tok;
using detail::TokenStream;

const std::set<std::string, std::less<>>& core_keywords() {
  static const std::set<std::string, std::less<>> kw = {
      "data",  "ctor",  "open",  "openctor", "method", "instance",
      "let",   "forall", "forallc", "if",    "is",     "then",
      "else",  "guard", "refl",  "sym",      "sim",
  };
  return kw;
}

class CoreParser {
 public:
  CoreParser(std::string_view text, ParseScope scope)
      : ts_(detail::tokenize(text, core_keywords())), scope_(std::move(scope)) {}

  TokenStream& ts() { return ts_; }

  void expect_end() {
    if (ts_.peek().kind != Tok::End) {
      ts_.note_expected("end of input");
      ts_.error();
    }
  }

  Program program() {
    Program prog;
    while (ts_.peek().kind != Tok::End) prog.push_back(decl());
    return prog;
  }

  Decl decl() {
    Decl d{};
    const auto& t = ts_.peek();
    d.line = t.line;
    d.column = t.column;
    if (ts_.accept_kw("data")) {
      d.kind = DeclKind::Data;
    } else if (ts_.accept_kw("ctor")) {
      d.kind = DeclKind::Ctor;
    } else if (ts_.accept_kw("open")) {
      d.kind = DeclKind::OpenType;
    } else if (ts_.accept_kw("openctor")) {
      d.kind = DeclKind::OpenCtor;
    } else if (ts_.accept_kw("method")) {
      d.kind = DeclKind::Method;
    } else if (ts_.accept_kw("instance")) {
      d.kind = DeclKind::Instance;
    } else if (ts_.accept_kw("let")) {
      d.kind = DeclKind::Let;
    } else {
      ts_.note_expected("declaration");
      ts_.error();
    }
    d.name = ts_.expect_ident();
    if (d.kind == DeclKind::Instance) {
      if (ts_.accept_sym(":")) {
        d.kind = DeclKind::OpenCtor;
        d.type = type();
      } else {
        ts_.expect_sym("=");
        d.body = term();
      }
    } else if (d.kind == DeclKind::Data || d.kind == DeclKind::OpenType) {
      ts_.expect_sym(":");
      d.type = kind();
    } else {
      ts_.expect_sym(":");
      d.type = type();
      if (d.kind == DeclKind::Let) {
        ts_.expect_sym("=");
        d.body = term();
      }
    }
    ts_.expect_sym(";");
    return d;
  }

  // Kinds ------------------------------------------------------------------

  NodePtr kind() {
    NodePtr k = kind_atom();
    if (ts_.accept_sym("->")) return karrow(k, kind());
    return k;
  }

  NodePtr kind_atom() {
    if (ts_.accept_sym("*")) return star();
    if (ts_.accept_sym("(")) {
      NodePtr k = kind();
      ts_.expect_sym(")");
      return k;
    }
    ts_.error();
  }

  // Types ------------------------------------------------------------------

  NodePtr type() {
    if (ts_.accept_kw("forall")) {
      auto [name, k] = binder_head(/*kind_annot=*/true);
      scope_.push_back({name, true});
      NodePtr body = type();
      scope_.pop_back();
      return forall_(k, body, name);
    }
    return type_arrow();
  }

  NodePtr type_arrow() {
    NodePtr l = type_eq();
    if (ts_.accept_sym("->")) return arrow(l, type());
    return l;
  }

  NodePtr type_eq() {
    NodePtr l = type_app();
    if (ts_.accept_sym("~")) {
      NodePtr k = star();
      if (ts_.accept_sym("[")) {
        k = kind();
        ts_.expect_sym("]");
      }
      return eqty(l, type_app(), k);
    }
    return l;
  }

  bool at_type_atom() {
    ts_.note_expected("type");
    const auto& t = ts_.peek();
    return t.kind == Tok::Ident || t.kind == Tok::Hash ||
           (t.kind == Tok::Sym && (t.text == "(" || t.text == "(->)"));
  }

  NodePtr type_app() {
    NodePtr t = type_atom();
    while (at_type_atom()) t = tapp(t, type_atom());
    return t;
  }

  NodePtr type_atom() {
    const auto& t = ts_.peek();
    if (t.kind == Tok::Ident) {
      std::string name = ts_.next().text;
      if (auto i = lookup(name, true)) return tvar(*i);
      return tcon(name);
    }
    if (t.kind == Tok::Hash) return tvar(hash_index(ts_.next().text));
    if (ts_.accept_sym("(->)")) return tcon(std::string(kArrowName));
    if (ts_.accept_sym("(")) {
      NodePtr ty = type();
      ts_.expect_sym(")");
      return ty;
    }
    ts_.note_expected("type");
    ts_.error();
  }

  // Terms ------------------------------------------------------------------

  NodePtr term() {
    if (ts_.accept_sym("\\")) {
      std::string name = ts_.expect_ident();
      ts_.expect_sym(":");
      NodePtr ty = type_arrow();
      ts_.expect_sym(".");
      scope_.push_back({name, false});
      NodePtr body = term();
      scope_.pop_back();
      return lam(ty, body, name);
    }
    bool tyl = ts_.accept_sym("/\\");
    if (tyl || ts_.accept_kw("forallc")) {
      auto [name, k] = binder_head(true);
      scope_.push_back({name, true});
      NodePtr body = term();
      scope_.pop_back();
      return tyl ? tylam(k, body, name) : univ(k, body, name);
    }
    if (ts_.accept_kw("if")) {
      NodePtr s = choice_level();
      ts_.expect_kw("is");
      Pattern p = pattern();
      ts_.expect_kw("then");
      NodePtr c = term();
      ts_.expect_kw("else");
      NodePtr a = term();
      return if_(s, std::move(p), c, a);
    }
    if (ts_.accept_kw("guard")) {
      NodePtr s = choice_level();
      ts_.expect_kw("is");
      Pattern p = pattern();
      ts_.expect_kw("then");
      return guard(s, std::move(p), term());
    }
    return choice_level();
  }

  NodePtr choice_level() {
    NodePtr l = cast_level();
    if (ts_.accept_sym("<+>")) return choice(l, choice_level());
    return l;
  }

  NodePtr cast_level() {
    NodePtr m = trans_level();
    while (ts_.accept_sym("|>")) m = cast(m, trans_level());
    return m;
  }

  NodePtr trans_level() {
    NodePtr c = capp_level();
    while (ts_.accept_sym(";;")) c = trans(c, capp_level());
    return c;
  }

  NodePtr capp_level() {
    NodePtr c = app_level();
    while (ts_.accept_sym("@")) c = capp(c, app_level());
    return c;
  }

  bool at_term_atom() {
    ts_.note_expected("term");
    const auto& t = ts_.peek();
    if (t.kind == Tok::Ident || t.kind == Tok::Hash || t.kind == Tok::Zero)
      return true;
    if (t.kind == Tok::Keyword) return t.text == "refl" || t.text == "sim";
    return t.kind == Tok::Sym && t.text == "(";
  }

  NodePtr app_level() {
    NodePtr m;
    if (ts_.accept_kw("sym")) {
      m = sym(term_atom());
    } else {
      m = term_atom();
    }
    for (;;) {
      if (ts_.accept_sym("[")) {
        NodePtr ty = type();
        ts_.expect_sym("]");
        m = tyapp(m, ty);
      } else if (ts_.accept_sym("@[")) {
        NodePtr ty = type();
        ts_.expect_sym("]");
        m = cinst(m, ty);
      } else if (ts_.accept_sym(".1")) {
        m = fst(m);
      } else if (ts_.accept_sym(".2")) {
        m = snd(m);
      } else if (at_term_atom()) {
        m = app(m, term_atom());
      } else {
        return m;
      }
    }
  }

  NodePtr term_atom() {
    const auto& t = ts_.peek();
    if (t.kind == Tok::Ident) {
      std::string name = ts_.next().text;
      if (auto i = lookup(name, false)) return var(*i);
      return con(name);
    }
    if (t.kind == Tok::Hash) return var(hash_index(ts_.next().text));
    if (t.kind == Tok::Zero) {
      ts_.next();
      return zero();
    }
    if (ts_.accept_kw("refl")) {
      ts_.expect_sym("(");
      NodePtr ty = type();
      ts_.expect_sym(")");
      return refl(ty);
    }
    if (ts_.accept_kw("sim")) {
      ts_.expect_sym("(");
      NodePtr l = term();
      ts_.expect_sym(",");
      NodePtr r = term();
      ts_.expect_sym(")");
      return sim(l, r);
    }
    if (ts_.accept_sym("(")) {
      NodePtr m = term();
      ts_.expect_sym(")");
      return m;
    }
    ts_.note_expected("term");
    ts_.error();
  }

  Pattern pattern() {
    Pattern p;
    p.head = ts_.expect_ident();
    while (ts_.accept_sym("[")) {
      p.type_args.push_back(type());
      ts_.expect_sym("]");
    }
    return p;
  }

 private:
  std::pair<std::string, NodePtr> binder_head(bool) {
    std::string name = ts_.expect_ident();
    ts_.expect_sym(":");
    NodePtr k = kind_atom();
    ts_.expect_sym(".");
    return {name, k};
  }

  std::optional<std::uint32_t> lookup(const std::string& name, bool is_type) {
    for (std::size_t i = scope_.size(); i-- > 0;) {
      if (scope_[i].first == name && scope_[i].second == is_type)
        return static_cast<std::uint32_t>(scope_.size() - 1 - i);
    }
    return std::nullopt;
  }

  std::uint32_t hash_index(const std::string& digits) {
    return static_cast<std::uint32_t>(std::stoul(digits) + scope_.size());
  }

  TokenStream ts_;
  ParseScope scope_;
};

template <typename F>
auto run(std::string_view text, const ParseScope& scope, F&& f)
    -> Result<decltype(f(std::declval<CoreParser&>()))> {
  return capture([&] {
    CoreParser p(text, scope);
    auto out = f(p);
    p.expect_end();
    return out;
  });
}

}  // namespace

Result<Program> parse_core(std::string_view text) {
  return run(text, {}, [](CoreParser& p) { return p.program(); });
}

Result<NodePtr> parse_term(std::string_view text, const ParseScope& scope) {
  return run(text, scope, [](CoreParser& p) { return p.term(); });
}

Result<NodePtr> parse_type(std::string_view text, const ParseScope& scope) {
  return run(text, scope, [](CoreParser& p) { return p.type(); });
}

Result<NodePtr> parse_kind(std::string_view text) {
  return run(text, {}, [](CoreParser& p) { return p.kind(); });
}

}  // namespace fd
