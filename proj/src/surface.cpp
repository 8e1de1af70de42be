#include "fd/surface.hpp"

#include <cctype>
#include <optional>
#include <set>

#include "fd/subst.hpp"
#include "lexer.hpp"

namespace fd {

namespace {

std::shared_ptr<STerm> mk(STerm::Kind k) {
  auto t = std::make_shared<STerm>();
  t->kind = k;
  return t;
}

bool type_eq_opt(const NodePtr& a, const NodePtr& b) {
  if (!a || !b) return !a && !b;
  return node_eq(a, b);
}

}  // namespace

STermPtr s_var(std::uint32_t i) {
  auto t = mk(STerm::Var);
  t->index = i;
  return t;
}

STermPtr s_con(std::string name) {
  auto t = mk(STerm::Con);
  t->name = std::move(name);
  return t;
}

STermPtr s_lam(NodePtr type, STermPtr body, std::string hint) {
  auto t = mk(STerm::Lam);
  t->type = std::move(type);
  t->kids = {std::move(body)};
  t->name = std::move(hint);
  return t;
}

STermPtr s_app(STermPtr f, STermPtr a) {
  auto t = mk(STerm::App);
  t->kids = {std::move(f), std::move(a)};
  return t;
}

STermPtr s_tylam(NodePtr kind, STermPtr body, std::string hint) {
  auto t = mk(STerm::TyLam);
  t->type = std::move(kind);
  t->kids = {std::move(body)};
  t->name = std::move(hint);
  return t;
}

STermPtr s_tyapp(STermPtr f, NodePtr type) {
  auto t = mk(STerm::TyApp);
  t->type = std::move(type);
  t->kids = {std::move(f)};
  return t;
}

STermPtr s_if(STermPtr scrut, STermPtr pattern, STermPtr cons, STermPtr alt) {
  auto t = mk(STerm::If);
  t->kids = {std::move(scrut), std::move(pattern), std::move(cons),
             std::move(alt)};
  return t;
}

STermPtr s_hole(NodePtr type) {
  auto t = mk(STerm::Hole);
  t->type = std::move(type);
  return t;
}

STermPtr s_annot(STermPtr term, NodePtr type) {
  auto t = mk(STerm::Annot);
  t->type = std::move(type);
  t->kids = {std::move(term)};
  return t;
}

bool sterm_eq(const STermPtr& a, const STermPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->kids.size() != b->kids.size()) return false;
  if (a->kind == STerm::Var && a->index != b->index) return false;
  if (a->kind == STerm::Con && a->name != b->name) return false;
  if (!type_eq_opt(a->type, b->type)) return false;
  for (std::size_t i = 0; i < a->kids.size(); ++i)
    if (!sterm_eq(a->kids[i], b->kids[i])) return false;
  return true;
}

STermPtr sterm_shift(const STermPtr& t, std::uint32_t k, std::uint32_t cutoff) {
  if (k == 0) return t;
  auto out = std::make_shared<STerm>(*t);
  if (t->kind == STerm::Var && t->index >= cutoff) out->index += k;
  bool binds = t->kind == STerm::Lam || t->kind == STerm::TyLam;
  if (t->type && t->kind != STerm::TyLam) out->type = shift(t->type, k, cutoff);
  for (auto& kid : out->kids) kid = sterm_shift(kid, k, cutoff + (binds ? 1 : 0));
  return out;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

using detail::Tok;
using detail::TokenStream;

const std::set<std::string, std::less<>>& surface_keywords() {
  static const std::set<std::string, std::less<>> kw = {
      "data", "class", "instance", "let",  "where", "as",
      "forall", "if",  "is",       "then", "else",
  };
  return kw;
}

bool is_lower_ident(const detail::Token& t) {
  return t.kind == Tok::Ident &&
         std::islower(static_cast<unsigned char>(t.text[0]));
}

class SurfaceParser {
 public:
  explicit SurfaceParser(std::string_view text)
      : ts_(detail::tokenize(text, surface_keywords())) {}

  SurfaceProgram program() {
    SurfaceProgram out;
    while (ts_.peek().kind != Tok::End) out.push_back(decl());
    return out;
  }

 private:
  SDecl decl() {
    SDecl d;
    d.line = ts_.peek().line;
    d.column = ts_.peek().column;
    if (ts_.accept_kw("data")) {
      d.kind = SDecl::Data;
      data_decl(d.data);
    } else if (ts_.accept_kw("class")) {
      d.kind = SDecl::Class;
      class_decl(d.cls);
    } else if (ts_.accept_kw("instance")) {
      d.kind = SDecl::Instance;
      instance_decl(d.inst);
    } else if (ts_.accept_kw("let")) {
      d.kind = SDecl::Let;
      d.let.name = ts_.expect_ident();
      type_colon();
      d.let.type = type();
      ts_.expect_sym("=");
      d.let.body = term();
    } else {
      ts_.note_expected("declaration");
      ts_.error();
    }
    ts_.expect_sym(";");
    return d;
  }

  void type_colon() {
    if (!ts_.accept_sym("::")) ts_.expect_sym(":");
  }

  template <typename F>
  void block(F&& item) {
    ts_.expect_sym("{");
    while (!ts_.at_sym("}")) {
      item();
      if (!ts_.accept_sym(";")) break;
    }
    ts_.expect_sym("}");
  }

  void data_decl(SDataDecl& d) {
    d.name = ts_.expect_ident();
    type_colon();
    d.kind = kind();
    if (ts_.accept_kw("where")) {
      block([&] {
        std::string k = ts_.expect_ident();
        ts_.expect_sym("::");
        d.ctors.emplace_back(std::move(k), type());
      });
    }
  }

  // Finds `=>` at paren depth 0 before any of the stop tokens.
  std::optional<std::size_t> find_context_arrow() {
    std::size_t start = ts_.mark();
    int depth = 0;
    std::optional<std::size_t> found;
    for (std::size_t i = 0;; ++i) {
      const auto& t = ts_.peek(i);
      if (t.kind == Tok::End) break;
      if (t.kind == Tok::Keyword && (t.text == "where" || t.text == "as"))
        break;
      if (t.kind == Tok::Sym) {
        if (t.text == "(") ++depth;
        if (t.text == ")") --depth;
        if (depth == 0 && (t.text == ";" || t.text == "|")) break;
        if (depth == 0 && t.text == "=>") {
          found = start + i;
          break;
        }
      }
    }
    return found;
  }

  NodeList context() {
    NodeList out;
    if (ts_.at_sym("(")) {
      std::size_t save = ts_.mark();
      ts_.next();
      NodePtr first = type();
      if (ts_.accept_sym(",")) {
        out.push_back(first);
        do {
          out.push_back(type());
        } while (ts_.accept_sym(","));
        ts_.expect_sym(")");
        return out;
      }
      ts_.reset(save);
    }
    out.push_back(type_eq());
    return out;
  }

  void class_decl(SClassDecl& c) {
    std::size_t start = ts_.mark();
    auto arrow = find_context_arrow();
    if (arrow) ts_.reset(*arrow + 1);
    c.name = ts_.expect_ident();
    while (ts_.at_ident() || ts_.at_sym("(")) {
      if (ts_.accept_sym("(")) {
        std::string n = ts_.expect_ident();
        type_colon();
        c.params.emplace_back(std::move(n), kind());
        ts_.expect_sym(")");
      } else {
        c.params.emplace_back(ts_.expect_ident(), star());
      }
    }
    std::size_t after_head = ts_.mark();
    for (const auto& [n, k] : c.params) scope_.push_back({n, true});
    if (arrow) {
      ts_.reset(start);
      c.supers = context();
      ts_.expect_sym("=>");
      ts_.reset(after_head);
    }
    if (ts_.accept_sym("|")) {
      do {
        fundeps(c);
      } while (ts_.accept_sym(","));
    }
    if (ts_.accept_kw("where")) {
      block([&] {
        std::string m = ts_.expect_ident();
        ts_.expect_sym("::");
        c.methods.emplace_back(std::move(m), type());
      });
    }
    scope_.resize(scope_.size() - c.params.size());
  }

  int param_index(const SClassDecl& c) {
    std::string n = ts_.expect_ident();
    for (std::size_t i = 0; i < c.params.size(); ++i)
      if (c.params[i].first == n) return static_cast<int>(i);
    ts_.error("'" + n + "' is not a parameter of class " + c.name);
  }

  void fundeps(SClassDecl& c) {
    std::vector<int> from;
    do {
      from.push_back(param_index(c));
    } while (ts_.at_ident());
    ts_.expect_sym("->");
    std::vector<int> to;
    do {
      to.push_back(param_index(c));
    } while (ts_.at_ident());
    std::string name;
    if (ts_.accept_kw("as")) {
      if (to.size() != 1)
        ts_.error("'as' names a dependency with a single determined parameter");
      name = ts_.expect_ident();
    }
    for (int t : to) c.fundeps.push_back({from, t, name});
  }

  void instance_decl(SInstanceDecl& inst) {
    std::size_t start = ts_.mark();
    auto arrow = find_context_arrow();
    std::size_t head_start = arrow ? *arrow + 1 : start;
    // Implicit variables: lowercase identifiers, head first.
    std::vector<std::string> names;
    auto scan = [&](std::size_t from, std::size_t to) {
      int depth = 0;
      for (std::size_t i = from;; ++i) {
        ts_.reset(i);
        const auto& t = ts_.peek();
        if (t.kind == Tok::End || (to != 0 && i >= to)) break;
        if (t.kind == Tok::Keyword && (t.text == "where" || t.text == "as"))
          break;
        if (t.kind == Tok::Sym) {
          if (t.text == "(") ++depth;
          if (t.text == ")") --depth;
          if (depth == 0 && t.text == ";") break;
        }
        if (is_lower_ident(t) &&
            std::find(names.begin(), names.end(), t.text) == names.end())
          names.push_back(t.text);
      }
    };
    scan(head_start, 0);
    if (arrow) scan(start, *arrow);
    for (const auto& n : names) {
      inst.vars.emplace_back(n, nullptr);
      scope_.push_back({n, true});
    }
    ts_.reset(start);
    if (arrow) {
      inst.context = context();
      ts_.expect_sym("=>");
    }
    inst.cls = ts_.expect_ident();
    while (at_type_atom()) inst.head.push_back(type_atom());
    if (ts_.accept_kw("as")) inst.name = ts_.expect_ident();
    if (ts_.accept_kw("where")) {
      block([&] {
        std::string m = ts_.expect_ident();
        ts_.expect_sym("=");
        inst.methods.emplace_back(std::move(m), term());
      });
    }
    scope_.resize(scope_.size() - names.size());
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
    ts_.note_expected("kind");
    ts_.error();
  }

  // Types ------------------------------------------------------------------

  NodePtr type() {
    if (ts_.accept_kw("forall")) {
      std::vector<std::pair<std::string, NodePtr>> bs;
      do {
        if (ts_.accept_sym("(")) {
          std::string n = ts_.expect_ident();
          type_colon();
          bs.emplace_back(std::move(n), kind());
          ts_.expect_sym(")");
        } else {
          std::string n = ts_.expect_ident();
          NodePtr k = star();
          if (ts_.accept_sym("::") || ts_.accept_sym(":")) k = kind_atom();
          bs.emplace_back(std::move(n), k);
        }
      } while (!ts_.at_sym("."));
      ts_.expect_sym(".");
      for (const auto& [n, k] : bs) scope_.push_back({n, true});
      NodePtr body = type();
      scope_.resize(scope_.size() - bs.size());
      for (std::size_t i = bs.size(); i-- > 0;)
        body = forall_(bs[i].second, body, bs[i].first);
      return body;
    }
    return type_arrow();
  }

  NodePtr type_arrow() {
    NodePtr l = type_eq();
    if (ts_.accept_sym("->") || ts_.accept_sym("=>")) return arrow(l, type());
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

  template <typename T>
  STermPtr located(T&& t, const detail::Token& at) {
    auto out = std::make_shared<STerm>(*t);
    out->line = at.line;
    out->column = at.column;
    return out;
  }

  STermPtr term() {
    detail::Token at = ts_.peek();
    STermPtr t = term0();
    if (ts_.accept_sym("::")) t = located(s_annot(t, type()), at);
    return t;
  }

  STermPtr term0() {
    detail::Token at = ts_.peek();
    if (ts_.accept_sym("\\")) {
      std::string name = ts_.expect_ident();
      type_colon();
      NodePtr ty = type_arrow();
      ts_.expect_sym(".");
      scope_.push_back({name, false});
      STermPtr body = term();
      scope_.pop_back();
      return located(s_lam(ty, body, name), at);
    }
    if (ts_.accept_sym("/\\")) {
      std::string name = ts_.expect_ident();
      NodePtr k = star();
      if (ts_.accept_sym("::") || ts_.accept_sym(":")) k = kind();
      ts_.expect_sym(".");
      scope_.push_back({name, true});
      STermPtr body = term();
      scope_.pop_back();
      return located(s_tylam(k, body, name), at);
    }
    if (ts_.accept_kw("if")) {
      STermPtr s = app_term();
      ts_.expect_kw("is");
      STermPtr p = app_term();
      ts_.expect_kw("then");
      STermPtr c = term();
      ts_.expect_kw("else");
      STermPtr a = term();
      return located(s_if(s, p, c, a), at);
    }
    return app_term();
  }

  bool at_term_atom() {
    ts_.note_expected("term");
    const auto& t = ts_.peek();
    return t.kind == Tok::Ident || t.kind == Tok::Hash ||
           (t.kind == Tok::Sym && t.text == "(");
  }

  STermPtr app_term() {
    STermPtr m = atom();
    for (;;) {
      detail::Token at = ts_.peek();
      if (ts_.accept_sym("[")) {
        NodePtr ty = type();
        ts_.expect_sym("]");
        m = located(s_tyapp(m, ty), at);
      } else if (at_term_atom()) {
        m = located(s_app(m, atom()), at);
      } else {
        return m;
      }
    }
  }

  STermPtr atom() {
    detail::Token at = ts_.peek();
    if (at.kind == Tok::Ident) {
      std::string name = ts_.next().text;
      if (auto i = lookup(name, false)) return located(s_var(*i), at);
      return located(s_con(name), at);
    }
    if (at.kind == Tok::Hash) {
      return located(s_var(hash_index(ts_.next().text)), at);
    }
    if (ts_.accept_sym("(")) {
      if (ts_.accept_sym("_")) {
        ts_.expect_sym("::");
        NodePtr ty = type();
        ts_.expect_sym(")");
        return located(s_hole(ty), at);
      }
      STermPtr m = term();
      ts_.expect_sym(")");
      return m;
    }
    ts_.note_expected("term");
    ts_.error();
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
  std::vector<std::pair<std::string, bool>> scope_;
};

}  // namespace

Result<SurfaceProgram> parse_surface(std::string_view text) {
  return capture([&] {
    SurfaceParser p(text);
    return p.program();
  });
}

bool surface_eq(const SurfaceProgram& a, const SurfaceProgram& b) {
  if (a.size() != b.size()) return false;
  auto named_eq = [](const auto& x, const auto& y, auto&& eq) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i].first != y[i].first || !eq(x[i].second, y[i].second))
        return false;
    return true;
  };
  auto types_eq = [](const NodeList& x, const NodeList& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!type_eq_opt(x[i], y[i])) return false;
    return true;
  };
  for (std::size_t i = 0; i < a.size(); ++i) {
    const SDecl& x = a[i];
    const SDecl& y = b[i];
    if (x.kind != y.kind) return false;
    switch (x.kind) {
      case SDecl::Data:
        if (x.data.name != y.data.name ||
            !type_eq_opt(x.data.kind, y.data.kind) ||
            !named_eq(x.data.ctors, y.data.ctors, type_eq_opt))
          return false;
        break;
      case SDecl::Class: {
        const auto& c = x.cls;
        const auto& d = y.cls;
        if (c.name != d.name || !named_eq(c.params, d.params, type_eq_opt) ||
            !types_eq(c.supers, d.supers) ||
            !named_eq(c.methods, d.methods, type_eq_opt) ||
            c.fundeps.size() != d.fundeps.size())
          return false;
        for (std::size_t j = 0; j < c.fundeps.size(); ++j) {
          if (c.fundeps[j].from != d.fundeps[j].from ||
              c.fundeps[j].to != d.fundeps[j].to ||
              c.fundeps[j].name != d.fundeps[j].name)
            return false;
        }
        break;
      }
      case SDecl::Instance: {
        const auto& c = x.inst;
        const auto& d = y.inst;
        if (c.cls != d.cls || c.name != d.name ||
            !named_eq(c.vars, d.vars, type_eq_opt) ||
            !types_eq(c.context, d.context) || !types_eq(c.head, d.head) ||
            !named_eq(c.methods, d.methods, sterm_eq))
          return false;
        break;
      }
      case SDecl::Let:
        if (x.let.name != y.let.name ||
            !type_eq_opt(x.let.type, y.let.type) ||
            !sterm_eq(x.let.body, y.let.body))
          return false;
        break;
    }
  }
  return true;
}

}  // namespace fd
