#include <algorithm>
#include <set>
#include <string>

#include "fd/core_text.hpp"

namespace fd {

namespace {

// Term precedence levels; larger binds tighter.
enum : int {
  kBinder = 0,
  kChoice = 1,
  kCast = 2,
  kTrans = 3,
  kCApp = 4,
  kApp = 5,
  kAtom = 6,
};

// Type precedence levels.
enum : int {
  kTyForall = 0,
  kTyArrow = 1,
  kTyEq = 2,
  kTyApp = 3,
  kTyAtom = 4,
};

void collect_constants(const NodePtr& n, std::set<std::string>& out) {
  if (n->is(Tag::Con) || n->is(Tag::TCon)) out.insert(n->name());
  for (const auto& k : n->kids()) collect_constants(k, out);
  if (n->has_pattern()) {
    out.insert(n->pattern().head);
    for (const auto& a : n->pattern().type_args) collect_constants(a, out);
  }
}

class Printer {
 public:
  Printer(std::vector<std::string> scope, std::set<std::string> avoid)
      : scope_(std::move(scope)), avoid_(std::move(avoid)) {}

  std::string any(const NodePtr& n) {
    if (n->is_kind()) return kind(n, 0);
    if (n->is_type()) return type(n, kTyForall);
    return term(n, kBinder);
  }

  std::string kind(const NodePtr& k, int prec) {
    if (k->is(Tag::Star)) return "*";
    if (k->is(Tag::KArrow)) {
      std::string s = kind(k->kid(0), 1) + " -> " + kind(k->kid(1), 0);
      return prec > 0 ? "(" + s + ")" : s;
    }
    return "<" + std::string(tag_name(k->tag())) + ">";
  }

  std::string type(const NodePtr& t, int prec) {
    std::string s;
    int level = kTyAtom;
    switch (t->tag()) {
      case Tag::TVar:
        s = var_name(t->index());
        break;
      case Tag::TCon:
        s = t->name() == kArrowName ? "(->)" : t->name();
        break;
      case Tag::TApp:
        if (is_arrow(t)) {
          s = type(arrow_dom(t), kTyEq) + " -> " +
              type(arrow_cod(t), kTyForall);
          level = kTyArrow;
        } else {
          s = type(t->kid(0), kTyApp) + " " + type(t->kid(1), kTyAtom);
          level = kTyApp;
        }
        break;
      case Tag::EqTy: {
        s = type(t->kid(0), kTyApp) + " ~";
        if (!t->kid(2)->is(Tag::Star)) s += "[" + kind(t->kid(2), 0) + "]";
        s += " " + type(t->kid(1), kTyApp);
        level = kTyEq;
        break;
      }
      case Tag::Forall: {
        std::string k = kind(t->kid(0), 1);
        std::string name = push(t->name(), "t");
        s = "forall " + name + ":" + k + ". " + type(t->kid(1), kTyForall);
        pop();
        level = kTyForall;
        break;
      }
      default:
        // Non-type node in type position; print it as a term.
        return "(" + term(t, kBinder) + ")";
    }
    return level < prec ? "(" + s + ")" : s;
  }

  std::string pattern(const Pattern& p) {
    std::string s = p.head;
    for (const auto& a : p.type_args) s += " [" + type(a, kTyForall) + "]";
    return s;
  }

  std::string term(const NodePtr& m, int prec) {
    if (m->is_type() || m->is_kind()) return "(" + any(m) + ")";
    std::string s;
    int level = kAtom;
    switch (m->tag()) {
      case Tag::Var:
        s = var_name(m->index());
        break;
      case Tag::Con:
        s = m->name();
        break;
      case Tag::Zero:
        s = "0";
        break;
      case Tag::Refl:
        s = "refl(" + type(m->kid(0), kTyForall) + ")";
        break;
      case Tag::Sim:
        s = "sim(" + term(m->kid(0), kBinder) + ", " +
            term(m->kid(1), kBinder) + ")";
        break;
      case Tag::Lam: {
        std::string ty = type(m->kid(0), kTyArrow);
        std::string name = push(m->name(), "x");
        s = "\\" + name + ":" + ty + ". " + term(m->kid(1), kBinder);
        pop();
        level = kBinder;
        break;
      }
      case Tag::TyLam:
      case Tag::Univ: {
        std::string k = kind(m->kid(0), 1);
        std::string name = push(m->name(), "t");
        s = (m->is(Tag::TyLam) ? "/\\" : "forallc ") + name + ":" + k + ". " +
            term(m->kid(1), kBinder);
        pop();
        level = kBinder;
        break;
      }
      case Tag::If:
        s = "if " + term(m->kid(0), kChoice) + " is " + pattern(m->pattern()) +
            " then " + term(m->kid(1), kBinder) + " else " +
            term(m->kid(2), kBinder);
        level = kBinder;
        break;
      case Tag::Guard:
        s = "guard " + term(m->kid(0), kChoice) + " is " +
            pattern(m->pattern()) + " then " + term(m->kid(1), kBinder);
        level = kBinder;
        break;
      case Tag::Choice:
        s = term(m->kid(0), kCast) + " <+> " + term(m->kid(1), kChoice);
        level = kChoice;
        break;
      case Tag::Cast:
        s = term(m->kid(0), kCast) + " |> " + term(m->kid(1), kTrans);
        level = kCast;
        break;
      case Tag::Trans:
        s = term(m->kid(0), kTrans) + " ;; " + term(m->kid(1), kCApp);
        level = kTrans;
        break;
      case Tag::CApp:
        s = term(m->kid(0), kCApp) + " @ " + term(m->kid(1), kApp);
        level = kCApp;
        break;
      case Tag::App:
        s = term(m->kid(0), kApp) + " " + term(m->kid(1), kAtom);
        level = kApp;
        break;
      case Tag::TyApp:
        s = term(m->kid(0), kApp) + " [" + type(m->kid(1), kTyForall) + "]";
        level = kApp;
        break;
      case Tag::CInst:
        s = term(m->kid(0), kApp) + " @[" + type(m->kid(1), kTyForall) + "]";
        level = kApp;
        break;
      case Tag::Fst:
      case Tag::Snd:
        s = term(m->kid(0), kApp) + (m->is(Tag::Fst) ? ".1" : ".2");
        level = kApp;
        break;
      case Tag::Sym:
        s = "sym " + term(m->kid(0), kAtom);
        level = kApp;
        break;
      default:
        s = "<" + std::string(tag_name(m->tag())) + ">";
        break;
    }
    return level < prec ? "(" + s + ")" : s;
  }

 private:
  std::string var_name(std::uint32_t i) const {
    if (i < scope_.size()) return scope_[scope_.size() - 1 - i];
    return "#" + std::to_string(i - scope_.size());
  }

  std::string push(const std::string& hint, const char* fallback) {
    std::string base = hint.empty() ? fallback : hint;
    std::string name = base;
    auto taken = [&](const std::string& s) {
      return avoid_.count(s) ||
             std::find(scope_.begin(), scope_.end(), s) != scope_.end();
    };
    while (taken(name)) name += "'";
    scope_.push_back(name);
    return name;
  }
  void pop() { scope_.pop_back(); }

  std::vector<std::string> scope_;
  std::set<std::string> avoid_;
};

}  // namespace

std::string print_core(const NodePtr& n, const std::vector<std::string>& scope) {
  std::set<std::string> avoid;
  collect_constants(n, avoid);
  Printer p(scope, std::move(avoid));
  return p.any(n);
}

std::string print_pattern(const Pattern& pat,
                          const std::vector<std::string>& scope) {
  std::set<std::string> avoid;
  for (const auto& a : pat.type_args) collect_constants(a, avoid);
  Printer p(scope, std::move(avoid));
  return p.pattern(pat);
}

std::string print_decl(const Decl& d) {
  std::string s(decl_keyword(d.kind));
  s += " " + d.name;
  switch (d.kind) {
    case DeclKind::Instance:
      s += " = " + print_core(d.body);
      break;
    case DeclKind::Let:
      s += " : " + print_core(d.type) + " = " + print_core(d.body);
      break;
    default:
      s += " : " + print_core(d.type);
      break;
  }
  return s + ";";
}

std::string print_core(const Program& prog) {
  std::string out;
  for (const auto& d : prog) out += print_decl(d) + "\n";
  return out;
}

}  // namespace fd
