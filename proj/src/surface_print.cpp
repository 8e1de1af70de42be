#include <algorithm>
#include <set>

#include "fd/core_text.hpp"
#include "fd/surface.hpp"

namespace fd {

namespace {

enum : int { kBinder = 0, kApp = 1, kAtom = 2 };

void type_constants(const NodePtr& n, std::set<std::string>& out) {
  if (!n) return;
  if (n->is(Tag::TCon)) out.insert(n->name());
  for (const auto& k : n->kids()) type_constants(k, out);
}

void term_constants(const STermPtr& t, std::set<std::string>& out) {
  if (t->kind == STerm::Con) out.insert(t->name);
  type_constants(t->type, out);
  for (const auto& k : t->kids) term_constants(k, out);
}

class SurfacePrinter {
 public:
  SurfacePrinter(std::vector<std::string> scope, std::set<std::string> avoid)
      : scope_(std::move(scope)), avoid_(std::move(avoid)) {}

  std::string type(const NodePtr& t) { return print_core(t, scope_); }

  std::string type_in_binder(const NodePtr& t) {
    std::string s = type(t);
    return t->is(Tag::Forall) ? "(" + s + ")" : s;
  }

  std::string term(const STermPtr& t, int prec) {
    std::string s;
    int level = kAtom;
    switch (t->kind) {
      case STerm::Var:
        s = t->index < scope_.size()
                ? scope_[scope_.size() - 1 - t->index]
                : "#" + std::to_string(t->index - scope_.size());
        break;
      case STerm::Con:
        s = t->name;
        break;
      case STerm::Hole:
        s = "(_ :: " + type(t->type) + ")";
        break;
      case STerm::Annot:
        s = "(" + term(t->kids[0], kApp) + " :: " + type(t->type) + ")";
        break;
      case STerm::Lam: {
        std::string ty = type_in_binder(t->type);
        std::string name = push(t->name, "x");
        s = "\\" + name + " :: " + ty + ". " + term(t->kids[0], kBinder);
        pop();
        level = kBinder;
        break;
      }
      case STerm::TyLam: {
        std::string k = print_core(t->type);
        std::string name = push(t->name, "a");
        s = "/\\" + name + " :: " + k + ". " + term(t->kids[0], kBinder);
        pop();
        level = kBinder;
        break;
      }
      case STerm::If:
        s = "if " + term(t->kids[0], kApp) + " is " + term(t->kids[1], kApp) +
            " then " + term(t->kids[2], kBinder) + " else " +
            term(t->kids[3], kBinder);
        level = kBinder;
        break;
      case STerm::App:
        s = term(t->kids[0], kApp) + " " + term(t->kids[1], kAtom);
        level = kApp;
        break;
      case STerm::TyApp:
        s = term(t->kids[0], kApp) + " [" + type(t->type) + "]";
        level = kApp;
        break;
    }
    return level < prec ? "(" + s + ")" : s;
  }

  std::string push(const std::string& hint, const char* fallback) {
    std::string name = hint.empty() ? fallback : hint;
    auto taken = [&](const std::string& s) {
      return avoid_.count(s) ||
             std::find(scope_.begin(), scope_.end(), s) != scope_.end();
    };
    while (taken(name)) name += "'";
    scope_.push_back(name);
    return name;
  }
  void pop() { scope_.pop_back(); }

 private:
  std::vector<std::string> scope_;
  std::set<std::string> avoid_;
};

std::string print_context(SurfacePrinter& p, const NodeList& ctx) {
  if (ctx.empty()) return "";
  if (ctx.size() == 1) return p.type(ctx[0]) + " => ";
  std::string s = "(";
  for (std::size_t i = 0; i < ctx.size(); ++i)
    s += (i ? ", " : "") + p.type(ctx[i]);
  return s + ") => ";
}

std::string print_type_atom(SurfacePrinter& p, const NodePtr& t) {
  std::string s = p.type(t);
  bool atomic = t->is(Tag::TVar) || t->is(Tag::TCon);
  return atomic ? s : "(" + s + ")";
}

std::string print_decl(const SDecl& d) {
  std::string s;
  switch (d.kind) {
    case SDecl::Data: {
      s = "data " + d.data.name + " :: " + print_core(d.data.kind);
      if (!d.data.ctors.empty()) {
        s += " where {\n";
        for (const auto& [k, ty] : d.data.ctors)
          s += "  " + k + " :: " + print_core(ty) + ";\n";
        s += "}";
      }
      break;
    }
    case SDecl::Class: {
      const auto& c = d.cls;
      std::vector<std::string> names;
      for (const auto& [n, k] : c.params) names.push_back(n);
      SurfacePrinter p(names, {});
      s = "class " + print_context(p, c.supers) + c.name;
      for (const auto& [n, k] : c.params) {
        s += k->is(Tag::Star) ? " " + n
                              : " (" + n + " :: " + print_core(k) + ")";
      }
      for (std::size_t i = 0; i < c.fundeps.size(); ++i) {
        const auto& fd = c.fundeps[i];
        s += i ? ", " : " | ";
        for (int f : fd.from) s += names[f] + " ";
        s += "-> " + names[fd.to];
        if (!fd.name.empty()) s += " as " + fd.name;
      }
      if (!c.methods.empty()) {
        s += " where {\n";
        for (const auto& [m, ty] : c.methods)
          s += "  " + m + " :: " + p.type(ty) + ";\n";
        s += "}";
      }
      break;
    }
    case SDecl::Instance: {
      const auto& in = d.inst;
      std::vector<std::string> names;
      for (const auto& [n, k] : in.vars) names.push_back(n);
      SurfacePrinter p(names, {});
      s = "instance " + print_context(p, in.context) + in.cls;
      for (const auto& h : in.head) s += " " + print_type_atom(p, h);
      if (!in.name.empty()) s += " as " + in.name;
      if (!in.methods.empty()) {
        s += " where {\n";
        for (const auto& [m, body] : in.methods) {
          std::set<std::string> avoid;
          term_constants(body, avoid);
          SurfacePrinter bp(names, std::move(avoid));
          s += "  " + m + " = " + bp.term(body, kBinder) + ";\n";
        }
        s += "}";
      }
      break;
    }
    case SDecl::Let: {
      std::set<std::string> avoid;
      term_constants(d.let.body, avoid);
      SurfacePrinter p({}, std::move(avoid));
      s = "let " + d.let.name + " :: " + print_core(d.let.type) + " =\n  " +
          p.term(d.let.body, kBinder);
      break;
    }
  }
  return s + ";";
}

}  // namespace

std::string print_sterm(const STermPtr& t,
                        const std::vector<std::string>& scope) {
  std::set<std::string> avoid;
  term_constants(t, avoid);
  SurfacePrinter p(scope, std::move(avoid));
  return p.term(t, kBinder);
}

std::string print_surface(const SurfaceProgram& prog) {
  std::string out;
  for (const auto& d : prog) out += print_decl(d) + "\n";
  return out;
}

}  // namespace fd
