#include <map>
#include <set>

#include "fd/env.hpp"
#include "fd/surface.hpp"

namespace fd {

namespace {

class Validator {
 public:
  explicit Validator(const SurfaceProgram& p) : prog_(p) {}

  std::vector<Diagnostic> run() {
    for (const auto& d : prog_) {
      decl_ = &d;
      switch (d.kind) {
        case SDecl::Data:
          break;
        case SDecl::Class:
          class_decl(d.cls);
          classes_[d.cls.name] = &d.cls;
          break;
        case SDecl::Instance:
          instance_decl(d.inst);
          break;
        case SDecl::Let:
          annotations(d.let.body);
          eta(d.let.type, d.let.body, "let " + d.let.name);
          break;
      }
    }
    return std::move(out_);
  }

 private:
  void report(std::string code, std::string message, const STerm* at = nullptr) {
    Diagnostic d;
    d.code = std::move(code);
    d.message = std::move(message);
    d.line = at && at->line ? at->line : decl_->line;
    d.column = at && at->line ? at->column : decl_->column;
    out_.push_back(std::move(d));
  }

  void class_decl(const SClassDecl& c) {
    int n = static_cast<int>(c.params.size());
    for (const auto& fd : c.fundeps) {
      bool ok = !fd.from.empty() && fd.to >= 0 && fd.to < n;
      for (int f : fd.from) {
        if (f < 0 || f >= n || f == fd.to) ok = false;
      }
      if (!ok) {
        report("FundepBounds", "functional dependency of class " + c.name +
                                   " has indices outside 0.." +
                                   std::to_string(n - 1) +
                                   " or determines a determiner");
      }
    }
  }

  static void occurrences(const NodePtr& t, std::size_t& size,
                          std::map<std::uint32_t, int>& vars,
                          std::uint32_t depth = 0) {
    if (t->is(Tag::TCon)) ++size;
    if (t->is(Tag::TVar)) {
      ++size;
      if (t->index() >= depth) ++vars[t->index() - depth];
    }
    bool binds = t->is(Tag::Forall);
    for (std::size_t i = 0; i < t->arity(); ++i)
      occurrences(t->kid(i), size, vars, depth + (binds && i == 1 ? 1 : 0));
  }

  void instance_decl(const SInstanceDecl& in) {
    std::size_t head_size = 0;
    std::map<std::uint32_t, int> head_vars;
    for (const auto& h : in.head) occurrences(h, head_size, head_vars);
    for (const auto& p : in.context) {
      std::size_t size = 0;
      std::map<std::uint32_t, int> vars;
      auto sp = type_spine(p);
      for (const auto& a : sp.args) occurrences(a, size, vars);
      bool grows = false;
      for (const auto& [v, count] : vars)
        if (count > head_vars[v]) grows = true;
      if (size >= head_size || grows) {
        report("PatersonViolation",
               "context predicate of instance " + in.cls +
                   (grows ? " mentions a variable more often than the head"
                          : " is not smaller than the head"));
      }
    }
    const SClassDecl* cls = nullptr;
    if (auto it = classes_.find(in.cls); it != classes_.end()) cls = it->second;
    std::set<std::string> seen;
    for (const auto& [m, body] : in.methods) {
      if (!seen.insert(m).second)
        report("DuplicateMethod", "method " + m + " defined twice", body.get());
      annotations(body);
      if (!cls) continue;
      NodePtr type;
      for (const auto& [name, ty] : cls->methods)
        if (name == m) type = ty;
      if (!type) {
        report("UnknownMethod",
               m + " is not a method of class " + in.cls, body.get());
        continue;
      }
      eta(type, body, "method " + m);
    }
  }

  static const STerm* strip(const STerm* t) {
    while (t->kind == STerm::Annot) t = t->kids[0].get();
    return t;
  }

  void annotations(const STermPtr& t) {
    switch (t->kind) {
      case STerm::App:
      case STerm::TyApp: {
        const STerm* h = t.get();
        while (h->kind == STerm::App || h->kind == STerm::TyApp)
          h = h->kids[0].get();
        if (h->kind != STerm::Var && h->kind != STerm::Con &&
            h->kind != STerm::Annot && h->kind != STerm::Hole) {
          report("AnnotationRequired",
                 "the head of an application must be a variable or annotated",
                 h);
        }
        break;
      }
      case STerm::If: {
        static const char* what[] = {"scrutinee", "pattern", "consequent"};
        for (int i = 0; i < 3; ++i) {
          if (t->kids[i]->kind != STerm::Annot) {
            report("AnnotationRequired",
                   std::string("the ") + what[i] + " of an if must be annotated",
                   t->kids[i].get());
          }
        }
        const STerm* p = strip(t->kids[1].get());
        while (p->kind == STerm::TyApp) p = p->kids[0].get();
        if (p->kind != STerm::Con) {
          report("BadPattern", "a pattern is a constructor applied to types",
                 t->kids[1].get());
        }
        break;
      }
      default:
        break;
    }
    for (const auto& k : t->kids) annotations(k);
  }

  bool is_predicate(const NodePtr& t) const {
    auto h = type_head_name(t);
    return h && classes_.count(*h);
  }

  // Leading type abstractions and dictionary parameters must be explicit.
  void eta(NodePtr type, const STermPtr& body, const std::string& what) {
    const STerm* b = strip(body.get());
    for (;;) {
      if (type->is(Tag::Forall)) {
        if (b->kind != STerm::TyLam) break;
        type = type->kid(1);
      } else if (is_arrow(type) && is_predicate(arrow_dom(type))) {
        if (b->kind != STerm::Lam) break;
        type = arrow_cod(type);
      } else {
        return;
      }
      b = strip(b->kids[0].get());
    }
    report("NotEtaExpanded",
           what + " must bind its type parameters and dictionaries explicitly",
           b);
  }

  const SurfaceProgram& prog_;
  const SDecl* decl_ = nullptr;
  std::map<std::string, const SClassDecl*> classes_;
  std::vector<Diagnostic> out_;
};

}  // namespace

std::vector<Diagnostic> validate_surface(const SurfaceProgram& p) {
  return Validator(p).run();
}

}  // namespace fd
