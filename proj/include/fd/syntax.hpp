#pragma once

// Unified syntax tree for kinds, types, terms and coercions.
//
// Binder-introduced variables are de Bruijn indices counting every enclosing
// binder (type and term binders share one index space). Named constants
// (type constructors, data constructors, open functions, lets) are strings
// resolved against an Env.

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace fd {

enum class Tag : std::uint8_t {
  // kinds
  Star,
  KArrow,
  // types
  TVar,
  TCon,
  TApp,
  EqTy,
  Forall,
  // terms
  Var,
  Con,
  Lam,
  App,
  TyLam,
  TyApp,
  Cast,
  If,
  Guard,
  Zero,
  Choice,
  // coercions
  Refl,
  Sym,
  Trans,
  CApp,
  Fst,
  Snd,
  Univ,
  CInst,
  Sim,
};

inline constexpr int kTagCount = static_cast<int>(Tag::Sim) + 1;

std::string_view tag_name(Tag t);

class Node;
using NodePtr = std::shared_ptr<const Node>;
using NodeList = std::vector<NodePtr>;

/// `K [σ1] ... [σn]`: a constructor with a prefix of its type arguments.
struct Pattern {
  std::string head;
  NodeList type_args;
};

/// Immutable tree node. Children layout per tag:
///   KArrow(dom, cod)   TApp(fun, arg)     EqTy(lhs, rhs, kind)
///   Forall(kind, body) Lam(type, body)    App(fun, arg)
///   TyLam(kind, body)  TyApp(term, type)  Cast(term, coercion)
///   If(scrut, cons, alt) + pattern        Guard(scrut, cons) + pattern
///   Choice(l, r)       Refl(type)         Sym(c)   Trans(l, r)
///   CApp(l, r)         Fst(c)  Snd(c)     Univ(kind, body)
///   CInst(c, type)     Sim(l, r)
/// Forall/Lam/TyLam/Univ bind index 0 in child 1.
class Node {
 public:
  Node(Tag tag, std::uint32_t index, std::string name, NodeList kids,
       std::shared_ptr<const Pattern> pattern);

  Tag tag() const { return tag_; }
  std::uint32_t index() const { return index_; }
  /// Constant name for TCon/Con; binder name hint for binders (not part of
  /// equality).
  const std::string& name() const { return name_; }
  const NodeList& kids() const { return kids_; }
  const NodePtr& kid(std::size_t i) const { return kids_[i]; }
  std::size_t arity() const { return kids_.size(); }
  const Pattern& pattern() const { return *pattern_; }
  bool has_pattern() const { return pattern_ != nullptr; }

  /// One more than the largest free de Bruijn index (0 when closed).
  std::uint32_t free_bound() const { return free_bound_; }
  std::size_t size() const { return size_; }

  bool is(Tag t) const { return tag_ == t; }
  bool is_binder() const;
  bool is_kind() const { return tag_ == Tag::Star || tag_ == Tag::KArrow; }
  bool is_type() const;
  bool is_coercion_form() const;

 private:
  Tag tag_;
  std::uint32_t index_;
  std::uint32_t free_bound_ = 0;
  std::size_t size_ = 1;
  std::string name_;
  NodeList kids_;
  std::shared_ptr<const Pattern> pattern_;
};

inline constexpr std::string_view kArrowName = "->";

// Constructors. Binder constructors take an optional name hint.
NodePtr star();
NodePtr karrow(NodePtr dom, NodePtr cod);
NodePtr tvar(std::uint32_t i);
NodePtr tcon(std::string name);
NodePtr tapp(NodePtr f, NodePtr a);
NodePtr arrow(NodePtr dom, NodePtr cod);
NodePtr eqty(NodePtr lhs, NodePtr rhs, NodePtr kind);
NodePtr forall_(NodePtr kind, NodePtr body, std::string hint = "t");
NodePtr var(std::uint32_t i);
NodePtr con(std::string name);
NodePtr lam(NodePtr type, NodePtr body, std::string hint = "x");
NodePtr app(NodePtr f, NodePtr a);
NodePtr tylam(NodePtr kind, NodePtr body, std::string hint = "t");
NodePtr tyapp(NodePtr m, NodePtr type);
NodePtr cast(NodePtr m, NodePtr eta);
NodePtr if_(NodePtr scrut, Pattern p, NodePtr cons, NodePtr alt);
NodePtr guard(NodePtr scrut, Pattern p, NodePtr cons);
NodePtr zero();
NodePtr choice(NodePtr l, NodePtr r);
NodePtr refl(NodePtr type);
NodePtr sym(NodePtr c);
NodePtr trans(NodePtr l, NodePtr r);
NodePtr capp(NodePtr l, NodePtr r);
NodePtr fst(NodePtr c);
NodePtr snd(NodePtr c);
NodePtr univ(NodePtr kind, NodePtr body, std::string hint = "t");
NodePtr cinst(NodePtr c, NodePtr type);
NodePtr sim(NodePtr l, NodePtr r);

/// Rebuilds `n` with new children (and pattern type args), keeping tag,
/// index, name and pattern head. Returns `n` itself when nothing changed.
NodePtr rebuild(const NodePtr& n, NodeList kids, NodeList pattern_args = {});

/// Structural equality modulo binder name hints (alpha-equivalence under de
/// Bruijn).
bool node_eq(const Node& a, const Node& b);
inline bool node_eq(const NodePtr& a, const NodePtr& b) {
  return a == b || node_eq(*a, *b);
}
bool pattern_eq(const Pattern& a, const Pattern& b);

struct NodeHash {
  std::size_t operator()(const NodePtr& n) const;
};
struct NodeEq {
  bool operator()(const NodePtr& a, const NodePtr& b) const {
    return node_eq(a, b);
  }
};

/// `σ1 -> σ2` recognition.
bool is_arrow(const NodePtr& t);
const NodePtr& arrow_dom(const NodePtr& t);
const NodePtr& arrow_cod(const NodePtr& t);

/// Splits an application spine (App/TyApp or TApp chains) into head and
/// arguments in application order.
struct Spine {
  NodePtr head;
  NodeList args;  // for term spines, TyApp args are the type nodes
  std::vector<bool> is_type_arg;
};
Spine term_spine(const NodePtr& m);
Spine type_spine(const NodePtr& t);
NodePtr apply_spine(NodePtr head, const NodeList& args,
                    const std::vector<bool>& is_type_arg);

bool contains_tag(const NodePtr& n, Tag t);

// ---------------------------------------------------------------------------
// Declarations and programs

enum class DeclKind { Data, Ctor, OpenType, OpenCtor, Method, Instance, Let };

struct Decl {
  DeclKind kind;
  std::string name;
  NodePtr type;  // kind for Data/OpenType; type otherwise; null for Instance
  NodePtr body;  // Instance and Let only
  int line = 0;
  int column = 0;
};

std::string_view decl_keyword(DeclKind k);
bool decl_eq(const Decl& a, const Decl& b);

using Program = std::vector<Decl>;

}  // namespace fd
