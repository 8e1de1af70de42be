#pragma once

// Surface language: explicit polymorphism with holes and annotations, plus
// data, class, instance and let declarations (.hsk files).
//
//   data Maybe :: * -> * where { Just :: forall a. a -> Maybe a; ... };
//   class Eq a => Ord a where { lt :: a -> a -> Bool };
//   class F t u | t -> u as fdFwd, u -> t as fdBwd;
//   instance F a b => F (Maybe a) (Maybe b) as FMM;
//   instance Eq Bool as EqBool where { eq = (\b :: Bool. b :: Bool -> Bool) };
//   let f :: forall t. F Int t => t -> t = /\t :: *. \d :: F Int t. not;
//
// Types are core type nodes (`P => T` is `P -> T`). Binder-bound variables
// are de Bruijn indices, sharing one index space across type and term binders
// as in the core.

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fd/diagnostic.hpp"
#include "fd/syntax.hpp"

namespace fd {

struct STerm;
using STermPtr = std::shared_ptr<const STerm>;

struct STerm {
  enum Kind { Var, Con, Lam, App, TyLam, TyApp, If, Hole, Annot };
  Kind kind = Var;
  std::uint32_t index = 0;  // Var
  std::string name;         // Con name, or binder hint
  NodePtr type;             // Lam annotation, TyLam kind, TyApp argument,
                            // Hole and Annot type
  std::vector<STermPtr> kids;  // Lam/TyLam: body; App: f, a; TyApp: f;
                               // If: scrut, pattern term, cons, alt;
                               // Annot: term
  int line = 0;
  int column = 0;
};

STermPtr s_var(std::uint32_t i);
STermPtr s_con(std::string name);
STermPtr s_lam(NodePtr type, STermPtr body, std::string hint);
STermPtr s_app(STermPtr f, STermPtr a);
STermPtr s_tylam(NodePtr kind, STermPtr body, std::string hint);
STermPtr s_tyapp(STermPtr f, NodePtr type);
/// The pattern is a term `K [σ]...`, usually wrapped in an annotation.
STermPtr s_if(STermPtr scrut, STermPtr pattern, STermPtr cons, STermPtr alt);
STermPtr s_hole(NodePtr type);
STermPtr s_annot(STermPtr term, NodePtr type);

bool sterm_eq(const STermPtr& a, const STermPtr& b);
/// Adds `k` to free indices >= `cutoff`, in terms and embedded types.
STermPtr sterm_shift(const STermPtr& t, std::uint32_t k, std::uint32_t cutoff = 0);

struct FunDep {
  std::vector<int> from;  // determining parameter indices
  int to = 0;             // determined parameter index
  std::string name;       // witness method name (may be empty)
};

struct SDataDecl {
  std::string name;
  NodePtr kind;
  std::vector<std::pair<std::string, NodePtr>> ctors;
};

/// Class parameters are bound in `supers` and method types as type binders,
/// parameter i of n at index n-1-i.
struct SClassDecl {
  std::string name;
  std::vector<std::pair<std::string, NodePtr>> params;  // name, kind
  NodeList supers;
  std::vector<FunDep> fundeps;
  std::vector<std::pair<std::string, NodePtr>> methods;
};

/// Instance variables are implicitly bound (first occurrence order in the
/// head) and scope over the head, context and method bodies.
struct SInstanceDecl {
  std::string cls;
  std::string name;  // constructor name (may be empty)
  std::vector<std::pair<std::string, NodePtr>> vars;  // name, kind
  NodeList context;
  NodeList head;  // class arguments
  std::vector<std::pair<std::string, STermPtr>> methods;
};

struct SLetDecl {
  std::string name;
  NodePtr type;
  STermPtr body;
};

struct SDecl {
  enum Kind { Data, Class, Instance, Let } kind = Data;
  SDataDecl data;
  SClassDecl cls;
  SInstanceDecl inst;
  SLetDecl let;
  int line = 0;
  int column = 0;
};

using SurfaceProgram = std::vector<SDecl>;

/// Instance variables are the lowercase identifiers of the head and context.
Result<SurfaceProgram> parse_surface(std::string_view text);
std::string print_surface(const SurfaceProgram& p);
std::string print_sterm(const STermPtr& t,
                        const std::vector<std::string>& scope = {});
bool surface_eq(const SurfaceProgram& a, const SurfaceProgram& b);

/// Annotation placement, eta-expansion shape, fundep bounds and Paterson
/// conditions. Returns every violation found.
std::vector<Diagnostic> validate_surface(const SurfaceProgram& p);

}  // namespace fd
