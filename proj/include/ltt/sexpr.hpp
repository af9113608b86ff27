// S-expression concrete syntax.
//
// Generic reader/printer plus the encodings for the six syntactic classes.
//
//   type   ::= Nat | Univ | (prod T T) | (arrow T T) | (ty M) | (set T)
//   term   ::= (var x) | zero | (succ M) | nathat | (timeshat M N)
//            | (enat x C L x y M N) | (rnat L x y M N)
//            | (pair M N A B) | (proj1 M A B) | (proj2 M A B)
//            | (lam x A M B) | (app M N A B) | (setcomp x A P)
//   small  ::= (eqhat M N L) | bothat | (imphat P Q)
//            | (forallhat x M P) | (inhat M N A)
//   prop   ::= (eq M N L) | bot | (imp p q) | (forall x A p) | (holds P)
//   aterm  ::= (var x) | zero | (succ t) | (plus t t) | (times t t)
//   aform  ::= (= t t) | (in t X) | bot | (imp f f)
//            | (forall-num x f) | (forall-set X f)
//   setabs ::= (setabs y f)
//
// Set variables (the `X` positions) are bare atoms; their namespace is fixed
// by position.  Canonical printing round-trips bit-exactly.
#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ltt/expr.hpp"

namespace ltt {

struct Sexp;
using SexpPtr = std::shared_ptr<const Sexp>;
struct Sexp {
  std::variant<std::string, std::vector<SexpPtr>> v;
  bool is_atom() const { return v.index() == 0; }
  const std::string& atom() const { return std::get<0>(v); }
  const std::vector<SexpPtr>& list() const { return std::get<1>(v); }
};

inline SexpPtr s_atom(std::string a) {
  return std::make_shared<Sexp>(Sexp{std::move(a)});
}
inline SexpPtr s_list(std::vector<SexpPtr> xs) {
  return std::make_shared<Sexp>(Sexp{std::move(xs)});
}

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// -- reader -----------------------------------------------------------------

namespace detail {
inline void skip_ws(const std::string& s, std::size_t& i) {
  while (i < s.size()) {
    if (std::isspace((unsigned char)s[i])) { ++i; continue; }
    if (s[i] == ';') {  // comment to end of line
      while (i < s.size() && s[i] != '\n') ++i;
      continue;
    }
    break;
  }
}

inline SexpPtr parse_sexp_at(const std::string& s, std::size_t& i) {
  skip_ws(s, i);
  if (i >= s.size()) throw ParseError("unexpected end of input");
  if (s[i] == '(') {
    ++i;
    std::vector<SexpPtr> xs;
    for (;;) {
      skip_ws(s, i);
      if (i >= s.size()) throw ParseError("unterminated list");
      if (s[i] == ')') { ++i; break; }
      xs.push_back(parse_sexp_at(s, i));
    }
    return s_list(std::move(xs));
  }
  if (s[i] == ')') throw ParseError("unexpected ')'");
  std::size_t start = i;
  while (i < s.size() && !std::isspace((unsigned char)s[i]) && s[i] != '(' &&
         s[i] != ')' && s[i] != ';')
    ++i;
  return s_atom(s.substr(start, i - start));
}
}  // namespace detail

inline SexpPtr parse_sexp(const std::string& s) {
  std::size_t i = 0;
  SexpPtr e = detail::parse_sexp_at(s, i);
  detail::skip_ws(s, i);
  if (i != s.size()) throw ParseError("trailing input after expression");
  return e;
}

inline std::vector<SexpPtr> parse_sexp_file(const std::string& s) {
  std::size_t i = 0;
  std::vector<SexpPtr> out;
  for (;;) {
    detail::skip_ws(s, i);
    if (i >= s.size()) break;
    out.push_back(detail::parse_sexp_at(s, i));
  }
  return out;
}

inline std::string print_sexp(const SexpPtr& e) {
  if (e->is_atom()) return e->atom();
  std::string out = "(";
  bool first = true;
  for (const auto& k : e->list()) {
    if (!first) out += ' ';
    first = false;
    out += print_sexp(k);
  }
  out += ')';
  return out;
}

// -- expression encoding ----------------------------------------------------

namespace detail {
inline const SexpPtr& arg(const SexpPtr& e, std::size_t i, const char* head) {
  if (e->list().size() <= i)
    throw ParseError(std::string("too few arguments to ") + head);
  return e->list()[i];
}
inline std::string atom_arg(const SexpPtr& e, std::size_t i, const char* head) {
  const SexpPtr& a = arg(e, i, head);
  if (!a->is_atom()) throw ParseError(std::string(head) + ": expected a name");
  return a->atom();
}
inline void expect_len(const SexpPtr& e, std::size_t n, const char* head) {
  if (e->list().size() != n)
    throw ParseError(std::string("wrong arity for ") + head);
}
}  // namespace detail

inline ExprPtr sexp_to_expr(const SexpPtr& s, SynClass cls);

namespace detail {
inline ExprPtr child(const SexpPtr& e, std::size_t i, SynClass c, const char* h) {
  return sexp_to_expr(arg(e, i, h), c);
}
}  // namespace detail

inline ExprPtr sexp_to_expr(const SexpPtr& s, SynClass cls) {
  using D = SynClass;
  using namespace detail;
  if (s->is_atom()) {
    const std::string& a = s->atom();
    if (cls == D::Type) {
      if (a == "Nat") return ty_nat();
      if (a == "Univ") return ty_univ();
    }
    if (cls == D::Term || cls == D::SoaTerm) {
      // "0" is accepted as an input abbreviation; printing uses "zero"
      if (a == "zero" || a == "0") return zero();
      if (a == "nathat" && cls == D::Term) return nat_name();
    }
    if (cls == D::Small && a == "bothat") return bot_hat();
    if ((cls == D::Prop || cls == D::SoaFormula) && a == "bot") return bot();
    throw ParseError("unknown atom '" + a + "' in this position");
  }
  if (s->list().empty() || !s->list()[0]->is_atom())
    throw ParseError("expected (head args...)");
  const std::string& h = s->list()[0]->atom();
  auto n = s->list().size();
  (void)n;
  if (cls == D::Type) {
    if (h == "prod") { expect_len(s, 3, "prod"); return ty_prod(child(s,1,D::Type,"prod"), child(s,2,D::Type,"prod")); }
    if (h == "arrow") { expect_len(s, 3, "arrow"); return ty_arrow(child(s,1,D::Type,"arrow"), child(s,2,D::Type,"arrow")); }
    if (h == "ty") { expect_len(s, 2, "ty"); return ty_of(child(s,1,D::Term,"ty")); }
    if (h == "set") { expect_len(s, 2, "set"); return ty_set(child(s,1,D::Type,"set")); }
  }
  if (cls == D::Term || cls == D::SoaTerm) {
    if (h == "var") { expect_len(s, 2, "var"); return var(atom_arg(s,1,"var")); }
    // "s" is accepted as an input abbreviation; printing uses "succ"
    if (h == "succ" || h == "s") { expect_len(s, 2, "succ"); return succ(child(s,1,cls,"succ")); }
  }
  if (cls == D::Term) {
    if (h == "enat") {
      expect_len(s, 8, "enat");
      return enat(atom_arg(s,1,"enat"), child(s,2,D::Type,"enat"),
                  child(s,3,D::Term,"enat"), atom_arg(s,4,"enat"),
                  atom_arg(s,5,"enat"), child(s,6,D::Term,"enat"),
                  child(s,7,D::Term,"enat"));
    }
    if (h == "rnat") {
      expect_len(s, 6, "rnat");
      return rnat(child(s,1,D::Term,"rnat"), atom_arg(s,2,"rnat"),
                  atom_arg(s,3,"rnat"), child(s,4,D::Term,"rnat"),
                  child(s,5,D::Term,"rnat"));
    }
    if (h == "pair") { expect_len(s, 5, "pair"); return pair(child(s,1,D::Term,"pair"), child(s,2,D::Term,"pair"), child(s,3,D::Type,"pair"), child(s,4,D::Type,"pair")); }
    if (h == "proj1") { expect_len(s, 4, "proj1"); return proj1(child(s,1,D::Term,"proj1"), child(s,2,D::Type,"proj1"), child(s,3,D::Type,"proj1")); }
    if (h == "proj2") { expect_len(s, 4, "proj2"); return proj2(child(s,1,D::Term,"proj2"), child(s,2,D::Type,"proj2"), child(s,3,D::Type,"proj2")); }
    if (h == "lam") { expect_len(s, 5, "lam"); return lam(atom_arg(s,1,"lam"), child(s,2,D::Type,"lam"), child(s,3,D::Term,"lam"), child(s,4,D::Type,"lam")); }
    if (h == "app") { expect_len(s, 5, "app"); return app(child(s,1,D::Term,"app"), child(s,2,D::Term,"app"), child(s,3,D::Type,"app"), child(s,4,D::Type,"app")); }
    if (h == "timeshat") { expect_len(s, 3, "timeshat"); return times_name(child(s,1,D::Term,"timeshat"), child(s,2,D::Term,"timeshat")); }
    if (h == "setcomp") { expect_len(s, 4, "setcomp"); return set_comp(atom_arg(s,1,"setcomp"), child(s,2,D::Type,"setcomp"), child(s,3,D::Small,"setcomp")); }
  }
  if (cls == D::Small) {
    if (h == "eqhat") { expect_len(s, 4, "eqhat"); return eq_hat(child(s,1,D::Term,"eqhat"), child(s,2,D::Term,"eqhat"), child(s,3,D::Term,"eqhat")); }
    if (h == "imphat") { expect_len(s, 3, "imphat"); return imp_hat(child(s,1,D::Small,"imphat"), child(s,2,D::Small,"imphat")); }
    if (h == "forallhat") { expect_len(s, 4, "forallhat"); return forall_hat(atom_arg(s,1,"forallhat"), child(s,2,D::Term,"forallhat"), child(s,3,D::Small,"forallhat")); }
    if (h == "inhat") { expect_len(s, 4, "inhat"); return in_hat(child(s,1,D::Term,"inhat"), child(s,2,D::Term,"inhat"), child(s,3,D::Type,"inhat")); }
  }
  if (cls == D::Prop) {
    if (h == "eq") { expect_len(s, 4, "eq"); return eq(child(s,1,D::Term,"eq"), child(s,2,D::Term,"eq"), child(s,3,D::Term,"eq")); }
    if (h == "imp") { expect_len(s, 3, "imp"); return imp(child(s,1,D::Prop,"imp"), child(s,2,D::Prop,"imp")); }
    if (h == "forall") { expect_len(s, 4, "forall"); return forall(atom_arg(s,1,"forall"), child(s,2,D::Type,"forall"), child(s,3,D::Prop,"forall")); }
    if (h == "holds") { expect_len(s, 2, "holds"); return holds(child(s,1,D::Small,"holds")); }
  }
  if (cls == D::SoaTerm) {
    if (h == "plus") { expect_len(s, 3, "plus"); return plus(child(s,1,D::SoaTerm,"plus"), child(s,2,D::SoaTerm,"plus")); }
    if (h == "times") { expect_len(s, 3, "times"); return times(child(s,1,D::SoaTerm,"times"), child(s,2,D::SoaTerm,"times")); }
  }
  if (cls == D::SoaFormula) {
    if (h == "=") { expect_len(s, 3, "="); return s_eq(child(s,1,D::SoaTerm,"="), child(s,2,D::SoaTerm,"=")); }
    if (h == "in") { expect_len(s, 3, "in"); return s_in(child(s,1,D::SoaTerm,"in"), set_var(atom_arg(s,2,"in"))); }
    if (h == "imp") { expect_len(s, 3, "imp"); return imp(child(s,1,D::SoaFormula,"imp"), child(s,2,D::SoaFormula,"imp")); }
    if (h == "forall-num") { expect_len(s, 3, "forall-num"); return forall_num(atom_arg(s,1,"forall-num"), child(s,2,D::SoaFormula,"forall-num")); }
    if (h == "forall-set") { expect_len(s, 3, "forall-set"); return forall_set(atom_arg(s,1,"forall-set"), child(s,2,D::SoaFormula,"forall-set")); }
    if (h == "setabs") { expect_len(s, 3, "setabs"); return set_abs(atom_arg(s,1,"setabs"), child(s,2,D::SoaFormula,"setabs")); }
  }
  throw ParseError("unknown head '" + h + "' for this syntactic class");
}

inline SexpPtr expr_to_sexp(const ExprPtr& e) {
  auto L = [](std::initializer_list<SexpPtr> xs) {
    return s_list(std::vector<SexpPtr>(xs));
  };
  auto A = s_atom;
  auto K = [&](const ExprPtr& k) { return expr_to_sexp(k); };
  switch (e->kind) {
    case Kind::TyNat: return A("Nat");
    case Kind::TyUniv: return A("Univ");
    case Kind::TyProd: return L({A("prod"), K(e->kids[0]), K(e->kids[1])});
    case Kind::TyArrow: return L({A("arrow"), K(e->kids[0]), K(e->kids[1])});
    case Kind::TyOf: return L({A("ty"), K(e->kids[0])});
    case Kind::TySet: return L({A("set"), K(e->kids[0])});
    case Kind::Var: return L({A("var"), A(e->name)});
    case Kind::Zero: return A("zero");
    case Kind::Succ: return L({A("succ"), K(e->kids[0])});
    case Kind::ENat:
      return L({A("enat"), A(e->binders[0]), K(e->kids[0]), K(e->kids[1]),
                A(e->binders[1]), A(e->binders[2]), K(e->kids[2]), K(e->kids[3])});
    case Kind::RNat:
      return L({A("rnat"), K(e->kids[0]), A(e->binders[0]), A(e->binders[1]),
                K(e->kids[1]), K(e->kids[2])});
    case Kind::Pair:
      return L({A("pair"), K(e->kids[0]), K(e->kids[1]), K(e->kids[2]), K(e->kids[3])});
    case Kind::Proj1:
      return L({A("proj1"), K(e->kids[0]), K(e->kids[1]), K(e->kids[2])});
    case Kind::Proj2:
      return L({A("proj2"), K(e->kids[0]), K(e->kids[1]), K(e->kids[2])});
    case Kind::Lam:
      return L({A("lam"), A(e->binders[0]), K(e->kids[0]), K(e->kids[1]), K(e->kids[2])});
    case Kind::App:
      return L({A("app"), K(e->kids[0]), K(e->kids[1]), K(e->kids[2]), K(e->kids[3])});
    case Kind::NatName: return A("nathat");
    case Kind::TimesName:
      return L({A("timeshat"), K(e->kids[0]), K(e->kids[1])});
    case Kind::SetComp:
      return L({A("setcomp"), A(e->binders[0]), K(e->kids[0]), K(e->kids[1])});
    case Kind::EqHat:
      return L({A("eqhat"), K(e->kids[0]), K(e->kids[1]), K(e->kids[2])});
    case Kind::BotHat: return A("bothat");
    case Kind::ImpHat: return L({A("imphat"), K(e->kids[0]), K(e->kids[1])});
    case Kind::ForallHat:
      return L({A("forallhat"), A(e->binders[0]), K(e->kids[0]), K(e->kids[1])});
    case Kind::InHat:
      return L({A("inhat"), K(e->kids[0]), K(e->kids[1]), K(e->kids[2])});
    case Kind::Eq:
      return L({A("eq"), K(e->kids[0]), K(e->kids[1]), K(e->kids[2])});
    case Kind::Bot: return A("bot");
    case Kind::Imp: return L({A("imp"), K(e->kids[0]), K(e->kids[1])});
    case Kind::Forall:
      return L({A("forall"), A(e->binders[0]), K(e->kids[0]), K(e->kids[1])});
    case Kind::Holds: return L({A("holds"), K(e->kids[0])});
    case Kind::Plus: return L({A("plus"), K(e->kids[0]), K(e->kids[1])});
    case Kind::Times: return L({A("times"), K(e->kids[0]), K(e->kids[1])});
    case Kind::SEq: return L({A("="), K(e->kids[0]), K(e->kids[1])});
    case Kind::SIn: return L({A("in"), K(e->kids[0]), A(e->kids[1]->name)});
    case Kind::SetVar: return A(e->name);
    case Kind::ForallNum:
      return L({A("forall-num"), A(e->binders[0]), K(e->kids[0])});
    case Kind::ForallSet:
      return L({A("forall-set"), A(e->binders[0]), K(e->kids[0])});
    case Kind::SetAbs:
      return L({A("setabs"), A(e->binders[0]), K(e->kids[0])});
  }
  throw std::logic_error("expr_to_sexp: unhandled kind");
}

inline std::string print_expr(const ExprPtr& e) {
  return print_sexp(expr_to_sexp(e));
}

inline ExprPtr parse_expr(const std::string& s, SynClass cls) {
  return sexp_to_expr(parse_sexp(s), cls);
}

}  // namespace ltt
