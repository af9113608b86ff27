// Core expression representation shared by the type-theory side (types,
// terms, small propositions, propositions) and the second-order-arithmetic
// side (number terms, formulas, set abstracts).  A single kind-tagged
// immutable node keeps the binding-aware operations (free variables,
// capture-avoiding substitution, alpha equivalence) generic.
#pragma once

#include <algorithm>
#include <cassert>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace ltt {

enum class Kind {
  // types
  TyNat, TyProd, TyArrow, TyUniv, TyOf, TySet,
  // terms
  Var, Zero, Succ, ENat, RNat, Pair, Proj1, Proj2, Lam, App,
  NatName, TimesName, SetComp,
  // small propositions
  EqHat, BotHat, ImpHat, ForallHat, InHat,
  // propositions
  Eq, Bot, Imp, Forall, Holds,
  // second-order arithmetic
  Plus, Times, SEq, SIn, SetVar, ForallNum, ForallSet, SetAbs,
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  Kind kind;
  std::vector<std::string> binders;  // kind-specific binder slots
  std::vector<ExprPtr> kids;
  std::string name;  // Var / SetVar only

  Expr(Kind k, std::vector<std::string> bs, std::vector<ExprPtr> ks,
       std::string n = {})
      : kind(k), binders(std::move(bs)), kids(std::move(ks)),
        name(std::move(n)) {}
};

// ---------------------------------------------------------------------------
// Kind signatures: arity, binder count, and which binder slots are in scope
// in which child.  A static table keeps every binding-aware operation in one
// generic recursion.

struct KindSig {
  int arity;
  int nbinders;
  // scopes[i] = binder slots visible in child i
  std::vector<std::vector<int>> scopes;
  bool set_namespace_binder = false;  // binder binds a set variable
};

inline const KindSig& kind_sig(Kind k) {
  static const std::map<Kind, KindSig> table = {
      {Kind::TyNat, {0, 0, {}}},
      {Kind::TyProd, {2, 0, {{}, {}}}},
      {Kind::TyArrow, {2, 0, {{}, {}}}},
      {Kind::TyUniv, {0, 0, {}}},
      {Kind::TyOf, {1, 0, {{}}}},
      {Kind::TySet, {1, 0, {{}}}},
      {Kind::Var, {0, 0, {}}},
      {Kind::Zero, {0, 0, {}}},
      {Kind::Succ, {1, 0, {{}}}},
      // ENat(cx.C, L, (sx,sy).M, N)
      {Kind::ENat, {4, 3, {{0}, {}, {1, 2}, {}}}},
      // RNat(L, (sx,sy).M, N)
      {Kind::RNat, {3, 2, {{}, {0, 1}, {}}}},
      {Kind::Pair, {4, 0, {{}, {}, {}, {}}}},   // M N A B
      {Kind::Proj1, {3, 0, {{}, {}, {}}}},      // M A B
      {Kind::Proj2, {3, 0, {{}, {}, {}}}},
      {Kind::Lam, {3, 1, {{}, {0}, {0}}}},      // A x.M x.B
      {Kind::App, {4, 0, {{}, {}, {}, {}}}},    // M N A B
      {Kind::NatName, {0, 0, {}}},
      {Kind::TimesName, {2, 0, {{}, {}}}},
      {Kind::SetComp, {2, 1, {{}, {0}}}},       // A x.P
      {Kind::EqHat, {3, 0, {{}, {}, {}}}},      // M N L
      {Kind::BotHat, {0, 0, {}}},
      {Kind::ImpHat, {2, 0, {{}, {}}}},
      {Kind::ForallHat, {2, 1, {{}, {0}}}},     // M x.P
      {Kind::InHat, {3, 0, {{}, {}, {}}}},      // M N A
      {Kind::Eq, {3, 0, {{}, {}, {}}}},
      {Kind::Bot, {0, 0, {}}},
      {Kind::Imp, {2, 0, {{}, {}}}},
      {Kind::Forall, {2, 1, {{}, {0}}}},        // A x.phi
      {Kind::Holds, {1, 0, {{}}}},
      {Kind::Plus, {2, 0, {{}, {}}}},
      {Kind::Times, {2, 0, {{}, {}}}},
      {Kind::SEq, {2, 0, {{}, {}}}},
      {Kind::SIn, {2, 0, {{}, {}}}},            // t X
      {Kind::SetVar, {0, 0, {}}},
      {Kind::ForallNum, {1, 1, {{0}}}},
      {Kind::ForallSet, {1, 1, {{0}}, true}},
      {Kind::SetAbs, {1, 1, {{0}}}},            // y.phi
  };
  return table.at(k);
}

inline ExprPtr mk(Kind k, std::vector<std::string> bs, std::vector<ExprPtr> ks,
                  std::string n = {}) {
  const KindSig& sig = kind_sig(k);
  assert((int)ks.size() == sig.arity);
  assert((int)bs.size() == sig.nbinders);
  return std::make_shared<Expr>(k, std::move(bs), std::move(ks), std::move(n));
}

// -- constructors -----------------------------------------------------------

inline ExprPtr ty_nat() { return mk(Kind::TyNat, {}, {}); }
inline ExprPtr ty_prod(ExprPtr a, ExprPtr b) { return mk(Kind::TyProd, {}, {a, b}); }
inline ExprPtr ty_arrow(ExprPtr a, ExprPtr b) { return mk(Kind::TyArrow, {}, {a, b}); }
inline ExprPtr ty_univ() { return mk(Kind::TyUniv, {}, {}); }
inline ExprPtr ty_of(ExprPtr m) { return mk(Kind::TyOf, {}, {m}); }
inline ExprPtr ty_set(ExprPtr a) { return mk(Kind::TySet, {}, {a}); }

inline ExprPtr var(const std::string& x) { return mk(Kind::Var, {}, {}, x); }
inline ExprPtr zero() { return mk(Kind::Zero, {}, {}); }
inline ExprPtr succ(ExprPtr m) { return mk(Kind::Succ, {}, {m}); }
inline ExprPtr enat(const std::string& cx, ExprPtr c, ExprPtr l,
                    const std::string& sx, const std::string& sy, ExprPtr m,
                    ExprPtr n) {
  return mk(Kind::ENat, {cx, sx, sy}, {c, l, m, n});
}
inline ExprPtr rnat(ExprPtr l, const std::string& sx, const std::string& sy,
                    ExprPtr m, ExprPtr n) {
  return mk(Kind::RNat, {sx, sy}, {l, m, n});
}
inline ExprPtr pair(ExprPtr m, ExprPtr n, ExprPtr a, ExprPtr b) {
  return mk(Kind::Pair, {}, {m, n, a, b});
}
inline ExprPtr proj1(ExprPtr m, ExprPtr a, ExprPtr b) { return mk(Kind::Proj1, {}, {m, a, b}); }
inline ExprPtr proj2(ExprPtr m, ExprPtr a, ExprPtr b) { return mk(Kind::Proj2, {}, {m, a, b}); }
inline ExprPtr lam(const std::string& x, ExprPtr a, ExprPtr m, ExprPtr b) {
  return mk(Kind::Lam, {x}, {a, m, b});
}
inline ExprPtr app(ExprPtr m, ExprPtr n, ExprPtr a, ExprPtr b) {
  return mk(Kind::App, {}, {m, n, a, b});
}
inline ExprPtr nat_name() { return mk(Kind::NatName, {}, {}); }
inline ExprPtr times_name(ExprPtr m, ExprPtr n) { return mk(Kind::TimesName, {}, {m, n}); }
inline ExprPtr set_comp(const std::string& x, ExprPtr a, ExprPtr p) {
  return mk(Kind::SetComp, {x}, {a, p});
}

inline ExprPtr eq_hat(ExprPtr m, ExprPtr n, ExprPtr l) { return mk(Kind::EqHat, {}, {m, n, l}); }
inline ExprPtr bot_hat() { return mk(Kind::BotHat, {}, {}); }
inline ExprPtr imp_hat(ExprPtr p, ExprPtr q) { return mk(Kind::ImpHat, {}, {p, q}); }
inline ExprPtr forall_hat(const std::string& x, ExprPtr m, ExprPtr p) {
  return mk(Kind::ForallHat, {x}, {m, p});
}
inline ExprPtr in_hat(ExprPtr m, ExprPtr n, ExprPtr a) { return mk(Kind::InHat, {}, {m, n, a}); }

inline ExprPtr eq(ExprPtr m, ExprPtr n, ExprPtr l) { return mk(Kind::Eq, {}, {m, n, l}); }
inline ExprPtr bot() { return mk(Kind::Bot, {}, {}); }
inline ExprPtr imp(ExprPtr p, ExprPtr q) { return mk(Kind::Imp, {}, {p, q}); }
inline ExprPtr forall(const std::string& x, ExprPtr a, ExprPtr phi) {
  return mk(Kind::Forall, {x}, {a, phi});
}
inline ExprPtr holds(ExprPtr p) { return mk(Kind::Holds, {}, {p}); }

inline ExprPtr plus(ExprPtr a, ExprPtr b) { return mk(Kind::Plus, {}, {a, b}); }
inline ExprPtr times(ExprPtr a, ExprPtr b) { return mk(Kind::Times, {}, {a, b}); }
inline ExprPtr s_eq(ExprPtr a, ExprPtr b) { return mk(Kind::SEq, {}, {a, b}); }
inline ExprPtr set_var(const std::string& x) { return mk(Kind::SetVar, {}, {}, x); }
inline ExprPtr s_in(ExprPtr t, ExprPtr x) { return mk(Kind::SIn, {}, {t, x}); }
inline ExprPtr forall_num(const std::string& x, ExprPtr phi) {
  return mk(Kind::ForallNum, {x}, {phi});
}
inline ExprPtr forall_set(const std::string& x, ExprPtr phi) {
  return mk(Kind::ForallSet, {x}, {phi});
}
inline ExprPtr set_abs(const std::string& y, ExprPtr phi) {
  return mk(Kind::SetAbs, {y}, {phi});
}

// numerals: n-bar = Succ^n(Zero)
inline ExprPtr numeral(unsigned long long n) {
  ExprPtr e = zero();
  for (unsigned long long i = 0; i < n; ++i) e = succ(e);
  return e;
}

inline std::size_t expr_size(const ExprPtr& e) {
  std::size_t s = 1;
  for (const auto& k : e->kids) s += expr_size(k);
  return s;
}

// ---------------------------------------------------------------------------
// Free variables.  Number/term variables and set variables live in disjoint
// namespaces (only the arithmetic layer has set variables).

struct VarSet {
  std::set<std::string> num;  // term/number variables
  std::set<std::string> set;  // set variables
};

namespace detail {
inline void free_vars_into(const ExprPtr& e, VarSet& out,
                           std::vector<std::pair<std::string, bool>>& bound) {
  if (e->kind == Kind::Var) {
    bool shadowed = false;
    for (auto it = bound.rbegin(); it != bound.rend(); ++it)
      if (!it->second && it->first == e->name) { shadowed = true; break; }
    if (!shadowed) out.num.insert(e->name);
    return;
  }
  if (e->kind == Kind::SetVar) {
    bool shadowed = false;
    for (auto it = bound.rbegin(); it != bound.rend(); ++it)
      if (it->second && it->first == e->name) { shadowed = true; break; }
    if (!shadowed) out.set.insert(e->name);
    return;
  }
  const KindSig& sig = kind_sig(e->kind);
  for (int i = 0; i < sig.arity; ++i) {
    std::size_t mark = bound.size();
    for (int b : sig.scopes[i])
      bound.emplace_back(e->binders[b], sig.set_namespace_binder);
    free_vars_into(e->kids[i], out, bound);
    bound.resize(mark);
  }
}
}  // namespace detail

inline VarSet free_vars(const ExprPtr& e) {
  VarSet out;
  std::vector<std::pair<std::string, bool>> bound;
  detail::free_vars_into(e, out, bound);
  return out;
}

inline bool occurs_free(const ExprPtr& e, const std::string& x,
                        bool set_ns = false) {
  VarSet fv = free_vars(e);
  return set_ns ? fv.set.count(x) > 0 : fv.num.count(x) > 0;
}

// Fresh name: base stem plus an apostrophe-free numeric suffix, avoiding a
// given set of names.
inline std::string fresh_name(std::string base, const std::set<std::string>& avoid) {
  while (!base.empty() && base.back() >= '0' && base.back() <= '9') base.pop_back();
  if (base.empty()) base = "x";
  if (!avoid.count(base)) return base;
  for (unsigned long long i = 1;; ++i) {
    std::string cand = base + std::to_string(i);
    if (!avoid.count(cand)) return cand;
  }
}

// ---------------------------------------------------------------------------
// Capture-avoiding substitution of a term for a variable.

namespace detail {
inline ExprPtr subst_rec(const ExprPtr& e, const std::string& x,
                         const ExprPtr& m, bool set_ns, const VarSet& fvm);
inline ExprPtr rename_binder(const ExprPtr& e, int binder_slot,
                             const std::string& fresh, bool set_ns) {
  // rename binder slot to `fresh` in every child it scopes
  const KindSig& sig = kind_sig(e->kind);
  std::vector<std::string> bs = e->binders;
  std::string old = bs[binder_slot];
  bs[binder_slot] = fresh;
  std::vector<ExprPtr> ks = e->kids;
  ExprPtr repl = set_ns ? set_var(fresh) : var(fresh);
  VarSet fvr = free_vars(repl);
  for (int i = 0; i < sig.arity; ++i) {
    bool scoped = false;
    for (int b : sig.scopes[i]) scoped = scoped || b == binder_slot;
    if (scoped) ks[i] = subst_rec(ks[i], old, repl, sig.set_namespace_binder, fvr);
  }
  return std::make_shared<Expr>(e->kind, std::move(bs), std::move(ks), e->name);
}

inline ExprPtr subst_rec(const ExprPtr& e, const std::string& x,
                         const ExprPtr& m, bool set_ns, const VarSet& fvm) {
  if (e->kind == Kind::Var) {
    if (!set_ns && e->name == x) return m;
    return e;
  }
  if (e->kind == Kind::SetVar) {
    if (set_ns && e->name == x) return m;
    return e;
  }
  const KindSig& sig = kind_sig(e->kind);
  if (sig.arity == 0) return e;

  ExprPtr cur = e;
  // rename binders that would capture free variables of m, or that shadow x
  // in the right namespace (shadowing just blocks descent below)
  for (int b = 0; b < sig.nbinders; ++b) {
    bool same_ns = sig.set_namespace_binder == set_ns;
    const std::string& bn = cur->binders[b];
    bool captures = (sig.set_namespace_binder ? fvm.set : fvm.num).count(bn) > 0;
    bool shadows = same_ns && bn == x;
    if (captures && !shadows) {
      // need the substitution to go below this binder without capture
      bool relevant = false;
      for (int i = 0; i < sig.arity; ++i) {
        bool scoped = false;
        for (int bb : sig.scopes[i]) scoped = scoped || bb == b;
        if (scoped && occurs_free(cur->kids[i], x, set_ns)) relevant = true;
      }
      if (relevant) {
        std::set<std::string> avoid =
            sig.set_namespace_binder ? fvm.set : fvm.num;
        for (const auto& k : cur->kids) {
          VarSet f = free_vars(k);
          const auto& side = sig.set_namespace_binder ? f.set : f.num;
          avoid.insert(side.begin(), side.end());
        }
        avoid.insert(x);
        for (const auto& ob : cur->binders) avoid.insert(ob);
        cur = rename_binder(cur, b, fresh_name(bn, avoid), sig.set_namespace_binder);
      }
    }
  }

  std::vector<ExprPtr> ks = cur->kids;
  for (int i = 0; i < sig.arity; ++i) {
    bool blocked = false;
    for (int b : sig.scopes[i])
      if (sig.set_namespace_binder == set_ns && cur->binders[b] == x) blocked = true;
    if (!blocked) ks[i] = subst_rec(ks[i], x, m, set_ns, fvm);
  }
  return std::make_shared<Expr>(cur->kind, cur->binders, std::move(ks), cur->name);
}
}  // namespace detail

inline ExprPtr subst(const ExprPtr& e, const std::string& x, const ExprPtr& m) {
  if (!occurs_free(e, x, false)) {
    // still must return e unchanged (alpha-equal), which is exact here
    return e;
  }
  return detail::subst_rec(e, x, m, false, free_vars(m));
}

inline ExprPtr subst_set(const ExprPtr& e, const std::string& x, const ExprPtr& m) {
  if (!occurs_free(e, x, true)) return e;
  return detail::subst_rec(e, x, m, true, free_vars(m));
}

// ---------------------------------------------------------------------------
// Alpha equivalence.

namespace detail {
struct AlphaEnv {
  // parallel de-Bruijn-style levels per namespace
  std::vector<std::pair<std::string, std::string>> num, set;
  int lookup(const std::vector<std::pair<std::string, std::string>>& side,
             const std::string& l, const std::string& r) const {
    for (auto it = side.rbegin(); it != side.rend(); ++it) {
      if (it->first == l || it->second == r)
        return it->first == l && it->second == r ? 1 : -1;
    }
    return 0;  // both free
  }
};

inline bool alpha_rec(const ExprPtr& a, const ExprPtr& b, AlphaEnv& env) {
  if (a->kind != b->kind) return false;
  if (a->kind == Kind::Var) {
    int v = env.lookup(env.num, a->name, b->name);
    return v == 1 || (v == 0 && a->name == b->name);
  }
  if (a->kind == Kind::SetVar) {
    int v = env.lookup(env.set, a->name, b->name);
    return v == 1 || (v == 0 && a->name == b->name);
  }
  const KindSig& sig = kind_sig(a->kind);
  for (int i = 0; i < sig.arity; ++i) {
    auto& side = sig.set_namespace_binder ? env.set : env.num;
    std::size_t mark = side.size();
    for (int bslot : sig.scopes[i])
      side.emplace_back(a->binders[bslot], b->binders[bslot]);
    bool ok = alpha_rec(a->kids[i], b->kids[i], env);
    side.resize(mark);
    if (!ok) return false;
  }
  return true;
}
}  // namespace detail

inline bool alpha_eq(const ExprPtr& a, const ExprPtr& b) {
  detail::AlphaEnv env;
  return detail::alpha_rec(a, b, env);
}

// ---------------------------------------------------------------------------
// Syntactic class predicates.

enum class SynClass { Type, Term, Small, Prop, SoaTerm, SoaFormula };

inline bool in_class(const ExprPtr& e, SynClass c);

namespace detail {
inline bool kids_classes(const ExprPtr& e, std::initializer_list<SynClass> cs) {
  int i = 0;
  for (SynClass c : cs)
    if (!in_class(e->kids[i++], c)) return false;
  return true;
}
}  // namespace detail

inline bool in_class(const ExprPtr& e, SynClass c) {
  using D = SynClass;
  switch (c) {
    case D::Type:
      switch (e->kind) {
        case Kind::TyNat: case Kind::TyUniv: return true;
        case Kind::TyProd: case Kind::TyArrow:
          return detail::kids_classes(e, {D::Type, D::Type});
        case Kind::TyOf: return detail::kids_classes(e, {D::Term});
        case Kind::TySet: return detail::kids_classes(e, {D::Type});
        default: return false;
      }
    case D::Term:
      switch (e->kind) {
        case Kind::Var: case Kind::Zero: case Kind::NatName: return true;
        case Kind::Succ: return detail::kids_classes(e, {D::Term});
        case Kind::ENat:
          return detail::kids_classes(e, {D::Type, D::Term, D::Term, D::Term});
        case Kind::RNat:
          return detail::kids_classes(e, {D::Term, D::Term, D::Term});
        case Kind::Pair: case Kind::App:
          return detail::kids_classes(e, {D::Term, D::Term, D::Type, D::Type});
        case Kind::Proj1: case Kind::Proj2:
          return detail::kids_classes(e, {D::Term, D::Type, D::Type});
        case Kind::Lam:
          return detail::kids_classes(e, {D::Type, D::Term, D::Type});
        case Kind::TimesName:
          return detail::kids_classes(e, {D::Term, D::Term});
        case Kind::SetComp:
          return detail::kids_classes(e, {D::Type, D::Small});
        default: return false;
      }
    case D::Small:
      switch (e->kind) {
        case Kind::BotHat: return true;
        case Kind::EqHat:
          return detail::kids_classes(e, {D::Term, D::Term, D::Term});
        case Kind::ImpHat:
          return detail::kids_classes(e, {D::Small, D::Small});
        case Kind::ForallHat:
          return detail::kids_classes(e, {D::Term, D::Small});
        case Kind::InHat:
          return detail::kids_classes(e, {D::Term, D::Term, D::Type});
        default: return false;
      }
    case D::Prop:
      switch (e->kind) {
        case Kind::Bot: return true;
        case Kind::Eq:
          return detail::kids_classes(e, {D::Term, D::Term, D::Term});
        case Kind::Imp:
          return detail::kids_classes(e, {D::Prop, D::Prop});
        case Kind::Forall:
          return detail::kids_classes(e, {D::Type, D::Prop});
        case Kind::Holds:
          return detail::kids_classes(e, {D::Small});
        default: return false;
      }
    case D::SoaTerm:
      switch (e->kind) {
        case Kind::Var: case Kind::Zero: return true;
        case Kind::Succ: return detail::kids_classes(e, {D::SoaTerm});
        case Kind::Plus: case Kind::Times:
          return detail::kids_classes(e, {D::SoaTerm, D::SoaTerm});
        default: return false;
      }
    case D::SoaFormula:
      switch (e->kind) {
        case Kind::Bot: return true;
        case Kind::SEq:
          return detail::kids_classes(e, {D::SoaTerm, D::SoaTerm});
        case Kind::SIn:
          return in_class(e->kids[0], D::SoaTerm) &&
                 e->kids[1]->kind == Kind::SetVar;
        case Kind::Imp:
          return detail::kids_classes(e, {D::SoaFormula, D::SoaFormula});
        case Kind::ForallNum: case Kind::ForallSet:
          return detail::kids_classes(e, {D::SoaFormula});
        default: return false;
      }
  }
  return false;
}

}  // namespace ltt
