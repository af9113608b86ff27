// Normal forms for types under the two computation equations of the
// universe:
//
//   T(N-hat)   = N
//   T(M x-hat N) = T(M) x T(N)
//
// The kernel identifies expressions up to these equations wherever it
// compares types (directly, in dependent positions, and inside annotations
// and quantifier domains).  In the universe-free systems no T(-) form exists,
// so there the identification is the literal one.
#pragma once

#include <functional>

#include "ltt/expr.hpp"

namespace ltt {

inline ExprPtr norm_types(const ExprPtr& e);

inline ExprPtr normalize_type(const ExprPtr& a) {
  switch (a->kind) {
    case Kind::TyProd:
      return ty_prod(normalize_type(a->kids[0]), normalize_type(a->kids[1]));
    case Kind::TyArrow:
      return ty_arrow(normalize_type(a->kids[0]), normalize_type(a->kids[1]));
    case Kind::TySet:
      return ty_set(normalize_type(a->kids[0]));
    case Kind::TyOf: {
      const ExprPtr& m = a->kids[0];
      if (m->kind == Kind::NatName) return ty_nat();
      if (m->kind == Kind::TimesName)
        return ty_prod(normalize_type(ty_of(m->kids[0])),
                       normalize_type(ty_of(m->kids[1])));
      return ty_of(norm_types(m));
    }
    default:
      return a;  // N, U
  }
}

// normalize every type subexpression, wherever it sits
inline ExprPtr norm_types(const ExprPtr& e) {
  switch (e->kind) {
    case Kind::TyNat: case Kind::TyProd: case Kind::TyArrow:
    case Kind::TyUniv: case Kind::TyOf: case Kind::TySet:
      return normalize_type(e);
    default: {
      std::vector<ExprPtr> ks;
      ks.reserve(e->kids.size());
      bool changed = false;
      for (const auto& k : e->kids) {
        ks.push_back(norm_types(k));
        changed = changed || ks.back() != k;
      }
      if (!changed) return e;
      return mk(e->kind, e->binders, std::move(ks), e->name);
    }
  }
}

// equality modulo the type computation equations (and alpha)
inline bool eq_mod_ty(const ExprPtr& a, const ExprPtr& b) {
  return alpha_eq(norm_types(a), norm_types(b));
}

// A type judgementally equal to a name form T(M): its normal form is built
// from N, products and irreducible T(-) only (the universe's names are
// generated by the token for N and the product name former).
inline bool name_formed(const ExprPtr& a) {
  std::function<bool(const ExprPtr&)> go = [&](const ExprPtr& t) {
    switch (t->kind) {
      case Kind::TyNat: case Kind::TyOf: return true;
      case Kind::TyProd: return go(t->kids[0]) && go(t->kids[1]);
      default: return false;
    }
  };
  return go(normalize_type(a));
}

}  // namespace ltt
