// Stratification measures on types and the fragment predicates built from
// them: depth d (the tower over the universe-free systems), depth D (the
// tower over the universe systems), quantifier depth of propositions,
// analyticity, and occurrence of the universe symbol.
#pragma once

#include <optional>

#include "ltt/expr.hpp"
#include "ltt/typenorm.hpp"

namespace ltt {

// d: defined on universe-free types only.
//   d(N) = 0, d(Set{N}) = 0, d(Set{A}) = d(A)+1 otherwise,
//   d(A x B) = d(A -> B) = max + 1.
inline std::optional<unsigned> depth_d(const ExprPtr& a) {
  switch (a->kind) {
    case Kind::TyNat: return 0u;
    case Kind::TyProd: case Kind::TyArrow: {
      auto l = depth_d(a->kids[0]), r = depth_d(a->kids[1]);
      if (!l || !r) return std::nullopt;
      return std::max(*l, *r) + 1;
    }
    case Kind::TySet: {
      if (a->kids[0]->kind == Kind::TyNat) return 0u;
      auto d = depth_d(a->kids[0]);
      if (!d) return std::nullopt;
      return *d + 1;
    }
    default: return std::nullopt;  // U, T(M), or not a type
  }
}

// D: defined on all types of the universe systems.
//   D(N) = 0, D(T(M)) = 0, D(U) = 1,
//   D(A x B) = D(A -> B) = 0 if both are 0, else max + 1,
//   D(Set{A}) = 0 if D(A) = 0, else D(A) + 1.
inline std::optional<unsigned> depth_D(const ExprPtr& a) {
  switch (a->kind) {
    case Kind::TyNat: return 0u;
    case Kind::TyOf: return 0u;
    case Kind::TyUniv: return 1u;
    case Kind::TyProd: case Kind::TyArrow: {
      auto l = depth_D(a->kids[0]), r = depth_D(a->kids[1]);
      if (!l || !r) return std::nullopt;
      if (*l == 0 && *r == 0) return 0u;
      return std::max(*l, *r) + 1;
    }
    case Kind::TySet: {
      auto d = depth_D(a->kids[0]);
      if (!d) return std::nullopt;
      return *d == 0 ? 0u : *d + 1;
    }
    default: return std::nullopt;
  }
}

enum class DepthKind { D_small, D_universe };  // d versus D

inline std::optional<unsigned> type_depth(DepthKind which, const ExprPtr& a) {
  return which == DepthKind::D_small ? depth_d(a) : depth_D(a);
}

// Depth of a proposition: the largest depth of a quantifier domain occurring
// in it; 0 when quantifier-free.
inline std::optional<unsigned> prop_depth(DepthKind which, const ExprPtr& e) {
  unsigned best = 0;
  if (e->kind == Kind::Forall) {
    auto d = type_depth(which, e->kids[0]);
    if (!d) return std::nullopt;
    best = *d;
  }
  for (const auto& k : e->kids) {
    // only recurse through proposition/small-proposition structure; terms and
    // types below quantifier-free positions carry no quantifier domains
    switch (k->kind) {
      case Kind::Imp: case Kind::Forall: case Kind::Holds:
      case Kind::ImpHat: case Kind::ForallHat: {
        auto d = prop_depth(which, k);
        if (!d) return std::nullopt;
        best = std::max(best, *d);
        break;
      }
      default: break;
    }
  }
  return best;
}

// Analytic propositions: every quantifier domain has the form T(M) or is
// Set{N}.  Having the form T(M) is read up to the universe's computation
// equations (N itself has the form T of the token for N), so the check
// accepts any name-formed domain.
inline bool is_analytic(const ExprPtr& e) {
  if (e->kind == Kind::Forall) {
    const ExprPtr& dom = e->kids[0];
    bool ok = name_formed(dom) ||
              (dom->kind == Kind::TySet && dom->kids[0]->kind == Kind::TyNat);
    if (!ok) return false;
  }
  for (const auto& k : e->kids) {
    switch (k->kind) {
      case Kind::Imp: case Kind::Forall: case Kind::Holds:
        if (!is_analytic(k)) return false;
        break;
      default: break;
    }
  }
  return true;
}

// Occurrence of the universe symbol U as a token anywhere in an expression.
inline bool contains_U(const ExprPtr& e) {
  if (e->kind == Kind::TyUniv) return true;
  for (const auto& k : e->kids)
    if (contains_U(k)) return true;
  return false;
}

// The restriction form used by the restricted systems: some quantifier
// domain in the proposition contains U.  (Type annotations buried in terms
// are not quantifier domains and do not count.)
inline bool quantifier_domain_contains_U(const ExprPtr& e) {
  if (e->kind == Kind::Forall && contains_U(e->kids[0])) return true;
  for (const auto& k : e->kids) {
    switch (k->kind) {
      case Kind::Imp: case Kind::Forall: case Kind::Holds:
        if (quantifier_domain_contains_U(k)) return true;
        break;
      default: break;
    }
  }
  return false;
}

}  // namespace ltt
