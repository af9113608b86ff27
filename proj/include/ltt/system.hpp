// System identifiers and syntactic fragments.
//
// The tower, smallest to largest:
//   T2  -- two types N and Set{N}; recursion only into N via R
//   A(n) -- the depth-d <= n fragment of T_omega (A(0) has the T2 types)
//   T_omega -- types closed under x, ->, Set; still universe-free
//   T_omegaU -- adds the universe U itself, but no compound type may
//               contain U
//   B(n) -- the depth-D <= n fragment of the full language
//   LTT0 / LTT0* / LTTW -- the full language (they differ in rules, not
//                          grammar)
// Star systems share their base system's expressions.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "ltt/depth.hpp"
#include "ltt/expr.hpp"

namespace ltt {

enum class SystemKind {
  LTTW, LTT0, LTT0Star, T2, T2Star, TOmega, TOmegaStar, TOmegaU, TOmegaUStar,
  AN, BN,
};

struct SystemId {
  SystemKind kind;
  unsigned n = 0;  // AN / BN parameter

  bool operator==(const SystemId&) const = default;
};

inline SystemId sys_lttw() { return {SystemKind::LTTW}; }
inline SystemId sys_ltt0() { return {SystemKind::LTT0}; }
inline SystemId sys_ltt0_star() { return {SystemKind::LTT0Star}; }
inline SystemId sys_t2() { return {SystemKind::T2}; }
inline SystemId sys_t2_star() { return {SystemKind::T2Star}; }
inline SystemId sys_tomega() { return {SystemKind::TOmega}; }
inline SystemId sys_tomega_star() { return {SystemKind::TOmegaStar}; }
inline SystemId sys_twu() { return {SystemKind::TOmegaU}; }
inline SystemId sys_twu_star() { return {SystemKind::TOmegaUStar}; }
inline SystemId sys_an(unsigned n) { return {SystemKind::AN, n}; }
inline SystemId sys_bn(unsigned n) { return {SystemKind::BN, n}; }

// star systems relax only the rule set; the expressions are the base's
inline bool is_star(SystemId s) {
  return s.kind == SystemKind::LTT0Star || s.kind == SystemKind::T2Star ||
         s.kind == SystemKind::TOmegaStar || s.kind == SystemKind::TOmegaUStar;
}
inline SystemId base_system(SystemId s) {
  switch (s.kind) {
    case SystemKind::LTT0Star: return sys_ltt0();
    case SystemKind::T2Star: return sys_t2();
    case SystemKind::TOmegaStar: return sys_tomega();
    case SystemKind::TOmegaUStar: return sys_twu();
    default: return s;
  }
}

inline std::string system_name(SystemId s) {
  switch (s.kind) {
    case SystemKind::LTTW: return "LTTW";
    case SystemKind::LTT0: return "LTT0";
    case SystemKind::LTT0Star: return "LTT0*";
    case SystemKind::T2: return "T2";
    case SystemKind::T2Star: return "T2*";
    case SystemKind::TOmega: return "Tw";
    case SystemKind::TOmegaStar: return "Tw*";
    case SystemKind::TOmegaU: return "TwU";
    case SystemKind::TOmegaUStar: return "TwU*";
    case SystemKind::AN: return "A" + std::to_string(s.n);
    case SystemKind::BN: return "B" + std::to_string(s.n);
  }
  return "?";
}

inline std::optional<SystemId> parse_system(const std::string& s) {
  if (s == "LTTW") return sys_lttw();
  if (s == "LTT0") return sys_ltt0();
  if (s == "LTT0*") return sys_ltt0_star();
  if (s == "T2") return sys_t2();
  if (s == "T2*") return sys_t2_star();
  if (s == "Tw") return sys_tomega();
  if (s == "Tw*") return sys_tomega_star();
  if (s == "TwU") return sys_twu();
  if (s == "TwU*") return sys_twu_star();
  if (s.size() >= 2 && (s[0] == 'A' || s[0] == 'B')) {
    for (std::size_t i = 1; i < s.size(); ++i)
      if (!isdigit((unsigned char)s[i])) return std::nullopt;
    unsigned n = (unsigned)std::stoul(s.substr(1));
    return s[0] == 'A' ? sys_an(n) : sys_bn(n);
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Fragment membership.

namespace system_detail {

// grammar levels: the universe-free tower shares one recursion with a flag
// for whether compound types are allowed at all (T2 forbids them)
struct UFree {
  bool compound_types;  // T_omega yes, T2 no

  bool type_ok(const ExprPtr& a) const {
    switch (a->kind) {
      case Kind::TyNat: return true;
      case Kind::TySet:
        return compound_types ? type_ok(a->kids[0])
                              : a->kids[0]->kind == Kind::TyNat;
      case Kind::TyProd: case Kind::TyArrow:
        return compound_types && type_ok(a->kids[0]) && type_ok(a->kids[1]);
      default: return false;  // U, T(M)
    }
  }

  bool term_ok(const ExprPtr& m) const {
    switch (m->kind) {
      case Kind::Var: case Kind::Zero: return true;
      case Kind::Succ: return term_ok(m->kids[0]);
      case Kind::RNat:
        return term_ok(m->kids[0]) && term_ok(m->kids[1]) && term_ok(m->kids[2]);
      case Kind::SetComp:
        return type_ok(m->kids[0]) && small_ok(m->kids[1]) &&
               (compound_types || m->kids[0]->kind == Kind::TyNat);
      case Kind::Pair: case Kind::App:
        return compound_types && term_ok(m->kids[0]) && term_ok(m->kids[1]) &&
               type_ok(m->kids[2]) && type_ok(m->kids[3]);
      case Kind::Proj1: case Kind::Proj2:
        return compound_types && term_ok(m->kids[0]) && type_ok(m->kids[1]) &&
               type_ok(m->kids[2]);
      case Kind::Lam:
        return compound_types && type_ok(m->kids[0]) && term_ok(m->kids[1]) &&
               type_ok(m->kids[2]);
      default: return false;  // E_N, names
    }
  }

  // The universe-free systems have no names; the token for N may appear
  // only where the grammar spells it: as the label of an equality and as
  // the domain of a small universal quantifier.
  bool small_ok(const ExprPtr& p) const {
    switch (p->kind) {
      case Kind::BotHat: return true;
      case Kind::EqHat:
        return p->kids[2]->kind == Kind::NatName && term_ok(p->kids[0]) &&
               term_ok(p->kids[1]);
      case Kind::ImpHat: return small_ok(p->kids[0]) && small_ok(p->kids[1]);
      case Kind::ForallHat:
        return p->kids[0]->kind == Kind::NatName && small_ok(p->kids[1]);
      case Kind::InHat:
        return term_ok(p->kids[0]) && term_ok(p->kids[1]) &&
               type_ok(p->kids[2]) &&
               (compound_types || p->kids[2]->kind == Kind::TyNat);
      default: return false;
    }
  }

  bool prop_ok(const ExprPtr& e) const {
    switch (e->kind) {
      case Kind::Bot: return true;
      case Kind::Eq:
        return e->kids[2]->kind == Kind::NatName && term_ok(e->kids[0]) &&
               term_ok(e->kids[1]);
      case Kind::Imp: return prop_ok(e->kids[0]) && prop_ok(e->kids[1]);
      case Kind::Forall: return type_ok(e->kids[0]) && prop_ok(e->kids[1]);
      case Kind::Holds: return small_ok(e->kids[0]);
      default: return false;
    }
  }

  bool any_ok(const ExprPtr& e) const {
    return type_ok(e) || term_ok(e) || small_ok(e) || prop_ok(e);
  }
};

// the bare recursor R belongs to the universe-free tower only; the full
// language expresses recursion through E_N
inline bool contains_rnat(const ExprPtr& e) {
  if (e->kind == Kind::RNat) return true;
  for (const auto& k : e->kids)
    if (contains_rnat(k)) return true;
  return false;
}

// full-language grammar: any of the four syntactic classes, no arithmetic
inline bool full_language(const ExprPtr& e) {
  return (in_class(e, SynClass::Type) || in_class(e, SynClass::Term) ||
          in_class(e, SynClass::Small) || in_class(e, SynClass::Prop)) &&
         !contains_rnat(e);
}

// apply a predicate to every type subexpression (type nodes nested inside
// other type nodes are covered by the predicate's own recursion, but types
// under terms/propositions must each be visited)
template <class F>
inline bool all_type_subexprs(const ExprPtr& e, const F& pred) {
  bool is_type = false;
  switch (e->kind) {
    case Kind::TyNat: case Kind::TyProd: case Kind::TyArrow:
    case Kind::TyUniv: case Kind::TyOf: case Kind::TySet:
      is_type = true;
      break;
    default: break;
  }
  if (is_type && !pred(e)) return false;
  for (const auto& k : e->kids)
    if (!all_type_subexprs(k, pred)) return false;
  return true;
}

}  // namespace system_detail

inline bool in_system_expr(SystemId sys, const ExprPtr& e) {
  using namespace system_detail;
  switch (base_system(sys).kind) {
    case SystemKind::T2: return UFree{false}.any_ok(e);
    case SystemKind::TOmega: return UFree{true}.any_ok(e);
    case SystemKind::AN:
      return UFree{true}.any_ok(e) &&
             all_type_subexprs(e, [&](const ExprPtr& a) {
               auto d = depth_d(a);
               return d && *d <= sys.n;
             });
    case SystemKind::TOmegaU:
      return full_language(e) && all_type_subexprs(e, [](const ExprPtr& a) {
               return a->kind == Kind::TyUniv || !contains_U(a);
             });
    case SystemKind::BN:
      return full_language(e) && all_type_subexprs(e, [&](const ExprPtr& a) {
               auto d = depth_D(a);
               return d && *d <= sys.n;
             });
    case SystemKind::LTT0: case SystemKind::LTTW:
      return full_language(e);
    default: return false;
  }
}

}  // namespace ltt
