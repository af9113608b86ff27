// Defined logical connectives.  Both logics treat negation, conjunction,
// disjunction, biconditional and the existential as abbreviations:
//   not p     = p imp bot
//   p and q   = not (p imp not q)
//   p or q    = not p imp q
//   p iff q   = (p imp q) and (q imp p)
//   exists x  = not forall x not
// The same expansions are used for the hatted (small-proposition) layer and
// for the arithmetic layer, so that translations commute with the
// abbreviations definitionally.
#pragma once

#include <optional>

#include "ltt/expr.hpp"

namespace ltt {

// -- propositions -----------------------------------------------------------

inline ExprPtr p_not(ExprPtr p) { return imp(p, bot()); }
inline ExprPtr p_and(ExprPtr p, ExprPtr q) { return p_not(imp(p, p_not(q))); }
inline ExprPtr p_or(ExprPtr p, ExprPtr q) { return imp(p_not(p), q); }
inline ExprPtr p_iff(ExprPtr p, ExprPtr q) {
  return p_and(imp(p, q), imp(q, p));
}
inline ExprPtr p_exists(const std::string& x, ExprPtr a, ExprPtr p) {
  return p_not(forall(x, a, p_not(p)));
}
// abbreviation M in_A N = V(M inhat_A N)
inline ExprPtr p_in(ExprPtr m, ExprPtr n, ExprPtr a) {
  return holds(in_hat(m, n, a));
}

// -- small propositions -----------------------------------------------------

inline ExprPtr sp_not(ExprPtr p) { return imp_hat(p, bot_hat()); }
inline ExprPtr sp_and(ExprPtr p, ExprPtr q) { return sp_not(imp_hat(p, sp_not(q))); }
inline ExprPtr sp_or(ExprPtr p, ExprPtr q) { return imp_hat(sp_not(p), q); }
inline ExprPtr sp_iff(ExprPtr p, ExprPtr q) {
  return sp_and(imp_hat(p, q), imp_hat(q, p));
}
inline ExprPtr sp_exists(const std::string& x, ExprPtr m, ExprPtr p) {
  return sp_not(forall_hat(x, m, sp_not(p)));
}

// -- arithmetic formulas ----------------------------------------------------

inline ExprPtr a_not(ExprPtr p) { return imp(p, bot()); }
inline ExprPtr a_and(ExprPtr p, ExprPtr q) { return a_not(imp(p, a_not(q))); }
inline ExprPtr a_or(ExprPtr p, ExprPtr q) { return imp(a_not(p), q); }
inline ExprPtr a_iff(ExprPtr p, ExprPtr q) {
  return a_and(imp(p, q), imp(q, p));
}
inline ExprPtr a_exists(const std::string& x, ExprPtr p) {
  return a_not(forall_num(x, a_not(p)));
}
inline ExprPtr a_exists_set(const std::string& x, ExprPtr p) {
  return a_not(forall_set(x, a_not(p)));
}
inline ExprPtr a_neq(ExprPtr s, ExprPtr t) { return a_not(s_eq(s, t)); }

// -- recognizers ------------------------------------------------------------
// The bounded evaluator and the pretty-printer want to see through the
// abbreviations.  These match the exact expansions above.

inline bool is_bot_like(const ExprPtr& e) { return e->kind == Kind::Bot; }

inline std::optional<ExprPtr> match_not(const ExprPtr& e) {
  if (e->kind == Kind::Imp && e->kids[1]->kind == Kind::Bot) return e->kids[0];
  return std::nullopt;
}

inline std::optional<std::pair<ExprPtr, ExprPtr>> match_and(const ExprPtr& e) {
  // not (p imp not q)
  auto inner = match_not(e);
  if (!inner || (*inner)->kind != Kind::Imp) return std::nullopt;
  auto q = match_not((*inner)->kids[1]);
  if (!q) return std::nullopt;
  return std::make_pair((*inner)->kids[0], *q);
}

struct ExistsNum { std::string x; ExprPtr body; };
inline std::optional<ExistsNum> match_exists_num(const ExprPtr& e) {
  // not forall x not body
  auto inner = match_not(e);
  if (!inner || (*inner)->kind != Kind::ForallNum) return std::nullopt;
  auto body = match_not((*inner)->kids[0]);
  if (!body) return std::nullopt;
  return ExistsNum{(*inner)->binders[0], *body};
}

struct ExistsSet { std::string x; ExprPtr body; };
inline std::optional<ExistsSet> match_exists_set(const ExprPtr& e) {
  auto inner = match_not(e);
  if (!inner || (*inner)->kind != Kind::ForallSet) return std::nullopt;
  auto body = match_not((*inner)->kids[0]);
  if (!body) return std::nullopt;
  return ExistsSet{(*inner)->binders[0], *body};
}

}  // namespace ltt
