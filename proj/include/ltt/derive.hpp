// Convenience builders for derivation trees.
//
// Each builder assembles one rule node, computing the conclusion the checker
// will reconstruct from the premises; nothing here is trusted — callers run
// the result through check_derivation (the corpus generator and the tests
// both do), so a bug in a builder surfaces as a kernel rejection, never as a
// wrongly accepted proof.
//
// The builders cover the natural-deduction moves (assumption, implication,
// quantification, absurdity, induction), the equality-of-terms moves
// (reflexivity, symmetry, recursor computation, conversion of a judgemental
// equation into an entailed propositional one), and the distribution of the
// reflection operator over the small connectives, which relates the
// reflected form of a translated formula to its propositional form.
#pragma once

#include <string>
#include <vector>

#include "ltt/connectives.hpp"
#include "ltt/expr.hpp"
#include "ltt/judgement.hpp"
#include "ltt/rules.hpp"
#include "ltt/system.hpp"
#include "ltt/typing.hpp"

namespace ltt {

namespace derive_detail {

inline Context ext(const Context& g, const std::string& x, const ExprPtr& a) {
  Context g2 = g;
  g2.push_back({x, a});
  return g2;
}

}  // namespace derive_detail

// Shared state for a proof under construction: the system, the ambient
// context, and memoised structural premises.
struct Prover {
  SystemId sys;

  // the universe-free tower has its own recursor and equality rule ids
  bool ufree() const { return rules_detail::is_ufree(sys); }
  std::string id(const char* u, const char* t2) const {
    return ufree() ? t2 : u;
  }

  DerivPtr valid(const Context& g) { return derive_ctx_valid(sys, g); }
  DerivPtr has(const Context& g, const ExprPtr& m) {
    return synth_type_deriv(sys, g, m).deriv;
  }
  DerivPtr is_prop(const Context& g, const ExprPtr& phi) {
    return derive_is_prop(sys, g, phi);
  }
  DerivPtr is_small(const Context& g, const ExprPtr& p) {
    return derive_is_small(sys, g, p);
  }

  std::vector<DerivPtr> prop_premises(const Context& g,
                                      const std::vector<ExprPtr>& ants) {
    std::vector<DerivPtr> ps;
    for (const ExprPtr& a : ants) ps.push_back(is_prop(g, a));
    return ps;
  }

  // Γ ⊢ Φ ⇒ φ where φ is among Φ
  DerivPtr assume(const Context& g, const std::vector<ExprPtr>& ants,
                  const ExprPtr& phi) {
    return mk_deriv("str/assume", prop_premises(g, ants),
                    {g, j_entails(ants, phi)});
  }

  // from Γ ⊢ Φ,φ ⇒ ψ conclude Γ ⊢ Φ ⇒ φ ⊃ ψ
  DerivPtr imp_intro(const DerivPtr& d) {
    const Judgement& j = d->conclusion;
    std::vector<ExprPtr> rest(j.body.ants.begin(), j.body.ants.end() - 1);
    return mk_deriv("log/imp-intro", {d},
                    {j.ctx, j_entails(rest,
                                      imp(j.body.ants.back(), j.body.exprs[0]))});
  }

  // from Γ ⊢ Φ ⇒ φ ⊃ ψ and Γ ⊢ Φ ⇒ φ conclude Γ ⊢ Φ ⇒ ψ
  DerivPtr imp_elim(const DerivPtr& major, const DerivPtr& minor) {
    const Judgement& j = major->conclusion;
    return mk_deriv("log/imp-elim", {major, minor},
                    {j.ctx, j_entails(j.body.ants, j.body.exprs[0]->kids[1])});
  }

  // from Γ, x:A ⊢ Φ ⇒ φ (x not free in Φ) conclude Γ ⊢ Φ ⇒ ∀x:A.φ
  DerivPtr forall_intro(const DerivPtr& d) {
    const Judgement& j = d->conclusion;
    Context g(j.ctx.begin(), j.ctx.end() - 1);
    const CtxEntry& xe = j.ctx.back();
    std::vector<DerivPtr> ps = prop_premises(g, j.body.ants);
    ps.push_back(d);
    return mk_deriv("log/forall-intro", std::move(ps),
                    {g, j_entails(j.body.ants,
                                  forall(xe.name, xe.type, j.body.exprs[0]))});
  }

  // from Γ ⊢ Φ ⇒ ∀x:A.φ and a term M:A conclude Γ ⊢ Φ ⇒ [M/x]φ
  DerivPtr forall_elim(const DerivPtr& d, const ExprPtr& m) {
    const Judgement& j = d->conclusion;
    const ExprPtr& q = j.body.exprs[0];
    DerivPtr dm = has(j.ctx, m);
    return mk_deriv("log/forall-elim", {d, dm},
                    {j.ctx, j_entails(j.body.ants,
                                      subst(q->kids[1], q->binders[0], m))});
  }

  // from Γ ⊢ Φ ⇒ ⊥ conclude Γ ⊢ Φ ⇒ φ
  DerivPtr exfalso(const DerivPtr& d, const ExprPtr& phi) {
    const Judgement& j = d->conclusion;
    return mk_deriv("log/exfalso", {is_prop(j.ctx, phi), d},
                    {j.ctx, j_entails(j.body.ants, phi)});
  }

  // from Γ ⊢ Φ ⇒ ¬¬φ conclude Γ ⊢ Φ ⇒ φ
  DerivPtr dn(const DerivPtr& d) {
    const Judgement& j = d->conclusion;
    ExprPtr phi = *match_not(*match_not(j.body.exprs[0]));
    return mk_deriv("log/dn", {d}, {j.ctx, j_entails(j.body.ants, phi)});
  }

  // from Γ ⊢ Φ ⇒ φ and Γ ⊢ φ = ψ conclude Γ ⊢ Φ ⇒ ψ
  DerivPtr rewrite(const DerivPtr& ent, const DerivPtr& eq) {
    const Judgement& j = ent->conclusion;
    return mk_deriv("str/prop-rewrite", {ent, eq},
                    {j.ctx, j_entails(j.body.ants,
                                      eq->conclusion.body.exprs[1])});
  }

  DerivPtr prop_sym(const DerivPtr& d) {
    const Judgement& j = d->conclusion;
    return mk_deriv("str/prop-sym", {d},
                    {j.ctx, j_prop_eq(j.body.exprs[1], j.body.exprs[0])});
  }
  DerivPtr prop_trans(const DerivPtr& a, const DerivPtr& b) {
    const Judgement& j = a->conclusion;
    return mk_deriv("str/prop-trans", {a, b},
                    {j.ctx, j_prop_eq(j.body.exprs[0],
                                      b->conclusion.body.exprs[1])});
  }
  DerivPtr prop_refl(const Context& g, const ExprPtr& phi) {
    DerivPtr d = is_prop(g, phi);
    return mk_deriv("str/prop-refl", {d}, {g, j_prop_eq(phi, phi)});
  }

  DerivPtr term_refl(const Context& g, const ExprPtr& m) {
    DerivPtr d = has(g, m);
    ExprPtr a = d->conclusion.body.exprs[1];
    return mk_deriv("str/term-refl", {d}, {g, j_term_eq(m, m, a)});
  }
  DerivPtr term_sym(const DerivPtr& d) {
    const Judgement& j = d->conclusion;
    return mk_deriv("str/term-sym", {d},
                    {j.ctx, j_term_eq(j.body.exprs[1], j.body.exprs[0],
                                      j.body.exprs[2])});
  }
  DerivPtr term_trans(const DerivPtr& a, const DerivPtr& b) {
    const Judgement& j = a->conclusion;
    return mk_deriv("str/term-trans", {a, b},
                    {j.ctx, j_term_eq(j.body.exprs[0],
                                      b->conclusion.body.exprs[1],
                                      j.body.exprs[2])});
  }

  // the zero computation equation of the eliminator, as a TermEq derivation:
  // E([x]C, L, [u,v]M, 0) = L; accepts the bare recursor in the
  // universe-free systems
  DerivPtr en_zero(const Context& g, const ExprPtr& node) {
    if (node->kind == Kind::RNat) {
      ExprPtr L = node->kids[0], M = node->kids[1];
      const std::string& u = node->binders[0];
      const std::string& v = node->binders[1];
      Context g2 = derive_detail::ext(g, u, ty_nat());
      g2.push_back({v, ty_nat()});
      return mk_deriv("t2/R-0", {has(g, L), has(g2, M)},
                      {g, j_term_eq(node, L, ty_nat())});
    }
    const std::string& x = node->binders[0];
    ExprPtr C = node->kids[0], L = node->kids[1], M = node->kids[2];
    const std::string& u = node->binders[1];
    const std::string& v = node->binders[2];
    DerivPtr dc = derive_is_type(sys, derive_detail::ext(g, x, ty_nat()), C);
    DerivPtr dl = has(g, L);
    Context g2 = derive_detail::ext(g, u, ty_nat());
    g2.push_back({v, subst(C, x, var(u))});
    DerivPtr dm = has(g2, M);
    ExprPtr lhs = enat(x, C, L, u, v, M, zero());
    return mk_deriv("nat/EN-0", {dc, dl, dm},
                    {g, j_term_eq(lhs, L, subst(C, x, zero()))});
  }

  // the successor computation equation: E(..., s N) = [N/u, E(...,N)/v]M
  DerivPtr en_succ(const Context& g, const ExprPtr& node_at_succ) {
    const ExprPtr& node = node_at_succ;
    if (node->kind == Kind::RNat) {
      ExprPtr L = node->kids[0], M = node->kids[1];
      const std::string& u = node->binders[0];
      const std::string& v = node->binders[1];
      ExprPtr sN = node->kids[2];
      ExprPtr N = sN->kids[0];  // target must be a successor
      Context g2 = derive_detail::ext(g, u, ty_nat());
      g2.push_back({v, ty_nat()});
      ExprPtr rec = rnat(L, u, v, M, N);
      ExprPtr rhs = rules_detail::subst2(M, u, N, v, rec);
      return mk_deriv("t2/R-s", {has(g, L), has(g2, M), has(g, N)},
                      {g, j_term_eq(node, rhs, ty_nat())});
    }
    const std::string& x = node->binders[0];
    ExprPtr C = node->kids[0], L = node->kids[1], M = node->kids[2];
    const std::string& u = node->binders[1];
    const std::string& v = node->binders[2];
    ExprPtr sN = node->kids[3];
    ExprPtr N = sN->kids[0];  // target must be a successor
    DerivPtr dc = derive_is_type(sys, derive_detail::ext(g, x, ty_nat()), C);
    DerivPtr dl = has(g, L);
    Context g2 = derive_detail::ext(g, u, ty_nat());
    g2.push_back({v, subst(C, x, var(u))});
    DerivPtr dm = has(g2, M);
    DerivPtr dn_ = has(g, N);
    ExprPtr rec = enat(x, C, L, u, v, M, N);
    ExprPtr rhs = rules_detail::subst2(M, u, N, v, rec);
    return mk_deriv("nat/EN-s", {dc, dl, dm, dn_},
                    {g, j_term_eq(node, rhs, subst(C, x, sN))});
  }

  // the reflexive name equation for the token of N, at the universe
  DerivPtr nhat_refl(const Context& g) {
    DerivPtr d = has(g, nat_name());
    return mk_deriv("str/term-refl", {d},
                    {g, j_term_eq(nat_name(), nat_name(), ty_univ())});
  }

  // from a TermEq M = N (at the type named by the token for N) build the
  // PropEq (M =_N̂ M) = (M =_N̂ N); combined with reflexivity and rewriting
  // this converts judgemental equations into entailed propositional ones
  DerivPtr eq_cong(const Context& g, const DerivPtr& m_eq_n) {
    ExprPtr M = m_eq_n->conclusion.body.exprs[0];
    DerivPtr m_refl = mk_deriv(
        "str/term-refl", {has(g, M)},
        {g, j_term_eq(M, M, m_eq_n->conclusion.body.exprs[2])});
    ExprPtr N = m_eq_n->conclusion.body.exprs[1];
    std::vector<DerivPtr> ps;
    if (!ufree()) ps.push_back(nhat_refl(g));
    ps.push_back(m_refl);
    ps.push_back(m_eq_n);
    return mk_deriv(id("eq/form-eq", "t2/eq-form-eq"), std::move(ps),
                    {g, j_prop_eq(eq(M, M, nat_name()),
                                  eq(M, N, nat_name()))});
  }

  // the two-sided congruence: from M1 = N1 and M2 = N2 (both at the type
  // named by the token for N) build (M1 =_N̂ M2) = (N1 =_N̂ N2)
  DerivPtr eq_cong2(const Context& g, const DerivPtr& d1, const DerivPtr& d2) {
    ExprPtr M1 = d1->conclusion.body.exprs[0];
    ExprPtr N1 = d1->conclusion.body.exprs[1];
    ExprPtr M2 = d2->conclusion.body.exprs[0];
    ExprPtr N2 = d2->conclusion.body.exprs[1];
    std::vector<DerivPtr> ps;
    if (!ufree()) ps.push_back(nhat_refl(g));
    ps.push_back(d1);
    ps.push_back(d2);
    return mk_deriv(id("eq/form-eq", "t2/eq-form-eq"), std::move(ps),
                    {g, j_prop_eq(eq(M1, M2, nat_name()),
                                  eq(N1, N2, nat_name()))});
  }

  // Γ ⊢ Φ ⇒ M =_N̂ M
  DerivPtr eq_refl(const Context& g, const std::vector<ExprPtr>& ants,
                   const ExprPtr& m) {
    std::vector<DerivPtr> ps = prop_premises(g, ants);
    ps.push_back(has(g, m));
    return mk_deriv(id("eq/refl", "t2/eq-refl"), std::move(ps),
                    {g, j_entails(ants, eq(m, m, nat_name()))});
  }

  // Γ ⊢ Φ ⇒ M =_N̂ N from the judgemental equation M = N
  DerivPtr eq_of_termeq(const Context& g, const std::vector<ExprPtr>& ants,
                        const DerivPtr& m_eq_n) {
    ExprPtr M = m_eq_n->conclusion.body.exprs[0];
    return rewrite(eq_refl(g, ants, M), eq_cong(g, m_eq_n));
  }

  // from Γ ⊢ Φ ⇒ M =_L N and Γ ⊢ Φ ⇒ [M/z]φ conclude Γ ⊢ Φ ⇒ [N/z]φ
  DerivPtr eq_subst(const DerivPtr& eq_ent, const std::string& z,
                    const ExprPtr& phi, const DerivPtr& inst) {
    const Judgement& j = eq_ent->conclusion;
    const ExprPtr& eqn = j.body.exprs[0];
    Context gz = derive_detail::ext(
        j.ctx, z, eqn->kids[2]->kind == Kind::NatName
                      ? ty_nat()
                      : ty_of(eqn->kids[2]));
    DerivPtr dp = is_prop(gz, phi);
    return mk_deriv(id("eq/subst", "t2/subst"), {dp, eq_ent, inst},
                    {j.ctx, j_entails(j.body.ants,
                                      subst(phi, z, eqn->kids[1]))});
  }

  // symmetry of the propositional equation, via eq_subst with φ(z) ≡ z = M
  DerivPtr eq_sym(const DerivPtr& eq_ent) {
    const Judgement& j = eq_ent->conclusion;
    const ExprPtr& eqn = j.body.exprs[0];
    ExprPtr M = eqn->kids[0];
    std::set<std::string> avoid = free_vars(M).num;
    for (const auto& e : j.ctx) avoid.insert(e.name);
    std::string z = fresh_name("z", avoid);
    ExprPtr phi = eq(var(z), M, eqn->kids[2]);
    DerivPtr inst = eq_refl(j.ctx, j.body.ants, M);
    return eq_subst(eq_ent, z, phi, inst);
  }

  // Γ ⊢ Φ ⇒ ¬(0 =_N̂ s M)
  DerivPtr p3(const Context& g, const std::vector<ExprPtr>& ants,
              const ExprPtr& m) {
    std::vector<DerivPtr> ps = prop_premises(g, ants);
    ps.push_back(has(g, m));
    return mk_deriv("ltt0/P3", std::move(ps),
                    {g, j_entails(ants, p_not(eq(zero(), succ(m),
                                                nat_name())))});
  }

  // induction: from φ over x:N, a target N, the base and the step (the step
  // derived over Γ, x':N with the hypothesis as last antecedent)
  DerivPtr ind(const Context& g, const std::string& x, const ExprPtr& phi,
               const ExprPtr& target, const DerivPtr& base,
               const DerivPtr& step) {
    DerivPtr dp = is_prop(derive_detail::ext(g, x, ty_nat()), phi);
    DerivPtr dn_ = has(g, target);
    return mk_deriv("nat/IndN", {dp, dn_, base, step},
                    {g, j_entails(base->conclusion.body.ants,
                                  subst(phi, x, target))});
  }

  // -- distribution of the reflection operator --------------------------------

  // PropEq  V(P) = φ  for the reflected small form of an arithmetic
  // proposition versus its propositional form, by structural recursion over
  // the distribution equations.
  DerivPtr v_dist(const Context& g, const ExprPtr& small_p,
                  const ExprPtr& prop_phi) {
    switch (small_p->kind) {
      case Kind::BotHat:
        return mk_deriv("pu/V-bot", {valid(g)},
                        {g, j_prop_eq(holds(bot_hat()), bot())});
      case Kind::EqHat: {
        std::vector<DerivPtr> ps;
        if (!ufree()) ps.push_back(has(g, small_p->kids[2]));
        ps.push_back(has(g, small_p->kids[0]));
        ps.push_back(has(g, small_p->kids[1]));
        return mk_deriv(id("eq/V-eqhat", "t2/V-eqhat"), std::move(ps),
                        {g, j_prop_eq(holds(small_p),
                                      eq(small_p->kids[0], small_p->kids[1],
                                         small_p->kids[2]))});
      }
      case Kind::ImpHat: {
        ExprPtr P = small_p->kids[0], Q = small_p->kids[1];
        DerivPtr da = is_small(g, P);
        DerivPtr db = is_small(g, Q);
        DerivPtr top = mk_deriv(
            "pu/V-imp", {da, db},
            {g, j_prop_eq(holds(small_p), imp(holds(P), holds(Q)))});
        // recurse into the two sides and stitch with congruence
        DerivPtr ra = v_dist(g, P, prop_phi->kids[0]);
        DerivPtr rb = v_dist(g, Q, prop_phi->kids[1]);
        DerivPtr cong = mk_deriv(
            "log/imp-form-eq", {ra, rb},
            {g, j_prop_eq(imp(holds(P), holds(Q)),
                          imp(prop_phi->kids[0], prop_phi->kids[1]))});
        return prop_trans(top, cong);
      }
      case Kind::ForallHat: {
        ExprPtr M = small_p->kids[0];
        const std::string& x = small_p->binders[0];
        ExprPtr P = small_p->kids[1];
        ExprPtr dom_ty = normalize_type(ty_of(M));
        Context gx = derive_detail::ext(g, x, dom_ty);
        DerivPtr dp = is_small(gx, P);
        DerivPtr top = mk_deriv(
            id("pu/V-forall", "t2/V-forall"), {dp},
            {g, j_prop_eq(holds(small_p),
                          forall(x, dom_ty, holds(P)))});
        // prop_phi is ∀x:A.ψ with A equal to T(M) modulo the computation
        // equations; recurse under the binder
        ExprPtr body =
            subst(prop_phi->kids[1], prop_phi->binders[0], var(x));
        DerivPtr r = v_dist(gx, P, body);
        DerivPtr dom = derive_is_type(sys, g, dom_ty);
        DerivPtr dom_eq = mk_deriv(
            "str/type-refl", {dom}, {g, j_type_eq(dom_ty, dom_ty)});
        DerivPtr cong = mk_deriv(
            "log/forall-form-eq", {dom_eq, r},
            {g, j_prop_eq(forall(x, dom_ty, holds(P)),
                          forall(x, dom_ty, body))});
        return prop_trans(top, cong);
      }
      default:
        throw IllTyped({}, "v_dist: not a reflected arithmetic form");
    }
  }
};

}  // namespace ltt
