// Type synthesis, judgemental-equality checking, and the embedding of the
// base tower system into the full calculus.
//
// The annotated syntax makes typing syntax-directed, so synthesis is a single
// recursion that returns both the type and a derivation tree; the public
// wrappers re-run the kernel checker on the produced derivation, so a
// successful synthesis is always backed by a kernel-accepted proof object.
//
// check_equal decides judgemental equality best-effort: both sides are
// reduced under the calculus's computation equations (beta, projections,
// recursor unfolding, set-comprehension membership, the reflection
// equations) within a step budget and compared up to alpha and the type
// computation equations.
//
// inject_T2_to_LTT0 realizes the identification of the base system inside
// the full calculus: the bare recursor becomes the eliminator at the motive
// T(N-hat), and the rules specialized to N become their general forms with
// synthesized name premises.
#pragma once

#include <stdexcept>

#include "ltt/eval.hpp"
#include "ltt/rules.hpp"

namespace ltt {

struct IllTyped : std::runtime_error {
  std::vector<int> path;  // subterm indices from the synthesis root
  IllTyped(std::vector<int> p, const std::string& msg)
      : std::runtime_error(msg), path(std::move(p)) {}
};

class TypeSynth {
 public:
  explicit TypeSynth(SystemId sys) : sys_(sys) {}

  DerivPtr d_valid(const Context& g) {
    if (g.empty())
      return mk_deriv("str/valid-empty", {}, Judgement{{}, j_valid()});
    Context prefix(g.begin(), g.end() - 1);
    DerivPtr dt = d_is_type(prefix, g.back().type);
    return mk_deriv("str/ctx-ext", {dt}, Judgement{g, j_valid()});
  }

  DerivPtr d_is_type(const Context& g, const ExprPtr& a) {
    switch (a->kind) {
      case Kind::TyNat:
        return mk_deriv("nat/form", {d_valid(g)},
                        Judgement{g, j_is_type(a)});
      case Kind::TyProd:
        return mk_deriv("pair/form",
                        {d_is_type(g, a->kids[0]), d_is_type(g, a->kids[1])},
                        Judgement{g, j_is_type(a)});
      case Kind::TyArrow:
        return mk_deriv("fn/form",
                        {d_is_type(g, a->kids[0]), d_is_type(g, a->kids[1])},
                        Judgement{g, j_is_type(a)});
      case Kind::TySet:
        return mk_deriv("set/form", {d_is_type(g, a->kids[0])},
                        Judgement{g, j_is_type(a)});
      case Kind::TyUniv:
        return mk_deriv("univ/form", {d_valid(g)},
                        Judgement{g, j_is_type(a)});
      case Kind::TyOf:
        return mk_deriv("univ/T-form",
                        {conv(g, d_has_type(g, a->kids[0]), ty_univ())},
                        Judgement{g, j_is_type(a)});
      default:
        throw IllTyped(path_, "not a type: " + print_expr(a));
    }
  }

  // derivation of g |- a = nf(a) for the type computation equations
  DerivPtr d_norm(const Context& g, const ExprPtr& a) {
    ExprPtr n = normalize_type(a);
    if (a->kind == Kind::TyOf) {
      const ExprPtr& m = a->kids[0];
      if (m->kind == Kind::NatName)
        return mk_deriv("univ/T-nhat", {d_valid(g)},
                        Judgement{g, j_type_eq(a, ty_nat())});
      if (m->kind == Kind::TimesName) {
        ExprPtr tl = ty_of(m->kids[0]), tr = ty_of(m->kids[1]);
        DerivPtr split = mk_deriv(
            "univ/T-timeshat",
            {conv(g, d_has_type(g, m->kids[0]), ty_univ()),
             conv(g, d_has_type(g, m->kids[1]), ty_univ())},
            Judgement{g, j_type_eq(a, ty_prod(tl, tr))});
        DerivPtr cong = mk_deriv(
            "pair/form-eq", {d_norm(g, tl), d_norm(g, tr)},
            Judgement{g, j_type_eq(ty_prod(tl, tr), n)});
        return mk_deriv("str/type-trans", {split, cong},
                        Judgement{g, j_type_eq(a, n)});
      }
      return refl_ty(g, a);
    }
    if ((a->kind == Kind::TyProd || a->kind == Kind::TyArrow) &&
        !alpha_eq(a, n)) {
      const char* rule = a->kind == Kind::TyProd ? "pair/form-eq" : "fn/form-eq";
      return mk_deriv(rule, {d_norm(g, a->kids[0]), d_norm(g, a->kids[1])},
                      Judgement{g, j_type_eq(a, n)});
    }
    if (a->kind == Kind::TySet && !alpha_eq(a, n))
      return mk_deriv("set/form-eq", {d_norm(g, a->kids[0])},
                      Judgement{g, j_type_eq(a, n)});
    return refl_ty(g, a);
  }

  // derivation of g |- a = b, for types equal modulo the computation
  // equations
  DerivPtr d_type_eq(const Context& g, const ExprPtr& a, const ExprPtr& b) {
    if (alpha_eq(a, b)) return refl_ty(g, a);
    if (!eq_mod_ty(a, b))
      throw IllTyped(path_, "types are not equal: " + print_expr(a) +
                                " versus " + print_expr(b));
    DerivPtr da = d_norm(g, a);
    DerivPtr db = d_norm(g, b);
    DerivPtr dbs = mk_deriv(
        "str/type-sym", {db},
        Judgement{g, j_type_eq(db->conclusion.body.exprs[1], b)});
    return mk_deriv("str/type-trans", {da, dbs},
                    Judgement{g, j_type_eq(a, b)});
  }

  // wrap a typing derivation in a conversion to the requested type
  DerivPtr conv(const Context& g, const DerivPtr& dm, const ExprPtr& want) {
    const ExprPtr& have = dm->conclusion.body.exprs[1];
    if (alpha_eq(have, want)) return dm;
    DerivPtr de = d_type_eq(g, have, want);
    return mk_deriv("str/conv", {dm, de},
                    Judgement{g, j_has_type(dm->conclusion.body.exprs[0],
                                            want)});
  }

  DerivPtr d_has_type(const Context& g, const ExprPtr& m) {
    switch (m->kind) {
      case Kind::Var: {
        const ExprPtr* a = ctx_lookup(g, m->name);
        if (!a) throw IllTyped(path_, "unbound variable " + m->name);
        return mk_deriv("str/var", {d_valid(g)},
                        Judgement{g, j_has_type(m, *a)});
      }
      case Kind::Zero:
        return mk_deriv("nat/zero", {d_valid(g)},
                        Judgement{g, j_has_type(m, ty_nat())});
      case Kind::Succ: {
        DerivPtr dk = at(0, [&] { return conv(g, d_has_type(g, m->kids[0]),
                                              ty_nat()); });
        return mk_deriv("nat/succ", {dk},
                        Judgement{g, j_has_type(m, ty_nat())});
      }
      case Kind::ENat: {
        const std::string& x = m->binders[0];
        ExprPtr C = m->kids[0], L = m->kids[1], M = m->kids[2], N = m->kids[3];
        const std::string& sx = m->binders[1];
        const std::string& sy = m->binders[2];
        require_fresh(g, {x});
        require_fresh(g, {sx, sy});
        Context gx = g;
        gx.push_back({x, ty_nat()});
        DerivPtr dc = at(0, [&] { return d_is_type(gx, C); });
        DerivPtr dl =
            at(1, [&] { return conv(g, d_has_type(g, L), subst(C, x, zero())); });
        Context gs = g;
        gs.push_back({sx, ty_nat()});
        gs.push_back({sy, subst(C, x, var(sx))});
        DerivPtr dm = at(2, [&] {
          return conv(gs, d_has_type(gs, M), subst(C, x, succ(var(sx))));
        });
        DerivPtr dn = at(3, [&] { return conv(g, d_has_type(g, N), ty_nat()); });
        return mk_deriv("nat/EN", {dc, dl, dm, dn},
                        Judgement{g, j_has_type(m, subst(C, x, N))});
      }
      case Kind::RNat: {
        ExprPtr L = m->kids[0], M = m->kids[1], N = m->kids[2];
        const std::string& sx = m->binders[0];
        const std::string& sy = m->binders[1];
        require_fresh(g, {sx, sy});
        DerivPtr dl = at(0, [&] { return conv(g, d_has_type(g, L), ty_nat()); });
        Context gs = g;
        gs.push_back({sx, ty_nat()});
        gs.push_back({sy, ty_nat()});
        DerivPtr dm = at(1, [&] { return conv(gs, d_has_type(gs, M), ty_nat()); });
        DerivPtr dn = at(2, [&] { return conv(g, d_has_type(g, N), ty_nat()); });
        return mk_deriv("t2/R", {dl, dm, dn},
                        Judgement{g, j_has_type(m, ty_nat())});
      }
      case Kind::Pair: {
        ExprPtr A = m->kids[2], B = m->kids[3];
        DerivPtr da = at(0, [&] { return conv(g, d_has_type(g, m->kids[0]), A); });
        DerivPtr db = at(1, [&] { return conv(g, d_has_type(g, m->kids[1]), B); });
        return mk_deriv("pair/intro", {da, db},
                        Judgement{g, j_has_type(m, ty_prod(A, B))});
      }
      case Kind::Proj1: case Kind::Proj2: {
        ExprPtr A = m->kids[1], B = m->kids[2];
        DerivPtr dm = at(0, [&] {
          return conv(g, d_has_type(g, m->kids[0]), ty_prod(A, B));
        });
        return mk_deriv(m->kind == Kind::Proj1 ? "pair/proj1" : "pair/proj2",
                        {dm},
                        Judgement{g, j_has_type(
                                         m, m->kind == Kind::Proj1 ? A : B)});
      }
      case Kind::Lam: {
        const std::string& x = m->binders[0];
        ExprPtr A = m->kids[0], B = m->kids[2];
        require_fresh(g, {x});
        Context gx = g;
        gx.push_back({x, A});
        DerivPtr dm = at(1, [&] { return conv(gx, d_has_type(gx, m->kids[1]), B); });
        return mk_deriv("fn/lam", {dm},
                        Judgement{g, j_has_type(m, ty_arrow(A, B))});
      }
      case Kind::App: {
        ExprPtr A = m->kids[2], B = m->kids[3];
        DerivPtr df = at(0, [&] {
          return conv(g, d_has_type(g, m->kids[0]), ty_arrow(A, B));
        });
        DerivPtr da = at(1, [&] { return conv(g, d_has_type(g, m->kids[1]), A); });
        return mk_deriv("fn/app", {df, da}, Judgement{g, j_has_type(m, B)});
      }
      case Kind::NatName:
        return mk_deriv("univ/nhat", {d_valid(g)},
                        Judgement{g, j_has_type(m, ty_univ())});
      case Kind::TimesName: {
        DerivPtr dl = at(0, [&] { return conv(g, d_has_type(g, m->kids[0]),
                                              ty_univ()); });
        DerivPtr dr = at(1, [&] { return conv(g, d_has_type(g, m->kids[1]),
                                              ty_univ()); });
        return mk_deriv("univ/timeshat", {dl, dr},
                        Judgement{g, j_has_type(m, ty_univ())});
      }
      case Kind::SetComp: {
        const std::string& x = m->binders[0];
        ExprPtr A = m->kids[0];
        require_fresh(g, {x});
        Context gx = g;
        gx.push_back({x, A});
        DerivPtr dp = at(1, [&] { return d_is_small(gx, m->kids[1]); });
        return mk_deriv("set/comp", {dp},
                        Judgement{g, j_has_type(m, ty_set(A))});
      }
      default:
        throw IllTyped(path_, "not a term: " + print_expr(m));
    }
  }

  DerivPtr d_is_small(const Context& g, const ExprPtr& p) {
    bool uf = rules_detail::is_ufree(sys_);
    switch (p->kind) {
      case Kind::BotHat:
        return mk_deriv("pu/bothat-form", {d_valid(g)},
                        Judgement{g, j_is_small(p)});
      case Kind::ImpHat:
        return mk_deriv("pu/imphat-form",
                        {at(0, [&] { return d_is_small(g, p->kids[0]); }),
                         at(1, [&] { return d_is_small(g, p->kids[1]); })},
                        Judgement{g, j_is_small(p)});
      case Kind::EqHat: {
        const ExprPtr& label = p->kids[2];
        if (uf) {
          if (label->kind != Kind::NatName)
            throw IllTyped(path_, "small equation label must be the token for N");
          DerivPtr d1 = at(0, [&] { return conv(g, d_has_type(g, p->kids[0]),
                                                ty_nat()); });
          DerivPtr d2 = at(1, [&] { return conv(g, d_has_type(g, p->kids[1]),
                                                ty_nat()); });
          return mk_deriv("t2/eqhat-form", {d1, d2},
                          Judgement{g, j_is_small(p)});
        }
        DerivPtr dn = at(2, [&] { return conv(g, d_has_type(g, label),
                                              ty_univ()); });
        DerivPtr d1 = at(0, [&] { return conv(g, d_has_type(g, p->kids[0]),
                                              ty_of(label)); });
        DerivPtr d2 = at(1, [&] { return conv(g, d_has_type(g, p->kids[1]),
                                              ty_of(label)); });
        return mk_deriv("eq/eqhat-form", {dn, d1, d2},
                        Judgement{g, j_is_small(p)});
      }
      case Kind::ForallHat: {
        const std::string& x = p->binders[0];
        const ExprPtr& name = p->kids[0];
        require_fresh(g, {x});
        Context gx = g;
        if (uf) {
          if (name->kind != Kind::NatName)
            throw IllTyped(path_, "small quantifier domain must be the token for N");
          gx.push_back({x, ty_nat()});
          DerivPtr dp = at(1, [&] { return d_is_small(gx, p->kids[1]); });
          return mk_deriv("t2/forallhat-form", {dp},
                          Judgement{g, j_is_small(p)});
        }
        gx.push_back({x, ty_of(name)});
        DerivPtr dp = at(1, [&] { return d_is_small(gx, p->kids[1]); });
        return mk_deriv("pu/forallhat-form", {dp},
                        Judgement{g, j_is_small(p)});
      }
      case Kind::InHat: {
        ExprPtr A = p->kids[2];
        DerivPtr dm = at(0, [&] { return conv(g, d_has_type(g, p->kids[0]), A); });
        DerivPtr ds = at(1, [&] { return conv(g, d_has_type(g, p->kids[1]),
                                              ty_set(A)); });
        return mk_deriv("set/inhat", {dm, ds}, Judgement{g, j_is_small(p)});
      }
      default:
        throw IllTyped(path_, "not a small proposition: " + print_expr(p));
    }
  }

  DerivPtr d_is_prop(const Context& g, const ExprPtr& phi) {
    bool uf = rules_detail::is_ufree(sys_);
    switch (phi->kind) {
      case Kind::Bot:
        return mk_deriv("log/bot-form", {d_valid(g)},
                        Judgement{g, j_is_prop(phi)});
      case Kind::Imp:
        return mk_deriv("log/imp-form",
                        {at(0, [&] { return d_is_prop(g, phi->kids[0]); }),
                         at(1, [&] { return d_is_prop(g, phi->kids[1]); })},
                        Judgement{g, j_is_prop(phi)});
      case Kind::Forall: {
        const std::string& x = phi->binders[0];
        require_fresh(g, {x});
        Context gx = g;
        gx.push_back({x, phi->kids[0]});
        DerivPtr dp = at(1, [&] { return d_is_prop(gx, phi->kids[1]); });
        return mk_deriv("log/forall-form", {dp},
                        Judgement{g, j_is_prop(phi)});
      }
      case Kind::Eq: {
        const ExprPtr& label = phi->kids[2];
        if (uf) {
          if (label->kind != Kind::NatName)
            throw IllTyped(path_, "equation label must be the token for N");
          DerivPtr d1 = at(0, [&] { return conv(g, d_has_type(g, phi->kids[0]),
                                                ty_nat()); });
          DerivPtr d2 = at(1, [&] { return conv(g, d_has_type(g, phi->kids[1]),
                                                ty_nat()); });
          return mk_deriv("t2/eq-form", {d1, d2},
                          Judgement{g, j_is_prop(phi)});
        }
        DerivPtr dn = at(2, [&] { return conv(g, d_has_type(g, label),
                                              ty_univ()); });
        DerivPtr d1 = at(0, [&] { return conv(g, d_has_type(g, phi->kids[0]),
                                              ty_of(label)); });
        DerivPtr d2 = at(1, [&] { return conv(g, d_has_type(g, phi->kids[1]),
                                              ty_of(label)); });
        return mk_deriv("eq/form", {dn, d1, d2},
                        Judgement{g, j_is_prop(phi)});
      }
      case Kind::Holds:
        return mk_deriv("pu/V-form",
                        {at(0, [&] { return d_is_small(g, phi->kids[0]); })},
                        Judgement{g, j_is_prop(phi)});
      default:
        throw IllTyped(path_, "not a proposition: " + print_expr(phi));
    }
  }

 private:
  SystemId sys_;
  std::vector<int> path_;

  DerivPtr refl_ty(const Context& g, const ExprPtr& a) {
    return mk_deriv("str/type-refl", {d_is_type(g, a)},
                    Judgement{g, j_type_eq(a, a)});
  }

  template <class F>
  DerivPtr at(int i, const F& f) {
    path_.push_back(i);
    DerivPtr d = f();
    path_.pop_back();
    return d;
  }

  void require_fresh(const Context& g, std::initializer_list<std::string> xs) {
    for (const auto& x : xs)
      if (ctx_lookup(g, x))
        throw IllTyped(path_, "bound variable " + x +
                                  " shadows a context variable");
  }
};

// -- public wrappers ---------------------------------------------------------

struct SynthResult {
  ExprPtr type;
  DerivPtr deriv;  // kernel-accepted derivation of the typing judgement
};

namespace typing_detail {
inline DerivPtr verified(SystemId sys, DerivPtr d) {
  if (auto err = check_derivation(sys, d))
    throw IllTyped({}, "synthesized derivation rejected (" +
                           std::string(deriv_reason_name(err->reason)) +
                           "): " + err->message);
  return d;
}
}  // namespace typing_detail

inline SynthResult synth_type_deriv(SystemId sys, const Context& g,
                                    const ExprPtr& m) {
  TypeSynth s(sys);
  DerivPtr d = typing_detail::verified(sys, s.d_has_type(g, m));
  return {d->conclusion.body.exprs[1], d};
}

inline ExprPtr synth_type(SystemId sys, const Context& g, const ExprPtr& m) {
  return synth_type_deriv(sys, g, m).type;
}

inline DerivPtr derive_ctx_valid(SystemId sys, const Context& g) {
  TypeSynth s(sys);
  return typing_detail::verified(sys, s.d_valid(g));
}
inline DerivPtr derive_is_type(SystemId sys, const Context& g,
                               const ExprPtr& a) {
  TypeSynth s(sys);
  return typing_detail::verified(sys, s.d_is_type(g, a));
}
inline DerivPtr derive_is_small(SystemId sys, const Context& g,
                                const ExprPtr& p) {
  TypeSynth s(sys);
  return typing_detail::verified(sys, s.d_is_small(g, p));
}
inline DerivPtr derive_is_prop(SystemId sys, const Context& g,
                               const ExprPtr& phi) {
  TypeSynth s(sys);
  return typing_detail::verified(sys, s.d_is_prop(g, phi));
}

// -- judgemental equality ----------------------------------------------------

namespace typing_detail {

// one-pass reduction to (budgeted) normal form under the computation
// equations, applied to terms, small propositions and propositions alike
inline ExprPtr nf_expr(const ExprPtr& e, unsigned long long& budget) {
  std::vector<ExprPtr> ks;
  ks.reserve(e->kids.size());
  for (const auto& k : e->kids) ks.push_back(nf_expr(k, budget));
  ExprPtr r = mk(e->kind, e->binders, std::move(ks), e->name);

  auto redo = [&](ExprPtr contractum) {
    if (budget == 0) return contractum;  // stop reducing, compare as-is
    --budget;
    return nf_expr(contractum, budget);
  };

  switch (r->kind) {
    case Kind::App:
      if (r->kids[0]->kind == Kind::Lam)
        return redo(subst(r->kids[0]->kids[1], r->kids[0]->binders[0],
                          r->kids[1]));
      break;
    case Kind::Proj1:
      if (r->kids[0]->kind == Kind::Pair) return redo(r->kids[0]->kids[0]);
      break;
    case Kind::Proj2:
      if (r->kids[0]->kind == Kind::Pair) return redo(r->kids[0]->kids[1]);
      break;
    case Kind::ENat: {
      const ExprPtr& arg = r->kids[3];
      if (arg->kind == Kind::Zero) return redo(r->kids[1]);
      if (arg->kind == Kind::Succ) {
        ExprPtr prev = enat(r->binders[0], r->kids[0], r->kids[1],
                            r->binders[1], r->binders[2], r->kids[2],
                            arg->kids[0]);
        return redo(rules_detail::subst2(r->kids[2], r->binders[1],
                                         arg->kids[0], r->binders[2], prev));
      }
      break;
    }
    case Kind::RNat: {
      const ExprPtr& arg = r->kids[2];
      if (arg->kind == Kind::Zero) return redo(r->kids[0]);
      if (arg->kind == Kind::Succ) {
        ExprPtr prev = rnat(r->kids[0], r->binders[0], r->binders[1],
                            r->kids[1], arg->kids[0]);
        return redo(rules_detail::subst2(r->kids[1], r->binders[0],
                                         arg->kids[0], r->binders[1], prev));
      }
      break;
    }
    case Kind::InHat:
      if (r->kids[1]->kind == Kind::SetComp)
        return redo(subst(r->kids[1]->kids[1], r->kids[1]->binders[0],
                          r->kids[0]));
      break;
    case Kind::Holds:
      // the reflection equations, oriented towards plain propositions
      switch (r->kids[0]->kind) {
        case Kind::BotHat: return redo(bot());
        case Kind::ImpHat:
          return redo(imp(holds(r->kids[0]->kids[0]),
                          holds(r->kids[0]->kids[1])));
        case Kind::EqHat:
          return redo(eq(r->kids[0]->kids[0], r->kids[0]->kids[1],
                         r->kids[0]->kids[2]));
        case Kind::ForallHat:
          return redo(forall(r->kids[0]->binders[0],
                             ty_of(r->kids[0]->kids[0]),
                             holds(r->kids[0]->kids[1])));
        default: break;
      }
      break;
    default: break;
  }
  return r;
}

}  // namespace typing_detail

// Normal form under the computation equations; budget 0 means the
// environment default.
inline ExprPtr nf_expr(const ExprPtr& e, unsigned long long budget = 0) {
  unsigned long long b = budget ? budget : default_step_budget();
  return typing_detail::nf_expr(e, b);
}

// Judgemental equality of two expressions at a common classification,
// best-effort: normalize both sides and compare modulo alpha and the type
// computation equations.  The context and type are taken for interface
// completeness; the computation equations are type-independent.
inline bool check_equal(SystemId sys, const Context& g, const ExprPtr& m,
                        const ExprPtr& n, const ExprPtr& a,
                        unsigned long long budget = 0) {
  (void)sys;
  (void)g;
  (void)a;
  return eq_mod_ty(nf_expr(m, budget), nf_expr(n, budget));
}

// -- the embedding of the base tower system into the full calculus ----------

namespace typing_detail {

// replace every bare-recursor node with the eliminator at the motive
// T(N-hat)
inline ExprPtr inject_expr(const ExprPtr& e) {
  std::vector<ExprPtr> ks;
  ks.reserve(e->kids.size());
  for (const auto& k : e->kids) ks.push_back(inject_expr(k));
  if (e->kind == Kind::RNat) {
    std::set<std::string> avoid{e->binders[0], e->binders[1]};
    for (const auto& k : ks) {
      VarSet fv = free_vars(k);
      avoid.insert(fv.num.begin(), fv.num.end());
    }
    std::string x = fresh_name("i", avoid);
    return enat(x, ty_of(nat_name()), ks[0], e->binders[0], e->binders[1],
                ks[1], ks[2]);
  }
  return mk(e->kind, e->binders, std::move(ks), e->name);
}

inline Context inject_ctx(const Context& g) {
  Context out;
  for (const auto& en : g) out.push_back({en.name, inject_expr(en.type)});
  return out;
}

}  // namespace typing_detail

inline DerivPtr inject_T2_to_LTT0(const DerivPtr& d) {
  using typing_detail::inject_ctx;
  using typing_detail::inject_expr;
  std::vector<DerivPtr> prem;
  prem.reserve(d->premises.size());
  for (const auto& p : d->premises) prem.push_back(inject_T2_to_LTT0(p));

  Judgement concl;
  concl.ctx = inject_ctx(d->conclusion.ctx);
  concl.body.form = d->conclusion.body.form;
  for (const auto& e : d->conclusion.body.exprs)
    concl.body.exprs.push_back(inject_expr(e));
  for (const auto& e : d->conclusion.body.ants)
    concl.body.ants.push_back(inject_expr(e));

  TypeSynth syn(sys_ltt0());
  const Context& g = concl.ctx;
  auto nhat_typed = [&] {
    // g |- N-hat : U
    return mk_deriv("univ/nhat", {syn.d_valid(g)},
                    Judgement{g, j_has_type(nat_name(), ty_univ())});
  };
  auto nhat_refl = [&] {
    // g |- N-hat = N-hat : U
    return mk_deriv("str/term-refl", {nhat_typed()},
                    Judgement{g, j_term_eq(nat_name(), nat_name(),
                                           ty_univ())});
  };
  auto motive_is_type = [&] {
    // g, x:N |- T(N-hat) type
    std::set<std::string> avoid;
    for (const auto& e : g) avoid.insert(e.name);
    std::string x = fresh_name("i", avoid);
    Context gx = g;
    gx.push_back({x, ty_nat()});
    return syn.d_is_type(gx, ty_of(nat_name()));
  };
  auto motive_type_eq = [&] {
    DerivPtr dt = motive_is_type();
    return mk_deriv("str/type-refl", {dt},
                    Judgement{dt->conclusion.ctx,
                              j_type_eq(ty_of(nat_name()),
                                        ty_of(nat_name()))});
  };
  auto prepend = [&](DerivPtr extra, std::vector<DerivPtr> ps) {
    ps.insert(ps.begin(), std::move(extra));
    return ps;
  };

  const std::string& r = d->rule;
  std::string rule = r;
  std::vector<DerivPtr> ps = std::move(prem);
  if (r == "t2/R") {
    rule = "nat/EN";
    ps = prepend(motive_is_type(), std::move(ps));
  } else if (r == "t2/R-0") {
    rule = "nat/EN-0";
    ps = prepend(motive_is_type(), std::move(ps));
  } else if (r == "t2/R-s") {
    rule = "nat/EN-s";
    ps = prepend(motive_is_type(), std::move(ps));
  } else if (r == "t2/R-eq") {
    rule = "nat/EN-eq";
    ps = prepend(motive_type_eq(), std::move(ps));
  } else if (r == "t2/eq-form") {
    rule = "eq/form";
    ps = prepend(nhat_typed(), std::move(ps));
  } else if (r == "t2/eq-form-eq") {
    rule = "eq/form-eq";
    ps = prepend(nhat_refl(), std::move(ps));
  } else if (r == "t2/eqhat-form") {
    rule = "eq/eqhat-form";
    ps = prepend(nhat_typed(), std::move(ps));
  } else if (r == "t2/eqhat-eq") {
    rule = "eq/eqhat-eq";
    ps = prepend(nhat_refl(), std::move(ps));
  } else if (r == "t2/V-eqhat") {
    rule = "eq/V-eqhat";
    ps = prepend(nhat_typed(), std::move(ps));
  } else if (r == "t2/eq-refl") {
    rule = "eq/refl";
  } else if (r == "t2/subst") {
    rule = "eq/subst";
  } else if (r == "t2/forallhat-form") {
    rule = "pu/forallhat-form";
  } else if (r == "t2/forallhat-eq") {
    rule = "pu/forallhat-eq";
    ps = prepend(nhat_refl(), std::move(ps));
  } else if (r == "t2/V-forall") {
    rule = "pu/V-forall";
  }
  return mk_deriv(std::move(rule), std::move(ps), std::move(concl), d->params);
}

}  // namespace ltt
