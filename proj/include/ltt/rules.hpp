// The rule catalog and the derivation checker.
//
// Every rule of every system in the tower is one entry, identified by a
// stable string id.  A derivation node names its rule; the checker
// reconstructs every schematic expression from the premises' conclusions and
// compares against the claimed conclusion up to alpha, so nodes need no
// instantiation parameters.  System membership is three-layered:
//   1. the rule must be admitted by the system,
//   2. every expression at every node must lie in the system's fragment,
//   3. the system's side conditions must hold (recursor motive shape,
//      induction proposition class, substitution/eta quantifier shapes).
//
// Rule groups:
//   str/   structural rules (context formation, conversion, the three
//          equivalence-relation triples per judgement, assumption,
//          proposition rewriting)
//   nat/   natural numbers with the universe-style eliminator E_N
//   t2/    the universe-free tower's specialized rules: the bare recursor R,
//          equality at N, and small quantification over N
//   pair/ fn/ set/   products, functions, typed sets
//   univ/  the type universe U and names
//   log/   classical predicate logic
//   pu/    the propositional universe
//   eq/    propositional and small equality at names T(N)
//   ltt0/  the discrimination rule P3
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ltt/connectives.hpp"
#include "ltt/depth.hpp"
#include "ltt/judgement.hpp"
#include "ltt/system.hpp"
#include "ltt/typenorm.hpp"

namespace ltt {

enum class DerivReason {
  RuleNotInSystem,
  PremiseMismatch,
  SideConditionViolated,
  FragmentViolation,
  FreshnessViolation,
  UnknownRule,
};

inline const char* deriv_reason_name(DerivReason r) {
  switch (r) {
    case DerivReason::RuleNotInSystem: return "RuleNotInSystem";
    case DerivReason::PremiseMismatch: return "PremiseMismatch";
    case DerivReason::SideConditionViolated: return "SideConditionViolated";
    case DerivReason::FragmentViolation: return "FragmentViolation";
    case DerivReason::FreshnessViolation: return "FreshnessViolation";
    case DerivReason::UnknownRule: return "UnknownRule";
  }
  return "?";
}

struct DerivationError {
  std::vector<int> path;  // premise indices from the root
  DerivReason reason;
  std::string message;
};

namespace rules_detail {

struct Fail {
  DerivReason reason;
  std::string message;
};

[[noreturn]] inline void fail(DerivReason r, const std::string& m) {
  throw Fail{r, m};
}
inline void need(bool ok, DerivReason r, const std::string& m) {
  if (!ok) fail(r, m);
}
inline void prem(bool ok, const std::string& m) {
  need(ok, DerivReason::PremiseMismatch, m);
}

// simultaneous substitution [a/x, b/y]M
inline ExprPtr subst2(const ExprPtr& m, const std::string& x, const ExprPtr& a,
                      const std::string& y, const ExprPtr& b) {
  VarSet fv = free_vars(m);
  VarSet fa = free_vars(a);
  VarSet fb = free_vars(b);
  std::set<std::string> avoid = fv.num;
  avoid.insert(fa.num.begin(), fa.num.end());
  avoid.insert(fb.num.begin(), fb.num.end());
  avoid.insert(x);
  avoid.insert(y);
  std::string t1 = fresh_name("tmp", avoid);
  avoid.insert(t1);
  std::string t2 = fresh_name("tmp", avoid);
  ExprPtr r = subst(m, x, var(t1));
  r = subst(r, y, var(t2));
  r = subst(r, t1, a);
  return subst(r, t2, b);
}

// context comparison modulo the type computation equations
inline bool ctx_eq_mod(const Context& a, const Context& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].name != b[i].name || !eq_mod_ty(a[i].type, b[i].type))
      return false;
  return true;
}

// the kind of a type after normalization (dependent positions may spell the
// same type through the universe's equations)
inline Kind ty_kind(const ExprPtr& a) { return normalize_type(a)->kind; }

// -- per-system policy -------------------------------------------------------

inline bool is_ufree(SystemId s) {
  switch (base_system(s).kind) {
    case SystemKind::T2: case SystemKind::TOmega: case SystemKind::AN:
      return true;
    default:
      return false;
  }
}

inline bool rule_admitted(SystemId sys, const std::string& id) {
  auto starts = [&](const char* p) { return id.rfind(p, 0) == 0; };
  bool ufree = is_ufree(sys);
  bool lttw = sys.kind == SystemKind::LTTW;
  if (starts("t2/")) return ufree;
  if (starts("univ/") || starts("eq/")) return !ufree;
  if (id == "nat/EN" || id == "nat/EN-eq" || id == "nat/EN-0" ||
      id == "nat/EN-s")
    return !ufree;
  if (starts("pu/forallhat") || id == "pu/V-forall") return !ufree;
  if (id == "ltt0/P3") return !lttw;
  return true;  // structural, logic, pairs, functions, sets, shared nat/pu
}

// induction proposition discipline: name form V(P), analytic, or anything
enum class IndClass { VForm, Analytic, Any };
inline IndClass ind_class(SystemId sys) {
  if (sys.kind == SystemKind::LTTW) return IndClass::Any;
  return is_star(sys) ? IndClass::Analytic : IndClass::VForm;
}

// substitution/eta discipline on the motive proposition
enum class SubstClass { UFreeDomains, VForm, Any };
inline SubstClass subst_class(SystemId sys) {
  if (sys.kind == SystemKind::LTTW) return SubstClass::Any;
  if (sys.kind == SystemKind::LTT0Star) return SubstClass::VForm;
  return SubstClass::UFreeDomains;
}

inline void check_ind_prop(SystemId sys, const ExprPtr& phi) {
  switch (ind_class(sys)) {
    case IndClass::VForm:
      need(phi->kind == Kind::Holds, DerivReason::SideConditionViolated,
           "induction proposition must have the form V(P) in " +
               system_name(sys));
      break;
    case IndClass::Analytic:
      need(is_analytic(phi), DerivReason::SideConditionViolated,
           "induction proposition must be analytic in " + system_name(sys));
      break;
    case IndClass::Any: break;
  }
}

inline void check_subst_prop(SystemId sys, const ExprPtr& phi) {
  switch (subst_class(sys)) {
    case SubstClass::UFreeDomains:
      need(!quantifier_domain_contains_U(phi),
           DerivReason::SideConditionViolated,
           "substitution motive quantifies over a U-containing domain");
      break;
    case SubstClass::VForm:
      need(phi->kind == Kind::Holds, DerivReason::SideConditionViolated,
           "substitution motive must have the form V(P) in " +
               system_name(sys));
      break;
    case SubstClass::Any: break;
  }
}

// eliminator motive: everywhere but LTTW the type must be a name form T(K)
inline void check_en_motive(SystemId sys, const ExprPtr& c) {
  if (sys.kind == SystemKind::LTTW) return;
  need(c->kind == Kind::TyOf, DerivReason::SideConditionViolated,
       "eliminator motive must have the form T(K) in " + system_name(sys));
}

// -- premise-shape helpers ---------------------------------------------------

struct Node {
  SystemId sys;
  const Derivation& d;

  const Judgement& concl() const { return d.conclusion; }
  const Context& ctx() const { return d.conclusion.ctx; }

  void arity(std::size_t n) const {
    prem(d.premises.size() == n, "rule " + d.rule + " takes " +
                                     std::to_string(n) + " premises");
  }
  const Judgement& p(std::size_t i) const { return d.premises[i]->conclusion; }

  const Judgement& pj(std::size_t i, JForm f) const {
    const Judgement& j = p(i);
    prem(j.body.form == f, "premise " + std::to_string(i + 1) + " of " +
                               d.rule + " has the wrong judgement form");
    return j;
  }
  // premise over the same context as the conclusion
  const Judgement& psame(std::size_t i, JForm f) const {
    const Judgement& j = pj(i, f);
    prem(ctx_eq_mod(j.ctx, ctx()),
         "premise " + std::to_string(i + 1) + " of " + d.rule +
             " must share the conclusion's context");
    return j;
  }
  // premise over the conclusion's context extended by exactly one entry
  const Judgement& pext(std::size_t i, JForm f, CtxEntry& entry) const {
    const Judgement& j = pj(i, f);
    prem(j.ctx.size() == ctx().size() + 1,
         "premise " + std::to_string(i + 1) + " of " + d.rule +
             " must extend the context by one variable");
    Context prefix(j.ctx.begin(), j.ctx.end() - 1);
    prem(ctx_eq_mod(prefix, ctx()),
         "premise " + std::to_string(i + 1) + " of " + d.rule +
             " extends a different context");
    entry = j.ctx.back();
    return j;
  }

  void concl_is(JForm f) const {
    prem(concl().body.form == f, "conclusion of " + d.rule +
                                     " has the wrong judgement form");
  }
  const ExprPtr& ce(std::size_t i) const { return concl().body.exprs[i]; }

  void expect(const ExprPtr& got, const ExprPtr& want,
              const std::string& what) const {
    prem(eq_mod_ty(got, want), d.rule + ": " + what + " does not match");
  }
  void ants_match(const std::vector<ExprPtr>& a,
                  const std::vector<ExprPtr>& b) const {
    prem(a.size() == b.size(), d.rule + ": antecedent lists differ in length");
    for (std::size_t i = 0; i < a.size(); ++i)
      prem(eq_mod_ty(a[i], b[i]), d.rule + ": antecedent lists differ");
  }
};

// equivalence-relation rule triples, shared across the four equality forms
inline void check_refl(const Node& n, JForm from, JForm to) {
  n.arity(1);
  const Judgement& j = n.psame(0, from);
  n.concl_is(to);
  n.expect(n.ce(0), j.body.exprs[0], "left side");
  n.expect(n.ce(1), j.body.exprs[0], "right side");
  if (to == JForm::TermEq)
    n.expect(n.ce(2), j.body.exprs[1], "type");
}
inline void check_sym(const Node& n, JForm f) {
  n.arity(1);
  const Judgement& j = n.psame(0, f);
  n.concl_is(f);
  n.expect(n.ce(0), j.body.exprs[1], "left side");
  n.expect(n.ce(1), j.body.exprs[0], "right side");
  if (f == JForm::TermEq) n.expect(n.ce(2), j.body.exprs[2], "type");
}
inline void check_trans(const Node& n, JForm f) {
  n.arity(2);
  const Judgement& a = n.psame(0, f);
  const Judgement& b = n.psame(1, f);
  prem(eq_mod_ty(a.body.exprs[1], b.body.exprs[0]),
       n.d.rule + ": middle expressions do not match");
  if (f == JForm::TermEq)
    prem(eq_mod_ty(a.body.exprs[2], b.body.exprs[2]),
         n.d.rule + ": types do not match");
  n.concl_is(f);
  n.expect(n.ce(0), a.body.exprs[0], "left side");
  n.expect(n.ce(1), b.body.exprs[1], "right side");
  if (f == JForm::TermEq) n.expect(n.ce(2), a.body.exprs[2], "type");
}

void check_rule(const Node& n);  // forward

// -- the checker entry point -------------------------------------------------

inline void check_fragment(SystemId sys, const Derivation& d) {
  auto chk = [&](const ExprPtr& e, const char* where) {
    need(in_system_expr(sys, e), DerivReason::FragmentViolation,
         std::string(where) + " lies outside " + system_name(sys) + ": " +
             print_expr(e));
  };
  for (const auto& entry : d.conclusion.ctx) chk(entry.type, "context type");
  for (const auto& e : d.conclusion.body.exprs) chk(e, "conclusion expression");
  for (const auto& e : d.conclusion.body.ants) chk(e, "antecedent");
}

}  // namespace rules_detail

inline std::optional<DerivationError> check_derivation(SystemId sys,
                                                       const DerivPtr& d) {
  using namespace rules_detail;
  struct Walker {
    SystemId sys;
    std::optional<DerivationError> err;
    void walk(const DerivPtr& node, std::vector<int>& path) {
      for (std::size_t i = 0; i < node->premises.size(); ++i) {
        path.push_back((int)i);
        walk(node->premises[i], path);
        path.pop_back();
        if (err) return;
      }
      try {
        need(ctx_distinct(node->conclusion.ctx),
             DerivReason::FreshnessViolation,
             "context declares a variable twice");
        need(rule_admitted(sys, node->rule), DerivReason::RuleNotInSystem,
             "rule " + node->rule + " is not part of " + system_name(sys));
        check_fragment(sys, *node);
        check_rule(Node{sys, *node});
      } catch (const Fail& f) {
        err = DerivationError{path, f.reason, f.message};
      }
    }
  };
  Walker w{sys, std::nullopt};
  std::vector<int> path;
  w.walk(d, path);
  return w.err;
}

namespace rules_detail {

inline void check_rule(const Node& n) {
  const std::string& r = n.d.rule;
  const Judgement& c = n.concl();
  using F = JForm;

  // ---- structural ----------------------------------------------------------
  if (r == "str/valid-empty") {
    n.arity(0);
    n.concl_is(F::CtxValid);
    prem(n.ctx().empty(), "str/valid-empty concludes the empty context");
    return;
  }
  if (r == "str/ctx-ext") {
    n.arity(1);
    const Judgement& j = n.pj(0, F::IsType);
    n.concl_is(F::CtxValid);
    prem(n.ctx().size() == j.ctx.size() + 1,
         "str/ctx-ext adds exactly one variable");
    Context prefix(n.ctx().begin(), n.ctx().end() - 1);
    prem(ctx_eq_mod(prefix, j.ctx), "str/ctx-ext extends the premise context");
    const CtxEntry& e = n.ctx().back();
    need(!ctx_lookup(j.ctx, e.name), DerivReason::FreshnessViolation,
         "variable " + e.name + " already occurs in the context");
    prem(eq_mod_ty(e.type, j.body.exprs[0]),
         "str/ctx-ext: declared type must be the premise type");
    return;
  }
  if (r == "str/var") {
    n.arity(1);
    n.psame(0, F::CtxValid);
    n.concl_is(F::HasType);
    prem(n.ce(0)->kind == Kind::Var, "str/var concludes a variable");
    const ExprPtr* a = ctx_lookup(n.ctx(), n.ce(0)->name);
    prem(a != nullptr, "str/var: variable not declared in the context");
    n.expect(n.ce(1), *a, "declared type");
    return;
  }
  if (r == "str/term-refl") { check_refl(n, F::HasType, F::TermEq); return; }
  if (r == "str/term-sym") { check_sym(n, F::TermEq); return; }
  if (r == "str/term-trans") { check_trans(n, F::TermEq); return; }
  if (r == "str/type-refl") { check_refl(n, F::IsType, F::TypeEq); return; }
  if (r == "str/type-sym") { check_sym(n, F::TypeEq); return; }
  if (r == "str/type-trans") { check_trans(n, F::TypeEq); return; }
  if (r == "str/small-refl") { check_refl(n, F::IsSmallProp, F::SmallPropEq); return; }
  if (r == "str/small-sym") { check_sym(n, F::SmallPropEq); return; }
  if (r == "str/small-trans") { check_trans(n, F::SmallPropEq); return; }
  if (r == "str/prop-refl") { check_refl(n, F::IsProp, F::PropEq); return; }
  if (r == "str/prop-sym") { check_sym(n, F::PropEq); return; }
  if (r == "str/prop-trans") { check_trans(n, F::PropEq); return; }
  if (r == "str/conv") {
    n.arity(2);
    const Judgement& m = n.psame(0, F::HasType);
    const Judgement& e = n.psame(1, F::TypeEq);
    prem(eq_mod_ty(m.body.exprs[1], e.body.exprs[0]),
         "str/conv: premise type must be the equation's left side");
    n.concl_is(F::HasType);
    n.expect(n.ce(0), m.body.exprs[0], "term");
    n.expect(n.ce(1), e.body.exprs[1], "converted type");
    return;
  }
  if (r == "str/conv-eq") {
    n.arity(2);
    const Judgement& m = n.psame(0, F::TermEq);
    const Judgement& e = n.psame(1, F::TypeEq);
    prem(eq_mod_ty(m.body.exprs[2], e.body.exprs[0]),
         "str/conv-eq: premise type must be the equation's left side");
    n.concl_is(F::TermEq);
    n.expect(n.ce(0), m.body.exprs[0], "left term");
    n.expect(n.ce(1), m.body.exprs[1], "right term");
    n.expect(n.ce(2), e.body.exprs[1], "converted type");
    return;
  }
  if (r == "str/assume") {
    n.concl_is(F::Entails);
    prem(n.d.premises.size() == c.body.ants.size() &&
             !c.body.ants.empty(),
         "str/assume takes one premise per antecedent");
    for (std::size_t i = 0; i < c.body.ants.size(); ++i) {
      const Judgement& j = n.psame(i, F::IsProp);
      n.expect(c.body.ants[i], j.body.exprs[0], "antecedent");
    }
    bool found = false;
    for (const auto& phi : c.body.ants)
      found = found || eq_mod_ty(phi, n.ce(0));
    prem(found, "str/assume: conclusion must be one of the antecedents");
    return;
  }
  if (r == "str/prop-rewrite") {
    n.arity(2);
    const Judgement& ent = n.psame(0, F::Entails);
    const Judgement& eqj = n.psame(1, F::PropEq);
    prem(eq_mod_ty(ent.body.exprs[0], eqj.body.exprs[0]),
         "str/prop-rewrite: the entailed proposition must be rewritten");
    n.concl_is(F::Entails);
    n.ants_match(c.body.ants, ent.body.ants);
    n.expect(n.ce(0), eqj.body.exprs[1], "rewritten proposition");
    return;
  }

  // ---- natural numbers -----------------------------------------------------
  if (r == "nat/form") {
    n.arity(1);
    n.psame(0, F::CtxValid);
    n.concl_is(F::IsType);
    n.expect(n.ce(0), ty_nat(), "type");
    return;
  }
  if (r == "nat/zero") {
    n.arity(1);
    n.psame(0, F::CtxValid);
    n.concl_is(F::HasType);
    n.expect(n.ce(0), zero(), "term");
    n.expect(n.ce(1), ty_nat(), "type");
    return;
  }
  if (r == "nat/succ") {
    n.arity(1);
    const Judgement& j = n.psame(0, F::HasType);
    n.expect(j.body.exprs[1], ty_nat(), "premise type");
    n.concl_is(F::HasType);
    n.expect(n.ce(0), succ(j.body.exprs[0]), "term");
    n.expect(n.ce(1), ty_nat(), "type");
    return;
  }
  if (r == "nat/succ-eq") {
    n.arity(1);
    const Judgement& j = n.psame(0, F::TermEq);
    n.expect(j.body.exprs[2], ty_nat(), "premise type");
    n.concl_is(F::TermEq);
    n.expect(n.ce(0), succ(j.body.exprs[0]), "left term");
    n.expect(n.ce(1), succ(j.body.exprs[1]), "right term");
    n.expect(n.ce(2), ty_nat(), "type");
    return;
  }
  if (r == "nat/EN" || r == "nat/EN-eq" || r == "nat/EN-0" ||
      r == "nat/EN-s") {
    bool isEq = r == "nat/EN-eq";
    bool isZero = r == "nat/EN-0";
    n.arity(isZero ? 3 : 4);
    CtxEntry xe;
    const Judgement& jc =
        n.pext(0, isEq ? F::TypeEq : F::IsType, xe);
    prem(ty_kind(xe.type) == Kind::TyNat, r + ": motive variable must be at N");
    ExprPtr C = jc.body.exprs[0];
    ExprPtr Cp = isEq ? jc.body.exprs[1] : C;
    const std::string& x = xe.name;
    check_en_motive(n.sys, C);
    const Judgement& jl = n.psame(1, isEq ? F::TermEq : F::HasType);
    n.expect(jl.body.exprs[isEq ? 2 : 1], subst(C, x, zero()),
             "base-case type");
    ExprPtr L = jl.body.exprs[0];
    ExprPtr Lp = isEq ? jl.body.exprs[1] : L;
    const Judgement& jm = n.pj(2, isEq ? F::TermEq : F::HasType);
    prem(jm.ctx.size() == n.ctx().size() + 2,
         r + ": step premise context has two extra variables");
    Context prefix(jm.ctx.begin(), jm.ctx.end() - 2);
    prem(ctx_eq_mod(prefix, n.ctx()), r + ": step premise context mismatch");
    const CtxEntry& sx = jm.ctx[jm.ctx.size() - 2];
    const CtxEntry& sy = jm.ctx[jm.ctx.size() - 1];
    prem(ty_kind(sx.type) == Kind::TyNat, r + ": step index must be at N");
    // the step's accumulator lives at the motive with the step's own index
    prem(eq_mod_ty(sy.type, subst(C, x, var(sx.name))),
         r + ": step accumulator type must be the motive");
    ExprPtr M = jm.body.exprs[0];
    ExprPtr Mp = isEq ? jm.body.exprs[1] : M;
    n.expect(jm.body.exprs[isEq ? 2 : 1],
             subst(C, x, succ(var(sx.name))), "step-case type");
    if (isZero) {
      n.concl_is(F::TermEq);
      ExprPtr node = enat(x, C, L, sx.name, sy.name, M, zero());
      n.expect(n.ce(0), node, "eliminator term");
      n.expect(n.ce(1), L, "base case");
      n.expect(n.ce(2), subst(C, x, zero()), "type");
      return;
    }
    const Judgement& jn = n.psame(3, isEq ? F::TermEq : F::HasType);
    n.expect(jn.body.exprs[isEq ? 2 : 1], ty_nat(), "target type");
    ExprPtr N = jn.body.exprs[0];
    ExprPtr Np = isEq ? jn.body.exprs[1] : N;
    if (r == "nat/EN") {
      n.concl_is(F::HasType);
      n.expect(n.ce(0), enat(x, C, L, sx.name, sy.name, M, N),
               "eliminator term");
      n.expect(n.ce(1), subst(C, x, N), "type");
      return;
    }
    if (r == "nat/EN-eq") {
      n.concl_is(F::TermEq);
      n.expect(n.ce(0), enat(x, C, L, sx.name, sy.name, M, N), "left term");
      n.expect(n.ce(1), enat(x, Cp, Lp, sx.name, sy.name, Mp, Np),
               "right term");
      n.expect(n.ce(2), subst(C, x, N), "type");
      return;
    }
    // nat/EN-s
    n.concl_is(F::TermEq);
    ExprPtr rec = enat(x, C, L, sx.name, sy.name, M, N);
    n.expect(n.ce(0), enat(x, C, L, sx.name, sy.name, M, succ(N)),
             "left term");
    n.expect(n.ce(1), subst2(M, sx.name, N, sy.name, rec), "unfolded step");
    n.expect(n.ce(2), subst(C, x, succ(N)), "type");
    return;
  }
  if (r == "nat/IndN") {
    n.arity(4);
    CtxEntry xe;
    const Judgement& jp = n.pext(0, F::IsProp, xe);
    prem(ty_kind(xe.type) == Kind::TyNat, "nat/IndN: induction variable at N");
    ExprPtr phi = jp.body.exprs[0];
    const std::string& x = xe.name;
    check_ind_prop(n.sys, phi);
    const Judgement& jn = n.psame(1, F::HasType);
    n.expect(jn.body.exprs[1], ty_nat(), "target type");
    ExprPtr N = jn.body.exprs[0];
    const Judgement& jb = n.psame(2, F::Entails);
    n.expect(jb.body.exprs[0], subst(phi, x, zero()), "base case");
    CtxEntry xs;
    const Judgement& js = n.pext(3, F::Entails, xs);
    prem(ty_kind(xs.type) == Kind::TyNat, "nat/IndN: step variable at N");
    ExprPtr phiS = subst(phi, x, var(xs.name));
    prem(js.body.ants.size() == jb.body.ants.size() + 1,
         "nat/IndN: step antecedents must add the induction hypothesis");
    for (std::size_t i = 0; i < jb.body.ants.size(); ++i)
      prem(eq_mod_ty(js.body.ants[i], jb.body.ants[i]),
           "nat/IndN: step antecedents must extend the base antecedents");
    prem(eq_mod_ty(js.body.ants.back(), phiS),
         "nat/IndN: last step antecedent must be the induction hypothesis");
    n.expect(js.body.exprs[0], subst(phi, x, succ(var(xs.name))),
             "step conclusion");
    n.concl_is(F::Entails);
    n.ants_match(c.body.ants, jb.body.ants);
    n.expect(n.ce(0), subst(phi, x, N), "conclusion instance");
    return;
  }

  // ---- the bare recursor of the universe-free tower ------------------------
  if (r == "t2/R" || r == "t2/R-eq" || r == "t2/R-0" || r == "t2/R-s") {
    bool isEq = r == "t2/R-eq";
    bool isZero = r == "t2/R-0";
    n.arity(isZero ? 2 : 3);
    const Judgement& jl = n.psame(0, isEq ? F::TermEq : F::HasType);
    n.expect(jl.body.exprs[isEq ? 2 : 1], ty_nat(), "base type");
    ExprPtr L = jl.body.exprs[0];
    ExprPtr Lp = isEq ? jl.body.exprs[1] : L;
    const Judgement& jm = n.pj(1, isEq ? F::TermEq : F::HasType);
    prem(jm.ctx.size() == n.ctx().size() + 2,
         r + ": step premise context has two extra variables");
    Context prefix(jm.ctx.begin(), jm.ctx.end() - 2);
    prem(ctx_eq_mod(prefix, n.ctx()), r + ": step premise context mismatch");
    const CtxEntry& sx = jm.ctx[jm.ctx.size() - 2];
    const CtxEntry& sy = jm.ctx[jm.ctx.size() - 1];
    prem(ty_kind(sx.type) == Kind::TyNat && ty_kind(sy.type) == Kind::TyNat,
         r + ": step variables must be at N");
    n.expect(jm.body.exprs[isEq ? 2 : 1], ty_nat(), "step type");
    ExprPtr M = jm.body.exprs[0];
    ExprPtr Mp = isEq ? jm.body.exprs[1] : M;
    n.concl_is(r == "t2/R" ? F::HasType : F::TermEq);
    if (isZero) {
      ExprPtr node = rnat(L, sx.name, sy.name, M, zero());
      n.expect(n.ce(0), node, "recursor term");
      n.expect(n.ce(1), L, "base case");
      n.expect(n.ce(2), ty_nat(), "type");
      return;
    }
    const Judgement& jn = n.psame(2, isEq ? F::TermEq : F::HasType);
    n.expect(jn.body.exprs[isEq ? 2 : 1], ty_nat(), "target type");
    ExprPtr N = jn.body.exprs[0];
    ExprPtr Np = isEq ? jn.body.exprs[1] : N;
    if (r == "t2/R") {
      n.expect(n.ce(0), rnat(L, sx.name, sy.name, M, N), "recursor term");
      n.expect(n.ce(1), ty_nat(), "type");
      return;
    }
    if (r == "t2/R-eq") {
      n.expect(n.ce(0), rnat(L, sx.name, sy.name, M, N), "left term");
      n.expect(n.ce(1), rnat(Lp, sx.name, sy.name, Mp, Np), "right term");
      n.expect(n.ce(2), ty_nat(), "type");
      return;
    }
    // t2/R-s
    ExprPtr rec = rnat(L, sx.name, sy.name, M, N);
    n.expect(n.ce(0), rnat(L, sx.name, sy.name, M, succ(N)), "left term");
    n.expect(n.ce(1), subst2(M, sx.name, N, sy.name, rec), "unfolded step");
    n.expect(n.ce(2), ty_nat(), "type");
    return;
  }

  // ---- pairs ----------------------------------------------------------------
  if (r == "pair/form") {
    n.arity(2);
    const Judgement& a = n.psame(0, F::IsType);
    const Judgement& b = n.psame(1, F::IsType);
    n.concl_is(F::IsType);
    n.expect(n.ce(0), ty_prod(a.body.exprs[0], b.body.exprs[0]), "type");
    return;
  }
  if (r == "pair/form-eq") {
    n.arity(2);
    const Judgement& a = n.psame(0, F::TypeEq);
    const Judgement& b = n.psame(1, F::TypeEq);
    n.concl_is(F::TypeEq);
    n.expect(n.ce(0), ty_prod(a.body.exprs[0], b.body.exprs[0]), "left type");
    n.expect(n.ce(1), ty_prod(a.body.exprs[1], b.body.exprs[1]), "right type");
    return;
  }
  if (r == "pair/intro") {
    n.arity(2);
    const Judgement& m = n.psame(0, F::HasType);
    const Judgement& o = n.psame(1, F::HasType);
    ExprPtr A = m.body.exprs[1], B = o.body.exprs[1];
    n.concl_is(F::HasType);
    n.expect(n.ce(0), pair(m.body.exprs[0], o.body.exprs[0], A, B), "pair");
    n.expect(n.ce(1), ty_prod(A, B), "type");
    return;
  }
  if (r == "pair/intro-eq") {
    n.arity(4);
    const Judgement& ea = n.psame(0, F::TypeEq);
    const Judgement& eb = n.psame(1, F::TypeEq);
    const Judgement& em = n.psame(2, F::TermEq);
    const Judgement& en = n.psame(3, F::TermEq);
    ExprPtr A = ea.body.exprs[0], Ap = ea.body.exprs[1];
    ExprPtr B = eb.body.exprs[0], Bp = eb.body.exprs[1];
    n.expect(em.body.exprs[2], A, "left component type");
    n.expect(en.body.exprs[2], B, "right component type");
    n.concl_is(F::TermEq);
    n.expect(n.ce(0), pair(em.body.exprs[0], en.body.exprs[0], A, B),
             "left pair");
    n.expect(n.ce(1), pair(em.body.exprs[1], en.body.exprs[1], Ap, Bp),
             "right pair");
    n.expect(n.ce(2), ty_prod(A, B), "type");
    return;
  }
  if (r == "pair/proj1" || r == "pair/proj2") {
    bool fst = r == "pair/proj1";
    n.arity(1);
    const Judgement& m = n.psame(0, F::HasType);
    ExprPtr mty = normalize_type(m.body.exprs[1]);
    prem(mty->kind == Kind::TyProd, r + ": premise must be at a product type");
    ExprPtr A = mty->kids[0], B = mty->kids[1];
    n.concl_is(F::HasType);
    n.expect(n.ce(0),
             fst ? proj1(m.body.exprs[0], A, B) : proj2(m.body.exprs[0], A, B),
             "projection");
    n.expect(n.ce(1), fst ? A : B, "type");
    return;
  }
  if (r == "pair/proj1-eq" || r == "pair/proj2-eq") {
    bool fst = r == "pair/proj1-eq";
    n.arity(3);
    const Judgement& ea = n.psame(0, F::TypeEq);
    const Judgement& eb = n.psame(1, F::TypeEq);
    const Judgement& em = n.psame(2, F::TermEq);
    ExprPtr A = ea.body.exprs[0], Ap = ea.body.exprs[1];
    ExprPtr B = eb.body.exprs[0], Bp = eb.body.exprs[1];
    n.expect(em.body.exprs[2], ty_prod(A, B), "premise type");
    n.concl_is(F::TermEq);
    ExprPtr l = fst ? proj1(em.body.exprs[0], A, B)
                    : proj2(em.body.exprs[0], A, B);
    ExprPtr rr = fst ? proj1(em.body.exprs[1], Ap, Bp)
                     : proj2(em.body.exprs[1], Ap, Bp);
    n.expect(n.ce(0), l, "left projection");
    n.expect(n.ce(1), rr, "right projection");
    n.expect(n.ce(2), fst ? A : B, "type");
    return;
  }
  if (r == "pair/beta1" || r == "pair/beta2") {
    bool fst = r == "pair/beta1";
    n.arity(2);
    const Judgement& m = n.psame(0, F::HasType);
    const Judgement& o = n.psame(1, F::HasType);
    ExprPtr A = m.body.exprs[1], B = o.body.exprs[1];
    ExprPtr p = pair(m.body.exprs[0], o.body.exprs[0], A, B);
    n.concl_is(F::TermEq);
    n.expect(n.ce(0), fst ? proj1(p, A, B) : proj2(p, A, B), "projection");
    n.expect(n.ce(1), fst ? m.body.exprs[0] : o.body.exprs[0], "component");
    n.expect(n.ce(2), fst ? A : B, "type");
    return;
  }
  if (r == "pair/eta") {
    n.arity(3);
    CtxEntry ze;
    const Judgement& jp = n.pext(0, F::IsProp, ze);
    ExprPtr zty = normalize_type(ze.type);
    prem(zty->kind == Kind::TyProd, "pair/eta: variable at a product");
    ExprPtr A = zty->kids[0], B = zty->kids[1];
    ExprPtr phi = jp.body.exprs[0];
    check_subst_prop(n.sys, phi);
    const Judgement& jm = n.psame(1, F::HasType);
    n.expect(jm.body.exprs[1], ze.type, "subject type");
    ExprPtr M = jm.body.exprs[0];
    const Judgement& je = n.psame(2, F::Entails);
    ExprPtr expanded = pair(proj1(M, A, B), proj2(M, A, B), A, B);
    n.expect(je.body.exprs[0], subst(phi, ze.name, expanded),
             "expanded instance");
    n.concl_is(F::Entails);
    n.ants_match(c.body.ants, je.body.ants);
    n.expect(n.ce(0), subst(phi, ze.name, M), "contracted instance");
    return;
  }

  // ---- functions -------------------------------------------------------------
  if (r == "fn/form") {
    n.arity(2);
    const Judgement& a = n.psame(0, F::IsType);
    const Judgement& b = n.psame(1, F::IsType);
    n.concl_is(F::IsType);
    n.expect(n.ce(0), ty_arrow(a.body.exprs[0], b.body.exprs[0]), "type");
    return;
  }
  if (r == "fn/form-eq") {
    n.arity(2);
    const Judgement& a = n.psame(0, F::TypeEq);
    const Judgement& b = n.psame(1, F::TypeEq);
    n.concl_is(F::TypeEq);
    n.expect(n.ce(0), ty_arrow(a.body.exprs[0], b.body.exprs[0]), "left type");
    n.expect(n.ce(1), ty_arrow(a.body.exprs[1], b.body.exprs[1]), "right type");
    return;
  }
  if (r == "fn/lam") {
    n.arity(1);
    CtxEntry xe;
    const Judgement& jm = n.pext(0, F::HasType, xe);
    ExprPtr B = jm.body.exprs[1];
    n.concl_is(F::HasType);
    n.expect(n.ce(0), lam(xe.name, xe.type, jm.body.exprs[0], B), "abstraction");
    n.expect(n.ce(1), ty_arrow(xe.type, B), "type");
    return;
  }
  if (r == "fn/lam-eq") {
    n.arity(3);
    const Judgement& ea = n.psame(0, F::TypeEq);
    const Judgement& eb = n.psame(1, F::TypeEq);
    CtxEntry xe;
    const Judgement& jm = n.pext(2, F::TermEq, xe);
    ExprPtr A = ea.body.exprs[0], Ap = ea.body.exprs[1];
    ExprPtr B = eb.body.exprs[0], Bp = eb.body.exprs[1];
    n.expect(xe.type, A, "bound-variable type");
    n.expect(jm.body.exprs[2], B, "body type");
    n.concl_is(F::TermEq);
    n.expect(n.ce(0), lam(xe.name, A, jm.body.exprs[0], B), "left function");
    n.expect(n.ce(1), lam(xe.name, Ap, jm.body.exprs[1], Bp),
             "right function");
    n.expect(n.ce(2), ty_arrow(A, B), "type");
    return;
  }
  if (r == "fn/app") {
    n.arity(2);
    const Judgement& jm = n.psame(0, F::HasType);
    const Judgement& jn = n.psame(1, F::HasType);
    ExprPtr fty = normalize_type(jm.body.exprs[1]);
    prem(fty->kind == Kind::TyArrow, "fn/app: head must be at a function type");
    ExprPtr A = fty->kids[0], B = fty->kids[1];
    n.expect(jn.body.exprs[1], A, "argument type");
    n.concl_is(F::HasType);
    n.expect(n.ce(0), app(jm.body.exprs[0], jn.body.exprs[0], A, B),
             "application");
    n.expect(n.ce(1), B, "type");
    return;
  }
  if (r == "fn/app-eq") {
    n.arity(4);
    const Judgement& ea = n.psame(0, F::TypeEq);
    const Judgement& eb = n.psame(1, F::TypeEq);
    const Judgement& em = n.psame(2, F::TermEq);
    const Judgement& en = n.psame(3, F::TermEq);
    ExprPtr A = ea.body.exprs[0], Ap = ea.body.exprs[1];
    ExprPtr B = eb.body.exprs[0], Bp = eb.body.exprs[1];
    n.expect(em.body.exprs[2], ty_arrow(A, B), "head type");
    n.expect(en.body.exprs[2], A, "argument type");
    n.concl_is(F::TermEq);
    n.expect(n.ce(0), app(em.body.exprs[0], en.body.exprs[0], A, B),
             "left application");
    n.expect(n.ce(1), app(em.body.exprs[1], en.body.exprs[1], Ap, Bp),
             "right application");
    n.expect(n.ce(2), B, "type");
    return;
  }
  if (r == "fn/beta") {
    n.arity(2);
    CtxEntry xe;
    const Judgement& jm = n.pext(0, F::HasType, xe);
    const Judgement& jn = n.psame(1, F::HasType);
    n.expect(jn.body.exprs[1], xe.type, "argument type");
    ExprPtr B = jm.body.exprs[1];
    ExprPtr N = jn.body.exprs[0];
    ExprPtr f = lam(xe.name, xe.type, jm.body.exprs[0], B);
    n.concl_is(F::TermEq);
    n.expect(n.ce(0), app(f, N, xe.type, B), "redex");
    n.expect(n.ce(1), subst(jm.body.exprs[0], xe.name, N), "contractum");
    n.expect(n.ce(2), subst(B, xe.name, N), "type");
    return;
  }
  if (r == "fn/eta") {
    n.arity(3);
    CtxEntry ze;
    const Judgement& jp = n.pext(0, F::IsProp, ze);
    ExprPtr zty = normalize_type(ze.type);
    prem(zty->kind == Kind::TyArrow, "fn/eta: variable at a function type");
    ExprPtr A = zty->kids[0], B = zty->kids[1];
    ExprPtr phi = jp.body.exprs[0];
    check_subst_prop(n.sys, phi);
    const Judgement& jm = n.psame(1, F::HasType);
    n.expect(jm.body.exprs[1], ze.type, "subject type");
    ExprPtr M = jm.body.exprs[0];
    std::set<std::string> avoid = free_vars(M).num;
    for (const auto& e : n.ctx()) avoid.insert(e.name);
    std::string x = fresh_name("x", avoid);
    ExprPtr expanded = lam(x, A, app(M, var(x), A, B), B);
    const Judgement& je = n.psame(2, F::Entails);
    n.expect(je.body.exprs[0], subst(phi, ze.name, expanded),
             "expanded instance");
    n.concl_is(F::Entails);
    n.ants_match(c.body.ants, je.body.ants);
    n.expect(n.ce(0), subst(phi, ze.name, M), "contracted instance");
    return;
  }

  // ---- typed sets -------------------------------------------------------------
  if (r == "set/form") {
    n.arity(1);
    const Judgement& a = n.psame(0, F::IsType);
    n.concl_is(F::IsType);
    n.expect(n.ce(0), ty_set(a.body.exprs[0]), "type");
    return;
  }
  if (r == "set/form-eq") {
    n.arity(1);
    const Judgement& a = n.psame(0, F::TypeEq);
    n.concl_is(F::TypeEq);
    n.expect(n.ce(0), ty_set(a.body.exprs[0]), "left type");
    n.expect(n.ce(1), ty_set(a.body.exprs[1]), "right type");
    return;
  }
  if (r == "set/comp") {
    n.arity(1);
    CtxEntry xe;
    const Judgement& jp = n.pext(0, F::IsSmallProp, xe);
    n.concl_is(F::HasType);
    n.expect(n.ce(0), set_comp(xe.name, xe.type, jp.body.exprs[0]),
             "comprehension");
    n.expect(n.ce(1), ty_set(xe.type), "type");
    return;
  }
  if (r == "set/comp-eq") {
    n.arity(2);
    const Judgement& ea = n.psame(0, F::TypeEq);
    CtxEntry xe;
    const Judgement& jp = n.pext(1, F::SmallPropEq, xe);
    n.expect(xe.type, ea.body.exprs[0], "bound-variable type");
    n.concl_is(F::TermEq);
    n.expect(n.ce(0), set_comp(xe.name, xe.type, jp.body.exprs[0]),
             "left comprehension");
    n.expect(n.ce(1), set_comp(xe.name, ea.body.exprs[1], jp.body.exprs[1]),
             "right comprehension");
    n.expect(n.ce(2), ty_set(xe.type), "type");
    return;
  }
  if (r == "set/inhat") {
    n.arity(2);
    const Judgement& jm = n.psame(0, F::HasType);
    const Judgement& jn = n.psame(1, F::HasType);
    ExprPtr A = jm.body.exprs[1];
    n.expect(jn.body.exprs[1], ty_set(A), "set type");
    n.concl_is(F::IsSmallProp);
    n.expect(n.ce(0), in_hat(jm.body.exprs[0], jn.body.exprs[0], A),
             "membership");
    return;
  }
  if (r == "set/inhat-eq") {
    n.arity(3);
    const Judgement& ea = n.psame(0, F::TypeEq);
    const Judgement& em = n.psame(1, F::TermEq);
    const Judgement& en = n.psame(2, F::TermEq);
    ExprPtr A = ea.body.exprs[0], Ap = ea.body.exprs[1];
    n.expect(em.body.exprs[2], A, "element type");
    n.expect(en.body.exprs[2], ty_set(A), "set type");
    n.concl_is(F::SmallPropEq);
    n.expect(n.ce(0), in_hat(em.body.exprs[0], en.body.exprs[0], A),
             "left membership");
    n.expect(n.ce(1), in_hat(em.body.exprs[1], en.body.exprs[1], Ap),
             "right membership");
    return;
  }
  if (r == "set/comp-beta") {
    n.arity(2);
    const Judgement& jm = n.psame(0, F::HasType);
    CtxEntry xe;
    const Judgement& jp = n.pext(1, F::IsSmallProp, xe);
    ExprPtr A = jm.body.exprs[1];
    n.expect(xe.type, A, "bound-variable type");
    ExprPtr M = jm.body.exprs[0];
    ExprPtr P = jp.body.exprs[0];
    n.concl_is(F::SmallPropEq);
    n.expect(n.ce(0), in_hat(M, set_comp(xe.name, A, P), A), "membership");
    n.expect(n.ce(1), subst(P, xe.name, M), "instance");
    return;
  }

  // ---- the type universe -------------------------------------------------------
  if (r == "univ/form") {
    n.arity(1);
    n.psame(0, F::CtxValid);
    n.concl_is(F::IsType);
    n.expect(n.ce(0), ty_univ(), "type");
    return;
  }
  if (r == "univ/T-form") {
    n.arity(1);
    const Judgement& jm = n.psame(0, F::HasType);
    n.expect(jm.body.exprs[1], ty_univ(), "name type");
    n.concl_is(F::IsType);
    n.expect(n.ce(0), ty_of(jm.body.exprs[0]), "type");
    return;
  }
  if (r == "univ/T-eq") {
    n.arity(1);
    const Judgement& jm = n.psame(0, F::TermEq);
    n.expect(jm.body.exprs[2], ty_univ(), "name type");
    n.concl_is(F::TypeEq);
    n.expect(n.ce(0), ty_of(jm.body.exprs[0]), "left type");
    n.expect(n.ce(1), ty_of(jm.body.exprs[1]), "right type");
    return;
  }
  if (r == "univ/nhat") {
    n.arity(1);
    n.psame(0, F::CtxValid);
    n.concl_is(F::HasType);
    n.expect(n.ce(0), nat_name(), "name");
    n.expect(n.ce(1), ty_univ(), "type");
    return;
  }
  if (r == "univ/T-nhat") {
    n.arity(1);
    n.psame(0, F::CtxValid);
    n.concl_is(F::TypeEq);
    n.expect(n.ce(0), ty_of(nat_name()), "left type");
    n.expect(n.ce(1), ty_nat(), "right type");
    return;
  }
  if (r == "univ/timeshat") {
    n.arity(2);
    const Judgement& jm = n.psame(0, F::HasType);
    const Judgement& jn = n.psame(1, F::HasType);
    n.expect(jm.body.exprs[1], ty_univ(), "left name type");
    n.expect(jn.body.exprs[1], ty_univ(), "right name type");
    n.concl_is(F::HasType);
    n.expect(n.ce(0), times_name(jm.body.exprs[0], jn.body.exprs[0]), "name");
    n.expect(n.ce(1), ty_univ(), "type");
    return;
  }
  if (r == "univ/timeshat-eq") {
    n.arity(2);
    const Judgement& jm = n.psame(0, F::TermEq);
    const Judgement& jn = n.psame(1, F::TermEq);
    n.expect(jm.body.exprs[2], ty_univ(), "left name type");
    n.expect(jn.body.exprs[2], ty_univ(), "right name type");
    n.concl_is(F::TermEq);
    n.expect(n.ce(0), times_name(jm.body.exprs[0], jn.body.exprs[0]),
             "left name");
    n.expect(n.ce(1), times_name(jm.body.exprs[1], jn.body.exprs[1]),
             "right name");
    n.expect(n.ce(2), ty_univ(), "type");
    return;
  }
  if (r == "univ/T-timeshat") {
    n.arity(2);
    const Judgement& jm = n.psame(0, F::HasType);
    const Judgement& jn = n.psame(1, F::HasType);
    n.expect(jm.body.exprs[1], ty_univ(), "left name type");
    n.expect(jn.body.exprs[1], ty_univ(), "right name type");
    n.concl_is(F::TypeEq);
    n.expect(n.ce(0), ty_of(times_name(jm.body.exprs[0], jn.body.exprs[0])),
             "left type");
    n.expect(n.ce(1),
             ty_prod(ty_of(jm.body.exprs[0]), ty_of(jn.body.exprs[0])),
             "right type");
    return;
  }

  // ---- classical predicate logic ---------------------------------------------
  if (r == "log/bot-form") {
    n.arity(1);
    n.psame(0, F::CtxValid);
    n.concl_is(F::IsProp);
    n.expect(n.ce(0), bot(), "proposition");
    return;
  }
  if (r == "log/exfalso") {
    n.arity(2);
    const Judgement& jp = n.psame(0, F::IsProp);
    const Judgement& jb = n.psame(1, F::Entails);
    n.expect(jb.body.exprs[0], bot(), "entailed absurdity");
    n.concl_is(F::Entails);
    n.ants_match(c.body.ants, jb.body.ants);
    n.expect(n.ce(0), jp.body.exprs[0], "proposition");
    return;
  }
  if (r == "log/imp-form") {
    n.arity(2);
    const Judgement& a = n.psame(0, F::IsProp);
    const Judgement& b = n.psame(1, F::IsProp);
    n.concl_is(F::IsProp);
    n.expect(n.ce(0), imp(a.body.exprs[0], b.body.exprs[0]), "implication");
    return;
  }
  if (r == "log/imp-form-eq") {
    n.arity(2);
    const Judgement& a = n.psame(0, F::PropEq);
    const Judgement& b = n.psame(1, F::PropEq);
    n.concl_is(F::PropEq);
    n.expect(n.ce(0), imp(a.body.exprs[0], b.body.exprs[0]), "left side");
    n.expect(n.ce(1), imp(a.body.exprs[1], b.body.exprs[1]), "right side");
    return;
  }
  if (r == "log/imp-intro") {
    n.arity(1);
    const Judgement& j = n.psame(0, F::Entails);
    prem(!j.body.ants.empty(), "log/imp-intro discharges the last antecedent");
    std::vector<ExprPtr> rest(j.body.ants.begin(), j.body.ants.end() - 1);
    n.concl_is(F::Entails);
    n.ants_match(c.body.ants, rest);
    n.expect(n.ce(0), imp(j.body.ants.back(), j.body.exprs[0]), "implication");
    return;
  }
  if (r == "log/imp-elim") {
    n.arity(2);
    const Judgement& ji = n.psame(0, F::Entails);
    const Judgement& ja = n.psame(1, F::Entails);
    n.ants_match(ji.body.ants, ja.body.ants);
    prem(ji.body.exprs[0]->kind == Kind::Imp,
         "log/imp-elim: major premise must entail an implication");
    n.expect(ja.body.exprs[0], ji.body.exprs[0]->kids[0], "minor premise");
    n.concl_is(F::Entails);
    n.ants_match(c.body.ants, ji.body.ants);
    n.expect(n.ce(0), ji.body.exprs[0]->kids[1], "conclusion");
    return;
  }
  if (r == "log/dn") {
    n.arity(1);
    const Judgement& j = n.psame(0, F::Entails);
    auto inner = match_not(j.body.exprs[0]);
    prem(inner.has_value(), "log/dn: premise must entail a negation");
    auto phi = match_not(*inner);
    prem(phi.has_value(), "log/dn: premise must entail a double negation");
    n.concl_is(F::Entails);
    n.ants_match(c.body.ants, j.body.ants);
    n.expect(n.ce(0), *phi, "proposition");
    return;
  }
  if (r == "log/forall-form") {
    n.arity(1);
    CtxEntry xe;
    const Judgement& j = n.pext(0, F::IsProp, xe);
    n.concl_is(F::IsProp);
    n.expect(n.ce(0), forall(xe.name, xe.type, j.body.exprs[0]),
             "quantification");
    return;
  }
  if (r == "log/forall-form-eq") {
    n.arity(2);
    const Judgement& ea = n.psame(0, F::TypeEq);
    CtxEntry xe;
    const Judgement& j = n.pext(1, F::PropEq, xe);
    n.expect(xe.type, ea.body.exprs[0], "bound-variable type");
    n.concl_is(F::PropEq);
    n.expect(n.ce(0), forall(xe.name, xe.type, j.body.exprs[0]), "left side");
    n.expect(n.ce(1), forall(xe.name, ea.body.exprs[1], j.body.exprs[1]),
             "right side");
    return;
  }
  if (r == "log/forall-intro") {
    n.concl_is(F::Entails);
    std::size_t m = c.body.ants.size();
    n.arity(m + 1);
    for (std::size_t i = 0; i < m; ++i) {
      const Judgement& j = n.psame(i, F::IsProp);
      n.expect(c.body.ants[i], j.body.exprs[0], "antecedent");
    }
    CtxEntry xe;
    const Judgement& j = n.pext(m, F::Entails, xe);
    n.ants_match(j.body.ants, c.body.ants);
    n.expect(n.ce(0), forall(xe.name, xe.type, j.body.exprs[0]),
             "quantified conclusion");
    return;
  }
  if (r == "log/forall-elim") {
    n.arity(2);
    const Judgement& jf = n.psame(0, F::Entails);
    const Judgement& jm = n.psame(1, F::HasType);
    prem(jf.body.exprs[0]->kind == Kind::Forall,
         "log/forall-elim: premise must entail a quantification");
    const ExprPtr& q = jf.body.exprs[0];
    n.expect(jm.body.exprs[1], q->kids[0], "instance type");
    n.concl_is(F::Entails);
    n.ants_match(c.body.ants, jf.body.ants);
    n.expect(n.ce(0), subst(q->kids[1], q->binders[0], jm.body.exprs[0]),
             "instance");
    return;
  }

  // ---- the propositional universe ----------------------------------------------
  if (r == "pu/V-form") {
    n.arity(1);
    const Judgement& j = n.psame(0, F::IsSmallProp);
    n.concl_is(F::IsProp);
    n.expect(n.ce(0), holds(j.body.exprs[0]), "reflection");
    return;
  }
  if (r == "pu/V-eq") {
    n.arity(1);
    const Judgement& j = n.psame(0, F::SmallPropEq);
    n.concl_is(F::PropEq);
    n.expect(n.ce(0), holds(j.body.exprs[0]), "left side");
    n.expect(n.ce(1), holds(j.body.exprs[1]), "right side");
    return;
  }
  if (r == "pu/bothat-form") {
    n.arity(1);
    n.psame(0, F::CtxValid);
    n.concl_is(F::IsSmallProp);
    n.expect(n.ce(0), bot_hat(), "small proposition");
    return;
  }
  if (r == "pu/V-bot") {
    n.arity(1);
    n.psame(0, F::CtxValid);
    n.concl_is(F::PropEq);
    n.expect(n.ce(0), holds(bot_hat()), "left side");
    n.expect(n.ce(1), bot(), "right side");
    return;
  }
  if (r == "pu/imphat-form") {
    n.arity(2);
    const Judgement& a = n.psame(0, F::IsSmallProp);
    const Judgement& b = n.psame(1, F::IsSmallProp);
    n.concl_is(F::IsSmallProp);
    n.expect(n.ce(0), imp_hat(a.body.exprs[0], b.body.exprs[0]),
             "small implication");
    return;
  }
  if (r == "pu/imphat-eq") {
    n.arity(2);
    const Judgement& a = n.psame(0, F::SmallPropEq);
    const Judgement& b = n.psame(1, F::SmallPropEq);
    n.concl_is(F::SmallPropEq);
    n.expect(n.ce(0), imp_hat(a.body.exprs[0], b.body.exprs[0]), "left side");
    n.expect(n.ce(1), imp_hat(a.body.exprs[1], b.body.exprs[1]), "right side");
    return;
  }
  if (r == "pu/V-imp") {
    n.arity(2);
    const Judgement& a = n.psame(0, F::IsSmallProp);
    const Judgement& b = n.psame(1, F::IsSmallProp);
    ExprPtr P = a.body.exprs[0], Q = b.body.exprs[0];
    n.concl_is(F::PropEq);
    n.expect(n.ce(0), holds(imp_hat(P, Q)), "left side");
    n.expect(n.ce(1), imp(holds(P), holds(Q)), "right side");
    return;
  }
  if (r == "pu/forallhat-form") {
    n.arity(1);
    CtxEntry xe;
    const Judgement& j = n.pext(0, F::IsSmallProp, xe);
    n.concl_is(F::IsSmallProp);
    prem(n.ce(0)->kind == Kind::ForallHat,
         "pu/forallhat-form: conclusion must be a small quantification");
    // the quantifier's name is read off the conclusion; the premise variable
    // must live at the type it names
    ExprPtr M = n.ce(0)->kids[0];
    prem(eq_mod_ty(xe.type, ty_of(M)),
         "pu/forallhat-form: variable must be at the named type");
    n.expect(n.ce(0), forall_hat(xe.name, M, j.body.exprs[0]),
             "small quantification");
    return;
  }
  if (r == "pu/forallhat-eq") {
    n.arity(2);
    const Judgement& em = n.psame(0, F::TermEq);
    n.expect(em.body.exprs[2], ty_univ(), "name type");
    CtxEntry xe;
    const Judgement& j = n.pext(1, F::SmallPropEq, xe);
    prem(eq_mod_ty(xe.type, ty_of(em.body.exprs[0])),
         "pu/forallhat-eq: domain must be T of the equation's left name");
    n.concl_is(F::SmallPropEq);
    n.expect(n.ce(0),
             forall_hat(xe.name, em.body.exprs[0], j.body.exprs[0]),
             "left side");
    n.expect(n.ce(1),
             forall_hat(xe.name, em.body.exprs[1], j.body.exprs[1]),
             "right side");
    return;
  }
  if (r == "pu/V-forall") {
    n.arity(1);
    CtxEntry xe;
    const Judgement& j = n.pext(0, F::IsSmallProp, xe);
    n.concl_is(F::PropEq);
    prem(n.ce(0)->kind == Kind::Holds &&
             n.ce(0)->kids[0]->kind == Kind::ForallHat,
         "pu/V-forall: left side must be a reflected small quantification");
    ExprPtr M = n.ce(0)->kids[0]->kids[0];
    ExprPtr P = j.body.exprs[0];
    prem(eq_mod_ty(xe.type, ty_of(M)),
         "pu/V-forall: variable must be at the named type");
    n.expect(n.ce(0), holds(forall_hat(xe.name, M, P)), "left side");
    n.expect(n.ce(1), forall(xe.name, ty_of(M), holds(P)), "right side");
    return;
  }
  // universe-free tower: small quantification is over the token for N only
  if (r == "t2/forallhat-form") {
    n.arity(1);
    CtxEntry xe;
    const Judgement& j = n.pext(0, F::IsSmallProp, xe);
    prem(ty_kind(xe.type) == Kind::TyNat, "t2/forallhat-form: domain is N");
    n.concl_is(F::IsSmallProp);
    n.expect(n.ce(0), forall_hat(xe.name, nat_name(), j.body.exprs[0]),
             "small quantification");
    return;
  }
  if (r == "t2/forallhat-eq") {
    n.arity(1);
    CtxEntry xe;
    const Judgement& j = n.pext(0, F::SmallPropEq, xe);
    prem(ty_kind(xe.type) == Kind::TyNat, "t2/forallhat-eq: domain is N");
    n.concl_is(F::SmallPropEq);
    n.expect(n.ce(0), forall_hat(xe.name, nat_name(), j.body.exprs[0]),
             "left side");
    n.expect(n.ce(1), forall_hat(xe.name, nat_name(), j.body.exprs[1]),
             "right side");
    return;
  }
  if (r == "t2/V-forall") {
    n.arity(1);
    CtxEntry xe;
    const Judgement& j = n.pext(0, F::IsSmallProp, xe);
    prem(ty_kind(xe.type) == Kind::TyNat, "t2/V-forall: domain is N");
    ExprPtr P = j.body.exprs[0];
    n.concl_is(F::PropEq);
    n.expect(n.ce(0), holds(forall_hat(xe.name, nat_name(), P)), "left side");
    n.expect(n.ce(1), forall(xe.name, ty_nat(), holds(P)), "right side");
    return;
  }

  // ---- equality at names ----------------------------------------------------
  // General forms: equality labelled by a name N, terms at T(N); the
  // universe-free tower's forms fix the label to the token for N and the
  // terms to the type N.  Labels in dependent positions are compared modulo
  // the type computation equations.
  bool t2eq = r.rfind("t2/eq", 0) == 0 || r == "t2/subst" ||
              r.rfind("t2/eqhat", 0) == 0 || r == "t2/V-eqhat";
  auto elem_ty = [&](const ExprPtr& label) {
    return t2eq ? ty_nat() : ty_of(label);
  };
  if (r == "eq/form" || r == "t2/eq-form") {
    ExprPtr label;
    std::size_t base = 0;
    if (t2eq) {
      n.arity(2);
      label = nat_name();
    } else {
      n.arity(3);
      const Judgement& jn = n.psame(0, F::HasType);
      n.expect(jn.body.exprs[1], ty_univ(), "name type");
      label = jn.body.exprs[0];
      base = 1;
    }
    const Judgement& m1 = n.psame(base, F::HasType);
    const Judgement& m2 = n.psame(base + 1, F::HasType);
    n.expect(m1.body.exprs[1], elem_ty(label), "first term's type");
    n.expect(m2.body.exprs[1], elem_ty(label), "second term's type");
    n.concl_is(F::IsProp);
    n.expect(n.ce(0), eq(m1.body.exprs[0], m2.body.exprs[0], label),
             "equation");
    return;
  }
  if (r == "eq/form-eq" || r == "t2/eq-form-eq") {
    n.arity(t2eq ? 2 : 3);
    std::size_t base = 0;
    ExprPtr labelL, labelR;
    if (!t2eq) {
      const Judgement& en = n.psame(0, F::TermEq);
      n.expect(en.body.exprs[2], ty_univ(), "name type");
      labelL = en.body.exprs[0];
      labelR = en.body.exprs[1];
      base = 1;
    } else {
      labelL = labelR = nat_name();
    }
    const Judgement& m1 = n.psame(base, F::TermEq);
    const Judgement& m2 = n.psame(base + 1, F::TermEq);
    n.expect(m1.body.exprs[2], elem_ty(labelL), "first equation's type");
    n.expect(m2.body.exprs[2], elem_ty(labelL), "second equation's type");
    n.concl_is(F::PropEq);
    n.expect(n.ce(0), eq(m1.body.exprs[0], m2.body.exprs[0], labelL),
             "left side");
    n.expect(n.ce(1), eq(m1.body.exprs[1], m2.body.exprs[1], labelR),
             "right side");
    return;
  }
  if (r == "eq/refl" || r == "t2/eq-refl") {
    n.concl_is(F::Entails);
    std::size_t m = c.body.ants.size();
    n.arity(m + 1);
    for (std::size_t i = 0; i < m; ++i) {
      const Judgement& j = n.psame(i, F::IsProp);
      n.expect(c.body.ants[i], j.body.exprs[0], "antecedent");
    }
    const Judgement& jm = n.psame(m, F::HasType);
    prem(n.ce(0)->kind == Kind::Eq, r + ": conclusion must be an equation");
    ExprPtr label = t2eq ? nat_name() : n.ce(0)->kids[2];
    if (t2eq)
      prem(eq_mod_ty(n.ce(0)->kids[2], nat_name()),
           r + ": label must be the token for N");
    n.expect(jm.body.exprs[1], elem_ty(label), "term's type");
    n.expect(n.ce(0), eq(jm.body.exprs[0], jm.body.exprs[0], label),
             "reflexive equation");
    return;
  }
  if (r == "eq/subst" || r == "t2/subst") {
    n.arity(3);
    CtxEntry xe;
    const Judgement& jp = n.pext(0, F::IsProp, xe);
    ExprPtr phi = jp.body.exprs[0];
    check_subst_prop(n.sys, phi);
    const Judgement& je = n.psame(1, F::Entails);
    prem(je.body.exprs[0]->kind == Kind::Eq,
         r + ": second premise must entail an equation");
    const ExprPtr& eqn = je.body.exprs[0];
    ExprPtr label = eqn->kids[2];
    if (t2eq)
      prem(label->kind == Kind::NatName, r + ": label must be the token for N");
    prem(eq_mod_ty(xe.type, elem_ty(label)),
         r + ": variable must be at the equation's type");
    const Judgement& ji = n.psame(2, F::Entails);
    n.ants_match(je.body.ants, ji.body.ants);
    n.expect(ji.body.exprs[0], subst(phi, xe.name, eqn->kids[0]),
             "left instance");
    n.concl_is(F::Entails);
    n.ants_match(c.body.ants, je.body.ants);
    n.expect(n.ce(0), subst(phi, xe.name, eqn->kids[1]), "right instance");
    return;
  }
  if (r == "eq/eqhat-form" || r == "t2/eqhat-form") {
    ExprPtr label;
    std::size_t base = 0;
    if (t2eq) {
      n.arity(2);
      label = nat_name();
    } else {
      n.arity(3);
      const Judgement& jn = n.psame(0, F::HasType);
      n.expect(jn.body.exprs[1], ty_univ(), "name type");
      label = jn.body.exprs[0];
      base = 1;
    }
    const Judgement& m1 = n.psame(base, F::HasType);
    const Judgement& m2 = n.psame(base + 1, F::HasType);
    n.expect(m1.body.exprs[1], elem_ty(label), "first term's type");
    n.expect(m2.body.exprs[1], elem_ty(label), "second term's type");
    n.concl_is(F::IsSmallProp);
    n.expect(n.ce(0), eq_hat(m1.body.exprs[0], m2.body.exprs[0], label),
             "small equation");
    return;
  }
  if (r == "eq/eqhat-eq" || r == "t2/eqhat-eq") {
    n.arity(t2eq ? 2 : 3);
    std::size_t base = 0;
    ExprPtr labelL, labelR;
    if (!t2eq) {
      const Judgement& en = n.psame(0, F::TermEq);
      n.expect(en.body.exprs[2], ty_univ(), "name type");
      labelL = en.body.exprs[0];
      labelR = en.body.exprs[1];
      base = 1;
    } else {
      labelL = labelR = nat_name();
    }
    const Judgement& m1 = n.psame(base, F::TermEq);
    const Judgement& m2 = n.psame(base + 1, F::TermEq);
    n.expect(m1.body.exprs[2], elem_ty(labelL), "first equation's type");
    n.expect(m2.body.exprs[2], elem_ty(labelL), "second equation's type");
    n.concl_is(F::SmallPropEq);
    n.expect(n.ce(0), eq_hat(m1.body.exprs[0], m2.body.exprs[0], labelL),
             "left side");
    n.expect(n.ce(1), eq_hat(m1.body.exprs[1], m2.body.exprs[1], labelR),
             "right side");
    return;
  }
  if (r == "eq/V-eqhat" || r == "t2/V-eqhat") {
    ExprPtr label;
    std::size_t base = 0;
    if (t2eq) {
      n.arity(2);
      label = nat_name();
    } else {
      n.arity(3);
      const Judgement& jn = n.psame(0, F::HasType);
      n.expect(jn.body.exprs[1], ty_univ(), "name type");
      label = jn.body.exprs[0];
      base = 1;
    }
    const Judgement& m1 = n.psame(base, F::HasType);
    const Judgement& m2 = n.psame(base + 1, F::HasType);
    n.expect(m1.body.exprs[1], elem_ty(label), "first term's type");
    n.expect(m2.body.exprs[1], elem_ty(label), "second term's type");
    ExprPtr M1 = m1.body.exprs[0], M2 = m2.body.exprs[0];
    n.concl_is(F::PropEq);
    n.expect(n.ce(0), holds(eq_hat(M1, M2, label)), "left side");
    n.expect(n.ce(1), eq(M1, M2, label), "right side");
    return;
  }

  // ---- discrimination --------------------------------------------------------
  if (r == "ltt0/P3") {
    n.concl_is(F::Entails);
    std::size_t m = c.body.ants.size();
    n.arity(m + 1);
    for (std::size_t i = 0; i < m; ++i) {
      const Judgement& j = n.psame(i, F::IsProp);
      n.expect(c.body.ants[i], j.body.exprs[0], "antecedent");
    }
    const Judgement& jm = n.psame(m, F::HasType);
    n.expect(jm.body.exprs[1], ty_nat(), "witness type");
    ExprPtr M = jm.body.exprs[0];
    n.expect(n.ce(0), p_not(eq(zero(), succ(M), nat_name())),
             "discriminated equation");
    return;
  }

  fail(DerivReason::UnknownRule, "unknown rule id '" + r + "'");
}

}  // namespace rules_detail

// the full catalog, for documentation and coverage tests
inline const std::vector<std::string>& rule_catalog() {
  static const std::vector<std::string> ids = {
      "str/valid-empty", "str/ctx-ext", "str/var",
      "str/term-refl", "str/term-sym", "str/term-trans",
      "str/type-refl", "str/type-sym", "str/type-trans",
      "str/small-refl", "str/small-sym", "str/small-trans",
      "str/prop-refl", "str/prop-sym", "str/prop-trans",
      "str/conv", "str/conv-eq", "str/assume", "str/prop-rewrite",
      "nat/form", "nat/zero", "nat/succ", "nat/succ-eq",
      "nat/EN", "nat/EN-eq", "nat/EN-0", "nat/EN-s", "nat/IndN",
      "t2/R", "t2/R-eq", "t2/R-0", "t2/R-s",
      "pair/form", "pair/form-eq", "pair/intro", "pair/intro-eq",
      "pair/proj1", "pair/proj1-eq", "pair/proj2", "pair/proj2-eq",
      "pair/beta1", "pair/beta2", "pair/eta",
      "fn/form", "fn/form-eq", "fn/lam", "fn/lam-eq",
      "fn/app", "fn/app-eq", "fn/beta", "fn/eta",
      "set/form", "set/form-eq", "set/comp", "set/comp-eq",
      "set/inhat", "set/inhat-eq", "set/comp-beta",
      "univ/form", "univ/T-form", "univ/T-eq", "univ/nhat", "univ/T-nhat",
      "univ/timeshat", "univ/timeshat-eq", "univ/T-timeshat",
      "log/bot-form", "log/exfalso", "log/imp-form", "log/imp-form-eq",
      "log/imp-intro", "log/imp-elim", "log/dn",
      "log/forall-form", "log/forall-form-eq",
      "log/forall-intro", "log/forall-elim",
      "pu/V-form", "pu/V-eq", "pu/bothat-form", "pu/V-bot",
      "pu/imphat-form", "pu/imphat-eq", "pu/V-imp",
      "pu/forallhat-form", "pu/forallhat-eq", "pu/V-forall",
      "t2/forallhat-form", "t2/forallhat-eq", "t2/V-forall",
      "eq/form", "eq/form-eq", "eq/refl", "eq/subst",
      "eq/eqhat-form", "eq/eqhat-eq", "eq/V-eqhat",
      "t2/eq-form", "t2/eq-form-eq", "t2/eq-refl", "t2/subst",
      "t2/eqhat-form", "t2/eqhat-eq", "t2/V-eqhat",
      "ltt0/P3",
  };
  return ids;
}

inline bool rule_in_system(SystemId sys, const std::string& id) {
  return rules_detail::rule_admitted(sys, id);
}

}  // namespace ltt
