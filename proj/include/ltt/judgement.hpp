// Contexts, the ten judgement forms, and derivation trees, with their
// s-expression serialization:
//
//   ctx        ::= (ctx (x type) ...)
//   judgement  ::= (valid) | (is-type A) | (type-eq A B)
//                | (has-type M A) | (term-eq M N A)
//                | (small P) | (small-eq P Q)
//                | (prop phi) | (prop-eq phi psi)
//                | (entails (phi ...) psi)
//   derivation ::= (rule <rule-id> (params (k v) ...) (premises D ...)
//                   (concl ctx judgement))
//
// Params are an open key/value record consumed by rule side conditions; most
// rules reconstruct every schematic expression from their premises and need
// none.
#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ltt/expr.hpp"
#include "ltt/sexpr.hpp"

namespace ltt {

struct CtxEntry {
  std::string name;
  ExprPtr type;
};
using Context = std::vector<CtxEntry>;

inline const ExprPtr* ctx_lookup(const Context& g, const std::string& x) {
  for (const auto& e : g)
    if (e.name == x) return &e.type;
  return nullptr;
}

inline bool ctx_distinct(const Context& g) {
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j)
      if (g[i].name == g[j].name) return false;
  return true;
}

enum class JForm {
  CtxValid, IsType, TypeEq, HasType, TermEq,
  IsSmallProp, SmallPropEq, IsProp, PropEq, Entails,
};

struct JudgementBody {
  JForm form;
  std::vector<ExprPtr> exprs;  // form-specific slots, in display order
  std::vector<ExprPtr> ants;   // Entails only: the antecedent list
};

inline JudgementBody j_valid() { return {JForm::CtxValid, {}, {}}; }
inline JudgementBody j_is_type(ExprPtr a) { return {JForm::IsType, {a}, {}}; }
inline JudgementBody j_type_eq(ExprPtr a, ExprPtr b) { return {JForm::TypeEq, {a, b}, {}}; }
inline JudgementBody j_has_type(ExprPtr m, ExprPtr a) { return {JForm::HasType, {m, a}, {}}; }
inline JudgementBody j_term_eq(ExprPtr m, ExprPtr n, ExprPtr a) {
  return {JForm::TermEq, {m, n, a}, {}};
}
inline JudgementBody j_is_small(ExprPtr p) { return {JForm::IsSmallProp, {p}, {}}; }
inline JudgementBody j_small_eq(ExprPtr p, ExprPtr q) { return {JForm::SmallPropEq, {p, q}, {}}; }
inline JudgementBody j_is_prop(ExprPtr p) { return {JForm::IsProp, {p}, {}}; }
inline JudgementBody j_prop_eq(ExprPtr p, ExprPtr q) { return {JForm::PropEq, {p, q}, {}}; }
inline JudgementBody j_entails(std::vector<ExprPtr> phi, ExprPtr psi) {
  return {JForm::Entails, {psi}, std::move(phi)};
}

struct Judgement {
  Context ctx;
  JudgementBody body;
};

inline bool body_alpha_eq(const JudgementBody& a, const JudgementBody& b) {
  if (a.form != b.form) return false;
  if (a.exprs.size() != b.exprs.size() || a.ants.size() != b.ants.size())
    return false;
  for (std::size_t i = 0; i < a.exprs.size(); ++i)
    if (!alpha_eq(a.exprs[i], b.exprs[i])) return false;
  for (std::size_t i = 0; i < a.ants.size(); ++i)
    if (!alpha_eq(a.ants[i], b.ants[i])) return false;
  return true;
}

inline bool ctx_alpha_eq(const Context& a, const Context& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].name != b[i].name || !alpha_eq(a[i].type, b[i].type)) return false;
  return true;
}

inline bool judgement_alpha_eq(const Judgement& a, const Judgement& b) {
  return ctx_alpha_eq(a.ctx, b.ctx) && body_alpha_eq(a.body, b.body);
}

struct Derivation;
using DerivPtr = std::shared_ptr<const Derivation>;

struct Derivation {
  std::string rule;
  std::map<std::string, SexpPtr> params;
  std::vector<DerivPtr> premises;
  Judgement conclusion;
};

inline DerivPtr mk_deriv(std::string rule, std::vector<DerivPtr> premises,
                         Judgement concl,
                         std::map<std::string, SexpPtr> params = {}) {
  return std::make_shared<Derivation>(Derivation{
      std::move(rule), std::move(params), std::move(premises),
      std::move(concl)});
}

// -- serialization ----------------------------------------------------------

inline SexpPtr ctx_to_sexp(const Context& g) {
  std::vector<SexpPtr> xs{s_atom("ctx")};
  for (const auto& e : g)
    xs.push_back(s_list({s_atom(e.name), expr_to_sexp(e.type)}));
  return s_list(std::move(xs));
}

inline SexpPtr body_to_sexp(const JudgementBody& j) {
  auto K = [](const ExprPtr& e) { return expr_to_sexp(e); };
  switch (j.form) {
    case JForm::CtxValid: return s_list({s_atom("valid")});
    case JForm::IsType: return s_list({s_atom("is-type"), K(j.exprs[0])});
    case JForm::TypeEq:
      return s_list({s_atom("type-eq"), K(j.exprs[0]), K(j.exprs[1])});
    case JForm::HasType:
      return s_list({s_atom("has-type"), K(j.exprs[0]), K(j.exprs[1])});
    case JForm::TermEq:
      return s_list({s_atom("term-eq"), K(j.exprs[0]), K(j.exprs[1]), K(j.exprs[2])});
    case JForm::IsSmallProp: return s_list({s_atom("small"), K(j.exprs[0])});
    case JForm::SmallPropEq:
      return s_list({s_atom("small-eq"), K(j.exprs[0]), K(j.exprs[1])});
    case JForm::IsProp: return s_list({s_atom("prop"), K(j.exprs[0])});
    case JForm::PropEq:
      return s_list({s_atom("prop-eq"), K(j.exprs[0]), K(j.exprs[1])});
    case JForm::Entails: {
      std::vector<SexpPtr> phis;
      for (const auto& p : j.ants) phis.push_back(K(p));
      return s_list({s_atom("entails"), s_list(std::move(phis)), K(j.exprs[0])});
    }
  }
  throw std::logic_error("body_to_sexp: unhandled form");
}

inline SexpPtr deriv_to_sexp(const DerivPtr& d) {
  std::vector<SexpPtr> ps{s_atom("params")};
  for (const auto& [k, v] : d->params) ps.push_back(s_list({s_atom(k), v}));
  std::vector<SexpPtr> prem{s_atom("premises")};
  for (const auto& p : d->premises) prem.push_back(deriv_to_sexp(p));
  return s_list({s_atom("rule"), s_atom(d->rule), s_list(std::move(ps)),
                 s_list(std::move(prem)),
                 s_list({s_atom("concl"), ctx_to_sexp(d->conclusion.ctx),
                         body_to_sexp(d->conclusion.body)})});
}

namespace detail {
inline void expect_head(const SexpPtr& s, const char* h) {
  if (s->is_atom() || s->list().empty() || !s->list()[0]->is_atom() ||
      s->list()[0]->atom() != h)
    throw ParseError(std::string("expected (") + h + " ...)");
}
}  // namespace detail

inline Context sexp_to_ctx(const SexpPtr& s) {
  detail::expect_head(s, "ctx");
  Context g;
  for (std::size_t i = 1; i < s->list().size(); ++i) {
    const SexpPtr& e = s->list()[i];
    if (e->is_atom() || e->list().size() != 2 || !e->list()[0]->is_atom())
      throw ParseError("context entry must be (x type)");
    g.push_back({e->list()[0]->atom(),
                 sexp_to_expr(e->list()[1], SynClass::Type)});
  }
  return g;
}

inline JudgementBody sexp_to_body(const SexpPtr& s) {
  if (s->is_atom() || s->list().empty() || !s->list()[0]->is_atom())
    throw ParseError("expected a judgement");
  const std::string& h = s->list()[0]->atom();
  auto E = [&](std::size_t i, SynClass c) {
    return sexp_to_expr(detail::arg(s, i, h.c_str()), c);
  };
  using D = SynClass;
  if (h == "valid") { detail::expect_len(s, 1, "valid"); return j_valid(); }
  if (h == "is-type") { detail::expect_len(s, 2, "is-type"); return j_is_type(E(1, D::Type)); }
  if (h == "type-eq") { detail::expect_len(s, 3, "type-eq"); return j_type_eq(E(1, D::Type), E(2, D::Type)); }
  if (h == "has-type") { detail::expect_len(s, 3, "has-type"); return j_has_type(E(1, D::Term), E(2, D::Type)); }
  if (h == "term-eq") { detail::expect_len(s, 4, "term-eq"); return j_term_eq(E(1, D::Term), E(2, D::Term), E(3, D::Type)); }
  if (h == "small") { detail::expect_len(s, 2, "small"); return j_is_small(E(1, D::Small)); }
  if (h == "small-eq") { detail::expect_len(s, 3, "small-eq"); return j_small_eq(E(1, D::Small), E(2, D::Small)); }
  if (h == "prop") { detail::expect_len(s, 2, "prop"); return j_is_prop(E(1, D::Prop)); }
  if (h == "prop-eq") { detail::expect_len(s, 3, "prop-eq"); return j_prop_eq(E(1, D::Prop), E(2, D::Prop)); }
  if (h == "entails") {
    detail::expect_len(s, 3, "entails");
    const SexpPtr& phis = s->list()[1];
    if (phis->is_atom()) throw ParseError("entails: expected antecedent list");
    std::vector<ExprPtr> ants;
    for (const auto& p : phis->list())
      ants.push_back(sexp_to_expr(p, D::Prop));
    return j_entails(std::move(ants), E(2, D::Prop));
  }
  throw ParseError("unknown judgement form '" + h + "'");
}

inline DerivPtr sexp_to_deriv(const SexpPtr& s) {
  detail::expect_head(s, "rule");
  if (s->list().size() != 5 || !s->list()[1]->is_atom())
    throw ParseError("expected (rule id (params...) (premises...) (concl...))");
  auto d = std::make_shared<Derivation>();
  auto& mut = const_cast<Derivation&>(*d);
  mut.rule = s->list()[1]->atom();
  const SexpPtr& ps = s->list()[2];
  detail::expect_head(ps, "params");
  for (std::size_t i = 1; i < ps->list().size(); ++i) {
    const SexpPtr& kv = ps->list()[i];
    if (kv->is_atom() || kv->list().size() != 2 || !kv->list()[0]->is_atom())
      throw ParseError("param must be (key value)");
    mut.params[kv->list()[0]->atom()] = kv->list()[1];
  }
  const SexpPtr& prem = s->list()[3];
  detail::expect_head(prem, "premises");
  for (std::size_t i = 1; i < prem->list().size(); ++i)
    mut.premises.push_back(sexp_to_deriv(prem->list()[i]));
  const SexpPtr& concl = s->list()[4];
  detail::expect_head(concl, "concl");
  if (concl->list().size() != 3)
    throw ParseError("expected (concl ctx judgement)");
  mut.conclusion.ctx = sexp_to_ctx(concl->list()[1]);
  mut.conclusion.body = sexp_to_body(concl->list()[2]);
  return d;
}

inline std::string print_deriv(const DerivPtr& d) { return print_sexp(deriv_to_sexp(d)); }
inline DerivPtr parse_deriv(const std::string& s) { return sexp_to_deriv(parse_sexp(s)); }

}  // namespace ltt
