// Second-order arithmetic: axiom schemas, the exact standard-model term
// evaluator, the bounded three-valued formula oracle, and the PA-valuation
// translation that eliminates set variables.
//
// The bounded oracle approximates standard-model truth.  Number quantifiers
// scan 0..bound and additionally evaluate their matrix in a "tail regime"
// where the quantified variable stands for an arbitrary value above the
// bound; equation atoms decide the tail by comparing polynomials (exact when
// the polynomials coincide or one dominates; a root bound settles the
// single-variable case), membership atoms by monotone growth past the finite
// set's maximum.  The result is strong-Kleene three-valued and monotone in
// the bound: a definite verdict never flips as the bound grows.
//
// The evaluator recognises the definitional expansions of and/not/exists and
// exploits them for short-circuiting and witness propagation (solving a
// linear conjunct for the quantified variable instead of scanning); both are
// pure optimisations with the same verdicts as the naive scan.
#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ltt/connectives.hpp"
#include "ltt/expr.hpp"

namespace ltt {

struct SoaError : std::runtime_error {
  std::string code;
  SoaError(std::string c, const std::string& msg)
      : std::runtime_error(msg), code(std::move(c)) {}
};

// -- basic predicates and schemas -------------------------------------------

inline bool is_arithmetic(const ExprPtr& phi) {
  if (phi->kind == Kind::ForallSet) return false;
  for (const auto& k : phi->kids)
    if (!is_arithmetic(k)) return false;
  return true;
}

// The six displayed Peano axioms, as open formulas.
inline std::vector<ExprPtr> peano_axioms() {
  ExprPtr x = var("x"), y = var("y");
  return {
      a_neq(succ(x), zero()),
      imp(s_eq(succ(x), succ(y)), s_eq(x, y)),
      s_eq(plus(x, zero()), x),
      s_eq(plus(x, succ(y)), succ(plus(x, y))),
      s_eq(times(x, zero()), zero()),
      s_eq(times(x, succ(y)), plus(times(x, y), x)),
  };
}

inline ExprPtr set_induction_axiom(const std::string& X = "X") {
  ExprPtr sx = set_var(X);
  ExprPtr step = forall_num("x", imp(s_in(var("x"), sx), s_in(succ(var("x")), sx)));
  ExprPtr concl = forall_num("x", s_in(var("x"), sx));
  return imp(s_in(zero(), sx), imp(step, concl));
}

inline ExprPtr comprehension_instance(const ExprPtr& phi, const std::string& X,
                                      const std::string& x = "x") {
  if (!is_arithmetic(phi))
    throw SoaError("SchemaViolation", "comprehension body must be arithmetic");
  if (free_vars(phi).set.count(X))
    throw SoaError("SchemaViolation",
                   "comprehension set variable occurs free in the body");
  return a_exists_set(
      X, forall_num(x, a_iff(s_in(var(x), set_var(X)), phi)));
}

inline ExprPtr full_induction_instance(const ExprPtr& phi, const std::string& x) {
  ExprPtr base = subst(phi, x, zero());
  ExprPtr step = forall_num(x, imp(phi, subst(phi, x, succ(var(x)))));
  return imp(base, imp(step, forall_num(x, phi)));
}

// -- exact term evaluation --------------------------------------------------

using NumEnv = std::map<std::string, mpz_class>;

inline mpz_class eval_term(const ExprPtr& t, const NumEnv& env) {
  switch (t->kind) {
    case Kind::Var: {
      auto it = env.find(t->name);
      if (it == env.end())
        throw SoaError("UnboundVariable", "unbound number variable " + t->name);
      return it->second;
    }
    case Kind::Zero: return 0;
    case Kind::Succ: return eval_term(t->kids[0], env) + 1;
    case Kind::Plus: return eval_term(t->kids[0], env) + eval_term(t->kids[1], env);
    case Kind::Times: return eval_term(t->kids[0], env) * eval_term(t->kids[1], env);
    default:
      throw SoaError("NotATerm", "not an arithmetic term");
  }
}

// -- bounded three-valued formula evaluation --------------------------------

enum class Tri { False, Unknown, True };

inline Tri tri_not(Tri a) {
  if (a == Tri::True) return Tri::False;
  if (a == Tri::False) return Tri::True;
  return Tri::Unknown;
}
inline Tri tri_and(Tri a, Tri b) {
  if (a == Tri::False || b == Tri::False) return Tri::False;
  if (a == Tri::True && b == Tri::True) return Tri::True;
  return Tri::Unknown;
}
inline Tri tri_or(Tri a, Tri b) {
  if (a == Tri::True || b == Tri::True) return Tri::True;
  if (a == Tri::False && b == Tri::False) return Tri::False;
  return Tri::Unknown;
}
inline Tri tri_imp(Tri a, Tri b) { return tri_or(tri_not(a), b); }

// finite-set environment for set variables: the set is exactly the listed
// members
using FiniteSet = std::set<mpz_class>;
using SetEnv = std::map<std::string, FiniteSet>;

namespace soa_detail {

// A multivariate polynomial over "tail variables" (quantified variables in
// the regime "some value above the bound").  Environment values are
// polynomials: an exact natural is a constant polynomial, a tail-regime
// variable is a fresh indeterminate, and a symbolically pinned witness can
// be any polynomial in the live indeterminates.
using Mono = std::map<std::string, unsigned>;
using Poly = std::map<Mono, mpz_class>;

using Env3 = std::map<std::string, Poly>;

inline Poly poly_const(mpz_class c) {
  Poly p;
  if (c != 0) p[{}] = std::move(c);
  return p;
}
inline Poly poly_add(const Poly& a, const Poly& b) {
  Poly r = a;
  for (const auto& [m, c] : b) {
    r[m] += c;
    if (r[m] == 0) r.erase(m);
  }
  return r;
}
inline Poly poly_mul(const Poly& a, const Poly& b) {
  Poly r;
  for (const auto& [m1, c1] : a)
    for (const auto& [m2, c2] : b) {
      Mono m = m1;
      for (const auto& [v, e] : m2) m[v] += e;
      r[m] += c1 * c2;
      if (r[m] == 0) r.erase(m);
    }
  return r;
}

inline Poly term_poly(const ExprPtr& t, const Env3& env) {
  switch (t->kind) {
    case Kind::Var: {
      auto it = env.find(t->name);
      if (it == env.end())
        throw SoaError("UnboundVariable", "unbound number variable " + t->name);
      return it->second;
    }
    case Kind::Zero: return poly_const(0);
    case Kind::Succ:
      return poly_add(term_poly(t->kids[0], env), poly_const(1));
    case Kind::Plus:
      return poly_add(term_poly(t->kids[0], env), term_poly(t->kids[1], env));
    case Kind::Times:
      return poly_mul(term_poly(t->kids[0], env), term_poly(t->kids[1], env));
    default:
      throw SoaError("NotATerm", "not an arithmetic term");
  }
}

inline bool poly_is_const(const Poly& p, mpz_class* out = nullptr) {
  if (p.empty()) { if (out) *out = 0; return true; }
  if (p.size() == 1 && p.begin()->first.empty()) {
    if (out) *out = p.begin()->second;
    return true;
  }
  return false;
}

// minimum value of a nat-coefficient polynomial when every large variable is
// exactly bound+1 (the polynomial is monotone in each variable)
inline mpz_class poly_min_beyond(const Poly& p, const mpz_class& bound) {
  mpz_class v = 0, base = bound + 1;
  for (const auto& [m, c] : p) {
    mpz_class t = c;
    for (const auto& [_, e] : m)
      for (unsigned i = 0; i < e; ++i) t *= base;
    v += t;
  }
  return v;
}

// verdict of the equation p = q for ALL assignments of the large variables
// to values > bound (True / False when constant, Unknown otherwise)
inline Tri eq_tail(const Poly& p, const Poly& q, const mpz_class& bound) {
  if (p == q) return Tri::True;
  // difference h = p - q with integer coefficients
  Poly h = p;
  bool has_pos = false, has_neg = false;
  for (const auto& [m, c] : q) {
    h[m] -= c;
    if (h[m] == 0) h.erase(m);
  }
  std::set<std::string> vars;
  for (const auto& [m, c] : h) {
    if (c > 0 && !m.empty()) has_pos = true;
    if (c < 0 && !m.empty()) has_neg = true;
    for (const auto& [v, e] : m) vars.insert(v);
  }
  mpz_class c0 = h.count(Mono{}) ? h.at(Mono{}) : 0;
  if (!has_neg && (has_pos || c0 > 0) && c0 >= 0) return Tri::False;
  if (!has_pos && (has_neg || c0 < 0) && c0 <= 0) return Tri::False;
  if (!has_neg && c0 < 0) {
    // every large variable exceeds the bound, so the non-constant part is at
    // least its value at bound+1 everywhere in the tail
    Poly hp = h;
    hp.erase(Mono{});
    if (poly_min_beyond(hp, bound) > -c0) return Tri::False;
  }
  if (!has_pos && c0 > 0) {
    Poly hn;
    for (const auto& [m, c] : h)
      if (!m.empty()) hn[m] = -c;
    if (poly_min_beyond(hn, bound) > c0) return Tri::False;
  }
  if (vars.size() == 1) {
    // univariate: integer roots are bounded; beyond the bound the sign is
    // that of the leading coefficient
    const std::string& x = *vars.begin();
    std::map<unsigned, mpz_class> coeff;
    for (const auto& [m, c] : h) coeff[m.empty() ? 0 : m.at(x)] = c;
    unsigned deg = coeff.rbegin()->first;
    mpz_class lead = coeff.rbegin()->second, maxc = 0;
    for (const auto& [e, c] : coeff)
      if (e < deg) maxc = std::max(maxc, mpz_class(abs(c)));
    // Cauchy bound: every root has |r| <= 1 + max|a_i| / |a_deg|
    mpz_class root_bound = 1 + maxc / mpz_class(abs(lead)) + 1;
    if (bound >= root_bound) return Tri::False;
  }
  return Tri::Unknown;
}

struct Evaluator {
  SetEnv envS;
  mpz_class bound;
  unsigned long tail_ctr = 0;

  static Poly poly_var(const std::string& x) {
    Poly p;
    p[Mono{{x, 1}}] = 1;
    return p;
  }

  // fresh indeterminate for a variable entering the tail regime; the name is
  // decorated so nested scopes reusing a binder name stay distinct
  Poly fresh_tail(const std::string& x) {
    return poly_var(x + "!" + std::to_string(tail_ctr++));
  }

  Tri atom_eq(const ExprPtr& e, const Env3& env) {
    Poly p = term_poly(e->kids[0], env), q = term_poly(e->kids[1], env);
    mpz_class pv, qv;
    if (poly_is_const(p, &pv) && poly_is_const(q, &qv))
      return pv == qv ? Tri::True : Tri::False;
    return eq_tail(p, q, bound);
  }

  Tri atom_in(const ExprPtr& e, const Env3& env) {
    auto it = envS.find(e->kids[1]->name);
    if (it == envS.end())
      throw SoaError("UnboundVariable",
                     "unbound set variable " + e->kids[1]->name);
    const FiniteSet& s = it->second;
    Poly p = term_poly(e->kids[0], env);
    mpz_class v;
    if (poly_is_const(p, &v)) return s.count(v) ? Tri::True : Tri::False;
    // tail regime: past the set's maximum, membership is false forever
    mpz_class mx = s.empty() ? mpz_class(-1) : *s.rbegin();
    if (poly_min_beyond(p, bound) > mx) return Tri::False;
    return Tri::Unknown;
  }

  // flatten the definitional-and spine
  void conjuncts(const ExprPtr& e, std::vector<ExprPtr>& out) {
    if (auto pq = match_and(e)) {
      conjuncts(pq->first, out);
      conjuncts(pq->second, out);
    } else {
      out.push_back(e);
    }
  }

  // difference polynomial of an equation conjunct, or nullopt if it does not
  // evaluate in the given environment
  static std::optional<Poly> eq_poly(const ExprPtr& c, const Env3& env) {
    if (c->kind != Kind::SEq) return std::nullopt;
    Poly h;
    try {
      h = term_poly(c->kids[0], env);
      Poly q = term_poly(c->kids[1], env);
      for (const auto& [m, cc] : q) {
        h[m] -= cc;
        if (h[m] == 0) h.erase(m);
      }
    } catch (const SoaError&) {
      return std::nullopt;
    }
    return h;
  }

  // nonnegative integer roots of a univariate integer polynomial, if this
  // solver can isolate them: exact formulas for degree <= 2, binary search
  // when all non-constant coefficients share a sign (the monotone case)
  static std::optional<std::vector<mpz_class>> poly_roots(
      const std::map<unsigned, mpz_class>& coeff) {
    auto horner = [&](const mpz_class& v) {
      mpz_class r = 0;
      unsigned last = coeff.rbegin()->first;
      for (unsigned d = last + 1; d-- > 0;) {
        r *= v;
        auto it = coeff.find(d);
        if (it != coeff.end()) r += it->second;
      }
      return r;
    };
    unsigned deg = coeff.rbegin()->first;
    mpz_class c0 = coeff.count(0) ? coeff.at(0) : 0;
    std::vector<mpz_class> roots;
    if (deg == 1) {
      const mpz_class& a = coeff.at(1);
      if ((-c0) % a == 0 && (-c0) / a >= 0) roots.push_back((-c0) / a);
      return roots;
    }
    if (deg == 2) {
      mpz_class a = coeff.at(2), b = coeff.count(1) ? coeff.at(1) : 0;
      mpz_class disc = b * b - 4 * a * c0;
      if (disc < 0) return roots;
      mpz_class r;
      mpz_sqrt(r.get_mpz_t(), disc.get_mpz_t());
      if (r * r != disc) return roots;
      for (const mpz_class& num : {mpz_class(-b + r), mpz_class(-b - r)})
        if (num % (2 * a) == 0 && num / (2 * a) >= 0 &&
            (roots.empty() || roots[0] != num / (2 * a)))
          roots.push_back(num / (2 * a));
      return roots;
    }
    // monotone case: coefficients of x..x^deg all one sign
    bool pos = false, neg = false;
    for (const auto& [d, cc] : coeff) {
      if (d == 0) continue;
      (cc > 0 ? pos : neg) = true;
    }
    if (pos && neg) return std::nullopt;
    if (!pos && !neg) return std::nullopt;
    mpz_class sign = pos ? 1 : -1;
    if (sign * c0 > 0) return roots;   // strictly one-signed: no root
    if (c0 == 0) { roots.push_back(0); return roots; }
    // g(v) = sign*h(v) is nondecreasing with g(0) < 0 <= g(|c0|); find the
    // first nonnegative point and check it is an exact root
    auto g = [&](const mpz_class& v) { return mpz_class(sign * horner(v)); };
    mpz_class lo = 0, hi = abs(c0);
    while (lo < hi) {
      mpz_class mid = (lo + hi) / 2;
      if (g(mid) < 0) lo = mid + 1;
      else hi = mid;
    }
    if (g(lo) == 0) roots.push_back(lo);
    return roots;
  }

  // Constraint atoms of a body: every equation reachable through
  // conjunctions and existential prefixes is a necessary condition for the
  // body to hold (an existential's bound variable becomes an unknown).
  unsigned long gather_ctr = 0;

  void gather_atoms(const ExprPtr& c, Env3& env, std::vector<Poly>& atoms) {
    if (auto ex = match_exists_num(c)) {
      auto it = env.find(ex->x);
      std::optional<Poly> old;
      if (it != env.end()) old = it->second;
      // a decorated unknown name: a nested binder reusing the pin variable's
      // name must not be conflated with it
      env[ex->x] = poly_var(ex->x + "?" + std::to_string(gather_ctr++));
      gather_atoms(ex->body, env, atoms);
      if (old) env[ex->x] = *old;
      else env.erase(ex->x);
      return;
    }
    if (auto pq = match_and(c)) {
      gather_atoms(pq->first, env, atoms);
      gather_atoms(pq->second, env, atoms);
      return;
    }
    if (c->kind == Kind::SEq) {
      auto h = eq_poly(c, env);
      if (h && !h->empty()) atoms.push_back(std::move(*h));
    }
  }

  // Candidate witnesses for x from a constraint atom linear-or-univariate in
  // x.  A purely numeric atom yields its integer roots as constant
  // polynomials; an atom a*x + R = 0 with R free of x yields the symbolic
  // witness -R/a when that quotient is an honest polynomial with nonnegative
  // coefficients over the indeterminates already live in the environment.
  static std::optional<std::vector<Poly>> pin_from_atoms(
      const std::vector<Poly>& atoms, const std::string& x, const Env3& env) {
    std::set<std::string> live;
    for (const auto& [k, v] : env)
      for (const auto& [m, c] : v)
        for (const auto& [y, d] : m) live.insert(y);
    for (const Poly& h : atoms) {
      std::map<unsigned, mpz_class> coeff;  // purely-x part
      Poly rest;                            // x-free part
      bool ok = true, has_x = false;
      for (const auto& [m, cc] : h) {
        if (m.count(x)) {
          has_x = true;
          if (m.size() == 1) coeff[m.at(x)] = cc;
          else ok = false;  // monomial mixing x with another indeterminate
        } else {
          rest[m] = cc;
        }
      }
      if (!ok || !has_x) continue;
      mpz_class rc;
      if (poly_is_const(rest, &rc)) {
        coeff[0] = rc;
        if (coeff[0] == 0) coeff.erase(0);
        if (coeff.empty()) coeff[0] = 0;
        auto roots = poly_roots(coeff);
        if (!roots) continue;
        std::vector<Poly> out;
        for (const mpz_class& r : *roots) out.push_back(poly_const(r));
        return out;
      }
      // symbolic: need x linear and -rest/a an all-nonnegative polynomial
      // over live indeterminates only
      if (coeff.size() != 1 || !coeff.count(1)) continue;
      const mpz_class& a = coeff.at(1);
      Poly cand;
      bool good = true;
      for (const auto& [m, cc] : rest) {
        mpz_class q = -cc;
        if (q % a != 0) { good = false; break; }
        q /= a;
        if (q < 0) { good = false; break; }
        for (const auto& [y, d] : m)
          if (!live.count(y)) { good = false; break; }
        if (!good) break;
        if (q != 0) cand[m] = q;
      }
      if (!good) continue;
      return std::vector<Poly>{cand};
    }
    return std::nullopt;
  }

  // Upper bounds for the unknowns by interval propagation to a fixpoint: in
  // an atom oriented as P = Q (positive part against negative part), a pure
  // monomial c*x^d on the P side satisfies c*x^d <= UB(Q) whenever every
  // variable on the Q side already has an upper bound.
  static std::map<std::string, mpz_class> propagate_bounds(
      const std::vector<Poly>& atoms) {
    std::map<std::string, mpz_class> ub;
    auto mono_ub = [&](const Mono& m,
                       const mpz_class& c) -> std::optional<mpz_class> {
      mpz_class v = abs(c);
      for (const auto& [x, d] : m) {
        auto it = ub.find(x);
        if (it == ub.end()) return std::nullopt;
        for (unsigned i = 0; i < d; ++i) v *= it->second;
      }
      return v;
    };
    for (int round = 0; round < 8; ++round) {
      bool changed = false;
      for (const Poly& h : atoms) {
        for (int orient : {1, -1}) {
          std::optional<mpz_class> cap = mpz_class(0);
          for (const auto& [m, c] : h) {
            if (orient * c > 0) continue;  // this side's own terms
            if (m.empty()) { *cap += abs(c); continue; }
            auto u = mono_ub(m, c);
            if (!u) { cap.reset(); break; }
            *cap += *u;
          }
          if (!cap) continue;
          for (const auto& [m, c] : h) {
            if (orient * c <= 0 || m.size() != 1) continue;
            const auto& [x, d] = *m.begin();
            mpz_class q = *cap / abs(c), r;
            mpz_root(r.get_mpz_t(), q.get_mpz_t(), d);
            auto it = ub.find(x);
            if (it == ub.end() || r < it->second) {
              ub[x] = r;
              changed = true;
            }
          }
        }
      }
      if (!changed) break;
    }
    return ub;
  }

  Tri eval(const ExprPtr& e, const Env3& env) {
    // see through the definitional connectives first (pure optimisation:
    // same verdicts, better evaluation order)
    if (auto ex = match_exists_num(e)) return exists_num(ex->x, ex->body, env);
    if (auto pq = match_and(e)) {
      // evaluate the syntactically smaller conjunct first so a cheap False
      // short-circuits an expensive sibling
      ExprPtr a = pq->first, b = pq->second;
      if (expr_size(b) < expr_size(a)) std::swap(a, b);
      Tri va = eval(a, env);
      if (va == Tri::False) return Tri::False;
      return tri_and(va, eval(b, env));
    }
    if (auto n = match_not(e)) return tri_not(eval(*n, env));
    switch (e->kind) {
      case Kind::SEq: return atom_eq(e, env);
      case Kind::SIn: return atom_in(e, env);
      case Kind::Bot: return Tri::False;
      case Kind::Imp: {
        ExprPtr a = e->kids[0], b = e->kids[1];
        Tri va = expr_size(a) <= expr_size(b) ? eval(a, env) : Tri::Unknown;
        if (va == Tri::False) return Tri::True;
        Tri vb = eval(b, env);
        if (vb == Tri::True) return Tri::True;
        if (va == Tri::Unknown && expr_size(a) > expr_size(b)) va = eval(a, env);
        return tri_imp(va, vb);
      }
      case Kind::ForallNum: return forall_num_eval(e->binders[0], e->kids[0], env);
      case Kind::ForallSet: return forall_set_eval(e->binders[0], e->kids[0], env);
      default:
        throw SoaError("NotAFormula", "not an arithmetic formula");
    }
  }

  static bool has_large(const Env3& env) {
    for (const auto& [k, v] : env)
      if (!poly_is_const(v)) return true;
    return false;
  }

  Tri forall_num_eval(const std::string& x, const ExprPtr& body, const Env3& env) {
    // witness analysis on the antecedent: values of x that falsify it
    // satisfy the implication outright (negation is the case consequent bot)
    std::optional<std::vector<Poly>> cands;
    mpz_class limit = bound;
    if (body->kind == Kind::Imp) {
      const ExprPtr& ant = body->kids[0];
      std::vector<ExprPtr> conj;
      conjuncts(ant, conj);
      // an x-free antecedent conjunct that is false makes the body hold for
      // every x at once
      for (const ExprPtr& c : conj)
        if (!free_vars(c).num.count(x) && eval(c, env) == Tri::False)
          return Tri::True;
      Env3 envx = env;
      envx[x] = poly_var(x);
      std::vector<Poly> atoms;
      for (const ExprPtr& c : conj) gather_atoms(c, envx, atoms);
      cands = pin_from_atoms(atoms, x, env);
      if (!cands) {
        auto ub = propagate_bounds(atoms);
        auto it = ub.find(x);
        if (it != ub.end() && it->second < limit) limit = it->second;
      }
    }
    // inside a tail regime an unconstrained scan over the full bound is
    // usually futile and can be exponential; truncate it and report at most
    // Unknown (a counterexample found in the short scan still counts)
    bool truncated = false;
    if (!cands && limit == bound && bound > 8 && has_large(env)) {
      limit = 8;
      truncated = true;
    }
    Env3 env2 = env;
    Tri acc = Tri::True;
    if (cands) {
      for (const Poly& c : *cands) {
        mpz_class cv;
        // a constant candidate above the bound belongs to the tail; a
        // symbolic one stands for an actual tail value and is checked as is
        if (poly_is_const(c, &cv) && cv > bound) continue;
        env2[x] = c;
        acc = tri_and(acc, eval(body, env2));
        if (acc == Tri::False) return Tri::False;
      }
    } else {
      for (mpz_class j = 0; j <= limit; ++j) {
        env2[x] = poly_const(j);
        acc = tri_and(acc, eval(body, env2));
        if (acc == Tri::False) return Tri::False;
      }
    }
    env2[x] = fresh_tail(x);
    Tri r = tri_and(acc, eval(body, env2));
    if (truncated && r == Tri::True) return Tri::Unknown;
    return r;
  }

  Tri exists_num(const std::string& x, const ExprPtr& body, const Env3& env) {
    std::vector<ExprPtr> conj;
    conjuncts(body, conj);
    // an x-free conjunct that is false refutes every witness at once
    for (const ExprPtr& c : conj)
      if (!free_vars(c).num.count(x) && eval(c, env) == Tri::False)
        return Tri::False;
    Env3 envx = env;
    envx[x] = poly_var(x);
    std::vector<Poly> atoms;
    for (const ExprPtr& c : conj) gather_atoms(c, envx, atoms);
    auto cands = pin_from_atoms(atoms, x, env);
    mpz_class limit = bound;
    if (!cands) {
      // witnesses above the propagated bound falsify some constraint atom
      auto ub = propagate_bounds(atoms);
      auto it = ub.find(x);
      if (it != ub.end() && it->second < limit) limit = it->second;
    }
    bool truncated = false;
    if (!cands && limit == bound && bound > 8 && has_large(env)) {
      limit = 8;  // see forall_num_eval
      truncated = true;
    }
    Env3 env2 = env;
    Tri acc = Tri::False;
    if (cands) {
      for (const Poly& c : *cands) {
        mpz_class cv;
        if (poly_is_const(c, &cv) && cv > bound) continue;
        env2[x] = c;
        acc = tri_or(acc, eval(body, env2));
        if (acc == Tri::True) return Tri::True;
      }
    } else {
      for (mpz_class j = 0; j <= limit; ++j) {
        env2[x] = poly_const(j);
        acc = tri_or(acc, eval(body, env2));
        if (acc == Tri::True) return Tri::True;
      }
    }
    env2[x] = fresh_tail(x);
    Tri r = tri_or(acc, eval(body, env2));
    if (truncated && r == Tri::False) return Tri::Unknown;
    return r;
  }

  Tri forall_set_eval(const std::string& X, const ExprPtr& body, const Env3& env) {
    // counterexample search over small subsets; a universal claim about all
    // sets is never confirmed by a bounded search
    unsigned long cap = 6;
    if (bound < cap) cap = bound.get_ui();
    auto saved = envS.find(X) != envS.end()
                     ? std::optional<FiniteSet>(envS[X])
                     : std::nullopt;
    unsigned long n = 1ul << (cap + 1);
    Tri out = Tri::Unknown;
    for (unsigned long mask = 0; mask < n; ++mask) {
      FiniteSet s;
      for (unsigned long i = 0; i <= cap; ++i)
        if (mask & (1ul << i)) s.insert(i);
      envS[X] = s;
      if (eval(body, env) == Tri::False) { out = Tri::False; break; }
    }
    if (saved) envS[X] = *saved;
    else envS.erase(X);
    return out;
  }
};

}  // namespace soa_detail

inline Tri eval_formula_bounded(const ExprPtr& phi, const NumEnv& envN,
                                const SetEnv& envS, const mpz_class& bound) {
  soa_detail::Env3 env;
  for (const auto& [k, v] : envN) env[k] = soa_detail::poly_const(v);
  soa_detail::Evaluator ev{envS, bound};
  return ev.eval(phi, env);
}

// -- PA-valuation translation -----------------------------------------------

struct PaValuation {
  std::map<std::string, ExprPtr> num;  // number variable -> SoaTerm
  std::map<std::string, ExprPtr> set;  // set variable -> SetAbs
};

namespace soa_detail {
inline ExprPtr pa_apply(const ExprPtr& phi, PaValuation v) {
  switch (phi->kind) {
    case Kind::SEq: case Kind::SIn: {
      auto tr = [&](ExprPtr t) {
        // simultaneous substitution of the term map
        for (const auto& [x, s] : v.num) t = subst(t, x, s);
        return t;
      };
      if (phi->kind == Kind::SEq)
        return s_eq(tr(phi->kids[0]), tr(phi->kids[1]));
      const std::string& X = phi->kids[1]->name;
      auto it = v.set.find(X);
      if (it == v.set.end())
        throw SoaError("UnboundVariable", "unvalued set variable " + X);
      const ExprPtr& abs = it->second;
      if (!free_vars(abs->kids[0]).set.empty())
        throw SoaError("NonPABody",
                       "valuation body for " + X + " has set variables");
      return subst(abs->kids[0], abs->binders[0], tr(phi->kids[0]));
    }
    case Kind::Bot: return phi;
    case Kind::Imp:
      return imp(pa_apply(phi->kids[0], v), pa_apply(phi->kids[1], v));
    case Kind::ForallNum: {
      // the bound variable shadows the valuation
      PaValuation v2 = v;
      v2.num[phi->binders[0]] = var(phi->binders[0]);
      return forall_num(phi->binders[0], pa_apply(phi->kids[0], v2));
    }
    case Kind::ForallSet:
      throw SoaError("BoundSetQuantifier",
                     "valuation translation rejects bound set quantifiers");
    default:
      throw SoaError("NotAFormula", "not an arithmetic formula");
  }
}
}  // namespace soa_detail

inline ExprPtr pa_valuation_apply(const PaValuation& v, const ExprPtr& phi) {
  return soa_detail::pa_apply(phi, v);
}

}  // namespace ltt
