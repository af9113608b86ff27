// The forward translation from second-order arithmetic into the type
// theories (terms to terms of type N, arithmetic formulas to small
// propositions, formulas to propositions) and the reverse interpretation of
// T_2 expressions as arithmetic formulas, parameterised by an
// arithmetization of pairs and finite sequences.
//
// Forward clauses:
//   <x> = x   <0> = 0   <t'> = s<t>
//   <s+t> = <s> plus <t>      where M plus N  = E_N([x]T(N^), M, [x,y]s y, N)
//   <s.t> = <s> times <t>     where M times N = E_N([x]T(N^), 0, [x,y]y plus M, N)
//   arithmetic formulas go to the hatted connectives with all quantifiers
//   over N^; general formulas go to the proposition connectives with number
//   quantifiers over N and set quantifiers over Set{N}.
//
// Reverse clauses ("t corners= M", "t corners-in M", "corners P"):
//   t =. x        -> t = x
//   t =. 0        -> t = 0
//   t =. s M      -> exists x (x =. M and t = S x)
//   t =. R(L,[u,v]M,N)
//                 -> exists n, s in Seq ( n =. N  and  (n,t) in s
//                      and  forall l ((0,l) in s  imp  l =. L)
//                      and  forall u z ((S u,z) in s  imp
//                             exists v ((u,v) in s  and  z =. M)) )
//   t in. X       -> t in X
//   t in. {x:N|P} -> [t/x] corners P
//   small propositions / propositions: =^ and membership go to
//   exists-conjunctions of the term clauses, the connectives are structural,
//   V(P) drops to corners P.
//
// The recursor clause reads the bare recursor; the dependent eliminator with
// a constant motive equal to N is accepted as the same recursor (it is the
// image of the bare one under the subsystem inclusion).
#pragma once

#include <gmpxx.h>

#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ltt/connectives.hpp"
#include "ltt/expr.hpp"
#include "ltt/typenorm.hpp"

namespace ltt {

struct EmbedError : std::runtime_error {
  std::string code;  // NotArithmetic | NotANumberTerm | NotT2Expression
  EmbedError(std::string c, const std::string& msg)
      : std::runtime_error(msg), code(std::move(c)) {}
};

// -- arithmetization --------------------------------------------------------

// Coding of pairs and of finite sequences of pairs as numbers, supplied as
// formula builders over the arithmetic signature.  pair_formula(x,y,z) means
// "z codes the pair (x,y)"; seq_predicate(s) means "s codes a sequence";
// pair_in_seq(x,y,s) means "(x,y) is a member of the sequence coded by s".
// witness_bound(values) is a monotone bound on the least code of a sequence
// whose i-th member is (i, values[i]).
struct Arithmetization {
  std::function<ExprPtr(ExprPtr, ExprPtr, ExprPtr)> pair_formula;
  std::function<ExprPtr(ExprPtr)> seq_predicate;
  std::function<ExprPtr(ExprPtr, ExprPtr, ExprPtr)> pair_in_seq;
  std::function<mpz_class(const std::vector<mpz_class>&)> witness_bound;
};

// Default instance: Cantor pairing z = (x+y)(x+y+1)/2 + x, written without
// division as 2z = (x+y)(x+y+1) + 2x, and Goedel beta-function sequences: a
// sequence code s is a pair (k,w) with w a pair (a,b); the member at index
// i <= k is beta(a,b,i) = a mod (1 + (i+1)b).  Every number decodes to some
// sequence, so Seq is the whole of N.

inline mpz_class cantor_pair(const mpz_class& x, const mpz_class& y) {
  mpz_class s = x + y;
  return s * (s + 1) / 2 + x;
}

inline std::pair<mpz_class, mpz_class> cantor_unpair(const mpz_class& z) {
  // largest s with s(s+1)/2 <= z
  mpz_class s = 0, lo = 0, hi = z + 1;
  while (lo < hi) {  // binary search: first s with (s+1)(s+2)/2 > z
    mpz_class mid = (lo + hi) / 2;
    if ((mid + 1) * (mid + 2) / 2 > z) hi = mid;
    else lo = mid + 1;
  }
  s = lo;
  mpz_class x = z - s * (s + 1) / 2;
  return {x, s - x};
}

inline ExprPtr cantor_pair_formula(const ExprPtr& x, const ExprPtr& y,
                                   const ExprPtr& z) {
  ExprPtr two = numeral(2), s = plus(x, y);
  return s_eq(times(two, z), plus(times(s, succ(s)), times(two, x)));
}

inline ExprPtr cantor_seq_predicate(const ExprPtr& s) {
  return s_eq(s, s);  // every number codes a sequence under beta
}

inline ExprPtr cantor_pair_in_seq(const ExprPtr& x, const ExprPtr& y,
                                  const ExprPtr& s) {
  std::set<std::string> avoid;
  for (const ExprPtr& e : {x, y, s}) {
    VarSet fv = free_vars(e);
    avoid.insert(fv.num.begin(), fv.num.end());
  }
  auto fr = [&](const char* base) {
    std::string n = fresh_name(base, avoid);
    avoid.insert(n);
    return n;
  };
  std::string k = fr("k"), w = fr("w"), a = fr("a"), b = fr("b");
  std::string q = fr("q"), e = fr("e"), m = fr("m");
  ExprPtr vk = var(k), vw = var(w), va = var(a), vb = var(b);
  ExprPtr d = succ(times(succ(x), vb));  // 1 + (x+1) b
  ExprPtr beta = a_and(s_eq(va, plus(times(var(q), d), y)),        // a = qd + y
                       s_eq(succ(plus(y, var(e))), d));            // y < d
  ExprPtr body = a_and(
      cantor_pair_formula(vk, vw, s),
      a_and(s_eq(plus(x, var(m)), vk),  // x <= k
            a_exists(a, a_exists(b, a_and(cantor_pair_formula(va, vb, vw),
                                          a_exists(q, a_exists(e, beta)))))));
  return a_exists(k, a_exists(w, a_exists(m, body)));
}

// A concrete (not necessarily least) sequence code for values v_0..v_k, and
// the monotone witness bound derived from the same construction.
inline mpz_class cantor_seq_code(const std::vector<mpz_class>& values) {
  if (values.empty()) return 0;
  unsigned long k = values.size() - 1;
  mpz_class m = k;
  for (const mpz_class& v : values) m = std::max(m, v);
  mpz_class b = m + 1;  // b = (m+1) * lcm(1..k+1) makes the moduli coprime
  for (unsigned long i = 1; i <= k + 1; ++i) {
    mpz_class g, ii = i;
    mpz_gcd(g.get_mpz_t(), b.get_mpz_t(), ii.get_mpz_t());
    b *= ii / g;
  }
  // CRT: a = values[i] mod d_i, d_i = 1 + (i+1) b
  mpz_class a = 0, mod = 1;
  for (unsigned long i = 0; i <= k; ++i) {
    mpz_class d = 1 + mpz_class(i + 1) * b;
    // solve a' = a (mod mod), a' = values[i] (mod d)
    mpz_class inv, g;
    mpz_class mm = mod % d;
    mpz_gcdext(g.get_mpz_t(), inv.get_mpz_t(), nullptr, mm.get_mpz_t(),
               d.get_mpz_t());
    mpz_class t = ((values[i] - a % d + d) % d) * inv % d;
    t = (t % d + d) % d;
    a = a + mod * t;
    mod *= d;
  }
  return cantor_pair(mpz_class(k), cantor_pair(a, b));
}

inline mpz_class cantor_witness_bound(const std::vector<mpz_class>& values) {
  if (values.empty()) return 0;
  unsigned long k = values.size() - 1;
  mpz_class m = k;
  for (const mpz_class& v : values) m = std::max(m, v);
  mpz_class b = m + 1;
  for (unsigned long i = 1; i <= k + 1; ++i) {
    mpz_class g, ii = i;
    mpz_gcd(g.get_mpz_t(), b.get_mpz_t(), ii.get_mpz_t());
    b *= ii / g;
  }
  mpz_class prod = 1;
  for (unsigned long i = 0; i <= k; ++i) prod *= 1 + mpz_class(i + 1) * b;
  return cantor_pair(mpz_class(k), cantor_pair(prod, b));
}

inline Arithmetization cantor_arithmetization() {
  Arithmetization a;
  a.pair_formula = cantor_pair_formula;
  a.seq_predicate = cantor_seq_predicate;
  a.pair_in_seq = cantor_pair_in_seq;
  a.witness_bound = cantor_witness_bound;
  return a;
}

// -- forward translation ----------------------------------------------------

namespace embed_detail {

// The recursor binders are drawn from a running set of used names, so nested
// plus/times expansions never shadow an enclosing binder or a variable of
// the source term (the typing layer insists on shadow-free contexts).
inline ExprPtr ltt_plus(const ExprPtr& m, const ExprPtr& n,
                        std::set<std::string>& used) {
  // E_N([x]T(N^), M, [x,y]s y, N)
  std::string x = fresh_name("x", used);
  used.insert(x);
  std::string y = fresh_name("y", used);
  used.insert(y);
  return enat(x, ty_of(nat_name()), m, x, y, succ(var(y)), n);
}

inline ExprPtr ltt_times(const ExprPtr& m, const ExprPtr& n,
                         std::set<std::string>& used) {
  // E_N([x]T(N^), 0, [x,y]y plus M, N); M sits under the step binders
  std::string x = fresh_name("x", used);
  used.insert(x);
  std::string y = fresh_name("y", used);
  used.insert(y);
  return enat(x, ty_of(nat_name()), zero(), x, y, ltt_plus(var(y), m, used),
              n);
}

// The two variable namespaces of L collapse into the one term namespace of
// the type theories; set-variable names that collide with a number-variable
// name anywhere in the formula are renamed injectively.
inline void collect_names(const ExprPtr& e, std::set<std::string>& nums,
                          std::set<std::string>& sets) {
  switch (e->kind) {
    case Kind::Var: nums.insert(e->name); break;
    case Kind::SetVar: sets.insert(e->name); break;
    case Kind::ForallNum: nums.insert(e->binders[0]); break;
    case Kind::ForallSet: sets.insert(e->binders[0]); break;
    default: break;
  }
  for (const auto& k : e->kids) collect_names(k, nums, sets);
}

inline std::map<std::string, std::string> set_renaming(const ExprPtr& phi) {
  std::set<std::string> nums, sets;
  collect_names(phi, nums, sets);
  std::map<std::string, std::string> ren;
  std::set<std::string> taken = nums;
  taken.insert(sets.begin(), sets.end());
  for (const std::string& x : sets) {
    if (!nums.count(x)) { ren[x] = x; continue; }
    std::string y = x;
    do { y += "'"; } while (taken.count(y));
    taken.insert(y);
    ren[x] = y;
  }
  return ren;
}

using Ren = std::map<std::string, std::string>;

inline std::string ren_of(const Ren& r, const std::string& x) {
  auto it = r.find(x);
  return it == r.end() ? x : it->second;
}

inline ExprPtr angle_term_rec(const ExprPtr& t, std::set<std::string>& used) {
  switch (t->kind) {
    case Kind::Var: return var(t->name);
    case Kind::Zero: return zero();
    case Kind::Succ: return succ(angle_term_rec(t->kids[0], used));
    case Kind::Plus: {
      ExprPtr a = angle_term_rec(t->kids[0], used);
      ExprPtr b = angle_term_rec(t->kids[1], used);
      return ltt_plus(a, b, used);
    }
    case Kind::Times: {
      ExprPtr a = angle_term_rec(t->kids[0], used);
      ExprPtr b = angle_term_rec(t->kids[1], used);
      return ltt_times(a, b, used);
    }
    default:
      throw EmbedError("NotANumberTerm", "not an arithmetic term");
  }
}

inline ExprPtr angle_small_rec(const ExprPtr& phi, const Ren& ren,
                               std::set<std::string>& used) {
  switch (phi->kind) {
    case Kind::SEq:
      return eq_hat(angle_term_rec(phi->kids[0], used),
                    angle_term_rec(phi->kids[1], used), nat_name());
    case Kind::SIn:
      return in_hat(angle_term_rec(phi->kids[0], used),
                    var(ren_of(ren, phi->kids[1]->name)), ty_nat());
    case Kind::Bot: return bot_hat();
    case Kind::Imp:
      return imp_hat(angle_small_rec(phi->kids[0], ren, used),
                     angle_small_rec(phi->kids[1], ren, used));
    case Kind::ForallNum:
      return forall_hat(phi->binders[0], nat_name(),
                        angle_small_rec(phi->kids[0], ren, used));
    case Kind::ForallSet:
      throw EmbedError("NotArithmetic",
                       "set quantifier in an arithmetic translation");
    default:
      throw EmbedError("NotArithmetic", "not a formula of the language");
  }
}

inline ExprPtr angle_prop_rec(const ExprPtr& phi, const Ren& ren,
                              std::set<std::string>& used) {
  switch (phi->kind) {
    case Kind::SEq:
      return eq(angle_term_rec(phi->kids[0], used),
                angle_term_rec(phi->kids[1], used), nat_name());
    case Kind::SIn:
      return p_in(angle_term_rec(phi->kids[0], used),
                  var(ren_of(ren, phi->kids[1]->name)), ty_nat());
    case Kind::Bot: return bot();
    case Kind::Imp:
      return imp(angle_prop_rec(phi->kids[0], ren, used),
                 angle_prop_rec(phi->kids[1], ren, used));
    case Kind::ForallNum:
      return forall(phi->binders[0], ty_nat(),
                    angle_prop_rec(phi->kids[0], ren, used));
    case Kind::ForallSet:
      return forall(ren_of(ren, phi->binders[0]), ty_set(ty_nat()),
                    angle_prop_rec(phi->kids[0], ren, used));
    default:
      throw EmbedError("NotArithmetic", "not a formula of the language");
  }
}

}  // namespace embed_detail

namespace embed_detail {
inline std::set<std::string> all_names(const ExprPtr& e) {
  std::set<std::string> nums, sets;
  collect_names(e, nums, sets);
  nums.insert(sets.begin(), sets.end());
  return nums;
}
}  // namespace embed_detail

inline ExprPtr angle_term(const ExprPtr& t) {
  std::set<std::string> used = embed_detail::all_names(t);
  return embed_detail::angle_term_rec(t, used);
}

inline ExprPtr angle_small(const ExprPtr& phi) {
  std::set<std::string> used = embed_detail::all_names(phi);
  return embed_detail::angle_small_rec(phi, embed_detail::set_renaming(phi),
                                       used);
}

inline ExprPtr angle_prop(const ExprPtr& phi) {
  std::set<std::string> used = embed_detail::all_names(phi);
  return embed_detail::angle_prop_rec(phi, embed_detail::set_renaming(phi),
                                      used);
}

// -- reverse interpretation -------------------------------------------------

namespace embed_detail {

struct Corner {
  const Arithmetization& ar;

  // fresh arithmetic variable avoiding everything in sight
  std::string fr(const char* base, std::set<std::string>& avoid) const {
    std::string n = fresh_name(base, avoid);
    avoid.insert(n);
    return n;
  }

  static std::set<std::string> avoid_of(std::initializer_list<ExprPtr> es) {
    std::set<std::string> a;
    for (const ExprPtr& e : es) {
      VarSet fv = free_vars(e);
      a.insert(fv.num.begin(), fv.num.end());
      a.insert(fv.set.begin(), fv.set.end());
    }
    return a;
  }

  ExprPtr eq_clause(const ExprPtr& t, const ExprPtr& m) const {
    switch (m->kind) {
      case Kind::Var: return s_eq(t, var(m->name));
      case Kind::Zero: return s_eq(t, zero());
      case Kind::Succ: {
        std::set<std::string> avoid = avoid_of({t, m});
        std::string x = fresh_name("x", avoid);
        return a_exists(
            x, a_and(eq_clause(var(x), m->kids[0]), s_eq(t, succ(var(x)))));
      }
      case Kind::RNat:
        return rec_clause(t, m->kids[0], m->binders[0], m->binders[1],
                          m->kids[1], m->kids[2]);
      case Kind::ENat: {
        // dependent eliminator with constant motive N: the bare recursor
        const ExprPtr& motive = m->kids[0];
        if (free_vars(motive).num.count(m->binders[0]) ||
            !eq_mod_ty(motive, ty_nat()))
          throw EmbedError("NotANumberTerm",
                           "eliminator motive is not the recursor's");
        return rec_clause(t, m->kids[1], m->binders[1], m->binders[2],
                          m->kids[2], m->kids[3]);
      }
      default:
        throw EmbedError("NotANumberTerm", "not a number term of the fragment");
    }
  }

  ExprPtr rec_clause(const ExprPtr& t, const ExprPtr& base,
                     const std::string& u0, const std::string& v0,
                     const ExprPtr& step, const ExprPtr& arg) const {
    std::set<std::string> avoid = avoid_of({t, base, step, arg});
    avoid.insert(u0);
    avoid.insert(v0);
    std::string n = fr("n", avoid), s = fr("s", avoid), l = fr("l", avoid);
    std::string u = fr("u", avoid), z = fr("z", avoid), v = fr("v", avoid);
    // rename the step binders apart, simultaneously
    std::string tmp = fr("tmp", avoid);
    ExprPtr stepr = subst(subst(subst(step, u0, var(tmp)), v0, var(v)), tmp,
                          var(u));
    ExprPtr vs = var(s);
    ExprPtr base_cond = forall_num(
        l, imp(ar.pair_in_seq(zero(), var(l), vs), eq_clause(var(l), base)));
    ExprPtr step_cond = forall_num(
        u, forall_num(
               z, imp(ar.pair_in_seq(succ(var(u)), var(z), vs),
                      a_exists(v, a_and(ar.pair_in_seq(var(u), var(v), vs),
                                        eq_clause(var(z), stepr))))));
    ExprPtr body = a_and(
        ar.seq_predicate(vs),
        a_and(eq_clause(var(n), arg),
              a_and(ar.pair_in_seq(var(n), t, vs),
                    a_and(base_cond, step_cond))));
    return a_exists(n, a_exists(s, body));
  }

  ExprPtr in_clause(const ExprPtr& t, const ExprPtr& m) const {
    switch (m->kind) {
      case Kind::Var: return s_in(t, set_var(m->name));
      case Kind::SetComp: {
        if (!eq_mod_ty(m->kids[0], ty_nat()))
          throw EmbedError("NotT2Expression",
                           "comprehension domain outside the fragment");
        return subst(small_clause(m->kids[1]), m->binders[0], t);
      }
      default:
        throw EmbedError("NotT2Expression", "not a set term of the fragment");
    }
  }

  void need_nat_label(const ExprPtr& label) const {
    if (!eq_mod_ty(ty_of(label), ty_nat()))
      throw EmbedError("NotT2Expression",
                       "equality/membership label outside the fragment");
  }

  void need_nat_type(const ExprPtr& ty) const {
    if (!eq_mod_ty(ty, ty_nat()))
      throw EmbedError("NotT2Expression",
                       "membership annotation outside the fragment");
  }

  ExprPtr exists_common(const ExprPtr& a, const ExprPtr& b, bool b_is_set) const {
    std::set<std::string> avoid = avoid_of({a, b});
    std::string x = fresh_name("x", avoid);
    ExprPtr c1 = eq_clause(var(x), a);
    ExprPtr c2 = b_is_set ? in_clause(var(x), b) : eq_clause(var(x), b);
    return a_exists(x, a_and(c1, c2));
  }

  ExprPtr small_clause(const ExprPtr& p) const {
    switch (p->kind) {
      case Kind::EqHat:
        need_nat_label(p->kids[2]);
        return exists_common(p->kids[0], p->kids[1], false);
      case Kind::BotHat: return bot();
      case Kind::ImpHat:
        return imp(small_clause(p->kids[0]), small_clause(p->kids[1]));
      case Kind::ForallHat:
        need_nat_label(p->kids[0]);
        return forall_num(p->binders[0], small_clause(p->kids[1]));
      case Kind::InHat:
        need_nat_type(p->kids[2]);
        return exists_common(p->kids[0], p->kids[1], true);
      default:
        throw EmbedError("NotT2Expression",
                         "not a small proposition of the fragment");
    }
  }

  ExprPtr prop_clause(const ExprPtr& phi) const {
    switch (phi->kind) {
      case Kind::Eq:
        need_nat_label(phi->kids[2]);
        return exists_common(phi->kids[0], phi->kids[1], false);
      case Kind::Bot: return bot();
      case Kind::Imp:
        return imp(prop_clause(phi->kids[0]), prop_clause(phi->kids[1]));
      case Kind::Forall: {
        ExprPtr dom = normalize_type(phi->kids[0]);
        if (dom->kind == Kind::TyNat)
          return forall_num(phi->binders[0], prop_clause(phi->kids[1]));
        if (dom->kind == Kind::TySet && dom->kids[0]->kind == Kind::TyNat)
          return forall_set(phi->binders[0], prop_clause(phi->kids[1]));
        throw EmbedError("NotT2Expression",
                         "quantifier domain outside the fragment");
      }
      case Kind::Holds: return small_clause(phi->kids[0]);
      default:
        throw EmbedError("NotT2Expression",
                         "not a proposition of the fragment");
    }
  }
};

}  // namespace embed_detail

inline ExprPtr corner_eq(const ExprPtr& t, const ExprPtr& m,
                         const Arithmetization& ar = cantor_arithmetization()) {
  return embed_detail::Corner{ar}.eq_clause(t, m);
}

inline ExprPtr corner_in(const ExprPtr& t, const ExprPtr& m,
                         const Arithmetization& ar = cantor_arithmetization()) {
  return embed_detail::Corner{ar}.in_clause(t, m);
}

inline ExprPtr corner_small(const ExprPtr& p,
                            const Arithmetization& ar = cantor_arithmetization()) {
  return embed_detail::Corner{ar}.small_clause(p);
}

inline ExprPtr corner_prop(const ExprPtr& phi,
                           const Arithmetization& ar = cantor_arithmetization()) {
  return embed_detail::Corner{ar}.prop_clause(phi);
}

}  // namespace ltt
