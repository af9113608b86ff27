// Builds the shipped derivation corpus.
//
// Every derivation is assembled with the builders in derive.hpp and then
// pushed through check_derivation before it is written, so a generator bug
// cannot produce a file the kernel would reject (or silently accept with the
// wrong conclusion: each translated axiom's conclusion is also compared
// against the output of the forward translation).  Files are written in the
// canonical s-expression form, and re-parsed to confirm the round trip is
// bit-exact.
//
// Usage: gen_corpus [output-dir]   (default: corpus)

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ltt/derive.hpp"
#include "ltt/embed.hpp"
#include "ltt/judgement.hpp"
#include "ltt/rules.hpp"
#include "ltt/soa.hpp"
#include "ltt/system.hpp"
#include "ltt/typing.hpp"

using namespace ltt;

namespace {

std::filesystem::path out_dir = "corpus";
std::vector<std::pair<std::string, std::string>> manifest;  // file, system

[[noreturn]] void die(const std::string& msg) {
  std::cerr << "gen_corpus: " << msg << "\n";
  std::exit(1);
}

void ship(const std::string& name, SystemId sys, const DerivPtr& d) {
  if (auto err = check_derivation(sys, d)) {
    std::ostringstream os;
    os << name << ": derivation rejected by " << system_name(sys) << " at [";
    for (int i : err->path) os << " " << i;
    os << " ]: " << err->message;
    die(os.str());
  }
  std::string text = print_deriv(d);
  DerivPtr back = parse_deriv(text);
  if (print_deriv(back) != text)
    die(name + ": printed form does not round-trip");
  std::ofstream f(out_dir / (name + ".deriv"));
  f << text << "\n";
  if (!f) die(name + ": cannot write file");
  manifest.emplace_back(name + ".deriv", system_name(sys));
}

void expect_concl(const std::string& name, const DerivPtr& d,
                  const ExprPtr& phi) {
  const Judgement& j = d->conclusion;
  if (j.body.form != JForm::Entails || !j.body.ants.empty() ||
      !eq_mod_ty(j.body.exprs[0], phi))
    die(name + ": conclusion does not match the translated axiom");
}

// the predecessor, by the eliminator with motive T of the token for N
ExprPtr pred_of(const ExprPtr& t) {
  return enat("w", ty_of(nat_name()), zero(), "u", "v", var("u"), t);
}

// rebuild an eliminator node with a different target
ExprPtr retarget(const ExprPtr& node, const ExprPtr& t) {
  if (node->kind == Kind::RNat)
    return rnat(node->kids[0], node->binders[0], node->binders[1],
                node->kids[1], t);
  return enat(node->binders[0], node->kids[0], node->kids[1],
              node->binders[1], node->binders[2], node->kids[2], t);
}

// Given a PropEq A = B over g, derive ants => the translated biconditional
//   ((A > B) > ((B > A) > bot)) > bot
// which is the image of an arithmetic "iff" under the forward translation.
DerivPtr iff_of_propeq(Prover& pr, const Context& g,
                       const std::vector<ExprPtr>& ants, const DerivPtr& peq) {
  ExprPtr A = peq->conclusion.body.exprs[0];
  ExprPtr B = peq->conclusion.body.exprs[1];
  ExprPtr impAB = imp(A, B), impBA = imp(B, A);
  ExprPtr K = imp(impAB, imp(impBA, bot()));
  std::vector<ExprPtr> aK = ants;
  aK.push_back(K);
  std::vector<ExprPtr> aKA = aK;
  aKA.push_back(A);
  DerivPtr dAB = pr.imp_intro(pr.rewrite(pr.assume(g, aKA, A), peq));
  std::vector<ExprPtr> aKB = aK;
  aKB.push_back(B);
  DerivPtr dBA =
      pr.imp_intro(pr.rewrite(pr.assume(g, aKB, B), pr.prop_sym(peq)));
  DerivPtr k = pr.assume(g, aK, K);
  return pr.imp_intro(pr.imp_elim(pr.imp_elim(k, dAB), dBA));
}

// -- the ten translated-axiom derivations (checked in LTT0) ------------------

void peano1() {
  Prover pr{sys_ltt0()};
  Context g{{"x", ty_nat()}};
  ExprPtr tr = angle_prop(peano_axioms()[0]);  // (s x = 0) > bot
  ExprPtr hyp = tr->kids[0];
  DerivPtr a = pr.assume(g, {hyp}, hyp);
  DerivPtr sym = pr.eq_sym(a);                       // => 0 = s x
  DerivPtr neg = pr.p3(g, {hyp}, var("x"));          // => (0 = s x) > bot
  DerivPtr d = pr.imp_intro(pr.imp_elim(neg, sym));
  expect_concl("peano1", d, tr);
  ship("peano1", sys_ltt0(), d);
}

void peano2() {
  Prover pr{sys_ltt0()};
  Context g{{"x", ty_nat()}, {"y", ty_nat()}};
  ExprPtr tr = angle_prop(peano_axioms()[1]);  // (s x = s y) > (x = y)
  ExprPtr hyp = tr->kids[0];
  ExprPtr x = var("x"), y = var("y");
  DerivPtr a = pr.assume(g, {hyp}, hyp);
  DerivPtr e1 = pr.en_succ(g, pred_of(succ(x)));  // pred(s x) = x
  DerivPtr i1 = pr.eq_of_termeq(g, {hyp}, pr.term_sym(e1));
  ExprPtr phi = eq(x, pred_of(var("z")), nat_name());
  DerivPtr sub = pr.eq_subst(a, "z", phi, i1);    // => x = pred(s y)
  DerivPtr e2 = pr.en_succ(g, pred_of(succ(y)));  // pred(s y) = y
  DerivPtr cong = pr.eq_cong2(g, pr.term_refl(g, x), e2);
  DerivPtr d = pr.imp_intro(pr.rewrite(sub, cong));
  expect_concl("peano2", d, tr);
  ship("peano2", sys_ltt0(), d);
}

// axioms 3 and 5: a single zero-computation of the eliminator
void peano_zero_case(const std::string& name, int index) {
  Prover pr{sys_ltt0()};
  Context g{{"x", ty_nat()}};
  ExprPtr tr = angle_prop(peano_axioms()[index]);
  DerivPtr d = pr.eq_of_termeq(g, {}, pr.en_zero(g, tr->kids[0]));
  expect_concl(name, d, tr);
  ship(name, sys_ltt0(), d);
}

// axioms 4 and 6: a single successor-computation of the eliminator
void peano_succ_case(const std::string& name, int index) {
  Prover pr{sys_ltt0()};
  Context g{{"x", ty_nat()}, {"y", ty_nat()}};
  ExprPtr tr = angle_prop(peano_axioms()[index]);
  DerivPtr d = pr.eq_of_termeq(g, {}, pr.en_succ(g, tr->kids[0]));
  expect_concl(name, d, tr);
  ship(name, sys_ltt0(), d);
}

void comprehension(const std::string& name, const ExprPtr& phi) {
  Prover pr{sys_ltt0()};
  ExprPtr inst = comprehension_instance(phi, "X");
  ExprPtr tr = angle_prop(inst);  // (forall X. psi(X) > bot) > bot
  ExprPtr H = tr->kids[0];
  ExprPtr small = angle_small(phi);
  ExprPtr witness = set_comp("w", ty_nat(), subst(small, "x", var("w")));

  // psi at the witness set, under the hypothesis H; the working variable is
  // x1 so that the hypothesis (which quantifies over x) can sit among the
  // antecedents without shadowing
  Context gx{{"x1", ty_nat()}};
  ExprPtr small1 = subst(small, "x", var("x1"));
  ExprPtr member = in_hat(var("x1"), witness, ty_nat());
  DerivPtr beta =
      mk_deriv("set/comp-beta",
               {pr.has(gx, var("x1")),
                pr.is_small(derive_detail::ext(gx, "w", ty_nat()),
                            subst(small, "x", var("w")))},
               {gx, j_small_eq(member, small1)});
  DerivPtr veq = mk_deriv(
      "pu/V-eq", {beta}, {gx, j_prop_eq(holds(member), holds(small1))});
  DerivPtr peq = pr.prop_trans(
      veq, pr.v_dist(gx, small1, subst(angle_prop(phi), "x", var("x1"))));
  DerivPtr psi = pr.forall_intro(iff_of_propeq(pr, gx, {H}, peq));

  DerivPtr neg = pr.forall_elim(pr.assume({}, {H}, H), witness);
  DerivPtr d = pr.imp_intro(pr.imp_elim(neg, psi));
  expect_concl(name, d, tr);
  ship(name, sys_ltt0(), d);
}

void set_induction() {
  Prover pr{sys_ltt0()};
  Context g{{"X", ty_set(ty_nat())}};
  ExprPtr tr = angle_prop(set_induction_axiom());
  ExprPtr base_hyp = tr->kids[0];             // V(0 inhat X)
  ExprPtr step_hyp = tr->kids[1]->kids[0];    // forall x. V(x inhat X) > ...
  std::vector<ExprPtr> ants{base_hyp, step_hyp};
  auto phi_at = [&](const ExprPtr& t) {
    return holds(in_hat(t, var("X"), ty_nat()));
  };

  Context g3 = derive_detail::ext(g, "x0", ty_nat());
  DerivPtr base = pr.assume(g3, ants, base_hyp);
  Context g4 = derive_detail::ext(g3, "x1", ty_nat());
  std::vector<ExprPtr> antsS = ants;
  antsS.push_back(phi_at(var("x1")));
  DerivPtr el = pr.forall_elim(pr.assume(g4, antsS, step_hyp), var("x1"));
  DerivPtr step = pr.imp_elim(el, pr.assume(g4, antsS, phi_at(var("x1"))));

  DerivPtr ind =
      pr.ind(g3, "x", phi_at(var("x")), var("x0"), base, step);
  DerivPtr d = pr.imp_intro(pr.imp_intro(pr.forall_intro(ind)));
  expect_concl("set-induction", d, tr);
  ship("set-induction", sys_ltt0(), d);
}

// the derived theorem: forall x (0 + x = x), by induction
void plus_zero_left() {
  Prover pr{sys_ltt0()};
  ExprPtr source =
      forall_num("x", s_eq(plus(zero(), var("x")), var("x")));
  ExprPtr tr = angle_prop(source);
  ExprPtr lhsx = tr->kids[1]->kids[0];  // the eliminator with target x
  auto E0 = [&](const ExprPtr& t) { return retarget(lhsx, t); };
  auto small_at = [&](const ExprPtr& t) {
    return eq_hat(E0(t), t, nat_name());
  };
  auto prop_at = [&](const ExprPtr& t) { return eq(E0(t), t, nat_name()); };

  Context g3{{"x0", ty_nat()}};
  ExprPtr phi = holds(small_at(var("x")));

  DerivPtr base_eq = pr.eq_of_termeq(g3, {}, pr.en_zero(g3, E0(zero())));
  DerivPtr base = pr.rewrite(
      base_eq, pr.prop_sym(pr.v_dist(g3, small_at(zero()), prop_at(zero()))));

  Context g4 = derive_detail::ext(g3, "x", ty_nat());
  ExprPtr x = var("x");
  std::vector<ExprPtr> hyp{holds(small_at(x))};
  DerivPtr h = pr.assume(g4, hyp, hyp[0]);
  DerivPtr he = pr.rewrite(h, pr.v_dist(g4, small_at(x), prop_at(x)));
  DerivPtr ie = pr.eq_of_termeq(g4, hyp, pr.en_succ(g4, E0(succ(x))));
  ExprPtr phiz = eq(E0(succ(x)), succ(var("z")), nat_name());
  DerivPtr sub = pr.eq_subst(he, "z", phiz, ie);  // => E0(s x) = s x
  DerivPtr step = pr.rewrite(
      sub, pr.prop_sym(pr.v_dist(g4, small_at(succ(x)), prop_at(succ(x)))));

  DerivPtr ind = pr.ind(g3, "x", phi, var("x0"), base, step);
  DerivPtr fin = pr.rewrite(
      ind, pr.v_dist(g3, small_at(var("x0")), prop_at(var("x0"))));
  DerivPtr d = pr.forall_intro(fin);
  expect_concl("plus-zero-left", d, tr);
  ship("plus-zero-left", sys_ltt0(), d);
}

// -- the universe-free showcase and the discrimination files -----------------

// Peano axiom 4 with free variables, in T2 (bare recursor, T2 equality rules)
void peano4_free() {
  Prover pr{sys_t2()};
  Context g{{"x", ty_nat()}, {"y", ty_nat()}};
  auto plus_r = [](const ExprPtr& m, const ExprPtr& n) {
    return rnat(m, "u", "v", succ(var("v")), n);
  };
  ExprPtr x = var("x"), y = var("y");
  DerivPtr d =
      pr.eq_of_termeq(g, {}, pr.en_succ(g, plus_r(x, succ(y))));
  const ExprPtr& c = d->conclusion.body.exprs[0];
  if (!eq_mod_ty(c, eq(plus_r(x, succ(y)), succ(plus_r(x, y)), nat_name())))
    die("peano4-free: unexpected conclusion");
  ship("peano4-free", sys_t2(), d);
}

// induction over an analytic proposition that is not of the form V(P):
// accepted by the star systems only
void ind_analytic(const std::string& name, SystemId star_sys) {
  Prover pr{star_sys};
  ExprPtr phi = forall(
      "y", ty_nat(), holds(eq_hat(var("x"), var("x"), nat_name())));
  auto body = [&](const Context& g, const std::vector<ExprPtr>& ants,
                  const ExprPtr& t) {
    // g |- ants => forall y1:N. V(t =hat t); the induction hypothesis
    // quantifies over y, so the working variable differs
    Context gy = derive_detail::ext(g, "y1", ty_nat());
    ExprPtr sm = eq_hat(t, t, nat_name());
    DerivPtr r = pr.rewrite(
        pr.eq_refl(gy, ants, t),
        pr.prop_sym(pr.v_dist(gy, sm, eq(t, t, nat_name()))));
    return pr.forall_intro(r);
  };
  DerivPtr base = body({}, {}, zero());
  Context gs{{"x1", ty_nat()}};
  DerivPtr step = body(gs, {subst(phi, "x", var("x1"))}, succ(var("x1")));
  DerivPtr d = pr.ind({}, "x", phi, zero(), base, step);
  ship(name, star_sys, d);
}

// the eliminator with a doubly-set motive: a term of LTT_W but of neither
// subsystem
void en_over_setset() {
  ExprPtr elem = ty_set(ty_of(nat_name()));
  ExprPtr L = set_comp("w", elem, bot_hat());
  ExprPtr term =
      enat("z", ty_set(elem), L, "u", "v", var("v"), succ(zero()));
  SynthResult r = synth_type_deriv(sys_lttw(), {}, term);
  ship("en-over-setset", sys_lttw(), r.deriv);
}

// -- derivable typing judgements for the interpretation corpora --------------

void pres(const std::string& name, SystemId sys, const Context& g,
          const ExprPtr& m) {
  SynthResult r = synth_type_deriv(sys, g, m);
  ship(name, sys, r.deriv);
}

void preservation() {
  ExprPtr N = ty_nat();
  Context gx{{"x", N}};
  Context gxy{{"x", N}, {"y", N}};
  auto plus_r = [](const ExprPtr& m, const ExprPtr& n) {
    return rnat(m, "u", "v", succ(var("v")), n);
  };
  ExprPtr idN = lam("z", N, var("z"), N);
  ExprPtr redex = app(idN, zero(), N, N);  // the worked beta-redex

  // A(1): base types, one layer of x / -> / Set
  pres("pres-a1-1", sys_an(1), gx, succ(succ(var("x"))));
  pres("pres-a1-2", sys_an(1), gxy, plus_r(var("x"), var("y")));
  pres("pres-a1-3", sys_an(1), {}, redex);
  pres("pres-a1-4", sys_an(1), gx, pair(var("x"), zero(), N, N));
  pres("pres-a1-5", sys_an(1), {{"p", ty_prod(N, N)}},
       proj1(var("p"), N, N));
  pres("pres-a1-6", sys_an(1), {},
       set_comp("w", N, eq_hat(var("w"), zero(), nat_name())));

  // A(2): two layers
  pres("pres-a2-1", sys_an(2), {},
       lam("f", ty_arrow(N, N), app(var("f"), zero(), N, N), N));
  pres("pres-a2-2", sys_an(2), gx,
       pair(pair(var("x"), var("x"), N, N), var("x"), ty_prod(N, N), N));
  pres("pres-a2-3", sys_an(2), {},
       set_comp("w", ty_set(N), in_hat(zero(), var("w"), N)));
  pres("pres-a2-4", sys_an(2), {},
       rnat(zero(), "u", "v", app(idN, var("v"), N, N), succ(succ(zero()))));
  pres("pres-a2-5", sys_an(2), {{"f", ty_arrow(N, N)}, {"x", N}},
       app(var("f"), app(var("f"), var("x"), N, N), N, N));

  // T_omega-U: the universe present, no compound type containing it
  ExprPtr TN = ty_of(nat_name());
  ExprPtr en_s = enat("z", TN, zero(), "u", "v", succ(var("v")),
                      succ(succ(zero())));  // the worked (E_N s) case
  pres("pres-twu-1", sys_twu(), {}, en_s);
  pres("pres-twu-2", sys_twu(), {{"a", ty_univ()}, {"x", ty_of(var("a"))}},
       var("x"));
  pres("pres-twu-3", sys_twu(), {}, nat_name());
  pres("pres-twu-4", sys_twu(), {}, times_name(nat_name(), nat_name()));
  pres("pres-twu-5", sys_twu(), {},
       app(lam("z", TN, succ(var("z")), TN), zero(), TN, TN));

  // B(2): the full language, depth D <= 2
  pres("pres-b2-1", sys_bn(2), {{"a", ty_univ()}},
       lam("x", ty_of(var("a")), var("x"), ty_of(var("a"))));
  pres("pres-b2-2", sys_bn(2), {}, lam("a", ty_univ(), var("a"), ty_univ()));
  pres("pres-b2-3", sys_bn(2), {}, en_s);
  pres("pres-b2-4", sys_bn(2), {},
       set_comp("w", N, eq_hat(var("w"), zero(), nat_name())));
  pres("pres-b2-5", sys_bn(2), {}, pair(nat_name(), zero(), ty_univ(), N));
  pres("pres-b2-6", sys_bn(2), {}, redex);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) out_dir = argv[1];
  std::filesystem::create_directories(out_dir);

  peano1();
  peano2();
  peano_zero_case("peano3", 2);
  peano_succ_case("peano4", 3);
  peano_zero_case("peano5", 4);
  peano_succ_case("peano6", 5);
  comprehension("comp1", s_eq(var("x"), var("x")));
  comprehension("comp2",
                imp(s_eq(var("x"), succ(var("x"))), bot()));
  set_induction();
  plus_zero_left();

  peano4_free();
  ind_analytic("ind-analytic-t2star", sys_t2_star());
  ind_analytic("ind-analytic-ltt0star", sys_ltt0_star());
  en_over_setset();
  preservation();

  std::ofstream mf(out_dir / "manifest.txt");
  for (const auto& [file, sysname] : manifest) mf << file << " " << sysname << "\n";
  if (!mf) die("cannot write manifest");
  std::cout << "wrote " << manifest.size() << " corpus files to " << out_dir
            << "\n";
  return 0;
}
