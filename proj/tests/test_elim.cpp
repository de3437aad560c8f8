#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "elim.hpp"
#include "models/finset.hpp"
#include "models/groupoid.hpp"

using namespace cwa;

namespace {

Val two_pt() { return fs_obj({Val("x"), Val("y")}); }

Val fam2(const Val& G) {
  return fs_ty(G, [](const Val&) { return fs_obj({Val("a0"), Val("a1")}); });
}

// enumerate small well-formed queries against e and check its answers
void check_all_queries(const Model& m, const ElimStructure& e, const Val& f,
                       int fiber_bound = 2, size_t max_checked = 200) {
  Val Gp = m.dom(f);
  Telescope codf = tel_reindex(m, f, e.cod);
  Val totc = tel_total(m, codf);
  size_t n = 0;
  for (auto& E1 : m.all_types(totc, fiber_bound)) {
    Telescope E{totc, {E1}};
    Val lifted = elim_lifted(m, e, f, E);
    Val totE = tel_total(m, E);
    for (auto& C : m.all_types(totE, fiber_bound)) {
      for (auto& s : sections(m, totE, C)) {
        if (++n > max_checked) return;
        ElimQuery q{f, E, C, m.compose(s, lifted)};
        Val ans = e.elim(q);
        CHECK(elim_answer_valid(m, e, q, ans));
      }
    }
  }
}

}  // namespace

TEST_CASE("elim_from_iso: identity and swap") {
  auto mp = make_finset_model();
  const Model& m = *mp;
  Val G = two_pt();
  Val A = fam2(G);
  Telescope t{G, {A}};

  ElimStructure id_e = elim_identity(m, G, t);
  // identity structure answers d itself
  Val totc = tel_total(m, t);
  for (auto& E1 : m.all_types(totc, 2)) {
    Telescope E{totc, {E1}};
    Val totE = tel_total(m, E);
    for (auto& C : m.all_types(totE, 2))
      for (auto& s : sections(m, totE, C)) {
        ElimQuery q{m.identity(G), E, C, s};
        CHECK(id_e.elim(q) == s);
      }
  }

  // swap iso on the fiber
  Val GA = m.ext(G, A);
  Val sw = fs_mor(GA, GA, [](const Val& p) {
    Val a = p[1] == Val("a0") ? Val("a1") : Val("a0");
    return Val::array({p[0], a});
  });
  ElimStructure e = elim_from_iso(m, G, t, t, sw);
  check_all_queries(m, e, m.identity(G));
  // stability: answer queries after a base reindexing
  Val D = fs_obj({Val("p")});
  Val f = fs_mor(D, G, [](const Val&) { return Val("x"); });
  check_all_queries(m, e, f);

  Val bad = fs_mor(GA, GA, [](const Val& p) {
    return Val::array({p[0], Val("a0")});
  });
  CHECK_THROWS(elim_from_iso(m, G, t, t, bad));
}

TEST_CASE("elim_refl satisfies the elimination equation") {
  auto mp = make_finset_model();
  const Model& m = *mp;
  Val G = two_pt();
  Val A = fam2(G);
  ElimStructure e = elim_refl(m, G, A);
  check_all_queries(m, e, m.identity(G));
  Val D = fs_obj({Val("p"), Val("q")});
  Val f = fs_mor(D, G, [](const Val& x) {
    return x == Val("p") ? Val("x") : Val("y");
  });
  check_all_queries(m, e, f);
}

TEST_CASE("elim_compose answers composite queries") {
  auto mp = make_finset_model();
  const Model& m = *mp;
  Val G = two_pt();
  Val A = fam2(G);
  ElimStructure e1 = elim_refl(m, G, A);
  ElimStructure e2 = elim_identity(m, G, e1.cod);
  ElimStructure comp = elim_compose(m, e1, e2);
  CHECK(comp.jmap == e1.jmap);
  check_all_queries(m, comp, m.identity(G));

  // compose two genuine structures: refl then a swap on the Id total
  Val Y = tel_total(m, e1.cod);
  ElimStructure comp2 = elim_compose(m, e1, elim_identity(m, G, e1.cod));
  check_all_queries(m, comp2, m.identity(G), 2, 60);
}

TEST_CASE("elim_extend and elim_widen") {
  auto mp = make_finset_model();
  const Model& m = *mp;
  Val G = two_pt();
  Val A = fam2(G);
  ElimStructure e = elim_refl(m, G, A);
  Val Y = tel_total(m, e.cod);
  Telescope W{Y, {fam2(Y)}};
  ElimStructure ext_e = elim_extend(m, e, W);
  CHECK(ext_e.dom.size() == e.dom.size() + 1);
  check_all_queries(m, ext_e, m.identity(G), 2, 60);

  // widen: empty target telescope gives the identity section
  Telescope E{Y, {fam2(Y)}};
  Val totE = tel_total(m, E);
  Val lifted = elim_lifted(m, e, m.identity(G), E);
  Telescope CCe{totE, {}};
  Val s0 = elim_widen(m, e, m.identity(G), E, CCe, lifted);
  CHECK(s0 == m.identity(totE));

  // length-2 target agrees with the manual two-step elimination
  Val C1 = fam2(totE);
  Val T1 = m.ext(totE, C1);
  Val C2 = fam2(T1);
  Telescope CC{totE, {C1, C2}};
  for (auto& sec : tel_sections(m, CC)) {
    Val d = m.compose(sec, lifted);
    Val s = elim_widen(m, e, m.identity(G), E, CC, d);
    CHECK(m.compose(tel_proj(m, CC), s) == m.identity(totE));
    CHECK(m.compose(s, lifted) == d);
    // manual two-step: eliminate into C1, then into C2 along the result
    Val d1 = m.compose(tel_proj_to(m, CC, 1), d);
    Val a1 = e.elim({m.identity(G), E, C1, d1});
    Val C2p = m.reindex(a1, C2);
    Val d2 = m.pair_into(a1, C2, lifted, d);
    Val a2 = e.elim({m.identity(G), E, C2p, d2});
    CHECK(s == m.compose(m.qmor(a1, C2), a2));
    break;  // one section suffices; the loop pins the shape
  }
}

TEST_CASE("elim_fill produces a diagonal filler") {
  auto mp = make_finset_model();
  const Model& m = *mp;
  Val G = two_pt();
  Val A = fam2(G);
  ElimStructure e = elim_refl(m, G, A);
  Val Y = tel_total(m, e.cod);
  Val C = fam2(Y);
  Val k = m.identity(Y);
  for (auto& s : sections(m, Y, C)) {
    Val h = m.compose(s, e.jmap);
    Val j = elim_fill(m, e, C, k, h);
    CHECK(m.compose(m.proj(Y, C), j) == k);
    CHECK(m.compose(j, e.jmap) == h);
  }
}

TEST_CASE("elim_descend recovers the type on the nose") {
  auto mp = make_finset_model();
  const Model& m = *mp;
  Val G = two_pt();
  Val A = fam2(G);

  // identity structure: r = id, D = C
  Telescope t{G, {A}};
  ElimStructure id_e = elim_identity(m, G, t);
  Val C0 = fam2(tel_total(m, t));
  DescentData d0 = elim_descend(m, id_e, C0);
  CHECK(d0.r == m.identity(tel_total(m, t)));
  CHECK(d0.D == C0);

  // descend along refl
  ElimStructure e = elim_refl(m, G, A);
  Val X = tel_total(m, e.dom);
  for (auto& C : m.all_types(X, 2)) {
    DescentData dd = elim_descend(m, e, C);
    CHECK(m.compose(dd.r, e.jmap) == m.identity(X));
    CHECK(m.reindex(e.jmap, dd.D) == C);
  }
}

TEST_CASE("identity_context at each length") {
  auto mp = make_finset_model();
  const Model& m = *mp;
  Val G = two_pt();
  Val A = fam2(G);
  Val GA = m.ext(G, A);
  Val B = fam2(GA);

  IdContext i0 = identity_context(m, Telescope{G, {}});
  CHECK(i0.id_tel.links.empty());
  CHECK(i0.r == m.identity(G));

  IdContext i1 = identity_context(m, Telescope{G, {A}});
  CHECK(i1.id_tel.links.size() == 1);
  CHECK(i1.id_tel.links[0] == m.id_ty(G, A));
  CHECK(i1.r == m.refl(G, A));

  IdContext i2 = identity_context(m, Telescope{G, {A, B}});
  Telescope full = tel_concat(m, i2.doubled, i2.id_tel);
  CHECK(m.dom(i2.r) == m.ext(GA, B));
  CHECK(m.cod(i2.r) == tel_total(m, full));
  // r lands over the diagonal
  Telescope AA{G, {A, B}};
  Val diag = tel_pair_into(m, tel_proj(m, AA), AA,
                           m.identity(tel_total(m, AA)),
                           m.identity(tel_total(m, AA)));
  CHECK(m.compose(tel_proj_to(m, full, i2.doubled.size()), i2.r) == diag);
  check_all_queries(m, i2.elim, m.identity(G), 2, 40);
}

TEST_CASE("iterated_pi counts and beta") {
  auto mp = make_finset_model();
  const Model& m = *mp;
  Val G = fs_obj({Val("x")});
  Val A = fam2(G);
  Val GA = m.ext(G, A);
  Val B = fam2(GA);

  // |BB| = 0
  IteratedPi p0 = iterated_pi(m, Telescope{G, {A}}, Telescope{GA, {}});
  CHECK(p0.pi.links.empty());
  CHECK(p0.ev == m.identity(GA));

  // |AA| = 1, |BB| = 1 recovers the bundle operations
  IteratedPi p1 = iterated_pi(m, Telescope{G, {A}}, Telescope{GA, {B}});
  CHECK(p1.pi.links.size() == 1);
  CHECK(p1.pi.links[0] == m.pi_ty(G, A, B));
  CHECK(p1.ev == m.pi_ev(G, A, B));

  // |AA| = 2: the fiber counts the dependent functions
  Val GAB = m.ext(GA, B);
  Val C = fs_ty(GAB, [](const Val&) { return fs_obj({Val("c0"), Val("c1")}); });
  IteratedPi p2 = iterated_pi(m, Telescope{G, {A, B}}, Telescope{GAB, {C}});
  Val fib = fs_fiber(p2.pi.links[0], Val("x"));
  CHECK(fib.size() == 16);  // 2^(2*2) dependent functions

  // beta: evaluating the abstraction of b recovers b, for every section
  Telescope AA{G, {A, B}};
  Telescope BB{GAB, {C}};
  for (auto& b : tel_sections(m, BB)) {
    Val lam = iterated_lambda(m, AA, BB, b);
    Val qhat = tel_qmor(m, lam, tel_reindex(m, tel_proj(m, p2.pi), AA));
    CHECK(m.compose(p2.ev, qhat) == b);
  }

  // multi-link BB over a single A
  Val Bw = m.reindex(m.proj(GA, B), B);
  Telescope BB2{GA, {B, Bw}};
  IteratedPi pm = iterated_pi(m, Telescope{G, {A}}, BB2);
  CHECK(pm.pi.links.size() == 2);
  for (auto& b : tel_sections(m, BB2)) {
    Val lam = iterated_lambda(m, Telescope{G, {A}}, BB2, b);
    CHECK(m.compose(tel_proj(m, pm.pi), lam) == m.identity(G));
    Val qhat = tel_qmor(m, lam, tel_reindex(m, tel_proj(m, pm.pi),
                                            Telescope{G, {A}}));
    CHECK(m.compose(pm.ev, qhat) == b);
  }
}

TEST_CASE("homotopies in finset are equalities") {
  auto mp = make_finset_model();
  const Model& m = *mp;
  Val G = two_pt();
  Val A = fam2(G);
  Telescope B{G, {A}};
  auto secs = sections(m, G, A);
  for (auto& f : secs)
    for (auto& g : secs) {
      auto h = find_homotopy(m, G, B, f, g);
      CHECK(h.has_value() == (f == g));
      if (h) CHECK(homotopy_valid(m, *h));
    }
  Val f = secs[0];
  HomotopyData r = refl_homotopy(m, G, B, f);
  CHECK(homotopy_valid(m, r));
  HomotopyData c = homotopy_compose(m, r, r);
  CHECK(homotopy_valid(m, c));
  HomotopyData i = homotopy_invert(m, r);
  CHECK((i.f == r.g && i.g == r.f));
  // pre-whiskering is exact
  Val D = fs_obj({Val("p")});
  Val u = fs_mor(D, G, [](const Val&) { return Val("x"); });
  HomotopyData w = homotopy_whisker_pre(m, r, u);
  CHECK(homotopy_valid(m, w));
}

TEST_CASE("homotopies in the groupoid model can be non-trivial") {
  auto mp = make_groupoid_model();
  const Model& m = *mp;
  // base: a point; fiber: the walking isomorphism.  The two sections pick
  // the two isomorphic objects, so they are distinct but homotopic.
  Val G = gp_discrete({Val("*")});
  Val fib = gp_gpd({Val("a"), Val("b")},
                   {{Val("i"), Val("a"), Val("b")}, {Val("j"), Val("b"), Val("a")}},
                   [](const Val& g, const Val& f) {
                     return gp_id(f == Val("i") ? Val("a") : Val("b"));
                   });
  Val A = gp_ty(
      G, [&](const Val&) { return fib; },
      [](const Val&, const Val& a) { return a; },
      [](const Val&, const Val& p) { return p; });
  Telescope B{G, {A}};
  auto secs = sections(m, G, A);
  REQUIRE(secs.size() == 2);
  auto h = find_homotopy(m, G, B, secs[0], secs[1]);
  CHECK(h.has_value());
  CHECK(homotopy_valid(m, *h));
  CHECK(secs[0] != secs[1]);
  // with a discrete two-element fiber the two sections are not homotopic
  Val d2 = gp_discrete({Val("a"), Val("b")});
  Val Ad = gp_ty(
      G, [&](const Val&) { return d2; },
      [](const Val&, const Val& a) { return a; },
      [](const Val&, const Val& p) { return p; });
  auto dsecs = sections(m, G, Ad);
  REQUIRE(dsecs.size() == 2);
  CHECK(!find_homotopy(m, G, Telescope{G, {Ad}}, dsecs[0], dsecs[1]));
}

TEST_CASE("equivalence data search") {
  auto mp = make_finset_model();
  const Model& m = *mp;
  Val G = two_pt();
  Val A = fam2(G);
  Telescope tA{G, {A}};
  EquivData idd = identity_equiv(m, G, tA);
  CHECK(equiv_valid(m, idd));

  // a fiberwise bijection between different labellings
  Val B = fs_ty(G, [](const Val&) { return fs_obj({Val("b0"), Val("b1")}); });
  Telescope tB{G, {B}};
  Val GA = m.ext(G, A);
  Val f = fs_mor(GA, m.ext(G, B), [](const Val& p) {
    Val b = p[1] == Val("a0") ? Val("b0") : Val("b1");
    return Val::array({p[0], b});
  });
  auto data = equivalence_oracle(m, G, tA, tB, f);
  REQUIRE(data.has_value());
  CHECK(equiv_valid(m, *data));
  CHECK(slice_equiv_verdict(m, G, tA, tB, f) == std::optional<bool>(true));

  // a non-bijection has no data
  Val C = fs_ty(G, [](const Val&) { return fs_obj({Val("c")}); });
  Telescope tC{G, {C}};
  Val g = fs_mor(GA, m.ext(G, C), [](const Val& p) {
    return Val::array({p[0], Val("c")});
  });
  CHECK_FALSE(equivalence_oracle(m, G, tA, tC, g).has_value());

  // two-of-three on the composite
  EquivData d3 = equiv_two_of_three(m, G, tA, tB, tB, f,
                                    m.identity(m.ext(G, B)), "gf", *data, idd);
  CHECK(equiv_valid(m, d3));

  // right properness
  Val AAty = fam2(m.ext(G, B));
  Telescope AAt{m.ext(G, B), {AAty}};
  EquivData rp = equiv_right_proper(m, *data, AAt);
  CHECK(equiv_valid(m, rp));
  CHECK(equiv_right_proper(m, *data, Telescope{m.ext(G, B), {}}).f == data->f);
}

TEST_CASE("is_equivalence_general on the pinned examples") {
  auto mp = make_finset_model();
  const Model& m = *mp;
  Val zero = fs_obj({});
  Val one = fs_obj({Val("u")});
  Val two = two_pt();

  Val idm = m.identity(two);
  CHECK(is_equivalence_general(m, idm, 2).verdict == "equivalence");

  Val e01 = fs_mor(zero, one, [](const Val& x) { return x; });
  GeneralVerdict v1 = is_equivalence_general(m, e01, 2);
  CHECK(v1.verdict == "not-equivalence");
  CHECK(v1.witness.at("property") == Val("weak term lifting"));

  Val fold = fs_mor(two, one, [](const Val&) { return Val("u"); });
  GeneralVerdict v2 = is_equivalence_general(m, fold, 2);
  CHECK(v2.verdict == "not-equivalence");
  CHECK(v2.witness.at("property") == Val("weak type lifting"));

  // agreement with the fibrant-slice data search for maps over a base
  Val A = fam2(one);
  Val B = fs_ty(one, [](const Val&) { return fs_obj({Val("b0"), Val("b1")}); });
  Telescope tA{one, {A}}, tB{one, {B}};
  for (auto& u : hom_over(m, tel_proj(m, tB), tA)) {
    bool slice = equivalence_oracle(m, one, tB, tA, u).has_value();
    bool gen = is_equivalence_general(m, u, 2).verdict == "equivalence";
    CHECK(slice == gen);
  }
}

TEST_CASE("factor_map splits into equivalence and projection") {
  auto mp = make_finset_model();
  const Model& m = *mp;
  Val G = two_pt();
  Val A = fam2(G);
  Val GA = m.ext(G, A);
  Val B = fs_ty(G, [](const Val&) { return fs_obj({Val("b0"), Val("b1")}); });
  Telescope tA{G, {A}}, tB{G, {B}};

  Val f = fs_mor(GA, m.ext(G, B), [](const Val& p) {
    return Val::array({p[0], Val("b0")});
  });
  Factorisation fac = factor_map(m, G, tA, tB, f);
  CHECK(m.compose(fac.p, fac.w) == f);
  CHECK(equiv_valid(m, fac.wdata));

  // f = a dependent projection: recomposition exact and first factor valid
  Val AB = m.ext(GA, fam2(GA));
  Telescope tAB{G, {A, fam2(GA)}};
  Val pr = m.proj(GA, fam2(GA));
  Factorisation f2 = factor_map(m, G, tAB, tA, pr);
  CHECK(m.compose(f2.p, f2.w) == pr);
  CHECK(equiv_valid(m, f2.wdata));
}

TEST_CASE("funext as equivalence data round trip") {
  auto mp = make_finset_model();
  const Model& m = *mp;
  Val G = fs_obj({Val("x")});
  Val A = fs_ty(G, [](const Val&) { return fs_obj({Val("a0"), Val("a1")}); });
  Val GA = m.ext(G, A);
  Val B = fs_ty(GA, [](const Val&) { return fs_obj({Val("b0"), Val("b1")}); });

  EquivData rdata = funext_to_equiv(m, G, A, B);
  CHECK(equiv_valid(m, rdata));

  FunextPayload pay = equiv_to_funext(m, G, A, B, rdata);
  CHECK(homotopy_valid(m, pay.comp_prop));
  // the found map matches the model funext on all points
  CHECK(pay.map == m.funext_map(G, A, B));
}

TEST_CASE("pi_covariant and homotopy_abstraction") {
  auto mp = make_finset_model();
  const Model& m = *mp;
  Val G = fs_obj({Val("x")});
  Val A = fam2(G);
  Val GA = m.ext(G, A);
  Val B = fam2(GA);
  Telescope AA{G, {A}};
  Telescope BB{GA, {B}};

  // w = swap on the B-fiber
  Val GAB = m.ext(GA, B);
  Val w = fs_mor(GAB, GAB, [](const Val& p) {
    Val b = p[1] == Val("a0") ? Val("a1") : Val("a0");
    return Val::array({p[0], b});
  });
  PiCovariant pc = pi_covariant(m, AA, BB, BB, w);
  CHECK(equiv_valid(m, pc.data));
  // lambda of the identity is the identity
  Val lid = lambda_map(m, AA, BB, BB, m.identity(GAB));
  CHECK(lid == m.identity(tel_total(m, iterated_pi(m, AA, BB).pi)));

  for (auto& b : tel_sections(m, BB)) {
    HomotopyData h = refl_homotopy(m, GA, BB, b);
    HomotopyData ab = homotopy_abstraction(m, AA, BB, h);
    CHECK(homotopy_valid(m, ab));
    CHECK(ab.f == ab.g);
  }
}
