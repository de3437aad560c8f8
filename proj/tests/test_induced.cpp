#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "induced.hpp"
#include "models/finset.hpp"

using namespace cwa;

static InverseStructure ord_of(const FinCategory& cat, const Val& j) {
  if (!j.contains("ordering")) return default_ordering(cat);
  InverseStructure o;
  for (auto& [k, v] : j.at("ordering").items())
    for (auto& a : v) o.order[k].push_back(a.get<std::string>());
  return o;
}

static std::shared_ptr<ReedyEnv> make_env(const std::string& fixture,
                                          ModelPtr model) {
  Val j = load_fixture(fixture);
  auto cat = FinCategory::from_json(j);
  return make_reedy_env(std::move(model), cat, ord_of(cat, j));
}

static Val mk_type(const ReedyEnv& env, const Val& Gam,
                   const std::function<Val(const std::string&, const Val&)>& comp) {
  Val A = Val{{"components", Val::object()}};
  for (auto& i : env.topo)
    A["components"][i] = comp(i, matching_total(env, Gam, A, i));
  return A;
}

static Val uniform_fibers(const Val& tot, int n, const std::string& tag) {
  return fs_ty(tot, [&](const Val&) {
    std::vector<Val> v;
    for (int k = 0; k < n; ++k) v.push_back(tag + std::to_string(k));
    return fs_obj(v);
  });
}

// the discrete subcategory {0, 1} of the span, as an ordered opfibration
struct SpanPair {
  std::shared_ptr<ReedyEnv> envI, envJ;
  OpfibWitness u;
};
static SpanPair span_pair() {
  Val jI = load_fixture("span");
  auto catI = FinCategory::from_json(jI);
  auto envI = make_reedy_env(make_finset_model(), catI, ord_of(catI, jI));
  FinCategory catJ =
      FinCategory::from_json(Val{{"objects", {"0", "1"}}});
  auto envJ = make_reedy_env(make_finset_model(), catJ, default_ordering(catJ));
  std::map<std::string, std::string> ob{{"0", "0"}, {"1", "1"}};
  std::map<std::string, std::string> ar{{"id:0", "id:0"}, {"id:1", "id:1"}};
  auto ordJ = default_ordering(catJ);
  auto ordI = ord_of(catI, jI);
  auto u = validate_opfibration(catJ, catI, ob, ar, &ordJ, &ordI);
  REQUIRE(u.has_value());
  REQUIRE(u->injective);
  return {envI, envJ, *u};
}

// the single object 0 of the marked interval (a cosieve: no arrows leave 0)
struct IntervalPair {
  std::shared_ptr<ReedyEnv> envI, envJ;
  OpfibWitness u;
  HomotopyEquivData h;
  HomotopicalMarking wI, wJ;
};
static IntervalPair interval_pair() {
  Val jI = load_fixture("interval-marked");
  auto catI = FinCategory::from_json(jI);
  auto envI = make_reedy_env(make_finset_model(), catI, ord_of(catI, jI));
  FinCategory catJ = FinCategory::from_json(Val{{"objects", {"0"}}});
  auto envJ = make_reedy_env(make_finset_model(), catJ, default_ordering(catJ));
  std::map<std::string, std::string> ob{{"0", "0"}};
  std::map<std::string, std::string> ar{{"id:0", "id:0"}};
  auto ordJ = default_ordering(catJ);
  auto ordI = ord_of(catI, jI);
  auto u = validate_opfibration(catJ, catI, ob, ar, &ordJ, &ordI);
  REQUIRE(u.has_value());
  REQUIRE(u->injective);
  HomotopyEquivData h;
  h.v.ob = {{"0", "0"}, {"1", "0"}};
  h.v.ar = {{"a", "id:0"}};
  h.eta = {{"0", "id:0"}, {"1", "a"}};
  h.eps = {{"0", "id:0"}};
  HomotopicalMarking wI;
  wI.equivalences = {"a"};
  return {envI, envJ, *u, h, wI, HomotopicalMarking{}};
}

TEST_CASE("functor and homotopy-equivalence validation") {
  auto ip = interval_pair();
  validate_functor(ip.envI->cat, ip.envJ->cat, ip.h.v);
  validate_homotopy_equiv(ip.envI->cat, ip.envJ->cat, ip.u, ip.h, ip.wI,
                          ip.wJ);

  // a functor with broken endpoints is rejected
  Functor badf = ip.h.v;
  badf.ob["1"] = "missing";
  CHECK_THROWS_AS(validate_functor(ip.envI->cat, ip.envJ->cat, badf), Error);

  // the unit must be marked
  HomotopicalMarking empty;
  CHECK_THROWS_AS(validate_homotopy_equiv(ip.envI->cat, ip.envJ->cat, ip.u,
                                          ip.h, empty, ip.wJ),
                  Error);
}

TEST_CASE("cosieve lifting along {0,1} into the span") {
  auto sp = span_pair();
  ModelPtr dmI = diagram_cwa(sp.envI);
  ModelPtr dmJ = diagram_cwa(sp.envJ);
  Val G = dmI->terminal();
  Val uG = restrict_diagram(*sp.envJ, *sp.envI, sp.u, G);

  // every instance with fibers <= 2: restrict a type, lift its identity back
  auto As = dmI->all_types(G, 2);
  size_t checked = 0;
  for (auto& A : As) {
    Val uA = restrict_reedy_type(*sp.envJ, *sp.envI, sp.u, uG, G, A);
    Val e = dmJ->identity(dmJ->ext(uG, uA));
    CosieveLift cl = cosieve_lift(sp.envJ, sp.envI, sp.u, G, A, uA, e);
    CHECK(restrict_reedy_type(*sp.envJ, *sp.envI, sp.u, uG, G, cl.Bbar) == uA);
    CHECK(levelwise_equiv(*sp.envI, G, cl.Bbar, A, cl.ebar).ok);
    ++checked;
  }
  CHECK(checked == As.size());
  CHECK(checked > 20);

  // a genuinely partial B: singleton fibers downstairs mapping into a wider A
  Val A = mk_type(*sp.envI, G, [&](const std::string&, const Val& tot) {
    return uniform_fibers(tot, 2, "a");
  });
  Val uA = restrict_reedy_type(*sp.envJ, *sp.envI, sp.u, uG, G, A);
  Val B = mk_type(*sp.envJ, uG, [&](const std::string&, const Val& tot) {
    return uniform_fibers(tot, 1, "b");
  });
  // e picks the first element of each fiber of u*A
  const Model& bJ = *sp.envJ->model;
  Val comp = Val::object();
  for (auto& j : sp.envJ->cat.objects) {
    Val Mb = matching_total(*sp.envJ, uG, B, j);
    Val dom = bJ.ext(Mb, B.at("components").at(j));
    Val codA = uA.at("components").at(j);
    Val cod = bJ.ext(matching_total(*sp.envJ, uG, uA, j), codA);
    Val pB = bJ.proj(Mb, B.at("components").at(j));
    comp[j] = fs_mor(dom, cod, [&](const Val& x) {
      Val y = x;
      y.back() = fs_fiber(codA, fs_apply(pB, x))[0];
      return y;
    });
  }
  Val e = Val{{"dom", comprehend(*sp.envJ, uG, B).first},
              {"cod", comprehend(*sp.envJ, uG, uA).first},
              {"comp", comp}};
  validate_diagram_map(*sp.envJ, e);
  CosieveLift cl = cosieve_lift(sp.envJ, sp.envI, sp.u, G, A, B, e);
  CHECK(restrict_reedy_type(*sp.envJ, *sp.envI, sp.u, uG, G, cl.Bbar) == B);
  validate_diagram_map(*sp.envI, cl.ebar);
  // outside the image the lift is a matching pullback, so fibers match A's
  // only through the mediating map; the restriction is on the nose
  for (auto& j : sp.envJ->cat.objects)
    CHECK(cl.ebar.at("comp").at(j) == comp.at(j));

  // section extension restricts to the given section
  auto ss = dmJ->sections_of(uG, B);
  REQUIRE(!ss.empty());
  Val sbar = cosieve_extend_section(sp.envJ, sp.envI, sp.u, G, cl.Bbar,
                                    ss.front());
  validate_diagram_map(*sp.envI, sbar);
  CHECK(restrict_diagram_map(*sp.envJ, *sp.envI, sp.u, sbar) == ss.front());
}

TEST_CASE("Reedy factorisation through a single type") {
  auto env = make_env("span", make_finset_model());
  ModelPtr mp = lifted_cwa(env);
  const Model& m = *mp;
  Val G = m.terminal();
  Val A = mk_type(*env, G, [&](const std::string& i, const Val& tot) {
    return uniform_fibers(tot, i == "01" ? 1 : 2, "a");
  });
  Val B = mk_type(*env, G, [&](const std::string&, const Val& tot) {
    return uniform_fibers(tot, 1, "b");
  });
  Telescope AA = tel_one(G, A), BB = tel_one(G, B);

  auto secs = m.sections_of(G, B);
  REQUIRE(!secs.empty());
  Val f = m.compose(secs.front(), m.proj(G, A));
  ReedyFactorisation rf = reedy_factorisation(env, G, AA, BB, f);
  CHECK(m.compose(rf.p, rf.w) == f);
  CHECK(equiv_valid(m, rf.wdata));
  Telescope mid{G, {B, rf.C}};
  CHECK(equivalence_oracle(m, G, AA, mid, rf.w).has_value());

  // empty target telescope: factor the projection itself
  Telescope none{G, {}};
  ReedyFactorisation rp = reedy_factorisation(env, G, AA, none, m.proj(G, A));
  CHECK(m.compose(rp.p, rp.w) == m.proj(G, A));
  CHECK(equiv_valid(m, rp.wdata));
}

TEST_CASE("Reedy replacement of a comprehension projection") {
  auto env = make_env("span", make_finset_model());
  const Model& b = *env->model;
  ModelPtr dmp = diagram_cwa(env);
  Val G = dmp->terminal();
  Val A = mk_type(*env, G, [&](const std::string& i, const Val& tot) {
    return uniform_fibers(tot, i == "0" ? 2 : 1, "a");
  });
  auto [GA, p] = comprehend(*env, G, A);
  ReedyReplacement rr = reedy_replace(env, Val{{"dom", GA}, {"cod", G},
                                               {"comp", p.at("comp")}},
                                      2);
  // the replacement is levelwise invertible over the original projection
  for (auto& i : env->topo) {
    auto inv = b.invert(rr.w.at("comp").at(i));
    CHECK(inv.has_value());
  }
  // and reproduces the fiber counts of A
  Val GA2 = comprehend(*env, G, rr.A).first;
  for (auto& i : env->topo)
    CHECK(GA2.at("ob").at(i).size() == GA.at("ob").at(i).size());
}

TEST_CASE("descent along an equivalence and span-to-map") {
  auto env = make_env("span", make_finset_model());
  ModelPtr mp = lifted_cwa(env);
  const Model& m = *mp;
  Val G = m.terminal();
  Val A = mk_type(*env, G, [&](const std::string& i, const Val& tot) {
    return uniform_fibers(tot, i == "01" ? 1 : 2, "a");
  });
  Val GA = m.ext(G, A);
  Val B1 = mk_type(*env, GA, [&](const std::string&, const Val& tot) {
    return uniform_fibers(tot, 1, "b");
  });
  Telescope AA{G, {A, B1}};

  DescendType dt = descend_type(env, m.identity(G), AA, 2);
  CHECK(m.dom(dt.ebar) == tel_total(m, AA));
  CHECK(m.cod(dt.ebar) == m.ext(G, dt.B));
  CHECK(equiv_valid(m, dt.compare));

  // a span of projections out of a padded middle collapses to a direct map
  SpanToMap sm = span_to_map(env, G, A, A, AA, tel_proj_to(m, AA, 1),
                             tel_proj_to(m, AA, 1));
  CHECK(equiv_valid(m, sm.data));
  CHECK(m.dom(sm.b) == m.ext(G, A));
  CHECK(m.cod(sm.b) == m.ext(G, A));
}

TEST_CASE("zigzag improvement collapses vertices and removes spans") {
  auto env = make_env("span", make_finset_model());
  ModelPtr mp = lifted_cwa(env);
  const Model& m = *mp;
  Val G = m.terminal();
  Val A = mk_type(*env, G, [&](const std::string& i, const Val& tot) {
    return uniform_fibers(tot, i == "01" ? 1 : 2, "a");
  });
  Val GA = m.ext(G, A);
  Val B1 = mk_type(*env, GA, [&](const std::string&, const Val& tot) {
    return uniform_fibers(tot, 1, "b");
  });
  Telescope mid{G, {A, B1}};
  Val drop = tel_proj_to(m, mid, 1);

  ZigZag z;
  z.base = G;
  z.vertices = {tel_one(G, A), mid, tel_one(G, A)};
  z.legs = {{false, drop}, {true, drop}};
  CHECK(zigzag_valid(m, z));

  ZigZag out = zigzag_improve(env, z);
  CHECK(out.vertices.size() == 2);
  CHECK(out.legs.size() == 1);
  CHECK(out.legs.front().forward);
  for (auto& v : out.vertices) CHECK(v.size() == 1);
  CHECK(zigzag_valid(m, out));
}

TEST_CASE("square completion: missing vertex and edge") {
  auto env = make_env("span", make_finset_model());
  ModelPtr mp = lifted_cwa(env);
  const Model& m = *mp;
  Val G = m.terminal();
  Val A = mk_type(*env, G, [&](const std::string& i, const Val& tot) {
    return uniform_fibers(tot, i == "01" ? 1 : 2, "a");
  });
  Val idA = m.identity(m.ext(G, A));

  Square s;
  s.base = G;
  s.A = A; s.B = A; s.C = A;
  s.ab = idA; s.ac = idA;
  Square done = complete_square(env, s);
  CHECK(done.D.has_value());
  CHECK(*done.D == A);
  CHECK(done.bd.has_value());
  CHECK(done.cd.has_value());

  // a full boundary has nothing to complete
  CHECK_THROWS_AS((void)complete_square(env, done), Error);

  // two missing vertices are rejected
  Square sparse;
  sparse.base = G;
  sparse.A = A; sparse.B = A;
  sparse.ab = idA;
  CHECK_THROWS_AS((void)complete_square(env, sparse), Error);
}

TEST_CASE("grid completion extracts the corner equivalence") {
  auto env = make_env("span", make_finset_model());
  ModelPtr mp = lifted_cwa(env);
  const Model& m = *mp;
  Val G = m.terminal();
  Val A = mk_type(*env, G, [&](const std::string& i, const Val& tot) {
    return uniform_fibers(tot, i == "01" ? 1 : 2, "a");
  });
  Val idA = m.identity(m.ext(G, A));

  Grid g;
  g.base = G;
  g.V = {{A, A}, {A, std::nullopt}};
  g.h = {{idA}, {std::nullopt}};
  g.v = {{idA, std::nullopt}};
  GridResult res = complete_grid(env, g);
  CHECK(res.completed.V[1][1].has_value());
  CHECK(res.corner == idA);
  CHECK(equiv_valid(m, res.data));
}

TEST_CASE("weak lifting along the interval homotopy equivalence") {
  auto ip = interval_pair();
  validate_homotopy_equiv(ip.envI->cat, ip.envJ->cat, ip.u, ip.h, ip.wI,
                          ip.wJ);
  ModelPtr dmJ = diagram_cwa(ip.envJ);
  ModelPtr mJ = lifted_cwa(ip.envJ);
  Val GI = diagram_cwa(ip.envI)->terminal();
  Val uG = restrict_diagram(*ip.envJ, *ip.envI, ip.u, GI);

  Val A = mk_type(*ip.envJ, uG, [&](const std::string&, const Val& tot) {
    return uniform_fibers(tot, 2, "a");
  });
  WeakLift wl = weak_lift_homotopy_equiv(ip.envJ, ip.envI, ip.u, ip.h, GI, A, 2);
  CHECK(equiv_valid(*mJ, wl.data));
  // the lifted type is homotopical for the marked interval
  CHECK(is_homotopical_type(*ip.envI, ip.wI, GI, wl.Abar).ok);
  // and its restriction compares to A by the produced slice equivalence
  Val uAbar = restrict_reedy_type(*ip.envJ, *ip.envI, ip.u, uG, GI, wl.Abar);
  CHECK(levelwise_equiv(*ip.envJ, uG, uAbar, A, wl.comp).ok);
}

TEST_CASE("classification over the interval: local trivial fibration") {
  auto ip = interval_pair();
  LiftReport lr = classify(ip.envJ, ip.envI, ip.u, ip.h, 2, 8);
  CHECK(!lr.fibration.entries.empty());
  CHECK(!lr.equivalence.entries.empty());
  CHECK(!lr.trivial_fibration.entries.empty());
  for (auto& e : lr.fibration.entries) {
    INFO("fibration " << e.name);
    CHECK(e.verdict == "pass");
  }
  for (auto& e : lr.equivalence.entries) {
    INFO("equivalence " << e.name);
    CHECK(e.verdict == "pass");
  }
  for (auto& e : lr.trivial_fibration.entries) {
    INFO("trivial-fibration " << e.name);
    CHECK(e.verdict == "pass");
  }

  // without homotopy-equivalence data the weak lifts are indeterminate
  LiftReport plain = classify(ip.envJ, ip.envI, ip.u, std::nullopt, 2, 4);
  CHECK(plain.equivalence.entries.front().verdict == "indeterminate");
}

TEST_CASE("classification over the span cosieve: fibration side") {
  auto sp = span_pair();
  LiftReport lr = classify(sp.envJ, sp.envI, sp.u, std::nullopt, 2, 6);
  CHECK(!lr.fibration.entries.empty());
  for (auto& e : lr.fibration.entries) {
    INFO("fibration " << e.name);
    CHECK(e.verdict == "pass");
  }
  CHECK(lr.equivalence.entries.front().verdict == "indeterminate");
}
