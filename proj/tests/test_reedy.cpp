#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "models/finset.hpp"
#include "models/groupoid.hpp"
#include "models/trivial.hpp"
#include "reedy.hpp"

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

static Val span_diagram() {
  Val G0 = fs_obj({Val("x"), Val("y")});
  Val G1 = fs_obj({Val("u")});
  Val G01 = fs_obj({Val("p"), Val("q")});
  Val t0 = fs_mor(G01, G0,
                  [](const Val& z) { return z == Val("p") ? Val("x") : Val("y"); });
  Val t1 = fs_mor(G01, G1, [](const Val&) { return Val("u"); });
  return Val{{"ob", {{"0", G0}, {"1", G1}, {"01", G01}}},
             {"ar", {{"to0", t0}, {"to1", t1}}}};
}

// build a Reedy type componentwise, feeding each level its matching total
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

TEST_CASE("matching telescopes over the span") {
  auto env = make_env("span", make_finset_model());
  const Model& m = *env->model;
  Val Gam = span_diagram();
  validate_diagram(*env, Gam);

  Val A = mk_type(*env, Gam, [&](const std::string& i, const Val& tot) {
    if (i == "0") return uniform_fibers(tot, 2, "a");
    if (i == "1") return uniform_fibers(tot, 3, "b");
    return uniform_fibers(tot, 1, "c");
  });

  // minimal objects have empty matching telescopes
  CHECK(matching_telescope(*env, Gam, A, "0").tel.links.empty());
  CHECK(matching_total(*env, Gam, A, "0") == Gam.at("ob").at("0"));

  // at 01 the telescope pulls back A_0 then A_1, per the stored ordering
  const ReedyLimit& MT = matching_telescope(*env, Gam, A, "01");
  REQUIRE(MT.tel.links.size() == 2);
  CHECK(MT.steps[0].obj == "0");
  CHECK(MT.steps[1].obj == "1");
  CHECK(MT.tel.links[0] ==
        m.reindex(Gam.at("ar").at("to0"), A.at("components").at("0")));
  // 2 base points x (2 * 3) fibers
  CHECK(tel_total(m, MT.tel).size() == 12);

  // the yoneda extension appends the component itself on the nose
  auto [bde, ye] = boundary_extension(env->cat, env->ord, "01");
  ConeData lam;
  lam.apex = Gam.at("ob").at("01");
  lam.shape = ye.G;
  for (auto& [o, elems] : ye.G.sets)
    for (auto& x : elems)
      lam.set_leg(o, x, dia_ar(*env, Gam, x.get<std::string>()));
  ConeData mu;
  mu.shape = ye.F;
  ReedyLimit yl = reedy_limit(*env, ye, Gam, A, Gam.at("ob").at("01"), lam, mu);
  REQUIRE(yl.tel.links.size() == 3);
  CHECK(yl.tel.links[0] == MT.tel.links[0]);
  CHECK(yl.tel.links[1] == MT.tel.links[1]);
  CHECK(yl.tel.links[2] == A.at("components").at("01"));
}

TEST_CASE("empty extension folds to nothing") {
  auto env = make_env("span", make_finset_model());
  Val Gam = span_diagram();
  Val A = mk_type(*env, Gam, [&](const std::string&, const Val& tot) {
    return uniform_fibers(tot, 1, "t");
  });
  Copresheaf zero;
  for (auto& o : env->cat.objects) zero.sets[o] = {};
  FiniteExtension ext{zero, zero, {}};
  ConeData none;
  ReedyLimit rl = reedy_limit(*env, ext, Gam, A, Gam.at("ob").at("0"), none, none);
  CHECK(rl.tel.links.empty());
  CHECK(rl.cone.legs.empty());
}

TEST_CASE("chain of length three orders the composite first") {
  auto env = make_env("chain3", make_finset_model());
  const Model& m = *env->model;
  Val G0 = fs_obj({Val("x")});
  Val G1 = fs_obj({Val("u"), Val("v")});
  Val G2 = fs_obj({Val("s")});
  Val b = fs_mor(G2, G1, [](const Val&) { return Val("u"); });
  Val a = fs_mor(G1, G0, [](const Val&) { return Val("x"); });
  Val Gam = Val{{"ob", {{"0", G0}, {"1", G1}, {"2", G2}}},
                {"ar", {{"a", a}, {"b", b}, {"c", m.compose(a, b)}}}};
  validate_diagram(*env, Gam);
  Val A = mk_type(*env, Gam, [&](const std::string& i, const Val& tot) {
    return uniform_fibers(tot, 2, i);
  });
  const ReedyLimit& MT = matching_telescope(*env, Gam, A, "2");
  REQUIRE(MT.steps.size() == 2);
  CHECK(MT.steps[0].elem == Val("c"));
  CHECK(MT.steps[1].elem == Val("b"));
  // M_1 A feeds into the second link: its fold has one cell at 0
  CHECK(matching_telescope(*env, Gam, A, "1").steps.size() == 1);
}

TEST_CASE("diagram cwa over the span passes the laws") {
  auto env = make_env("span", make_finset_model());
  auto dm = diagram_cwa(env);
  Val Gam = span_diagram();
  std::vector<Val> universe = {dm->terminal(), Gam};
  LawBudget b;
  b.fiber_bound = 1;
  b.max_types = 16;
  b.max_homs = 40000;
  Report r = check_cwa_laws(*dm, universe, b);
  INFO(r.summary());
  CHECK(r.ok());
}

TEST_CASE("diagram cwa over wkmap-as-plain passes the laws") {
  auto env = make_env("wkmap", make_finset_model());
  auto dm = diagram_cwa(env);
  std::vector<Val> universe = {dm->terminal()};
  LawBudget b;
  b.fiber_bound = 1;
  b.max_types = 16;
  Report r = check_cwa_laws(*dm, universe, b);
  INFO(r.summary());
  CHECK(r.ok());
}

TEST_CASE("diagram cwa over the trivial model inherits degeneracy") {
  Val j = load_fixture("span");
  auto cat = FinCategory::from_json(j);
  auto env = make_reedy_env(make_trivial_model(cat), cat, ord_of(cat, j));
  auto dm = diagram_cwa(env);
  Val one = dm->terminal();
  for (auto& A : dm->all_types(one, 2))
    CHECK(dm->proj(one, A) == dm->identity(dm->ext(one, A)));
  Report r = check_cwa_laws(*dm, {one});
  INFO(r.summary());
  CHECK(r.ok());
}

TEST_CASE("reindexing is strictly functorial") {
  auto env = make_env("span", make_finset_model());
  auto dm = diagram_cwa(env);
  Val Gam = span_diagram();
  Val A = mk_type(*env, Gam, [&](const std::string& i, const Val& tot) {
    return uniform_fibers(tot, 2, i);
  });
  CHECK(dm->reindex(dm->identity(Gam), A) == A);

  Val one = dm->terminal();
  size_t checked = 0;
  for (auto& f : dm->hom(one, Gam)) {
    Val fA = dm->reindex(f, A);
    for (auto& g : dm->hom(one, one)) {
      CHECK(dm->reindex(g, fA) == dm->reindex(dm->compose(f, g), A));
      CHECK(dm->qmor(dm->compose(f, g), A) ==
            dm->compose(dm->qmor(f, A), dm->qmor(g, fA)));
      ++checked;
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("master lemma output is a relative pullback; mutations are not") {
  auto env = make_env("span", make_finset_model());
  const Model& m = *env->model;
  Val Gam = span_diagram();
  Val A = mk_type(*env, Gam, [&](const std::string& i, const Val& tot) {
    return uniform_fibers(tot, i == "01" ? 1 : 2, i);
  });
  auto [bde, ye] = boundary_extension(env->cat, env->ord, "01");
  ConeData lam;
  lam.apex = Gam.at("ob").at("01");
  lam.shape = bde.G;
  for (auto& [o, elems] : bde.G.sets)
    for (auto& x : elems)
      lam.set_leg(o, x, dia_ar(*env, Gam, x.get<std::string>()));
  ConeData mu;
  mu.shape = bde.F;
  const ReedyLimit& MT = matching_telescope(*env, Gam, A, "01");

  std::vector<Val> universe = {fs_obj({Val("k")}), fs_obj({Val("k"), Val("l")})};
  auto v = verify_relative_pullback(*env, MT.tel, MT.cone, bde, Gam, A,
                                    Gam.at("ob").at("01"), lam, mu, universe, 1);
  CHECK(v.verdict == "verified");

  // fattening the candidate with an extra free link breaks uniqueness
  Val tot = tel_total(m, MT.tel);
  Val pad = uniform_fibers(tot, 2, "z");
  Telescope fat = MT.tel;
  fat.links.push_back(pad);
  ConeData fatcone = MT.cone;
  fatcone.apex = m.ext(tot, pad);
  Val p = m.proj(tot, pad);
  for (auto& [k, leg] : fatcone.legs) leg = m.compose(leg, p);
  auto v2 = verify_relative_pullback(*env, fat, fatcone, bde, Gam, A,
                                     Gam.at("ob").at("01"), lam, mu, universe, 1);
  CHECK(v2.verdict == "refuted");

  // pruned candidate: drop the last link and retarget its legs arbitrarily
  Telescope thin{Gam.at("ob").at("01"), {MT.tel.links[0]}};
  Val thintot = tel_total(m, thin);
  ConeData thincone = MT.cone;
  thincone.apex = thintot;
  Val any = m.compose(MT.cone.leg("1", Val("to1")),
                      tel_qmor(m, m.identity(Gam.at("ob").at("01")), MT.tel));
  // reuse the original legs precomposed with a non-invertible comparison
  bool thin_ok = true;
  try {
    auto v3 = verify_relative_pullback(*env, thin, thincone, bde, Gam, A,
                                       Gam.at("ob").at("01"), lam, mu, universe, 1);
    thin_ok = (v3.verdict != "verified");
  } catch (const Error&) {
    // mismatched legs are also an acceptable rejection
    thin_ok = true;
  }
  CHECK(thin_ok);
  (void)any;
}

TEST_CASE("master lemma on the 3-chain verifies and rejects mutations") {
  auto env = make_env("chain3", make_finset_model());
  const Model& m = *env->model;
  Val G0 = fs_obj({Val("x")});
  Val G1 = fs_obj({Val("u"), Val("v")});
  Val G2 = fs_obj({Val("s")});
  Val b = fs_mor(G2, G1, [](const Val&) { return Val("u"); });
  Val a = fs_mor(G1, G0, [](const Val&) { return Val("x"); });
  Val Gam = Val{{"ob", {{"0", G0}, {"1", G1}, {"2", G2}}},
                {"ar", {{"a", a}, {"b", b}, {"c", m.compose(a, b)}}}};
  Val A = mk_type(*env, Gam, [&](const std::string& i, const Val& tot) {
    return uniform_fibers(tot, 2, i);
  });
  auto [bde, ye] = boundary_extension(env->cat, env->ord, "2");
  ConeData lam;
  lam.apex = G2;
  lam.shape = bde.G;
  for (auto& [o, elems] : bde.G.sets)
    for (auto& x : elems)
      lam.set_leg(o, x, dia_ar(*env, Gam, x.get<std::string>()));
  ConeData mu;
  mu.shape = bde.F;
  const ReedyLimit& MT = matching_telescope(*env, Gam, A, "2");
  std::vector<Val> universe = {fs_obj({Val("k")})};
  auto v = verify_relative_pullback(*env, MT.tel, MT.cone, bde, Gam, A, G2, lam,
                                    mu, universe, 1);
  CHECK(v.verdict == "verified");

  Val tot = tel_total(m, MT.tel);
  Val pad = uniform_fibers(tot, 2, "z");
  Telescope fat = MT.tel;
  fat.links.push_back(pad);
  ConeData fatcone = MT.cone;
  fatcone.apex = m.ext(tot, pad);
  Val p = m.proj(tot, pad);
  for (auto& [k, leg] : fatcone.legs) leg = m.compose(leg, p);
  auto v2 = verify_relative_pullback(*env, fat, fatcone, bde, Gam, A, G2, lam,
                                     mu, universe, 1);
  CHECK(v2.verdict == "refuted");
}

TEST_CASE("fold commutes with reindexing of the apex") {
  auto env = make_env("span", make_finset_model());
  const Model& m = *env->model;
  Val Gam = span_diagram();
  Val A = mk_type(*env, Gam, [&](const std::string& i, const Val& tot) {
    return uniform_fibers(tot, 2, i);
  });
  auto [bde, ye] = boundary_extension(env->cat, env->ord, "01");
  ConeData lam;
  lam.apex = Gam.at("ob").at("01");
  lam.shape = bde.G;
  for (auto& [o, elems] : bde.G.sets)
    for (auto& x : elems)
      lam.set_leg(o, x, dia_ar(*env, Gam, x.get<std::string>()));
  ConeData mu;
  mu.shape = bde.F;
  ReedyLimit rl =
      reedy_limit(*env, bde, Gam, A, Gam.at("ob").at("01"), lam, mu);

  Val D = fs_obj({Val("d")});
  for (auto& f : m.hom(D, Gam.at("ob").at("01"))) {
    ConeData lam2 = lam;
    lam2.apex = D;
    for (auto& [k, leg] : lam2.legs) leg = m.compose(leg, f);
    ReedyLimit rl2 = reedy_limit(*env, bde, Gam, A, D, lam2, mu);
    CHECK(rl2.tel == tel_reindex(m, f, rl.tel));
    Val q = tel_qmor(m, f, rl.tel);
    for (auto& [k, leg] : rl2.cone.legs)
      CHECK(leg == m.compose(rl.cone.legs.at(k), q));
  }
}

TEST_CASE("restriction along the endpoint inclusion into the span") {
  Val jI = load_fixture("span");
  auto catI = FinCategory::from_json(jI);
  auto envI = make_reedy_env(make_finset_model(), catI, ord_of(catI, jI));
  FinCategory catJ;
  catJ.objects = {"0", "1"};
  catJ.arrows = {{"id:0", "0", "0"}, {"id:1", "1", "1"}};
  catJ.validate_structure();
  auto envJ =
      make_reedy_env(make_finset_model(), catJ, default_ordering(catJ));

  std::map<std::string, std::string> ob{{"0", "0"}, {"1", "1"}};
  std::map<std::string, std::string> ar{{"id:0", "id:0"}, {"id:1", "id:1"}};
  auto ordJ = default_ordering(catJ);
  auto ordI = ord_of(catI, jI);
  auto u = validate_opfibration(catJ, catI, ob, ar, &ordJ, &ordI);
  REQUIRE(u.has_value());
  CHECK(u->ordered);

  Val Gam = span_diagram();
  Val A = mk_type(*envI, Gam, [&](const std::string& i, const Val& tot) {
    return uniform_fibers(tot, 2, i);
  });
  Val GamJ = restrict_diagram(*envJ, *envI, *u, Gam);
  CHECK(GamJ.at("ob").at("0") == Gam.at("ob").at("0"));
  CHECK(!GamJ.at("ob").contains("01"));
  Val AJ = restrict_reedy_type(*envJ, *envI, *u, GamJ, Gam, A);
  CHECK(AJ.at("components").size() == 2);
  CHECK(AJ.at("components").at("0") == A.at("components").at("0"));
}

TEST_CASE("strictification is idempotent and absorbs isos") {
  auto env = make_env("span", make_finset_model());
  const Model& m = *env->model;
  Val Gam = span_diagram();
  Val A = mk_type(*env, Gam, [&](const std::string& i, const Val& tot) {
    return uniform_fibers(tot, 2, i);
  });
  WeakReedyType w;
  w.components = A.at("components");
  CHECK(strictify(*env, Gam, w) == A);

  // permute the labels of the matching total at 01
  Val tot = matching_total(*env, Gam, A, "01");
  std::vector<Val> renamed;
  for (size_t k = 0; k < tot.size(); ++k)
    renamed.push_back("m" + std::to_string(k));
  Val chosen = fs_obj(renamed);
  std::map<std::string, Val> fwd;
  for (size_t k = 0; k < tot.size(); ++k) fwd[dump(tot[k])] = chosen[k];
  Val iso = fs_mor(tot, chosen, [&](const Val& x) { return fwd.at(dump(x)); });
  WeakReedyType w2;
  w2.components = A.at("components");
  w2.components["01"] = m.reindex(*m.invert(iso), A.at("components").at("01"));
  w2.iso["01"] = iso;
  Val A2 = strictify(*env, Gam, w2);
  CHECK(A2 == A);
}

TEST_CASE("levelwise cwa map into groupoids preserves the structure") {
  CwaMap F;
  F.src = make_finset_model();
  F.dst = make_groupoid_model();
  F.ob = [](const Val& G) {
    std::vector<Val> labels(G.begin(), G.end());
    return gp_discrete(labels);
  };
  F.mor = [&F](const Val& f) {
    return gp_functor(F.ob(f.at("dom")), F.ob(f.at("cod")),
                      [&](const Val& x) { return fs_apply(f, x); },
                      [](const Val&) -> Val { throw Error("discrete"); });
  };
  F.ty = [&F](const Val& A) {
    std::vector<Val> rows;
    for (auto& e : A) {
      std::vector<Val> labels(e[1].begin(), e[1].end());
      rows.push_back(Val::array({e[0], gp_discrete(labels)}));
    }
    std::sort(rows.begin(), rows.end());
    return Val{{"fib", rows}, {"act", Val::array()}};
  };

  std::vector<Val> universe = {fs_obj({Val("u")}), fs_obj({Val("u"), Val("v")})};
  Report r = validate_cwa_map(F, universe, 2);
  INFO(r.summary());
  CHECK(r.ok());

  Val jI = load_fixture("span");
  auto catI = FinCategory::from_json(jI);
  auto env_src = make_reedy_env(F.src, catI, ord_of(catI, jI));
  auto env_dst = make_reedy_env(F.dst, catI, ord_of(catI, jI));
  Val Gam = span_diagram();
  Val A = mk_type(*env_src, Gam, [&](const std::string& i, const Val& tot) {
    return uniform_fibers(tot, 2, i);
  });
  Val FA = map_reedy_type(*env_src, *env_dst, F, Gam, A);
  CHECK(FA.at("components").size() == 3);
  Val FD = map_diagram(F, Gam);
  auto [FDA, fp] = comprehend(*env_dst, FD, FA);
  auto [DA, p] = comprehend(*env_src, Gam, A);
  CHECK(FDA == map_diagram(F, DA));
}
