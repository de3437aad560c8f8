#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "homotopical.hpp"
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

static HomotopicalMarking marking_of(const std::string& fixture) {
  Val j = load_fixture(fixture);
  HomotopicalMarking w;
  if (j.contains("equivalences"))
    for (auto& a : j.at("equivalences")) w.equivalences.insert(a.get<std::string>());
  return w;
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

// over the terminal span diagram: two-point fibers at 0 and 1 sharing labels,
// top level supported on the diagonal of the two matching legs
static Val diagonal_type(const ReedyEnv& env, const Val& G) {
  Val A = Val{{"components", Val::object()}};
  Val fib = fs_obj({Val("c0"), Val("c1")});
  A["components"]["0"] = fs_ty(matching_total(env, G, A, "0"),
                               [&](const Val&) { return fib; });
  A["components"]["1"] = fs_ty(matching_total(env, G, A, "1"),
                               [&](const Val&) { return fib; });
  const ReedyLimit& MT = matching_telescope(env, G, A, "01");
  Val tot = tel_total(*env.model, MT.tel);
  const Val &l0 = MT.cone.leg("0", Val("to0")), &l1 = MT.cone.leg("1", Val("to1"));
  A["components"]["01"] = fs_ty(tot, [&](const Val& x) {
    return fs_apply(l0, x).back() == fs_apply(l1, x).back()
               ? fs_obj({Val("*")})
               : fs_obj({});
  });
  return A;
}

TEST_CASE("homotopicality of diagrams and types over the marked span") {
  auto env = make_env("wkmap", make_finset_model());
  HomotopicalMarking w = marking_of("wkmap");
  ModelPtr dmp = diagram_cwa(env);
  const Model& dm = *dmp;
  Val G = dm.terminal();

  // constant diagrams are homotopical: the marked action is an identity
  HomotopicalVerdict hv = is_homotopical_diagram(*env, w, G);
  CHECK(hv.ok);
  CHECK(hv.comparisons.size() == 1);
  CHECK(hv.comparisons.front().arrow == "to0");

  // diagonal support makes the marked comparison a bijection
  Val A = diagonal_type(*env, G);
  CHECK(is_homotopical_type(*env, w, G, A).ok);

  // a two-to-one comparison is refuted with the marked arrow as witness
  Val bad = mk_type(*env, G, [&](const std::string& i, const Val& tot) {
    return uniform_fibers(tot, i == "0" ? 1 : (i == "1" ? 1 : 2), "x");
  });
  HomotopicalVerdict hb = is_homotopical_type(*env, w, G, bad);
  CHECK(!hb.ok);
  CHECK(hb.witness == "to0");

  // an extension is homotopical exactly when its comprehension is
  auto types = dm.all_types(G, 2);
  size_t stride = types.size() / 12 + 1, agree = 0;
  for (size_t k = 0; k < types.size(); k += stride) {
    CHECK(is_homotopical_type(*env, w, G, types[k]).ok ==
          is_homotopical_diagram(*env, w, dm.ext(G, types[k])).ok);
    ++agree;
  }
  CHECK(agree >= 10);
}

TEST_CASE("the homotopical view guards its constructions") {
  auto env = make_env("wkmap", make_finset_model());
  HomotopicalMarking w = marking_of("wkmap");
  ModelPtr view = homotopical_view(env, w);
  ModelPtr full = lifted_cwa(env);
  Val G = view->terminal();

  // with an empty marking the view is the whole lifted model
  ModelPtr plain = homotopical_view(env, HomotopicalMarking{});
  CHECK(plain->all_types(G, 1).size() == full->all_types(G, 1).size());

  // membership guards: non-homotopical types are rejected
  Val bad = mk_type(*env, G, [&](const std::string& i, const Val& tot) {
    return uniform_fibers(tot, i == "01" ? 2 : 1, "x");
  });
  CHECK_THROWS_AS((void)view->ext(G, bad), Error);

  // the marked span has an unmarked arrow, so pi is gated off
  Val A = diagonal_type(*env, G);
  Val GA = view->ext(G, A);
  Val B = mk_type(*env, GA, [&](const std::string&, const Val& tot) {
    return uniform_fibers(tot, 1, "b");
  });
  CHECK_THROWS_AS((void)view->pi_ty(G, A, B), Error);

  // the view enumerates exactly the homotopical types
  for (auto& T : view->all_types(G, 1))
    CHECK(is_homotopical_type(*env, w, G, T).ok);
  CHECK(view->all_types(G, 1).size() < full->all_types(G, 1).size());

  // reindexing homotopical types along maps of homotopical diagrams stays
  // homotopical
  Val pA = view->proj(G, A);
  Val AA = view->reindex(pA, A);
  CHECK(is_homotopical_type(*env, w, GA, AA).ok);
  Val GAA = view->ext(GA, AA);  // guard would throw otherwise
  CHECK(GAA == full->ext(GA, AA));
}

TEST_CASE("closure of the lifted structure over the fully marked span") {
  auto env = make_env("span", make_finset_model());
  HomotopicalMarking w;
  w.equivalences = {"to0", "to1"};
  REQUIRE(marking_valid(env->cat, w));
  ModelPtr mp = lifted_cwa(env);
  const Model& m = *mp;
  Val G = mp->terminal();
  Val A = diagonal_type(*env, G);
  REQUIRE(is_homotopical_type(*env, w, G, A).ok);
  Val GA = m.ext(G, A);
  Val B = mk_type(*env, GA, [&](const std::string&, const Val& tot) {
    return uniform_fibers(tot, 1, "b");
  });
  REQUIRE(is_homotopical_type(*env, w, GA, B).ok);

  for (std::string s : {"unit", "id", "sigma", "pi"}) {
    Report rep = closure_check(env, w, s, G, A, B);
    for (auto& e : rep.entries) {
      INFO(s << ": " << e.name);
      CHECK(e.verdict == "pass");
    }
  }
}

TEST_CASE("pi closure over the fully marked interval") {
  auto env = make_env("interval-marked", make_finset_model());
  HomotopicalMarking w = marking_of("interval-marked");
  REQUIRE(w.equivalences.count("a") == 1);
  ModelPtr mp = lifted_cwa(env);
  const Model& m = *mp;
  Val G = mp->terminal();
  Val A = mk_type(*env, G, [&](const std::string& i, const Val& tot) {
    return uniform_fibers(tot, i == "0" ? 2 : 1, "a");
  });
  REQUIRE(is_homotopical_type(*env, w, G, A).ok);
  Val GA = m.ext(G, A);
  Val B = mk_type(*env, GA, [&](const std::string& i, const Val& tot) {
    return uniform_fibers(tot, i == "0" ? 2 : 1, "b");
  });
  REQUIRE(is_homotopical_type(*env, w, GA, B).ok);

  Report rep = closure_check(env, w, "pi", G, A, B);
  for (auto& e : rep.entries) CHECK(e.verdict == "pass");

  // the pi gate through the view accepts the fully marked category
  ModelPtr view = homotopical_view(env, w);
  Val P = view->pi_ty(G, A, B);
  CHECK(P == m.pi_ty(G, A, B));
}

TEST_CASE("pi fails over the marked span: the counterexample search") {
  WkMapReport r = wkmap_counterexample();
  CHECK(r.arrow == "to0");

  auto env = make_env("wkmap", make_finset_model());
  HomotopicalMarking w = marking_of("wkmap");
  // the found pair is homotopical while its Pi is not
  CHECK(is_homotopical_type(*env, w, r.Gam, r.A).ok);
  ModelPtr dmp = diagram_cwa(env);
  CHECK(is_homotopical_type(*env, w, dmp->ext(r.Gam, r.A), r.B).ok);
  HomotopicalVerdict hv = is_homotopical_type(*env, w, r.Gam, r.pi);
  CHECK(!hv.ok);
  CHECK(hv.witness == "to0");
  CHECK(r.fiber_sizes.at("dom") != r.fiber_sizes.at("cod"));
}

TEST_CASE("transfer across equivalence data matches the direct verdict") {
  auto env = make_env("wkmap", make_finset_model());
  HomotopicalMarking w = marking_of("wkmap");
  ModelPtr mp = lifted_cwa(env);
  const Model& m = *mp;
  Val G = m.terminal();

  Val good = diagonal_type(*env, G);
  Val bad = mk_type(*env, G, [&](const std::string& i, const Val& tot) {
    return uniform_fibers(tot, i == "01" ? 2 : 1, "x");
  });
  for (auto& A : {good, bad}) {
    bool direct = is_homotopical_type(*env, w, G, A).ok;
    EquivData ed = identity_equiv(m, G, tel_one(G, A));
    CHECK(transfer_homotopical(env, w, ed, "A", direct) == direct);
    CHECK(transfer_homotopical(env, w, ed, "B", direct) == direct);
  }

  // the refl constructor map carries the verdict onto the identity type
  Val A = good;
  Val GA = m.ext(G, A);
  Val G2 = m.ext(GA, m.reindex(m.proj(G, A), A));
  Val I = m.id_ty(G, A);
  Report rep = closure_check(env, w, "id", G, A);
  bool closure_ok = true;
  for (auto& e : rep.entries) closure_ok = closure_ok && e.verdict == "pass";
  CHECK(is_homotopical_type(*env, w, G2, I).ok == closure_ok);
}

TEST_CASE("homotopical maps of models: sampled gate") {
  ModelPtr fs = make_finset_model();
  Val X = fs_obj({Val("a"), Val("b")});
  Val Y = fs_obj({Val("c"), Val("d")});
  Val swap = fs_mor(X, Y, [](const Val& v) {
    return v == Val("a") ? Val("c") : Val("d");
  });

  CwaMap idm{fs, fs, [](const Val& G) { return G; },
             [](const Val& f) { return f; }, [](const Val& A) { return A; }};
  CHECK(is_homotopical_map(idm, {swap}));

  // a collapsing assignment is rejected: a bijection maps to a non-bijection
  CwaMap bad{fs, fs, [](const Val& G) { return G; },
             [](const Val& f) {
               return fs_mor(f.at("dom"), f.at("cod"),
                             [&](const Val&) { return f.at("cod")[0]; });
             },
             [](const Val& A) { return A; }};
  CHECK(!is_homotopical_map(bad, {swap}));
}
