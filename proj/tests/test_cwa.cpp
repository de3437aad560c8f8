#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "models/finset.hpp"
#include "models/trivial.hpp"

using namespace cwa;

static std::vector<Val> finset_universe() {
  return {
      fs_obj({Val("u")}),
      fs_obj({Val("u"), Val("v")}),
      fs_obj({Val("u"), Val("v"), Val("w")}),
  };
}

TEST_CASE("finset satisfies the cwa laws") {
  auto m = make_finset_model();
  LawBudget b;
  b.fiber_bound = 2;
  Report r = check_cwa_laws(*m, finset_universe(), b);
  INFO(r.summary());
  CHECK(r.ok());
}

TEST_CASE("trivial model over span satisfies the cwa laws") {
  auto cat = FinCategory::from_json(load_fixture("span"));
  auto m = make_trivial_model(cat);
  std::vector<Val> universe = {Val("0"), Val("1"), Val("01"), m->terminal()};
  Report r = check_cwa_laws(*m, universe);
  INFO(r.summary());
  CHECK(r.ok());
}

TEST_CASE("telescope helpers compose projections and satisfy pairing") {
  auto mp = make_finset_model();
  const Model& m = *mp;
  Val G = fs_obj({Val("x"), Val("y")});
  Val A = fs_ty(G, [](const Val& x) {
    return x == Val("x") ? fs_obj({Val("a0"), Val("a1")}) : fs_obj({Val("a0")});
  });
  Val GA = m.ext(G, A);
  Val B = fs_ty(GA, [](const Val&) { return fs_obj({Val("b")}); });
  Telescope t{G, {A, B}};
  Val total = tel_total(m, t);
  CHECK(total == m.ext(GA, B));
  CHECK(tel_proj(m, t) ==
        m.compose(m.proj(G, A), m.proj(GA, B)));
  CHECK(tel_proj_to(m, t, 2) == m.identity(total));
  CHECK(tel_proj_to(m, t, 0) == tel_proj(m, t));

  // reindex along a map and check the telescope pullback equations
  Val D = fs_obj({Val("p"), Val("q")});
  Val f = fs_mor(D, G, [](const Val&) { return Val("x"); });
  Telescope ft = tel_reindex(m, f, t);
  Val q = tel_qmor(m, f, t);
  CHECK(m.compose(tel_proj(m, t), q) == m.compose(f, tel_proj(m, ft)));
  for (auto& k : m.hom(D, D)) {
    // any section-style pair: take m_ = q o (a point of the reindexed total)
    for (auto& s : tel_sections(m, ft)) {
      Val u = m.compose(s, k);
      Val paired = tel_pair_into(m, f, t, m.compose(tel_proj(m, ft), u),
                                 m.compose(q, u));
      CHECK(paired == u);
    }
  }
}

TEST_CASE("sections enumerate exactly the dependent choices") {
  auto mp = make_finset_model();
  const Model& m = *mp;
  Val G = fs_obj({Val("x"), Val("y")});
  Val A = fs_ty(G, [](const Val& x) {
    return x == Val("x") ? fs_obj({Val("a0"), Val("a1")})
                         : fs_obj({Val("c0"), Val("c1"), Val("c2")});
  });
  auto ss = sections(m, G, A);
  CHECK(ss.size() == 6);
  for (auto& s : ss) CHECK(is_section(m, G, A, s));
}

namespace {

// deliberately corrupted model: the dependent projection is twisted by a
// nontrivial automorphism, so naturality and the pullback property must fail
class BrokenFinSet : public FinSetModel {
 public:
  std::string name() const override { return "finset-broken"; }
  Val proj(const Val& G, const Val& A) const override {
    Val E = ext(G, A);
    Val p = FinSetModel::proj(G, A);
    if (E.size() < 2) return p;
    Val a = E[0], b = E[1];
    Val sigma = fs_mor(E, E, [&](const Val& x) {
      if (x == a) return b;
      if (x == b) return a;
      return x;
    });
    return FinSetModel::compose(p, sigma);
  }
};

}  // namespace

TEST_CASE("law checker discriminates a corrupted model") {
  BrokenFinSet broken;
  LawBudget b;
  b.fiber_bound = 2;
  Report r = check_cwa_laws(broken, finset_universe(), b);
  CHECK_FALSE(r.ok());
  CHECK(r.fails() > 0);
}

TEST_CASE("report serialization and verdicts") {
  Report r;
  r.add("alpha", true);
  r.add("beta", false, Val{{"detail", 1}});
  r.add_indeterminate("gamma");
  CHECK_FALSE(r.ok());
  CHECK(r.fails() == 1);
  Val j = r.to_json();
  CHECK(j.is_array());
  CHECK(j.size() == 3);
  CHECK(j[1].at("verdict") == Val("fail"));
}
