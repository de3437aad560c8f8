#include "groupoid.hpp"

#include <algorithm>
#include <map>

namespace cwa {

namespace {

Val assoc(const Val& table, const Val& key) {
  for (auto& e : table)
    if (e[0] == key) return e[1];
  throw Error("groupoid: key not in table: " + key.dump());
}

void sort_vals(std::vector<Val>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

Val sorted_table(std::vector<Val> rows) {
  sort_vals(rows);
  Val out = Val::array();
  for (auto& r : rows) out.push_back(r);
  return out;
}

}  // namespace

Val gp_id(const Val& x) { return Val::array({Val("id"), x}); }

bool gp_is_id(const Val& l) {
  return l.is_array() && l.size() == 2 && l[0] == Val("id");
}

// pair label in a Grothendieck groupoid / Sigma fiber; identity pairs collapse
static Val canon_lbl(const Val& u, const Val& v) {
  if (gp_is_id(u) && gp_is_id(v)) return gp_id(Val::array({u[1], v[1]}));
  return Val::array({u, v});
}

static std::pair<Val, Val> split_lbl(const Val& l) {
  if (gp_is_id(l)) return {gp_id(l[1][0]), gp_id(l[1][1])};
  return {l[0], l[1]};
}

Val gp_src(const Val& G, const Val& m) {
  if (gp_is_id(m)) return m[1];
  for (auto& r : G.at("mor"))
    if (r.at("id") == m) return r.at("src");
  throw Error("groupoid: unknown morphism " + m.dump());
}

Val gp_dst(const Val& G, const Val& m) {
  if (gp_is_id(m)) return m[1];
  for (auto& r : G.at("mor"))
    if (r.at("id") == m) return r.at("dst");
  throw Error("groupoid: unknown morphism " + m.dump());
}

Val gp_comp(const Val& G, const Val& g, const Val& f) {
  if (gp_is_id(f)) return g;
  if (gp_is_id(g)) return f;
  for (auto& r : G.at("comp"))
    if (r[0] == g && r[1] == f) return r[2];
  throw Error("groupoid: non-composable pair " + g.dump() + " o " + f.dump());
}

Val gp_inv(const Val& G, const Val& m) {
  if (gp_is_id(m)) return m;
  Val s = gp_src(G, m), d = gp_dst(G, m);
  for (auto& r : G.at("mor"))
    if (r.at("src") == d && r.at("dst") == s &&
        gp_comp(G, r.at("id"), m) == gp_id(s))
      return r.at("id");
  throw Error("groupoid: no inverse for " + m.dump());
}

std::vector<Val> gp_mors_between(const Val& G, const Val& a, const Val& b) {
  std::vector<Val> out;
  if (a == b) out.push_back(gp_id(a));
  for (auto& r : G.at("mor"))
    if (r.at("src") == a && r.at("dst") == b) out.push_back(r.at("id"));
  sort_vals(out);
  return out;
}

std::vector<Val> gp_all_mors(const Val& G) {
  std::vector<Val> out;
  for (auto& x : G.at("ob")) out.push_back(gp_id(x));
  for (auto& r : G.at("mor")) out.push_back(r.at("id"));
  return out;
}

Val gp_gpd(std::vector<Val> obs, std::vector<std::array<Val, 3>> mors,
           const std::function<Val(const Val&, const Val&)>& comp) {
  sort_vals(obs);
  std::sort(mors.begin(), mors.end(),
            [](auto& a, auto& b) { return a[0] < b[0]; });
  mors.erase(std::unique(mors.begin(), mors.end(),
                         [](auto& a, auto& b) { return a[0] == b[0]; }),
             mors.end());
  Val G;
  G["ob"] = Val::array();
  for (auto& o : obs) G["ob"].push_back(o);
  G["mor"] = Val::array();
  for (auto& m : mors) {
    if (gp_is_id(m[0])) throw Error("groupoid: reserved identity label");
    G["mor"].push_back(Val{{"id", m[0]}, {"src", m[1]}, {"dst", m[2]}});
  }
  std::vector<Val> rows;
  for (auto& f : mors)
    for (auto& g : mors)
      if (g[1] == f[2])
        rows.push_back(Val::array({g[0], f[0], comp(g[0], f[0])}));
  G["comp"] = sorted_table(std::move(rows));
  return G;
}

Val gp_discrete(std::vector<Val> labels) {
  return gp_gpd(std::move(labels), {},
                [](const Val&, const Val&) -> Val { throw Error("discrete"); });
}

void gp_validate(const Val& G) {
  for (auto& r : G.at("mor")) {
    if (gp_is_id(r.at("id"))) throw Error("groupoid: reserved identity label");
    bool s = false, d = false;
    for (auto& o : G.at("ob")) {
      if (o == r.at("src")) s = true;
      if (o == r.at("dst")) d = true;
    }
    if (!s || !d) throw Error("groupoid: dangling morphism " + r.at("id").dump());
  }
  auto mors = gp_all_mors(G);
  for (auto& f : mors)
    for (auto& g : mors) {
      if (gp_src(G, g) != gp_dst(G, f)) continue;
      Val gf = gp_comp(G, g, f);
      if (gp_src(G, gf) != gp_src(G, f) || gp_dst(G, gf) != gp_dst(G, g))
        throw Error("groupoid: composite endpoints wrong");
      for (auto& h : mors) {
        if (gp_src(G, h) != gp_dst(G, g)) continue;
        if (gp_comp(G, h, gf) != gp_comp(G, gp_comp(G, h, g), f))
          throw Error("groupoid: associativity fails");
      }
    }
  for (auto& m : mors) gp_inv(G, m);
}

Val gp_functor(const Val& dom, const Val& cod,
               const std::function<Val(const Val&)>& obfn,
               const std::function<Val(const Val&)>& morfn) {
  Val F;
  F["dom"] = dom;
  F["cod"] = cod;
  std::vector<Val> obs, mors;
  for (auto& x : dom.at("ob")) obs.push_back(Val::array({x, obfn(x)}));
  for (auto& r : dom.at("mor"))
    mors.push_back(Val::array({r.at("id"), morfn(r.at("id"))}));
  F["ob"] = sorted_table(std::move(obs));
  F["mor"] = sorted_table(std::move(mors));
  return F;
}

Val gp_ob_apply(const Val& F, const Val& x) { return assoc(F.at("ob"), x); }

Val gp_mor_apply(const Val& F, const Val& m) {
  if (gp_is_id(m)) return gp_id(gp_ob_apply(F, m[1]));
  return assoc(F.at("mor"), m);
}

Val gp_ty(const Val& G, const std::function<Val(const Val&)>& fib,
          const std::function<Val(const Val&, const Val&)>& act_ob,
          const std::function<Val(const Val&, const Val&)>& act_mor) {
  Val A;
  std::vector<Val> fibs, acts;
  for (auto& x : G.at("ob")) fibs.push_back(Val::array({x, fib(x)}));
  for (auto& r : G.at("mor")) {
    const Val& m = r.at("id");
    Val src_fib = fib(r.at("src"));
    std::vector<Val> obs, mors;
    for (auto& a : src_fib.at("ob"))
      obs.push_back(Val::array({a, act_ob(m, a)}));
    for (auto& p : src_fib.at("mor"))
      mors.push_back(Val::array({p.at("id"), act_mor(m, p.at("id"))}));
    acts.push_back(Val::array(
        {m, Val{{"ob", sorted_table(std::move(obs))},
                {"mor", sorted_table(std::move(mors))}}}));
  }
  A["fib"] = sorted_table(std::move(fibs));
  A["act"] = sorted_table(std::move(acts));
  return A;
}

Val gp_fib(const Val& A, const Val& x) { return assoc(A.at("fib"), x); }

Val gp_act_ob(const Val& A, const Val& m, const Val& a) {
  if (gp_is_id(m)) return a;
  return assoc(assoc(A.at("act"), m).at("ob"), a);
}

Val gp_act_mor(const Val& A, const Val& m, const Val& p) {
  if (gp_is_id(m)) return p;
  if (gp_is_id(p)) return gp_id(gp_act_ob(A, m, p[1]));
  return assoc(assoc(A.at("act"), m).at("mor"), p);
}

namespace {

// Pi-fiber morphisms are natural transformations; a non-identity one is
// labelled {"src": section, "dst": section, "c": [[a, component]...]}
Val nt_comp(const Val& t, const Val& a) {
  if (gp_is_id(t)) return gp_id(assoc(t[1].at("ob"), a));
  return assoc(t.at("c"), a);
}

Val nt_src(const Val& t) { return gp_is_id(t) ? t[1] : t.at("src"); }
Val nt_dst(const Val& t) { return gp_is_id(t) ? t[1] : t.at("dst"); }

Val nt_label(std::vector<Val> comps, const Val& src, const Val& dst) {
  bool all_id = true;
  for (auto& c : comps)
    if (!gp_is_id(c[1])) all_id = false;
  if (all_id && src == dst) return gp_id(dst);
  if (all_id) throw Error("groupoid: identity components between sections");
  return Val{{"src", src}, {"dst", dst}, {"c", sorted_table(std::move(comps))}};
}

class GroupoidModel : public Model {
 public:
  std::string name() const override { return "groupoid"; }

  Val terminal() const override { return gp_discrete({Val("*")}); }

  Val identity(const Val& G) const override {
    return gp_functor(G, G, [](const Val& x) { return x; },
                      [](const Val& m) { return m; });
  }

  Val compose(const Val& g, const Val& f) const override {
    return gp_functor(
        f.at("dom"), g.at("cod"),
        [&](const Val& x) { return gp_ob_apply(g, gp_ob_apply(f, x)); },
        [&](const Val& m) { return gp_mor_apply(g, gp_mor_apply(f, m)); });
  }

  Val bang(const Val& G) const override {
    return gp_functor(G, terminal(), [](const Val&) { return Val("*"); },
                      [](const Val&) { return gp_id(Val("*")); });
  }

  Val reindex(const Val& f, const Val& A) const override {
    return gp_ty(
        f.at("dom"),
        [&](const Val& x) { return gp_fib(A, gp_ob_apply(f, x)); },
        [&](const Val& m, const Val& a) {
          return gp_act_ob(A, gp_mor_apply(f, m), a);
        },
        [&](const Val& m, const Val& p) {
          return gp_act_mor(A, gp_mor_apply(f, m), p);
        });
  }

  Val ext(const Val& G, const Val& A) const override {
    std::vector<Val> obs;
    std::vector<std::array<Val, 3>> mors;
    for (auto& x : G.at("ob")) {
      Val fx = gp_fib(A, x);
      for (auto& a : fx.at("ob")) obs.push_back(Val::array({x, a}));
    }
    for (auto& m : gp_all_mors(G)) {
      Val x = gp_src(G, m), y = gp_dst(G, m);
      Val fy = gp_fib(A, y), fx = gp_fib(A, x);
      for (auto& a : fx.at("ob")) {
        Val a2 = gp_act_ob(A, m, a);
        for (auto& b : fy.at("ob"))
          for (auto& psi : gp_mors_between(fy, a2, b)) {
            if (gp_is_id(m) && gp_is_id(psi)) continue;
            mors.push_back({Val::array({m, psi}), Val::array({x, a}),
                            Val::array({y, b})});
          }
      }
    }
    auto comp = [G, A, this](const Val& g2, const Val& g1) -> Val {
      auto [m2, psi2] = split_lbl(g2);
      auto [m1, psi1] = split_lbl(g1);
      Val m = gp_comp(G, m2, m1);
      Val fz = gp_fib(A, gp_dst(G, m2));
      Val psi = gp_comp(fz, psi2, gp_act_mor(A, m2, psi1));
      return canon_lbl(m, psi);
    };
    return gp_gpd(std::move(obs), std::move(mors), comp);
  }

  Val proj(const Val& G, const Val& A) const override {
    return gp_functor(ext(G, A), G, [](const Val& p) { return p[0]; },
                      [](const Val& t) { return split_lbl(t).first; });
  }

  Val qmor(const Val& f, const Val& A) const override {
    Val fA = reindex(f, A);
    return gp_functor(
        ext(f.at("dom"), fA), ext(f.at("cod"), A),
        [&](const Val& p) {
          return Val::array({gp_ob_apply(f, p[0]), p[1]});
        },
        [&](const Val& t) {
          auto [m, psi] = split_lbl(t);
          return canon_lbl(gp_mor_apply(f, m), psi);
        });
  }

  Val pair_into(const Val& f, const Val& A, const Val& k,
                const Val& m) const override {
    return gp_functor(
        k.at("dom"), ext(f.at("dom"), reindex(f, A)),
        [&](const Val& z) {
          return Val::array({gp_ob_apply(k, z), gp_ob_apply(m, z)[1]});
        },
        [&](const Val& t) {
          return canon_lbl(gp_mor_apply(k, t),
                           split_lbl(gp_mor_apply(m, t)).second);
        });
  }

  std::vector<Val> hom(const Val& X, const Val& Y) const override {
    std::vector<Val> xs, gens;
    for (auto& o : X.at("ob")) xs.push_back(o);
    for (auto& r : X.at("mor")) gens.push_back(r.at("id"));
    std::vector<Val> out;
    std::map<Val, Val> obmap, mormap;
    std::function<void(size_t)> pick_mor = [&](size_t j) {
      if (j == gens.size()) {
        auto mapped = [&](const Val& m) {
          return gp_is_id(m) ? gp_id(obmap[m[1]]) : mormap[m];
        };
        for (auto& row : X.at("comp"))
          if (gp_comp(Y, mapped(row[0]), mapped(row[1])) != mapped(row[2]))
            return;
        out.push_back(gp_functor(
            X, Y, [&](const Val& x) { return obmap[x]; },
            [&](const Val& m) { return mormap[m]; }));
        if (out.size() > 500000) throw Error("hom: enumeration too large");
        return;
      }
      const Val& m = gens[j];
      Val a = obmap[gp_src(X, m)], b = obmap[gp_dst(X, m)];
      for (auto& n : gp_mors_between(Y, a, b)) {
        mormap[m] = n;
        pick_mor(j + 1);
      }
    };
    std::function<void(size_t)> pick_ob = [&](size_t i) {
      if (i == xs.size()) {
        pick_mor(0);
        return;
      }
      for (auto& y : Y.at("ob")) {
        obmap[xs[i]] = y;
        pick_ob(i + 1);
      }
    };
    pick_ob(0);
    sort_vals(out);
    return out;
  }

  std::optional<Val> invert(const Val& f) const override {
    const Val &X = f.at("dom"), &Y = f.at("cod");
    std::map<Val, Val> ob_inv, mor_inv;
    for (auto& x : X.at("ob")) {
      Val y = gp_ob_apply(f, x);
      if (ob_inv.count(y)) return std::nullopt;
      ob_inv[y] = x;
    }
    if (ob_inv.size() != Y.at("ob").size()) return std::nullopt;
    for (auto& m : gp_all_mors(X)) {
      Val n = gp_mor_apply(f, m);
      if (mor_inv.count(n)) return std::nullopt;
      mor_inv[n] = m;
    }
    if (mor_inv.size() != gp_all_mors(Y).size()) return std::nullopt;
    return gp_functor(Y, X, [&](const Val& y) { return ob_inv.at(y); },
                      [&](const Val& n) { return mor_inv.at(n); });
  }

  std::vector<Val> all_types(const Val& G, int bound) const override {
    std::vector<Val> fibers;
    for (int s = 0; s <= bound; ++s) {
      std::vector<Val> labels;
      for (int i = 0; i < s; ++i)
        labels.push_back(Val("e" + std::to_string(i)));
      fibers.push_back(gp_discrete(labels));
    }
    std::vector<Val> gens;
    for (auto& r : G.at("mor")) gens.push_back(r.at("id"));
    std::vector<Val> out;
    std::map<Val, Val> fib_of;
    std::map<Val, std::map<Val, Val>> act_of;
    std::function<void(size_t)> pick_act = [&](size_t j) {
      if (out.size() >= 64) return;
      if (j == gens.size()) {
        auto app = [&](const Val& m, const Val& a) {
          return gp_is_id(m) ? a : act_of[m].at(a);
        };
        for (auto& row : G.at("comp"))
          for (auto& a : fib_of[gp_src(G, row[1])].at("ob"))
            if (app(row[2], a) != app(row[0], app(row[1], a))) return;
        out.push_back(gp_ty(
            G, [&](const Val& x) { return fib_of[x]; },
            [&](const Val& m, const Val& a) { return act_of[m].at(a); },
            [](const Val&, const Val&) -> Val { throw Error("discrete"); }));
        return;
      }
      const Val& m = gens[j];
      const Val &fa = fib_of[gp_src(G, m)], &fb = fib_of[gp_dst(G, m)];
      size_t na = fa.at("ob").size();
      if (na != fb.at("ob").size()) return;  // actions must be invertible
      std::vector<size_t> perm(na);
      for (size_t i = 0; i < na; ++i) perm[i] = i;
      do {
        std::map<Val, Val> a2b;
        for (size_t i = 0; i < na; ++i)
          a2b[fa.at("ob")[i]] = fb.at("ob")[perm[i]];
        act_of[m] = a2b;
        pick_act(j + 1);
      } while (std::next_permutation(perm.begin(), perm.end()));
      act_of.erase(m);
    };
    std::function<void(size_t)> pick_fib = [&](size_t i) {
      if (out.size() >= 64) return;
      if (i == G.at("ob").size()) {
        pick_act(0);
        return;
      }
      for (auto& f : fibers) {
        fib_of[G.at("ob")[i]] = f;
        pick_fib(i + 1);
      }
    };
    pick_fib(0);
    return out;
  }

  // unit
  bool has_unit() const override { return true; }
  Val unit_ty(const Val& G) const override {
    return gp_ty(
        G, [](const Val&) { return gp_discrete({Val("*")}); },
        [](const Val&, const Val& a) { return a; },
        [](const Val&, const Val&) -> Val { throw Error("discrete"); });
  }
  Val unit_star(const Val& G) const override {
    return gp_functor(
        G, ext(G, unit_ty(G)),
        [](const Val& x) { return Val::array({x, Val("*")}); },
        [](const Val& m) { return Val::array({m, gp_id(Val("*"))}); });
  }

  // identity types: discrete fibers of hom-sets, action by conjugation
  bool has_id() const override { return true; }
  Val id_ty(const Val& G, const Val& A) const override {
    Val T = ext(ext(G, A), reindex(proj(G, A), A));
    return gp_ty(
        T,
        [&](const Val& o) {
          // o = [[x,a],b]
          return gp_discrete(
              gp_mors_between(gp_fib(A, o[0][0]), o[0][1], o[1]));
        },
        [&](const Val& t, const Val& p) {
          auto [mu, chi] = split_lbl(t);
          auto [m, psi] = split_lbl(mu);
          Val fy = gp_fib(A, gp_dst(G, m));
          return gp_comp(fy, chi,
                         gp_comp(fy, gp_act_mor(A, m, p), gp_inv(fy, psi)));
        },
        [](const Val&, const Val&) -> Val { throw Error("discrete"); });
  }
  Val refl(const Val& G, const Val& A) const override {
    Val GA = ext(G, A);
    Val T = ext(GA, reindex(proj(G, A), A));
    Val E = ext(T, id_ty(G, A));
    return gp_functor(
        GA, E,
        [](const Val& p) {
          return Val::array({Val::array({p, p[1]}), gp_id(p[1])});
        },
        [&](const Val& mu) {
          Val psi = split_lbl(mu).second;
          Val dst = gp_dst(GA, mu);
          return Val::array({Val::array({mu, psi}), gp_id(gp_id(dst[1]))});
        });
  }

  // Sigma
  bool has_sigma() const override { return true; }
  Val sigma_ty(const Val& G, const Val& A, const Val& B) const override {
    auto fiber = [&G, &A, &B, this](const Val& x) {
      Val fa = gp_fib(A, x);
      std::vector<Val> obs;
      std::vector<std::array<Val, 3>> mors;
      for (auto& a : fa.at("ob")) {
        Val fb = gp_fib(B, Val::array({x, a}));
        for (auto& b : fb.at("ob")) obs.push_back(Val::array({a, b}));
      }
      for (auto& o : obs)
        for (auto& o2 : obs)
          for (auto& psi : gp_mors_between(fa, o[0], o2[0])) {
            Val fb2 = gp_fib(B, Val::array({x, o2[0]}));
            Val b_tr = gp_act_ob(B, canon_lbl(gp_id(x), psi), o[1]);
            for (auto& chi : gp_mors_between(fb2, b_tr, o2[1])) {
              if (gp_is_id(psi) && gp_is_id(chi)) continue;
              mors.push_back({Val::array({psi, chi}), o, o2});
            }
          }
      auto comp = [fa, x, &B, this](const Val& g2, const Val& g1) -> Val {
        auto [psi2, chi2] = split_lbl(g2);
        auto [psi1, chi1] = split_lbl(g1);
        Val psi = gp_comp(fa, psi2, psi1);
        Val a3 = gp_dst(fa, psi2);
        Val fb3 = gp_fib(B, Val::array({x, a3}));
        Val chi = gp_comp(fb3, chi2,
                          gp_act_mor(B, canon_lbl(gp_id(x), psi2), chi1));
        return canon_lbl(psi, chi);
      };
      return gp_gpd(std::move(obs), std::move(mors), comp);
    };
    return gp_ty(
        G, fiber,
        [&](const Val& m, const Val& o) {
          Val a2 = gp_act_ob(A, m, o[0]);
          Val b2 = gp_act_ob(B, Val::array({m, gp_id(a2)}), o[1]);
          return Val::array({a2, b2});
        },
        [&](const Val& m, const Val& t) {
          auto [psi, chi] = split_lbl(t);
          Val fa = gp_fib(A, gp_src(G, m));
          Val a2p = gp_act_ob(A, m, gp_dst(fa, psi));
          return canon_lbl(gp_act_mor(A, m, psi),
                           gp_act_mor(B, Val::array({m, gp_id(a2p)}), chi));
        });
  }
  Val sigma_pair(const Val& G, const Val& A, const Val& B) const override {
    Val GA = ext(G, A);
    return gp_functor(
        ext(GA, B), ext(G, sigma_ty(G, A, B)),
        [](const Val& p) {
          return Val::array({p[0][0], Val::array({p[0][1], p[1]})});
        },
        [](const Val& t) {
          auto [mu, chi] = split_lbl(t);
          auto [m, psi] = split_lbl(mu);
          return canon_lbl(m, canon_lbl(psi, chi));
        });
  }

  // Pi: fibers are groupoids of strict sections and natural transformations
  bool has_pi() const override { return true; }
  bool pi_eta() const override { return true; }

  Val pi_fiber(const Val&, const Val& A, const Val& B, const Val& x) const {
    Val fa = gp_fib(A, x);
    std::vector<Val> gens;
    for (auto& r : fa.at("mor")) gens.push_back(r.at("id"));
    auto within = [&](const Val& psi) { return canon_lbl(gp_id(x), psi); };
    std::vector<Val> sections;
    std::map<Val, Val> ob_of, mor_of;
    std::function<void(size_t)> pick_smor = [&](size_t j) {
      if (j == gens.size()) {
        for (auto& row : fa.at("comp")) {
          Val lhs =
              gp_is_id(row[2]) ? gp_id(ob_of[row[2][1]]) : mor_of[row[2]];
          Val fb3 = gp_fib(B, Val::array({x, gp_dst(fa, row[0])}));
          if (lhs != gp_comp(fb3, mor_of[row[0]],
                             gp_act_mor(B, within(row[0]), mor_of[row[1]])))
            return;
        }
        std::vector<Val> obs, ms;
        for (auto& [a, b] : ob_of) obs.push_back(Val::array({a, b}));
        for (auto& [p, sp] : mor_of) ms.push_back(Val::array({p, sp}));
        sections.push_back(Val{{"ob", sorted_table(std::move(obs))},
                               {"mor", sorted_table(std::move(ms))}});
        return;
      }
      const Val& psi = gens[j];
      Val fb2 = gp_fib(B, Val::array({x, gp_dst(fa, psi)}));
      Val src_tr = gp_act_ob(B, within(psi), ob_of[gp_src(fa, psi)]);
      for (auto& sp : gp_mors_between(fb2, src_tr, ob_of[gp_dst(fa, psi)])) {
        mor_of[psi] = sp;
        pick_smor(j + 1);
      }
    };
    std::function<void(size_t)> pick_sob = [&](size_t i) {
      if (i == fa.at("ob").size()) {
        pick_smor(0);
        return;
      }
      const Val& a = fa.at("ob")[i];
      Val fb = gp_fib(B, Val::array({x, a}));
      for (auto& b : fb.at("ob")) {
        ob_of[a] = b;
        pick_sob(i + 1);
      }
    };
    pick_sob(0);
    sort_vals(sections);
    std::vector<std::array<Val, 3>> nts;
    for (auto& s : sections)
      for (auto& s2 : sections) {
        std::map<Val, Val> comp_of;
        std::function<void(size_t)> pick_c = [&](size_t i) {
          if (i == fa.at("ob").size()) {
            for (auto& psi : gens) {
              Val a = gp_src(fa, psi), a2 = gp_dst(fa, psi);
              Val fb2 = gp_fib(B, Val::array({x, a2}));
              if (gp_comp(fb2, comp_of[a2], assoc(s.at("mor"), psi)) !=
                  gp_comp(fb2, assoc(s2.at("mor"), psi),
                          gp_act_mor(B, within(psi), comp_of[a])))
                return;
            }
            std::vector<Val> comps;
            bool all_id = true;
            for (auto& [a, c] : comp_of) {
              comps.push_back(Val::array({a, c}));
              if (!gp_is_id(c)) all_id = false;
            }
            if (all_id) return;  // the identity transformation
            nts.push_back({Val{{"src", s},
                               {"dst", s2},
                               {"c", sorted_table(std::move(comps))}},
                           s, s2});
            return;
          }
          const Val& a = fa.at("ob")[i];
          Val fb = gp_fib(B, Val::array({x, a}));
          for (auto& c : gp_mors_between(fb, assoc(s.at("ob"), a),
                                         assoc(s2.at("ob"), a))) {
            comp_of[a] = c;
            pick_c(i + 1);
          }
        };
        pick_c(0);
      }
    auto comp = [x, &B, this](const Val& t2, const Val& t1) -> Val {
      std::vector<Val> comps;
      Val d2 = nt_dst(t2);
      for (auto& e : d2.at("ob")) {
        const Val& a = e[0];
        Val fb = gp_fib(B, Val::array({x, a}));
        comps.push_back(
            Val::array({a, gp_comp(fb, nt_comp(t2, a), nt_comp(t1, a))}));
      }
      return nt_label(std::move(comps), nt_src(t1), nt_dst(t2));
    };
    return gp_gpd(sections, std::move(nts), comp);
  }

  Val act_section(const Val& G, const Val& A, const Val& B, const Val& m,
                  const Val& s) const {
    Val y = gp_dst(G, m);
    Val minv = gp_inv(G, m);
    Val fay = gp_fib(A, y);
    std::vector<Val> obs, ms;
    for (auto& a2 : fay.at("ob")) {
      Val mu = Val::array({m, gp_id(a2)});
      obs.push_back(Val::array(
          {a2, gp_act_ob(B, mu, assoc(s.at("ob"), gp_act_ob(A, minv, a2)))}));
    }
    for (auto& r : fay.at("mor")) {
      Val mu = Val::array({m, gp_id(r.at("dst"))});
      Val pre = gp_act_mor(A, minv, r.at("id"));
      Val sval = gp_is_id(pre) ? gp_id(assoc(s.at("ob"), pre[1]))
                               : assoc(s.at("mor"), pre);
      ms.push_back(Val::array({r.at("id"), gp_act_mor(B, mu, sval)}));
    }
    return Val{{"ob", sorted_table(std::move(obs))},
               {"mor", sorted_table(std::move(ms))}};
  }

  Val pi_ty(const Val& G, const Val& A, const Val& B) const override {
    return gp_ty(
        G, [&](const Val& x) { return pi_fiber(G, A, B, x); },
        [&](const Val& m, const Val& s) {
          return act_section(G, A, B, m, s);
        },
        [&](const Val& m, const Val& t) {
          Val y = gp_dst(G, m);
          Val minv = gp_inv(G, m);
          Val fay = gp_fib(A, y);
          std::vector<Val> comps;
          for (auto& a2 : fay.at("ob")) {
            Val mu = Val::array({m, gp_id(a2)});
            comps.push_back(Val::array(
                {a2, gp_act_mor(B, mu, nt_comp(t, gp_act_ob(A, minv, a2)))}));
          }
          return nt_label(std::move(comps),
                          act_section(G, A, B, m, nt_src(t)),
                          act_section(G, A, B, m, nt_dst(t)));
        });
  }

  // evaluation component: a section morphism applied at a point
  Val ev_chi(const Val& G, const Val& A, const Val& B, const Val& m,
             const Val& sigma, const Val& psi, const Val& s_dst,
             const Val& a_src) const {
    Val y = gp_dst(G, m);
    Val alpha_a = gp_act_ob(A, m, a_src);
    Val a2 = gp_dst(gp_fib(A, y), psi);
    Val fb2 = gp_fib(B, Val::array({y, a2}));
    Val spsi = gp_is_id(psi) ? gp_id(assoc(s_dst.at("ob"), a2))
                             : assoc(s_dst.at("mor"), psi);
    Val sig_c = nt_comp(sigma, alpha_a);
    return gp_comp(fb2, spsi,
                   gp_act_mor(B, canon_lbl(gp_id(y), psi), sig_c));
  }

  Val pi_ev(const Val& G, const Val& A, const Val& B) const override {
    Val Pi = pi_ty(G, A, B);
    Val X1 = ext(G, Pi);
    Val D = ext(X1, reindex(proj(G, Pi), A));
    Val GA = ext(G, A);
    return gp_functor(
        D, ext(GA, B),
        [](const Val& p) {
          // p = [[x,s],a]
          return Val::array(
              {Val::array({p[0][0], p[1]}), assoc(p[0][1].at("ob"), p[1])});
        },
        [&, D](const Val& t) {
          Val src = gp_src(D, t), dst = gp_dst(D, t);
          auto [mu, psi] = split_lbl(t);
          auto [m, sigma] = split_lbl(mu);
          Val chi = ev_chi(G, A, B, m, sigma, psi, dst[0][1], src[1]);
          return canon_lbl(canon_lbl(m, psi), chi);
        });
  }

  Val pi_lambda(const Val& G, const Val& A, const Val& B,
                const Val& b) const override {
    Val Pi = pi_ty(G, A, B);
    auto section_at = [&](const Val& x) -> Val {
      Val fa = gp_fib(A, x);
      std::vector<Val> obs, ms;
      for (auto& a : fa.at("ob"))
        obs.push_back(Val::array({a, gp_ob_apply(b, Val::array({x, a}))[1]}));
      for (auto& r : fa.at("mor")) {
        Val v = gp_mor_apply(b, Val::array({gp_id(x), r.at("id")}));
        ms.push_back(Val::array({r.at("id"), split_lbl(v).second}));
      }
      return Val{{"ob", sorted_table(std::move(obs))},
                 {"mor", sorted_table(std::move(ms))}};
    };
    return gp_functor(
        G, ext(G, Pi),
        [&](const Val& x) { return Val::array({x, section_at(x)}); },
        [&](const Val& m) {
          Val x = gp_src(G, m), y = gp_dst(G, m);
          Val fay = gp_fib(A, y);
          std::vector<Val> comps;
          for (auto& a2 : fay.at("ob")) {
            Val v = gp_mor_apply(b, Val::array({m, gp_id(a2)}));
            comps.push_back(Val::array({a2, split_lbl(v).second}));
          }
          return canon_lbl(
              m, nt_label(std::move(comps),
                          act_section(G, A, B, m, section_at(x)),
                          section_at(y)));
        });
  }

  // funext
  bool has_funext() const override { return true; }
  Val funext_map(const Val& G, const Val& A, const Val& B) const override {
    Val Pi = pi_ty(G, A, B);
    Val X1 = ext(G, Pi);
    Val p1 = proj(G, Pi);
    Val Pi2 = reindex(p1, Pi);
    Val X2 = ext(X1, Pi2);
    Val to_G = compose(p1, proj(X1, Pi2));
    Val A2 = reindex(to_G, A);
    Val X2A = ext(X2, A2);
    Val GA = ext(G, A);
    Val GAB = ext(GA, B);
    Val GABB = ext(GAB, reindex(proj(GA, B), B));
    Val e = gp_functor(
        X2A, GABB,
        [](const Val& p) {
          // p = [[[x,s1],s2],a]
          return Val::array(
              {Val::array({Val::array({p[0][0][0], p[1]}),
                           assoc(p[0][0][1].at("ob"), p[1])}),
               assoc(p[0][1].at("ob"), p[1])});
        },
        [&, X2A](const Val& t) {
          Val src = gp_src(X2A, t), dst = gp_dst(X2A, t);
          auto [nu, psi] = split_lbl(t);
          auto [mu, sigma2] = split_lbl(nu);
          auto [m, sigma1] = split_lbl(mu);
          Val chi1 = ev_chi(G, A, B, m, sigma1, psi, dst[0][0][1], src[1]);
          Val chi2 = ev_chi(G, A, B, m, sigma2, psi, dst[0][1], src[1]);
          return canon_lbl(canon_lbl(canon_lbl(m, psi), chi1), chi2);
        });
    Val Id2 = reindex(e, id_ty(GA, B));
    Val H = pi_ty(X2, A2, Id2);
    Val dom = ext(X2, H);
    Val cod = ext(X2, id_ty(G, Pi));
    auto transfer = [](const Val& p) -> Val {
      // p = [[[x,s1],s2], h]; h's values assemble a natural transformation
      const Val &x2 = p[0], &h = p[1];
      std::vector<Val> comps;
      for (auto& e2 : h.at("ob")) comps.push_back(Val::array({e2[0], e2[1]}));
      return Val::array({x2, nt_label(std::move(comps), x2[0][1], x2[1])});
    };
    return gp_functor(
        dom, cod, transfer,
        [&, dom](const Val& t) {
          Val mu = split_lbl(t).first;  // the Id-Pi fiber is discrete
          Val target = transfer(gp_dst(dom, t));
          return canon_lbl(mu, gp_id(target[1]));
        });
  }

  // a map of fibrations over a groupoid is a fiberwise equivalence iff it is
  // fully faithful and essentially surjective through vertical isomorphisms
  std::optional<bool> is_equiv_verdict(const Val& base, const Telescope& A,
                                       const Telescope& B,
                                       const Val& f) const override {
    Val totA = tel_total(*this, A), totB = tel_total(*this, B);
    if (dom(f) != totA || cod(f) != totB) return std::nullopt;
    Val obsA = totA.at("ob");
    for (auto& a : obsA)
      for (auto& a2 : obsA) {
        auto msA = gp_mors_between(totA, a, a2);
        Val fa = gp_ob_apply(f, a), fa2 = gp_ob_apply(f, a2);
        auto msB = gp_mors_between(totB, fa, fa2);
        std::set<std::string> images;
        for (auto& t : msA) images.insert(dump(gp_mor_apply(f, t)));
        if (images.size() != msA.size() || images.size() != msB.size())
          return false;
      }
    Val pB = tel_proj(*this, B);
    for (auto& b : totB.at("ob")) {
      bool hit = false;
      for (auto& a : obsA) {
        for (auto& t : gp_mors_between(totB, gp_ob_apply(f, a), b))
          if (gp_is_id(gp_mor_apply(pB, t))) {
            hit = true;
            break;
          }
        if (hit) break;
      }
      if (!hit) return false;
    }
    return true;
  }
};

}  // namespace

ModelPtr make_groupoid_model() { return std::make_shared<GroupoidModel>(); }

}  // namespace cwa
