#include "finset.hpp"

#include <algorithm>
#include <cmath>

namespace cwa {

Val fs_obj(std::vector<Val> labels) {
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  return Val(labels);
}

Val fs_mor(const Val& dom, const Val& cod,
           const std::function<Val(const Val&)>& fn) {
  Val map = Val::array();
  for (auto& x : dom) map.push_back(Val::array({x, fn(x)}));
  return Val{{"dom", dom}, {"cod", cod}, {"map", map}};
}

Val fs_apply(const Val& mor, const Val& x) {
  for (auto& e : mor.at("map"))
    if (e[0] == x) return e[1];
  throw Error("fs_apply: " + dump(x) + " not in domain");
}

Val fs_fiber(const Val& A, const Val& x) {
  for (auto& e : A)
    if (e[0] == x) return e[1];
  throw Error("fs_fiber: " + dump(x) + " not indexed");
}

Val fs_ty(const Val& G, const std::function<Val(const Val&)>& fiber) {
  Val A = Val::array();
  for (auto& x : G) {
    Val f = fiber(x);
    std::vector<Val> v(f.begin(), f.end());
    std::sort(v.begin(), v.end());
    A.push_back(Val::array({x, Val(v)}));
  }
  return A;
}

Val fs_ctx_from_json(const Val& j) {
  std::vector<Val> labels;
  for (auto& x : j.at("ctx")) labels.push_back(x);
  return fs_obj(labels);
}

Val fs_family_from_json(const Val& G, const Val& j) {
  const Val& fam = j.at("family");
  return fs_ty(G, [&](const Val& x) -> Val {
    std::string key = x.is_string() ? x.get<std::string>() : dump(x);
    if (!fam.contains(key)) throw Error("family misses fiber at " + key);
    return fam.at(key);
  });
}

// ---------------------------------------------------------------------------

Val FinSetModel::terminal() const { return Val::array({"*"}); }

Val FinSetModel::identity(const Val& G) const {
  return fs_mor(G, G, [](const Val& x) { return x; });
}

Val FinSetModel::compose(const Val& g, const Val& f) const {
  if (f.at("cod") != g.at("dom"))
    throw Error("finset compose: cod/dom mismatch");
  return fs_mor(f.at("dom"), g.at("cod"),
                [&](const Val& x) { return fs_apply(g, fs_apply(f, x)); });
}

Val FinSetModel::bang(const Val& G) const {
  return fs_mor(G, terminal(), [](const Val&) { return Val("*"); });
}

Val FinSetModel::reindex(const Val& f, const Val& A) const {
  return fs_ty(f.at("dom"),
               [&](const Val& x) { return fs_fiber(A, fs_apply(f, x)); });
}

Val FinSetModel::ext(const Val& G, const Val& A) const {
  Val out = Val::array();
  for (auto& x : G)
    for (auto& a : fs_fiber(A, x)) out.push_back(Val::array({x, a}));
  return out;
}

Val FinSetModel::proj(const Val& G, const Val& A) const {
  return fs_mor(ext(G, A), G, [](const Val& e) { return e[0]; });
}

Val FinSetModel::qmor(const Val& f, const Val& A) const {
  Val fA = reindex(f, A);
  return fs_mor(ext(f.at("dom"), fA), ext(f.at("cod"), A), [&](const Val& e) {
    return Val::array({fs_apply(f, e[0]), e[1]});
  });
}

Val FinSetModel::pair_into(const Val& f, const Val& A, const Val& k,
                           const Val& m) const {
  Val fA = reindex(f, A);
  Val target = ext(f.at("dom"), fA);
  return fs_mor(k.at("dom"), target, [&](const Val& x) {
    return Val::array({fs_apply(k, x), fs_apply(m, x)[1]});
  });
}

std::vector<Val> FinSetModel::hom(const Val& X, const Val& Y) const {
  size_t nx = X.size(), ny = Y.size();
  if (nx > 0 && ny == 0) return {};
  double count = std::pow(double(ny), double(nx));
  if (count > 2e6) throw Error("finset hom enumeration too large");
  std::vector<Val> out;
  std::vector<size_t> idx(nx, 0);
  while (true) {
    Val map = Val::array();
    for (size_t i = 0; i < nx; ++i) map.push_back(Val::array({X[i], Y[idx[i]]}));
    out.push_back(Val{{"dom", X}, {"cod", Y}, {"map", map}});
    size_t i = 0;
    for (; i < nx; ++i) {
      if (++idx[i] < ny) break;
      idx[i] = 0;
    }
    if (i == nx) break;
  }
  return out;
}

std::vector<Val> FinSetModel::all_types(const Val& G, int bound) const {
  std::vector<Val> out;
  size_t n = G.size();
  std::vector<int> sizes(n, 0);
  while (true) {
    out.push_back(fs_ty(G, [&](const Val& x) {
      size_t i = 0;
      while (G[i] != x) ++i;
      Val fib = Val::array();
      for (int k = 0; k < sizes[i]; ++k) fib.push_back("e" + std::to_string(k));
      return fib;
    }));
    size_t i = 0;
    for (; i < n; ++i) {
      if (++sizes[i] <= bound) break;
      sizes[i] = 0;
    }
    if (i == n) break;
  }
  return out;
}

std::vector<Val> FinSetModel::sections_of(const Val& G, const Val& A) const {
  size_t n = G.size();
  std::vector<Val> fibs;
  for (auto& x : G) {
    Val fib = fs_fiber(A, x);
    if (fib.empty()) return {};
    fibs.push_back(fib);
  }
  Val GA = ext(G, A);
  std::vector<Val> out;
  std::vector<size_t> idx(n, 0);
  while (true) {
    Val map = Val::array();
    for (size_t i = 0; i < n; ++i)
      map.push_back(Val::array({G[i], Val::array({G[i], fibs[i][idx[i]]})}));
    out.push_back(Val{{"dom", G}, {"cod", GA}, {"map", map}});
    size_t i = 0;
    for (; i < n; ++i) {
      if (++idx[i] < fibs[i].size()) break;
      idx[i] = 0;
    }
    if (i == n) break;
  }
  return out;
}

std::optional<Val> FinSetModel::invert(const Val& f) const {
  const Val &X = f.at("dom"), &Y = f.at("cod");
  if (X.size() != Y.size()) return std::nullopt;
  std::map<std::string, Val> inv;
  for (auto& e : f.at("map"))
    if (!inv.emplace(dump(e[1]), e[0]).second) return std::nullopt;
  if (inv.size() != Y.size()) return std::nullopt;
  return fs_mor(Y, X, [&](const Val& y) { return inv.at(dump(y)); });
}

Val FinSetModel::unit_ty(const Val& G) const {
  return fs_ty(G, [](const Val&) { return Val::array({"*"}); });
}

Val FinSetModel::unit_star(const Val& G) const {
  return fs_mor(G, ext(G, unit_ty(G)),
                [](const Val& x) { return Val::array({x, "*"}); });
}

Val FinSetModel::id_ty(const Val& G, const Val& A) const {
  Val GA = ext(G, A);
  Val GAA = ext(GA, reindex(proj(G, A), A));
  return fs_ty(GAA, [](const Val& e) {
    // e = [[x,a],a']
    return e[0][1] == e[1] ? Val::array({"refl"}) : Val::array();
  });
}

Val FinSetModel::refl(const Val& G, const Val& A) const {
  Val GA = ext(G, A);
  Val GAA = ext(GA, reindex(proj(G, A), A));
  Val T = ext(GAA, id_ty(G, A));
  return fs_mor(GA, T, [](const Val& e) {
    return Val::array({Val::array({e, e[1]}), "refl"});
  });
}

Val FinSetModel::sigma_ty(const Val& G, const Val& A, const Val& B) const {
  return fs_ty(G, [&](const Val& x) {
    Val fib = Val::array();
    for (auto& a : fs_fiber(A, x))
      for (auto& b : fs_fiber(B, Val::array({x, a})))
        fib.push_back(Val::array({a, b}));
    return fib;
  });
}

Val FinSetModel::sigma_pair(const Val& G, const Val& A, const Val& B) const {
  Val GAB = ext(ext(G, A), B);
  Val GS = ext(G, sigma_ty(G, A, B));
  return fs_mor(GAB, GS, [](const Val& e) {
    // e = [[x,a],b]
    return Val::array({e[0][0], Val::array({e[0][1], e[1]})});
  });
}

Val FinSetModel::pi_ty(const Val& G, const Val& A, const Val& B) const {
  return fs_ty(G, [&](const Val& x) {
    std::vector<Val> graphs{Val::array()};
    for (auto& a : fs_fiber(A, x)) {
      std::vector<Val> next;
      for (auto& g : graphs)
        for (auto& b : fs_fiber(B, Val::array({x, a}))) {
          Val g2 = g;
          g2.push_back(Val::array({a, b}));
          next.push_back(g2);
        }
      graphs = std::move(next);
    }
    return Val(graphs);
  });
}

Val FinSetModel::pi_ev(const Val& G, const Val& A, const Val& B) const {
  Val Pi = pi_ty(G, A, B);
  Val GPi = ext(G, Pi);
  Val domc = ext(GPi, reindex(proj(G, Pi), A));
  Val codc = ext(ext(G, A), B);
  return fs_mor(domc, codc, [](const Val& e) {
    // e = [[x,phi],a]
    const Val &phi = e[0][1], &a = e[1];
    for (auto& entry : phi)
      if (entry[0] == a) return Val::array({Val::array({e[0][0], a}), entry[1]});
    throw Error("pi_ev: argument not in graph");
  });
}

Val FinSetModel::pi_lambda(const Val& G, const Val& A, const Val& B,
                           const Val& b) const {
  Val Pi = pi_ty(G, A, B);
  return fs_mor(G, ext(G, Pi), [&](const Val& x) {
    Val graph = Val::array();
    for (auto& a : fs_fiber(A, x))
      graph.push_back(Val::array({a, fs_apply(b, Val::array({x, a}))[1]}));
    return Val::array({x, graph});
  });
}

Val FinSetModel::funext_map(const Val& G, const Val& A, const Val& B) const {
  Val Pi1 = pi_ty(G, A, B);
  Val X1 = ext(G, Pi1);
  Val Pi2 = reindex(proj(G, Pi1), Pi1);
  Val X2 = ext(X1, Pi2);
  Val pX2_G = compose(proj(G, Pi1), proj(X1, Pi2));
  Val A2 = reindex(pX2_G, A);
  Val X2A = ext(X2, A2);
  Val GA = ext(G, A);
  Val GAB = ext(GA, B);
  Val GABB = ext(GAB, reindex(proj(GA, B), B));
  Val e = fs_mor(X2A, GABB, [&](const Val& p) {
    // p = [[[x,phi1],phi2],a]
    const Val &x = p[0][0][0], &phi1 = p[0][0][1], &phi2 = p[0][1], &a = p[1];
    auto app = [&](const Val& phi) -> Val {
      for (auto& entry : phi)
        if (entry[0] == a) return entry[1];
      throw Error("funext: argument not in graph");
    };
    return Val::array({Val::array({Val::array({x, a}), app(phi1)}), app(phi2)});
  });
  Val Id2 = reindex(e, id_ty(GA, B));
  Val H = pi_ty(X2, A2, Id2);
  Val D = ext(X2, H);
  Val IdPi = id_ty(G, Pi1);
  Val codc = ext(X2, IdPi);
  return fs_mor(D, codc, [&](const Val& p) {
    // a pointwise-equality witness forces equal graphs
    if (p[0][0][1] != p[0][1])
      throw Error("funext: inhabited pointwise Id with unequal graphs");
    return Val::array({p[0], "refl"});
  });
}

std::optional<bool> FinSetModel::is_equiv_verdict(const Val&, const Telescope&,
                                                 const Telescope&,
                                                 const Val& f) const {
  FinSetModel m;
  return m.invert(f).has_value();
}

ModelPtr make_finset_model() { return std::make_shared<FinSetModel>(); }

// ---------------------------------------------------------------------------
// FinSet with a freely adjoined terminal object carrying no types.

namespace {

const Val kBot = Val{{"bot", true}};

class FinSetBotModel : public Model {
 public:
  std::string name() const override { return "finset-bot"; }

  Val terminal() const override { return kBot; }
  Val identity(const Val& G) const override {
    if (G == kBot) return Val{{"dom", kBot}, {"cod", kBot}, {"tobot", true}};
    return fs.identity(G);
  }
  Val compose(const Val& g, const Val& f) const override {
    if (g.at("cod") == kBot)
      return Val{{"dom", f.at("dom")}, {"cod", kBot}, {"tobot", true}};
    if (f.at("dom") == kBot) {
      if (f.at("cod") != kBot) throw Error("no maps out of bot");
      return g;
    }
    return fs.compose(g, f);
  }
  Val bang(const Val& G) const override {
    return Val{{"dom", G}, {"cod", kBot}, {"tobot", true}};
  }
  Val reindex(const Val& f, const Val& A) const override {
    if (f.at("cod") == kBot) throw Error("no types over bot");
    return fs.reindex(f, A);
  }
  Val ext(const Val& G, const Val& A) const override {
    if (G == kBot) throw Error("no types over bot");
    return fs.ext(G, A);
  }
  Val proj(const Val& G, const Val& A) const override { return fs.proj(G, A); }
  Val qmor(const Val& f, const Val& A) const override { return fs.qmor(f, A); }
  Val pair_into(const Val& f, const Val& A, const Val& k,
                const Val& m) const override {
    return fs.pair_into(f, A, k, m);
  }
  std::vector<Val> hom(const Val& X, const Val& Y) const override {
    if (Y == kBot) return {bang(X)};
    if (X == kBot) return {};  // no maps out of bot except id (handled above)
    return fs.hom(X, Y);
  }
  std::vector<Val> all_types(const Val& G, int bound) const override {
    if (G == kBot) return {};
    return fs.all_types(G, bound);
  }
  std::optional<bool> is_equiv_verdict(const Val& base, const Telescope& A,
                                       const Telescope& B,
                                       const Val& f) const override {
    if (f.at("cod") == kBot || f.at("dom") == kBot)
      return f.at("dom") == f.at("cod");
    return fs.is_equiv_verdict(base, A, B, f);
  }

 private:
  FinSetModel fs;
};

}  // namespace

ModelPtr make_finset_bot_model() { return std::make_shared<FinSetBotModel>(); }

}  // namespace cwa
