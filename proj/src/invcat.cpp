#include "invcat.hpp"

#include <algorithm>
#include <functional>

namespace cwa {

bool FinCategory::has_object(const std::string& o) const {
  return std::find(objects.begin(), objects.end(), o) != objects.end();
}

const Arrow& FinCategory::arrow(const std::string& id) const {
  for (auto& a : arrows)
    if (a.id == id) return a;
  throw Error("unknown arrow: " + id);
}

bool FinCategory::is_identity(const std::string& id) const {
  const Arrow& a = arrow(id);
  return a.id == id_of(a.src) && a.src == a.dst;
}

std::string FinCategory::compose(const std::string& g, const std::string& f) const {
  const Arrow &ag = arrow(g), &af = arrow(f);
  if (af.dst != ag.src) throw Error("non-composable: " + g + " o " + f);
  if (is_identity(f)) return g;
  if (is_identity(g)) return f;
  auto it = comp.find({g, f});
  if (it == comp.end()) throw Error("composition table missing entry " + g + " o " + f);
  return it->second;
}

std::vector<std::string> FinCategory::out_arrows(const std::string& i) const {
  std::vector<std::string> out;
  for (auto& a : arrows)
    if (a.src == i) out.push_back(a.id);
  return out;
}

void FinCategory::validate_structure() const {
  std::set<std::string> ids;
  for (auto& a : arrows) {
    if (!has_object(a.src) || !has_object(a.dst))
      throw Error("arrow " + a.id + " has unknown endpoint");
    if (!ids.insert(a.id).second) throw Error("duplicate arrow id " + a.id);
  }
  for (auto& o : objects) {
    const Arrow& i = arrow(id_of(o));
    if (i.src != o || i.dst != o) throw Error("bad identity for " + o);
  }
  for (auto& f : arrows)
    for (auto& g : arrows) {
      if (f.dst != g.src) continue;
      const Arrow& gf = arrow(compose(g.id, f.id));
      if (gf.src != f.src || gf.dst != g.dst)
        throw Error("composite " + g.id + " o " + f.id + " has wrong endpoints");
    }
  for (auto& f : arrows)
    for (auto& g : arrows)
      for (auto& h : arrows) {
        if (f.dst != g.src || g.dst != h.src) continue;
        if (compose(h.id, compose(g.id, f.id)) !=
            compose(compose(h.id, g.id), f.id))
          throw Error("associativity fails at " + h.id + "," + g.id + "," + f.id);
      }
}

FinCategory FinCategory::from_json(const Val& j) {
  FinCategory c;
  for (auto& o : j.at("objects")) c.objects.push_back(o.get<std::string>());
  for (auto& o : c.objects) c.arrows.push_back({id_of(o), o, o});
  if (j.contains("arrows"))
    for (auto& a : j.at("arrows"))
      c.arrows.push_back({a.at("id").get<std::string>(),
                          a.at("src").get<std::string>(),
                          a.at("dst").get<std::string>()});
  if (j.contains("composition"))
    for (auto& e : j.at("composition"))
      c.comp[{e.at(0).get<std::string>(), e.at(1).get<std::string>()}] =
          e.at(2).get<std::string>();
  c.validate_structure();
  return c;
}

Val FinCategory::to_json() const {
  Val j;
  j["objects"] = objects;
  j["arrows"] = Val::array();
  for (auto& a : arrows)
    if (!is_identity(a.id))
      j["arrows"].push_back({{"id", a.id}, {"src", a.src}, {"dst", a.dst}});
  j["composition"] = Val::array();
  for (auto& [k, v] : comp) j["composition"].push_back({k.first, k.second, v});
  return j;
}

int InverseStructure::rank(const std::string& obj, const std::string& arrow) const {
  auto& v = order.at(obj);
  auto it = std::find(v.begin(), v.end(), arrow);
  if (it == v.end()) throw Error("arrow " + arrow + " not in ordering at " + obj);
  return int(it - v.begin());
}

void InverseStructure::validate(const FinCategory& cat) const {
  for (auto& o : cat.objects) {
    auto out = cat.out_arrows(o);
    std::sort(out.begin(), out.end());
    auto listed = order.at(o);
    std::sort(listed.begin(), listed.end());
    if (out != listed) throw Error("ordering at " + o + " is not the out-arrow set");
  }
  // fg < g for f non-identity
  for (auto& g : cat.arrows)
    for (auto& f : cat.arrows) {
      if (f.src != g.dst || cat.is_identity(f.id)) continue;
      std::string fg = cat.compose(f.id, g.id);
      if (rank(g.src, fg) >= rank(g.src, g.id))
        throw Error("ordering violates fg<g at " + f.id + " o " + g.id);
    }
}

HomotopicalMarking saturate_two_of_six(const FinCategory& cat,
                                       const HomotopicalMarking& w) {
  std::set<std::string> W;
  for (auto& o : cat.objects) W.insert(FinCategory::id_of(o));
  for (auto& a : w.equivalences) W.insert(a);
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto& f : cat.arrows)
      for (auto& g : cat.arrows)
        for (auto& h : cat.arrows) {
          if (f.dst != g.src || g.dst != h.src) continue;
          if (!W.count(cat.compose(g.id, f.id)) || !W.count(cat.compose(h.id, g.id)))
            continue;
          for (auto& x : {f.id, g.id, h.id, cat.compose(h.id, cat.compose(g.id, f.id))})
            changed |= W.insert(x).second;
        }
  }
  HomotopicalMarking out;
  out.equivalences = W;
  return out;
}

bool marking_valid(const FinCategory& cat, const HomotopicalMarking& w) {
  HomotopicalMarking in;
  in.equivalences = w.equivalences;
  for (auto& o : cat.objects) in.equivalences.insert(FinCategory::id_of(o));
  return saturate_two_of_six(cat, in).equivalences == in.equivalences;
}

// ---------------------------------------------------------------------------

const std::vector<Val>& Copresheaf::at(const std::string& obj) const {
  static const std::vector<Val> empty;
  auto it = sets.find(obj);
  return it == sets.end() ? empty : it->second;
}

bool Copresheaf::has(const std::string& obj, const Val& x) const {
  auto& v = at(obj);
  return std::find(v.begin(), v.end(), x) != v.end();
}

Val Copresheaf::act(const FinCategory& cat, const std::string& arrow, const Val& x) const {
  if (cat.is_identity(arrow)) return x;
  return action.at(arrow).at(dump(x));
}

void Copresheaf::validate(const FinCategory& cat) const {
  for (auto& [o, elems] : sets) {
    if (!cat.has_object(o)) throw Error("copresheaf at unknown object " + o);
    if (!std::is_sorted(elems.begin(), elems.end()))
      throw Error("copresheaf elements not sorted at " + o);
  }
  for (auto& a : cat.arrows) {
    if (cat.is_identity(a.id)) {
      if (action.count(a.id)) throw Error("identity action stored explicitly");
      continue;
    }
    for (auto& x : at(a.src)) {
      Val y = act(cat, a.id, x);
      if (!has(a.dst, y)) throw Error("action of " + a.id + " leaves the copresheaf");
    }
  }
  for (auto& f : cat.arrows)
    for (auto& g : cat.arrows) {
      if (f.dst != g.src) continue;
      for (auto& x : at(f.src))
        if (act(cat, cat.compose(g.id, f.id), x) !=
            act(cat, g.id, act(cat, f.id, x)))
          throw Error("copresheaf action not functorial at " + g.id + " o " + f.id);
    }
}

Copresheaf yoneda(const FinCategory& cat, const std::string& i) {
  Copresheaf F;
  for (auto& o : cat.objects) F.sets[o] = {};
  for (auto& a : cat.arrows)
    if (a.src == i) F.sets[a.dst].push_back(Val(a.id));
  for (auto& [o, v] : F.sets) std::sort(v.begin(), v.end());
  for (auto& b : cat.arrows) {
    if (cat.is_identity(b.id)) continue;
    for (auto& x : F.at(b.src))
      F.action[b.id][dump(x)] = Val(cat.compose(b.id, x.get<std::string>()));
    if (!F.action.count(b.id) && !F.at(b.src).empty())
      throw Error("internal: yoneda action");
  }
  return F;
}

Copresheaf boundary(const FinCategory& cat, const std::string& i) {
  Copresheaf F = yoneda(cat, i);
  auto& v = F.sets[i];
  v.erase(std::remove(v.begin(), v.end(), Val(FinCategory::id_of(i))), v.end());
  // arrows out of i acting on id_i are gone with it; remaining actions restrict
  for (auto& [aid, tbl] : F.action)
    tbl.erase(dump(Val(FinCategory::id_of(i))));
  for (auto it = F.action.begin(); it != F.action.end();)
    it = it->second.empty() ? F.action.erase(it) : std::next(it);
  return F;
}

void FiniteExtension::validate(const FinCategory& cat) const {
  F.validate(cat);
  G.validate(cat);
  for (auto& [o, elems] : F.sets)
    for (auto& x : elems)
      if (!G.has(o, x)) throw Error("F not a subset of G at " + o);
  // F's action is the restriction of G's
  for (auto& [aid, tbl] : F.action)
    for (auto& [xd, y] : tbl) {
      const Arrow& a = cat.arrow(aid);
      for (auto& x : F.at(a.src))
        if (dump(x) == xd && G.act(cat, aid, x) != y)
          throw Error("F action differs from G at " + aid);
    }
  // complement order covers exactly the complement
  std::set<std::pair<std::string, std::string>> comp_set;
  for (auto& [o, x] : complement_order)
    if (!comp_set.insert({o, dump(x)}).second)
      throw Error("duplicate complement entry");
  for (auto& [o, elems] : G.sets)
    for (auto& x : elems) {
      bool inF = F.has(o, x);
      bool listed = comp_set.count({o, dump(x)}) > 0;
      if (inF == listed)
        throw Error("complement order mismatch at " + o + " " + dump(x));
    }
  // alpha x <= x for complement elements mapping into the complement
  auto pos = [&](const std::string& o, const Val& x) -> int {
    for (size_t k = 0; k < complement_order.size(); ++k)
      if (complement_order[k].first == o && complement_order[k].second == x)
        return int(k);
    return -1;
  };
  for (auto& a : cat.arrows) {
    if (cat.is_identity(a.id)) continue;
    for (auto& [o, x] : complement_order) {
      if (o != a.src) continue;
      Val y = G.act(cat, a.id, x);
      int px = pos(o, x), py = pos(a.dst, y);
      if (py >= 0 && py > px)
        throw Error("complement order violates alpha x <= x at " + a.id);
    }
  }
}

// ---------------------------------------------------------------------------

ValidationReport validate_inverse(const FinCategory& cat) {
  cat.validate_structure();
  ValidationReport rep;
  // precedence edges i -> j for non-identity arrows i -> j
  std::map<std::string, std::set<std::string>> succ;
  for (auto& a : cat.arrows)
    if (!cat.is_identity(a.id)) succ[a.src].insert(a.dst);
  // cycle detection (self-loops included)
  std::map<std::string, int> state;  // 0 unvisited, 1 active, 2 done
  std::vector<std::string> stack, cycle;
  std::function<bool(const std::string&)> dfs = [&](const std::string& v) {
    state[v] = 1;
    stack.push_back(v);
    for (auto& w : succ[v]) {
      if (state[w] == 1) {
        auto it = std::find(stack.begin(), stack.end(), w);
        cycle.assign(it, stack.end());
        return false;
      }
      if (state[w] == 0 && !dfs(w)) return false;
    }
    stack.pop_back();
    state[v] = 2;
    return true;
  };
  for (auto& o : cat.objects)
    if (state[o] == 0 && !dfs(o)) {
      rep.ok = false;
      rep.witness = cycle;
      rep.messages.push_back("precedence cycle");
      return rep;
    }
  for (auto& o : cat.objects)
    rep.predecessor_count[o] = int(succ[o].size());
  rep.messages.push_back("inverse category");
  return rep;
}

InverseStructure default_ordering(const FinCategory& cat) {
  ValidationReport rep = validate_inverse(cat);
  if (!rep.ok) throw Error("not an inverse category");
  // L(f) = maximal number of non-identity factors of f; fixpoint iteration
  std::map<std::string, int> L;
  for (auto& a : cat.arrows) L[a.id] = cat.is_identity(a.id) ? 0 : 1;
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto& f : cat.arrows)
      for (auto& g : cat.arrows) {
        if (f.dst != g.src || cat.is_identity(f.id) || cat.is_identity(g.id))
          continue;
        std::string gf = cat.compose(g.id, f.id);
        if (L[gf] < L[f.id] + L[g.id]) {
          L[gf] = L[f.id] + L[g.id];
          changed = true;
        }
      }
  }
  InverseStructure ord;
  for (auto& o : cat.objects) {
    auto out = cat.out_arrows(o);
    std::sort(out.begin(), out.end(), [&](const std::string& a, const std::string& b) {
      if (L[a] != L[b]) return L[a] > L[b];  // longer composites first
      return a < b;                          // ascending arrow id
    });
    ord.order[o] = out;
  }
  ord.validate(cat);
  return ord;
}

std::pair<FiniteExtension, FiniteExtension> boundary_extension(
    const FinCategory& cat, const InverseStructure& ord, const std::string& i) {
  if (!cat.has_object(i)) throw Error("unknown object " + i);
  Copresheaf zero;
  for (auto& o : cat.objects) zero.sets[o] = {};
  FiniteExtension bd, yo;
  bd.F = zero;
  bd.G = boundary(cat, i);
  yo.F = zero;
  yo.G = yoneda(cat, i);
  for (auto& aid : ord.order.at(i)) {
    const Arrow& a = cat.arrow(aid);
    if (!cat.is_identity(aid)) bd.complement_order.push_back({a.dst, Val(aid)});
    yo.complement_order.push_back({a.dst, Val(aid)});
  }
  bd.validate(cat);
  yo.validate(cat);
  return {bd, yo};
}

std::vector<Attachment> decompose(const FinCategory& cat,
                                  const FiniteExtension& ext) {
  ext.validate(cat);
  std::vector<Attachment> cells;
  // stage: elements built so far
  std::set<std::pair<std::string, std::string>> stage;
  for (auto& [o, elems] : ext.F.sets)
    for (auto& x : elems) stage.insert({o, dump(x)});
  for (auto& [o, x] : ext.complement_order) {
    Attachment cell;
    cell.obj = o;
    cell.element = x;
    for (auto& aid : cat.out_arrows(o)) {
      if (cat.is_identity(aid)) continue;
      const Arrow& a = cat.arrow(aid);
      Val y = ext.G.act(cat, aid, x);
      if (!stage.count({a.dst, dump(y)}))
        throw Error("attachment boundary escapes the stage at element " + dump(x));
      cell.boundary[aid] = y;
    }
    cells.push_back(cell);
    stage.insert({o, dump(x)});
  }
  return cells;
}

Copresheaf replay(const FinCategory& cat, const Copresheaf& F,
                  const std::vector<Attachment>& cells) {
  Copresheaf G = F;
  for (auto& cell : cells) {
    G.sets[cell.obj].push_back(cell.element);
    for (auto& [aid, y] : cell.boundary)
      G.action[aid][dump(cell.element)] = y;
  }
  for (auto& [o, v] : G.sets) std::sort(v.begin(), v.end());
  G.validate(cat);
  return G;
}

// ---------------------------------------------------------------------------

Copresheaf pushforward(const FinCategory& I, const OpfibWitness& u,
                       const Copresheaf& F) {
  const FinCategory& J = u.domain;
  F.validate(J);
  Copresheaf out;
  for (auto& o : I.objects) out.sets[o] = {};
  for (auto& j : J.objects)
    for (auto& x : F.at(j))
      out.sets[u.ob_at(j)].push_back(Val::array({Val(j), x}));
  for (auto& [o, v] : out.sets) std::sort(v.begin(), v.end());
  for (auto& a : I.arrows) {
    if (I.is_identity(a.id)) continue;
    for (auto& e : out.at(a.src)) {
      std::string j = e[0].get<std::string>();
      std::string beta = u.lift.at({j, a.id});
      const Arrow& b = J.arrow(beta);
      out.action[a.id][dump(e)] =
          Val::array({Val(b.dst), F.act(J, beta, e[1])});
    }
  }
  out.validate(I);
  return out;
}

FiniteExtension pushforward(const FinCategory& I, const OpfibWitness& u,
                            const FiniteExtension& ext) {
  FiniteExtension out;
  out.F = pushforward(I, u, ext.F);
  out.G = pushforward(I, u, ext.G);
  for (auto& [j, x] : ext.complement_order)
    out.complement_order.push_back({u.ob_at(j), Val::array({Val(j), x})});
  out.validate(I);
  return out;
}

Val pushforward_boundary_iso(const FinCategory& I, const OpfibWitness& u,
                             const std::string& j) {
  // u_!(y j) element [j', beta: j -> j'] corresponds to u(beta): uj -> uj'
  Val iso = Val::array();
  const FinCategory& J = u.domain;
  for (auto& b : J.arrows)
    if (b.src == j)
      iso.push_back(Val::array(
          {Val::array({Val(b.dst), Val(b.id)}), Val(u.ar_at(b.id))}));
  (void)I;
  return iso;
}

const Val& ConeData::leg(const std::string& obj, const Val& x) const {
  return legs.at({obj, dump(x)});
}

void ConeData::set_leg(const std::string& obj, const Val& x, const Val& m) {
  legs[{obj, dump(x)}] = m;
}

ConeData transpose_cone(const FinCategory& I, const OpfibWitness& u,
                        const ConeData& c, bool from_pushforward) {
  const FinCategory& J = u.domain;
  ConeData out;
  out.apex = c.apex;
  out.target = c.target;
  if (from_pushforward) {
    // c is a u_!F-cone over I; produce the F-cone over J
    Copresheaf F;
    for (auto& j : J.objects) F.sets[j] = {};
    for (auto& [key, m] : c.legs) {
      Val e = Val::parse(key.second);  // [j, x]
      std::string j = e[0].get<std::string>();
      F.sets[j].push_back(e[1]);
      out.set_leg(j, e[1], m);
    }
    for (auto& [o, v] : F.sets) std::sort(v.begin(), v.end());
    // reconstruct the action from the pushforward shape
    for (auto& a : J.arrows) {
      if (J.is_identity(a.id)) continue;
      for (auto& x : F.at(a.src)) {
        Val pushed = Val::array({Val(a.src), x});
        Val moved = c.shape.act(I, u.ar_at(a.id), pushed);
        F.action[a.id][dump(x)] = moved[1];
      }
    }
    out.shape = F;
  } else {
    // c is an F-cone over J; produce the u_!F-cone over I
    out.shape = pushforward(I, u, c.shape);
    for (auto& [key, m] : c.legs) {
      Val x = Val::parse(key.second);
      out.set_leg(u.ob_at(key.first), Val::array({Val(key.first), x}), m);
    }
  }
  return out;
}

std::optional<OpfibWitness> validate_opfibration(
    const FinCategory& J, const FinCategory& I,
    const std::map<std::string, std::string>& ob,
    const std::map<std::string, std::string>& ar,
    const InverseStructure* ordJ, const InverseStructure* ordI,
    const HomotopicalMarking* wJ, const HomotopicalMarking* wI,
    std::string* why) {
  auto fail = [&](const std::string& m) -> std::optional<OpfibWitness> {
    if (why) *why = m;
    return std::nullopt;
  };
  // functor checks
  for (auto& a : J.arrows) {
    if (!ar.count(a.id)) return fail("arrow map missing " + a.id);
    const Arrow& img = I.arrow(ar.at(a.id));
    if (img.src != ob.at(a.src) || img.dst != ob.at(a.dst))
      return fail("arrow map breaks endpoints at " + a.id);
  }
  for (auto& o : J.objects)
    if (ar.at(FinCategory::id_of(o)) != FinCategory::id_of(ob.at(o)))
      return fail("identity not preserved at " + o);
  for (auto& f : J.arrows)
    for (auto& g : J.arrows) {
      if (f.dst != g.src) continue;
      if (ar.at(J.compose(g.id, f.id)) != I.compose(ar.at(g.id), ar.at(f.id)))
        return fail("composition not preserved at " + g.id + " o " + f.id);
    }
  OpfibWitness u;
  u.domain = J;
  u.ob = ob;
  u.ar = ar;
  // unique lifts for every (j, alpha out of u(j))
  for (auto& j : J.objects)
    for (auto& alpha : I.out_arrows(ob.at(j))) {
      std::vector<std::string> lifts;
      for (auto& b : J.arrows)
        if (b.src == j && ar.at(b.id) == alpha) lifts.push_back(b.id);
      if (lifts.size() != 1)
        return fail("arrow " + alpha + " has " + std::to_string(lifts.size()) +
                    " lifts at " + j);
      u.lift[{j, alpha}] = lifts[0];
    }
  // flags
  std::set<std::string> obs, ars;
  u.injective = true;
  for (auto& [k, v] : ob)
    if (!obs.insert(v).second) u.injective = false;
  for (auto& [k, v] : ar)
    if (!ars.insert(v).second) u.injective = false;
  if (ordJ && ordI) {
    u.ordered = true;
    for (auto& j : J.objects) {
      auto& oj = ordJ->order.at(j);
      for (size_t a = 0; a + 1 < oj.size(); ++a)
        if (ordI->rank(ob.at(j), ar.at(oj[a])) >=
            ordI->rank(ob.at(j), ar.at(oj[a + 1])))
          u.ordered = false;
    }
  }
  if (wJ && wI) {
    u.homotopical = true;
    for (auto& a : J.arrows)
      if (wJ->marked(J, a.id) && !wI->marked(I, ar.at(a.id)))
        u.homotopical = false;
  }
  return u;
}

}  // namespace cwa
