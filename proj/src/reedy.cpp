#include "reedy.hpp"

#include <algorithm>

namespace cwa {

namespace {

const Val& ob_of(const Val& D, const std::string& i) {
  return D.at("ob").at(i);
}

std::vector<std::string> topo_order(const FinCategory& cat) {
  std::vector<std::string> out;
  std::set<std::string> placed;
  while (out.size() < cat.objects.size()) {
    bool progress = false;
    for (auto& o : cat.objects) {
      if (placed.count(o)) continue;
      bool ready = true;
      for (auto& aid : cat.out_arrows(o))
        if (!cat.is_identity(aid) && !placed.count(cat.arrow(aid).dst))
          ready = false;
      if (ready) {
        out.push_back(o);
        placed.insert(o);
        progress = true;
      }
    }
    if (!progress) throw Error("category is not inverse: no topological order");
  }
  return out;
}

// objects strictly below i: targets of its non-identity out-arrows
std::set<std::string> below(const FinCategory& cat, const std::string& i) {
  std::set<std::string> out;
  for (auto& aid : cat.out_arrows(i))
    if (!cat.is_identity(aid)) out.insert(cat.arrow(aid).dst);
  return out;
}

std::string match_key(const FinCategory& cat, const Val& Gam, const Val& A,
                      const std::string& i) {
  Val sub = Val::object();
  for (auto& j : below(cat, i))
    if (A.at("components").contains(j)) sub[j] = A.at("components").at(j);
  return i + "#" + dump(Gam) + "#" + dump(sub);
}

}  // namespace

std::shared_ptr<ReedyEnv> make_reedy_env(ModelPtr model, FinCategory cat,
                                         InverseStructure ord) {
  auto env = std::make_shared<ReedyEnv>();
  env->model = std::move(model);
  env->cat = std::move(cat);
  env->ord = std::move(ord);
  env->ord.validate(env->cat);
  env->topo = topo_order(env->cat);
  return env;
}

Val dia_ar(const ReedyEnv& env, const Val& D, const std::string& arrow) {
  if (env.cat.is_identity(arrow))
    return env.model->identity(ob_of(D, env.cat.arrow(arrow).src));
  return D.at("ar").at(arrow);
}

void validate_diagram(const ReedyEnv& env, const Val& D) {
  const Model& m = *env.model;
  for (auto& o : env.cat.objects)
    if (!D.at("ob").contains(o)) throw Error("diagram misses object " + o);
  for (auto& a : env.cat.arrows) {
    if (env.cat.is_identity(a.id)) continue;
    Val f = dia_ar(env, D, a.id);
    if (m.dom(f) != ob_of(D, a.src) || m.cod(f) != ob_of(D, a.dst))
      throw Error("diagram arrow " + a.id + " has wrong endpoints");
  }
  for (auto& g : env.cat.arrows)
    for (auto& f : env.cat.arrows) {
      if (f.dst != g.src) continue;
      Val gf = dia_ar(env, D, env.cat.compose(g.id, f.id));
      if (gf != m.compose(dia_ar(env, D, g.id), dia_ar(env, D, f.id)))
        throw Error("diagram not functorial at " + g.id + " o " + f.id);
    }
}

void validate_diagram_map(const ReedyEnv& env, const Val& f) {
  const Model& m = *env.model;
  const Val &X = f.at("dom"), &Y = f.at("cod");
  for (auto& o : env.cat.objects) {
    Val fi = f.at("comp").at(o);
    if (m.dom(fi) != ob_of(X, o) || m.cod(fi) != ob_of(Y, o))
      throw Error("diagram map component at " + o + " has wrong endpoints");
  }
  for (auto& a : env.cat.arrows) {
    if (env.cat.is_identity(a.id)) continue;
    Val lhs = m.compose(f.at("comp").at(a.dst), dia_ar(env, X, a.id));
    Val rhs = m.compose(dia_ar(env, Y, a.id), f.at("comp").at(a.src));
    if (lhs != rhs) throw Error("diagram map not natural at " + a.id);
  }
}

// ---------------------------------------------------------------------------

ReedyLimit reedy_limit(const ReedyEnv& env, const FiniteExtension& ext,
                       const Val& Gam, const Val& A, const Val& Delta,
                       const ConeData& lambda, const ConeData& mu) {
  const Model& m = *env.model;
  auto cells = decompose(env.cat, ext);

  Val cur = Delta;
  std::vector<Val> links;
  std::vector<FoldStep> steps;
  // legs into Gam.A and into Gam, re-expressed from the growing stage
  std::map<std::pair<std::string, std::string>, Val> legs = mu.legs;
  std::map<std::pair<std::string, std::string>, Val> lam = lambda.legs;

  for (auto& cell : cells) {
    const std::string& i = cell.obj;
    const Val& Ai = A.at("components").at(i);
    Val g = lam.at({i, dump(cell.element)});
    const ReedyLimit& MT = matching_telescope(env, Gam, A, i);
    Val u = g;
    for (auto& st : MT.steps) {
      const Val& bd = cell.boundary.at(st.elem.get<std::string>());
      u = m.pair_into(st.med, A.at("components").at(st.obj), u,
                      legs.at({st.obj, dump(bd)}));
    }
    Val link = m.reindex(u, Ai);
    Val newleg = m.qmor(u, Ai);
    Val p = m.proj(cur, link);
    for (auto& [k, v] : legs) v = m.compose(v, p);
    for (auto& [k, v] : lam) v = m.compose(v, p);
    legs[{i, dump(cell.element)}] = newleg;
    steps.push_back({i, cell.element, u});
    links.push_back(link);
    cur = m.ext(cur, link);
  }

  ReedyLimit out;
  out.tel = Telescope{Delta, links};
  out.cone.apex = cur;
  out.cone.shape = ext.G;
  out.cone.target = Val{{"diagram", Gam}, {"type", A}};
  out.cone.legs = std::move(legs);
  out.steps = std::move(steps);
  return out;
}

const ReedyLimit& matching_telescope(const ReedyEnv& env, const Val& Gam,
                                     const Val& A, const std::string& i) {
  std::string key = match_key(env.cat, Gam, A, i);
  auto it = env.match_memo.find(key);
  if (it != env.match_memo.end()) return it->second;

  auto [bde, ye] = boundary_extension(env.cat, env.ord, i);
  ConeData lam;
  lam.apex = ob_of(Gam, i);
  lam.shape = bde.G;
  for (auto& [o, elems] : bde.G.sets)
    for (auto& x : elems) lam.set_leg(o, x, dia_ar(env, Gam, x.get<std::string>()));
  ConeData mu;
  mu.apex = ob_of(Gam, i);
  mu.shape = bde.F;
  ReedyLimit rl = reedy_limit(env, bde, Gam, A, ob_of(Gam, i), lam, mu);
  return env.match_memo.emplace(key, std::move(rl)).first->second;
}

Val matching_total(const ReedyEnv& env, const Val& Gam, const Val& A,
                   const std::string& i) {
  return tel_total(*env.model, matching_telescope(env, Gam, A, i).tel);
}

Val mediate_matching(const ReedyEnv& env, const Val& Gam, const Val& A,
                     const std::string& i, const Val& g,
                     const std::function<Val(const std::string&, const Val&)>& leg) {
  const Model& m = *env.model;
  const ReedyLimit& MT = matching_telescope(env, Gam, A, i);
  Val u = g;
  for (auto& st : MT.steps)
    u = m.pair_into(st.med, A.at("components").at(st.obj), u, leg(st.obj, st.elem));
  return u;
}

std::pair<Val, Val> comprehend(const ReedyEnv& env, const Val& Gam,
                               const Val& A) {
  const Model& m = *env.model;
  Val D = Val{{"ob", Val::object()}, {"ar", Val::object()}};
  Val p = Val::object();
  for (auto& i : env.cat.objects) {
    const ReedyLimit& MT = matching_telescope(env, Gam, A, i);
    Val tot = tel_total(m, MT.tel);
    const Val& Ai = A.at("components").at(i);
    D["ob"][i] = m.ext(tot, Ai);
    p[i] = m.compose(tel_proj(m, MT.tel), m.proj(tot, Ai));
  }
  for (auto& a : env.cat.arrows) {
    if (env.cat.is_identity(a.id)) continue;
    const ReedyLimit& MT = matching_telescope(env, Gam, A, a.src);
    Val tot = tel_total(m, MT.tel);
    const Val& Ai = A.at("components").at(a.src);
    D["ar"][a.id] = m.compose(MT.cone.leg(a.dst, Val(a.id)), m.proj(tot, Ai));
  }
  Val proj = Val{{"dom", D}, {"cod", Gam}, {"comp", p}};
  return {D, proj};
}

const ReindexData& reindex_reedy(const ReedyEnv& env, const Val& f,
                                 const Val& A) {
  std::string key = dump(f) + "#" + dump(A);
  auto it = env.reindex_memo.find(key);
  if (it != env.reindex_memo.end()) return it->second;

  const Model& m = *env.model;
  const Val &Gp = f.at("dom"), &Gam = f.at("cod");
  ReindexData rd;
  rd.fA = Val{{"components", Val::object()}};
  Val comp = Val::object();
  for (auto& i : env.topo) {
    const ReedyLimit& MTp = matching_telescope(env, Gp, rd.fA, i);
    Val base = m.compose(f.at("comp").at(i), tel_proj(m, MTp.tel));
    Val Mif = mediate_matching(
        env, Gam, A, i, base, [&](const std::string& j, const Val& alpha) {
          return m.compose(comp.at(j), MTp.cone.leg(j, alpha));
        });
    const Val& Ai = A.at("components").at(i);
    rd.fA["components"][i] = m.reindex(Mif, Ai);
    comp[i] = m.qmor(Mif, Ai);
    rd.Mif[i] = Mif;
  }
  rd.fdA = Val{{"dom", comprehend(env, Gp, rd.fA).first},
               {"cod", comprehend(env, Gam, A).first},
               {"comp", comp}};
  return env.reindex_memo.emplace(key, std::move(rd)).first->second;
}

Val strictify(const ReedyEnv& env, const Val& Gam, const WeakReedyType& w) {
  const Model& m = *env.model;
  Val A = Val{{"components", Val::object()}};
  for (auto& i : env.topo) {
    Val phi = w.iso.count(i) ? w.iso.at(i)
                             : m.identity(matching_total(env, Gam, A, i));
    if (m.dom(phi) != matching_total(env, Gam, A, i))
      throw Error("strictify: iso at " + i + " not from the canonical total");
    if (!m.invert(phi)) throw Error("strictify: map at " + i + " not invertible");
    A["components"][i] = m.reindex(phi, w.components.at(i));
  }
  return A;
}

// ---------------------------------------------------------------------------

Val restrict_diagram(const ReedyEnv& envJ, const ReedyEnv& envI,
                     const OpfibWitness& u, const Val& D) {
  Val out = Val{{"ob", Val::object()}, {"ar", Val::object()}};
  for (auto& j : envJ.cat.objects) out["ob"][j] = ob_of(D, u.ob_at(j));
  for (auto& a : envJ.cat.arrows) {
    if (envJ.cat.is_identity(a.id)) continue;
    out["ar"][a.id] = dia_ar(envI, D, u.ar_at(a.id));
  }
  return out;
}

Val restrict_reedy_type(const ReedyEnv& envJ, const ReedyEnv& envI,
                        const OpfibWitness& u, const Val& GamJ, const Val& GamI,
                        const Val& A) {
  if (!u.ordered)
    throw Error("restrict: only ordered opfibrations act on Reedy types");
  Val out = Val{{"components", Val::object()}};
  for (auto& j : envJ.topo) {
    out["components"][j] = A.at("components").at(u.ob_at(j));
    if (matching_telescope(envJ, GamJ, out, j).tel !=
        matching_telescope(envI, GamI, A, u.ob_at(j)).tel)
      throw Error("restrict: matching telescopes diverge at " + j);
  }
  return out;
}

Val restrict_diagram_map(const ReedyEnv& envJ, const ReedyEnv& envI,
                         const OpfibWitness& u, const Val& f) {
  Val comp = Val::object();
  for (auto& j : envJ.cat.objects) comp[j] = f.at("comp").at(u.ob_at(j));
  return Val{{"dom", restrict_diagram(envJ, envI, u, f.at("dom"))},
             {"cod", restrict_diagram(envJ, envI, u, f.at("cod"))},
             {"comp", comp}};
}

// ---------------------------------------------------------------------------

Report validate_cwa_map(const CwaMap& F, const std::vector<Val>& universe,
                        int fiber_bound) {
  const Model &s = *F.src, &d = *F.dst;
  Report rep;
  bool okc = true, okt = true;
  Val wc, wt;
  if (F.ob(s.terminal()) != d.terminal())
    okc = false, wc = Val("terminal");
  for (auto& G : universe) {
    if (F.mor(s.identity(G)) != d.identity(F.ob(G)))
      okc = false, wc = {{"identity", G}};
    for (auto& X : universe)
      for (auto& f : s.hom(X, G)) {
        if (d.dom(F.mor(f)) != F.ob(X) || d.cod(F.mor(f)) != F.ob(G))
          okc = false, wc = {{"endpoints", f}};
        for (auto& Y : universe)
          for (auto& g : s.hom(G, Y))
            if (F.mor(s.compose(g, f)) != d.compose(F.mor(g), F.mor(f)))
              okc = false, wc = {{"compose", {{"g", g}, {"f", f}}}};
      }
    for (auto& A : s.all_types(G, fiber_bound)) {
      if (F.ob(s.ext(G, A)) != d.ext(F.ob(G), F.ty(A)) ||
          F.mor(s.proj(G, A)) != d.proj(F.ob(G), F.ty(A)))
        okt = false, wt = {{"ext", {{"G", G}, {"A", A}}}};
      for (auto& X : universe)
        for (auto& f : s.hom(X, G)) {
          if (F.ty(s.reindex(f, A)) != d.reindex(F.mor(f), F.ty(A)) ||
              F.mor(s.qmor(f, A)) != d.qmor(F.mor(f), F.ty(A)))
            okt = false, wt = {{"reindex", {{"f", f}, {"A", A}}}};
        }
    }
  }
  rep.add("cwa-map-category", okc, wc);
  rep.add("cwa-map-types", okt, wt);
  return rep;
}

Val map_diagram(const CwaMap& F, const Val& D) {
  Val out = Val{{"ob", Val::object()}, {"ar", Val::object()}};
  for (auto& [i, G] : D.at("ob").items()) out["ob"][i] = F.ob(G);
  for (auto& [a, f] : D.at("ar").items()) out["ar"][a] = F.mor(f);
  return out;
}

Val map_diagram_map(const CwaMap& F, const Val& f) {
  Val comp = Val::object();
  for (auto& [i, c] : f.at("comp").items()) comp[i] = F.mor(c);
  return Val{{"dom", map_diagram(F, f.at("dom"))},
             {"cod", map_diagram(F, f.at("cod"))},
             {"comp", comp}};
}

Val map_reedy_type(const ReedyEnv& env_src, const ReedyEnv& env_dst,
                   const CwaMap& F, const Val& Gam, const Val& A) {
  Val out = Val{{"components", Val::object()}};
  Val FD = map_diagram(F, Gam);
  for (auto& i : env_src.topo) {
    out["components"][i] = F.ty(A.at("components").at(i));
    if (matching_total(env_dst, FD, out, i) !=
        F.ob(matching_total(env_src, Gam, A, i)))
      throw Error("map_model: matching total not preserved at " + i);
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

class DiagramModel : public Model {
 public:
  explicit DiagramModel(std::shared_ptr<ReedyEnv> env) : env_(std::move(env)) {}

  std::string name() const override {
    return env_->model->name() + "^" + "I";
  }

  Val terminal() const override {
    const Model& m = *env_->model;
    Val D = Val{{"ob", Val::object()}, {"ar", Val::object()}};
    for (auto& o : env_->cat.objects) D["ob"][o] = m.terminal();
    for (auto& a : env_->cat.arrows)
      if (!env_->cat.is_identity(a.id))
        D["ar"][a.id] = m.identity(m.terminal());
    return D;
  }

  Val identity(const Val& G) const override {
    Val comp = Val::object();
    for (auto& o : env_->cat.objects)
      comp[o] = env_->model->identity(G.at("ob").at(o));
    return Val{{"dom", G}, {"cod", G}, {"comp", comp}};
  }

  Val compose(const Val& g, const Val& f) const override {
    if (f.at("cod") != g.at("dom"))
      throw Error("diagram compose: cod/dom mismatch");
    Val comp = Val::object();
    for (auto& o : env_->cat.objects)
      comp[o] =
          env_->model->compose(g.at("comp").at(o), f.at("comp").at(o));
    return Val{{"dom", f.at("dom")}, {"cod", g.at("cod")}, {"comp", comp}};
  }

  Val bang(const Val& G) const override {
    Val comp = Val::object();
    for (auto& o : env_->cat.objects)
      comp[o] = env_->model->bang(G.at("ob").at(o));
    return Val{{"dom", G}, {"cod", terminal()}, {"comp", comp}};
  }

  Val reindex(const Val& f, const Val& A) const override {
    return reindex_reedy(*env_, f, A).fA;
  }

  Val ext(const Val& G, const Val& A) const override {
    return comprehend(*env_, G, A).first;
  }

  Val proj(const Val& G, const Val& A) const override {
    return comprehend(*env_, G, A).second;
  }

  Val qmor(const Val& f, const Val& A) const override {
    return reindex_reedy(*env_, f, A).fdA;
  }

  Val pair_into(const Val& f, const Val& A, const Val& k,
                const Val& m_) const override {
    const Model& m = *env_->model;
    const ReindexData& rd = reindex_reedy(*env_, f, A);
    const Val& Gp = f.at("dom");
    const Val& X = k.at("dom");
    Val comp = Val::object();
    for (auto& i : env_->topo) {
      Val w = mediate_matching(
          *env_, Gp, rd.fA, i, k.at("comp").at(i),
          [&](const std::string& j, const Val& alpha) {
            return m.compose(comp.at(j),
                             dia_ar(*env_, X, alpha.get<std::string>()));
          });
      comp[i] = m.pair_into(rd.Mif.at(i), A.at("components").at(i), w,
                            m_.at("comp").at(i));
    }
    return Val{{"dom", X}, {"cod", ext(Gp, rd.fA)}, {"comp", comp}};
  }

  std::vector<Val> hom(const Val& X, const Val& Y) const override {
    const Model& m = *env_->model;
    std::vector<Val> out;
    Val comp = Val::object();
    std::function<void(size_t)> rec = [&](size_t t) {
      if (t == env_->topo.size()) {
        out.push_back(Val{{"dom", X}, {"cod", Y}, {"comp", comp}});
        return;
      }
      const std::string& i = env_->topo[t];
      for (auto& h : m.hom(X.at("ob").at(i), Y.at("ob").at(i))) {
        bool nat = true;
        for (auto& aid : env_->cat.out_arrows(i)) {
          if (env_->cat.is_identity(aid)) continue;
          const std::string& j = env_->cat.arrow(aid).dst;
          if (m.compose(comp.at(j), dia_ar(*env_, X, aid)) !=
              m.compose(dia_ar(*env_, Y, aid), h)) {
            nat = false;
            break;
          }
        }
        if (!nat) continue;
        comp[i] = h;
        rec(t + 1);
        comp.erase(i);
      }
    };
    rec(0);
    return out;
  }

  std::vector<Val> all_types(const Val& G, int bound) const override {
    const Model& m = *env_->model;
    std::vector<Val> out;
    Val A = Val{{"components", Val::object()}};
    std::function<void(size_t)> rec = [&](size_t t) {
      if (t == env_->topo.size()) {
        out.push_back(A);
        return;
      }
      const std::string& i = env_->topo[t];
      Val tot = matching_total(*env_, G, A, i);
      for (auto& Ai : m.all_types(tot, bound)) {
        A["components"][i] = Ai;
        rec(t + 1);
        A["components"].erase(i);
      }
    };
    rec(0);
    return out;
  }

  std::optional<Val> invert(const Val& f) const override {
    const Model& m = *env_->model;
    Val comp = Val::object();
    for (auto& o : env_->cat.objects) {
      auto inv = m.invert(f.at("comp").at(o));
      if (!inv) return std::nullopt;
      comp[o] = *inv;
    }
    return Val{{"dom", f.at("cod")}, {"cod", f.at("dom")}, {"comp", comp}};
  }

  std::vector<Val> sections_of(const Val& G, const Val& A) const override {
    const Model& m = *env_->model;
    Val GA = ext(G, A);
    std::vector<Val> out;
    Val comp = Val::object();
    std::function<void(size_t)> rec = [&](size_t t) {
      if (t == env_->topo.size()) {
        out.push_back(Val{{"dom", G}, {"cod", GA}, {"comp", comp}});
        return;
      }
      const std::string& i = env_->topo[t];
      Val w = mediate_matching(
          *env_, G, A, i, m.identity(G.at("ob").at(i)),
          [&](const std::string& j, const Val& alpha) {
            return m.compose(comp.at(j),
                             dia_ar(*env_, G, alpha.get<std::string>()));
          });
      const Val& Ai = A.at("components").at(i);
      Val wAi = m.reindex(w, Ai);
      for (auto& c : m.sections_of(G.at("ob").at(i), wAi)) {
        comp[i] = m.compose(m.qmor(w, Ai), c);
        rec(t + 1);
        comp.erase(i);
      }
    };
    rec(0);
    return out;
  }

 private:
  std::shared_ptr<ReedyEnv> env_;
};

}  // namespace

ModelPtr diagram_cwa(std::shared_ptr<ReedyEnv> env) {
  return std::make_shared<DiagramModel>(std::move(env));
}

// ---------------------------------------------------------------------------

PullbackVerdict verify_relative_pullback(
    const ReedyEnv& env, const Telescope& tel, const ConeData& cone,
    const FiniteExtension& ext, const Val& Gam, const Val& A, const Val& Delta,
    const ConeData& lambda, const ConeData& mu, const std::vector<Val>& universe,
    int fiber_bound, size_t budget) {
  const Model& m = *env.model;
  size_t work = 0;

  // cells in attachment order; each cone is forced on F and chosen cellwise
  auto cells = decompose(env.cat, ext);

  // competitor objects: the universe plus its one-step extensions
  std::vector<Val> competitors = universe;
  for (auto& X : universe)
    for (auto& B : m.all_types(X, fiber_bound))
      competitors.push_back(m.ext(X, B));

  Val P = tel_total(m, tel);
  Val pP = tel_proj(m, tel);

  for (auto& X : competitors) {
    for (auto& t : m.hom(X, Delta)) {
      // assemble all compatible cones from X
      std::map<std::pair<std::string, std::string>, Val> nu;
      for (auto& [key, leg] : mu.legs) nu[key] = m.compose(leg, t);

      std::function<bool(size_t)> assemble = [&](size_t c) -> bool {
        if (++work > budget) throw Error("budget");
        if (c == cells.size()) {
          // count factorizations through the candidate
          size_t count = 0;
          for (auto& h : hom_over(m, t, tel)) {
            bool match = true;
            for (auto& [key, leg] : nu)
              if (m.compose(cone.legs.at(key), h) != leg) {
                match = false;
                break;
              }
            if (match) ++count;
          }
          return count == 1;
        }
        const auto& cell = cells[c];
        const std::string& i = cell.obj;
        const ReedyLimit& MT = matching_telescope(env, Gam, A, i);
        Telescope full = tel_concat(
            m, MT.tel,
            Telescope{tel_total(m, MT.tel), {A.at("components").at(i)}});
        Val base = m.compose(lambda.leg(i, cell.element), t);
        for (auto& candidate : hom_over(m, base, full)) {
          if (++work > budget) throw Error("budget");
          bool nat = true;
          for (auto& [aid, y] : cell.boundary) {
            const std::string& j = env.cat.arrow(aid).dst;
            Val tot = tel_total(m, MT.tel);
            Val act = m.compose(MT.cone.leg(j, Val(aid)),
                                m.proj(tot, A.at("components").at(i)));
            if (m.compose(act, candidate) != nu.at({j, dump(y)})) {
              nat = false;
              break;
            }
          }
          if (!nat) continue;
          nu[{i, dump(cell.element)}] = candidate;
          if (!assemble(c + 1)) return false;
          nu.erase({i, dump(cell.element)});
        }
        return true;
      };

      try {
        if (!assemble(0))
          return {"refuted", Val{{"competitor", X}, {"base", t}}};
      } catch (const Error&) {
        return {"indeterminate", Val("budget exhausted")};
      }
    }
  }
  return {"verified", Val()};
}

}  // namespace cwa
