#include "lift.hpp"

#include <functional>

namespace cwa {

Telescope level_telescope(const ReedyEnv& env, const Telescope& t,
                          const std::string& i) {
  Val cur = t.base;
  Telescope out{t.base.at("ob").at(i), {}};
  for (auto& L : t.links) {
    const ReedyLimit& MT = matching_telescope(env, cur, L, i);
    for (auto& l : MT.tel.links) out.links.push_back(l);
    out.links.push_back(L.at("components").at(i));
    cur = comprehend(env, cur, L).first;
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// The diagram CwA extended with logical structure.  Every component is built
// level by level in fold order: matching data of the structure under
// construction is mediated from the components already placed, and the base
// model's own structure supplies the new fibers.
class LiftedModel : public Model {
 public:
  explicit LiftedModel(std::shared_ptr<ReedyEnv> env)
      : env_(std::move(env)), dm_(diagram_cwa(env_)) {}

  std::string name() const override { return dm_->name(); }

  // -- core: delegate to the diagram CwA ------------------------------------
  Val terminal() const override { return dm_->terminal(); }
  Val identity(const Val& G) const override { return dm_->identity(G); }
  Val compose(const Val& g, const Val& f) const override {
    return dm_->compose(g, f);
  }
  Val bang(const Val& G) const override { return dm_->bang(G); }
  Val reindex(const Val& f, const Val& A) const override {
    return dm_->reindex(f, A);
  }
  Val ext(const Val& G, const Val& A) const override { return dm_->ext(G, A); }
  Val proj(const Val& G, const Val& A) const override {
    return dm_->proj(G, A);
  }
  Val qmor(const Val& f, const Val& A) const override {
    return dm_->qmor(f, A);
  }
  Val pair_into(const Val& f, const Val& A, const Val& k,
                const Val& m_) const override {
    return dm_->pair_into(f, A, k, m_);
  }
  std::vector<Val> hom(const Val& X, const Val& Y) const override {
    return dm_->hom(X, Y);
  }
  std::vector<Val> all_types(const Val& G, int bound) const override {
    return dm_->all_types(G, bound);
  }
  std::optional<Val> invert(const Val& f) const override {
    return dm_->invert(f);
  }
  std::vector<Val> sections_of(const Val& G, const Val& A) const override {
    return dm_->sections_of(G, A);
  }

  // a map of Reedy types is an equivalence iff it is one at every level
  std::optional<bool> is_equiv_verdict(const Val& base, const Telescope& A,
                                       const Telescope& B,
                                       const Val& f) const override {
    if (!f.is_object() || !f.contains("comp")) return std::nullopt;
    const Model& b = *env_->model;
    for (auto& i : env_->topo) {
      Telescope ta = level_telescope(*env_, A, i);
      Telescope tb = level_telescope(*env_, B, i);
      auto v = slice_equiv_verdict(b, base.at("ob").at(i), ta, tb,
                                   f.at("comp").at(i));
      if (!v) return std::nullopt;
      if (!*v) return false;
    }
    return true;
  }

  // -- unit ------------------------------------------------------------------
  bool has_unit() const override { return env_->model->has_unit(); }

  Val unit_ty(const Val& G) const override {
    std::string key = dump(G);
    auto it = unit_memo_.find(key);
    if (it != unit_memo_.end()) return it->second;
    const Model& b = *env_->model;
    Val U = Val{{"components", Val::object()}};
    for (auto& i : env_->topo)
      U["components"][i] = b.unit_ty(matching_total(*env_, G, U, i));
    return unit_memo_.emplace(key, std::move(U)).first->second;
  }

  Val unit_star(const Val& G) const override {
    const Model& b = *env_->model;
    Val U = unit_ty(G);
    Val comp = Val::object();
    for (auto& i : env_->topo) {
      Val Gi = G.at("ob").at(i);
      Val w = mediate_matching(
          *env_, G, U, i, b.identity(Gi),
          [&](const std::string& j, const Val& alpha) {
            return b.compose(comp.at(j),
                             dia_ar(*env_, G, alpha.get<std::string>()));
          });
      const Val& Ui = U.at("components").at(i);
      Val wU = b.reindex(w, Ui);
      Val s;
      if (wU == b.unit_ty(Gi)) {
        s = b.unit_star(Gi);
      } else {
        auto ss = b.sections_of(Gi, wU);
        if (ss.empty()) throw Error("lifted unit: no section at level " + i);
        s = ss.front();
      }
      comp[i] = b.compose(b.qmor(w, Ui), s);
    }
    return Val{{"dom", G}, {"cod", dm_->ext(G, U)}, {"comp", comp}};
  }

  // -- identity types --------------------------------------------------------
  bool has_id() const override { return env_->model->has_id(); }

  Val id_ty(const Val& G, const Val& A) const override {
    return id_data(G, A).I;
  }

  Val refl(const Val& G, const Val& A) const override {
    return id_data(G, A).reflm;
  }

  // -- sigma -----------------------------------------------------------------
  bool has_sigma() const override { return env_->model->has_sigma(); }

  Val sigma_ty(const Val& G, const Val& A, const Val& B) const override {
    return sigma_data(G, A, B).S;
  }

  Val sigma_pair(const Val& G, const Val& A, const Val& B) const override {
    return sigma_data(G, A, B).pair;
  }

  // -- pi --------------------------------------------------------------------
  bool has_pi() const override { return env_->model->has_pi(); }
  bool pi_eta() const override { return env_->model->pi_eta(); }

  Val pi_ty(const Val& G, const Val& A, const Val& B) const override {
    return pi_data(G, A, B).P;
  }

  Val pi_ev(const Val& G, const Val& A, const Val& B) const override {
    const PiData& pd = pi_data(G, A, B);
    const Model& b = *env_->model;
    Val GA = dm_->ext(G, A);
    Val GAB = dm_->ext(GA, B);
    Val GP = dm_->ext(G, pd.P);
    Val pP = dm_->proj(G, pd.P);
    const ReindexData& rdA = reindex_reedy(*env_, pP, A);
    Val GPA = dm_->ext(GP, rdA.fA);
    Val comp = Val::object();
    for (auto& i : env_->topo) {
      const Val& Ai = A.at("components").at(i);
      const Val& A2i = rdA.fA.at("components").at(i);
      const ReedyLimit& MA2 = matching_telescope(*env_, GP, rdA.fA, i);
      Val MA2tot = tel_total(b, MA2.tel);
      Val Z2 = b.ext(MA2tot, A2i);
      Val vi = b.qmor(rdA.Mif.at(i), Ai);  // Z2 -> (Gam.A)_i
      Val ki = b.compose(tel_proj(b, MA2.tel), b.proj(MA2tot, A2i));
      Val sg = tel_pair_into(b, pd.pp.at(i), pd.ay.at(i), ki, vi);
      comp[i] = b.compose(b.qmor(pd.fmap.at(i), B.at("components").at(i)),
                          b.compose(pd.evmap.at(i), sg));
    }
    return Val{{"dom", GPA}, {"cod", GAB}, {"comp", comp}};
  }

  Val pi_lambda(const Val& G, const Val& A, const Val& B,
                const Val& bb) const override {
    const PiData& pd = pi_data(G, A, B);
    const Model& b = *env_->model;
    Val GP = dm_->ext(G, pd.P);
    Val lam = Val::object();
    for (auto& i : env_->topo) {
      Val Gi = G.at("ob").at(i);
      Val wi = mediate_matching(
          *env_, G, pd.P, i, b.identity(Gi),
          [&](const std::string& j, const Val& alpha) {
            return b.compose(lam.at(j),
                             dia_ar(*env_, G, alpha.get<std::string>()));
          });
      const Telescope& Ay = pd.ay.at(i);
      Val Xi = tel_total(b, Ay);
      const ReedyLimit& MTP = matching_telescope(*env_, G, pd.P, i);
      Val k0 = b.compose(wi, tel_proj(b, Ay));
      Val psi = tel_pair_into(b, tel_proj(b, MTP.tel), Ay, k0, b.identity(Xi));
      Val gi = b.compose(pd.fmap.at(i), psi);
      const Val& Bi = B.at("components").at(i);
      Val Bd = b.reindex(gi, Bi);
      Val di = b.pair_into(gi, Bi, b.identity(Xi), bb.at("comp").at(i));
      Val ci = iterated_lambda(b, Ay, tel_one(Xi, Bd), di);
      lam[i] = b.compose(b.qmor(wi, pd.P.at("components").at(i)), ci);
    }
    return Val{{"dom", G}, {"cod", GP}, {"comp", lam}};
  }

  // -- funext ----------------------------------------------------------------
  bool has_funext() const override { return env_->model->has_funext(); }

  Val funext_map(const Val& G, const Val& A, const Val& B) const override {
    std::string key = dump(G) + "#" + dump(A) + "#" + dump(B);
    auto it = funext_memo_.find(key);
    if (it != funext_memo_.end()) return it->second;
    Val F = search_funext(G, A, B);
    return funext_memo_.emplace(key, std::move(F)).first->second;
  }

 private:
  std::shared_ptr<ReedyEnv> env_;
  ModelPtr dm_;

  struct IdData {
    Val I;
    Val reflm;
  };

  struct SigmaData {
    Val S;
    Val pair;
  };

  struct PiData {
    Val P;
    std::map<std::string, Val> fmap;   // mediated maps into the B-matching
    std::map<std::string, Val> evmap;  // iterated-Pi evaluation per level
    std::map<std::string, Val> pp;     // projection (Gam.Pi)_i -> Gam_i
    std::map<std::string, Telescope> ay;  // boundary-and-fiber telescope of A
  };

  mutable std::map<std::string, Val> unit_memo_;
  mutable std::map<std::string, IdData> id_memo_;
  mutable std::map<std::string, SigmaData> sigma_memo_;
  mutable std::map<std::string, PiData> pi_memo_;
  mutable std::map<std::string, Val> funext_memo_;

  // Id over Gam.A.A: at each level the component is the descent of the base
  // identity type along the map that repeats the first boundary and fills
  // the lower proofs with refl.
  const IdData& id_data(const Val& G, const Val& A) const {
    std::string key = dump(G) + "#" + dump(A);
    auto it = id_memo_.find(key);
    if (it != id_memo_.end()) return it->second;

    const Model& b = *env_->model;
    Val GA = dm_->ext(G, A);
    Val pA = dm_->proj(G, A);
    const ReindexData& rdp = reindex_reedy(*env_, pA, A);
    const Val& Aw = rdp.fA;
    Val G2 = dm_->ext(GA, Aw);
    Val Delta = dm_->pair_into(pA, A, dm_->identity(GA), dm_->identity(GA));

    Val I = Val{{"components", Val::object()}};
    Val r = Val::object();
    for (auto& i : env_->topo) {
      const Val& Ai = A.at("components").at(i);
      Val MiAtot = matching_total(*env_, G, A, i);
      Val Xi = b.ext(MiAtot, Ai);
      Val pX = b.proj(MiAtot, Ai);
      Val Awb = b.reindex(pX, Ai);
      Val XA2 = b.ext(Xi, Awb);
      Val pXA = b.proj(Xi, Awb);
      Val w = mediate_matching(
          *env_, GA, Aw, i, pXA,
          [&](const std::string& j, const Val& alpha) {
            return b.compose(
                Delta.at("comp").at(j),
                b.compose(dia_ar(*env_, GA, alpha.get<std::string>()), pXA));
          });
      Val beta = b.pair_into(rdp.Mif.at(i), Ai, w, b.qmor(pX, Ai));
      Val rp = mediate_matching(
          *env_, G2, I, i, beta,
          [&](const std::string& j, const Val& alpha) {
            return b.compose(
                r.at(j),
                b.compose(dia_ar(*env_, GA, alpha.get<std::string>()), pXA));
          });
      const ReedyLimit& MAw = matching_telescope(*env_, GA, Aw, i);
      const ReedyLimit& MI = matching_telescope(*env_, G2, I, i);
      Telescope codT{Xi, {}};
      codT.links = MAw.tel.links;
      codT.links.push_back(Aw.at("components").at(i));
      for (auto& L : MI.tel.links) codT.links.push_back(L);
      ElimStructure es = elim_search(b, Xi, Telescope{Xi, {Awb}}, codT, rp);
      DescentData desc = elim_descend(b, es, b.id_ty(MiAtot, Ai));
      I["components"][i] = desc.D;
      r[i] = b.compose(b.qmor(rp, desc.D), b.refl(MiAtot, Ai));
    }
    IdData out{I, Val{{"dom", GA}, {"cod", dm_->ext(G2, I)}, {"comp", r}}};
    return id_memo_.emplace(key, std::move(out)).first->second;
  }

  // Sigma: at each level the two halves of the boundary data are recovered
  // from the already-built pairing components (which are invertible in the
  // pointwise models) and the base Sigma pairs the two fibers.
  const SigmaData& sigma_data(const Val& G, const Val& A, const Val& B) const {
    std::string key = dump(G) + "#" + dump(A) + "#" + dump(B);
    auto it = sigma_memo_.find(key);
    if (it != sigma_memo_.end()) return it->second;

    const Model& b = *env_->model;
    Val GA = dm_->ext(G, A);
    Val pA = dm_->proj(G, A);
    Val GAB = dm_->ext(GA, B);
    Val pB = dm_->proj(GA, B);

    Val S = Val{{"components", Val::object()}};
    Val pr = Val::object();
    std::map<std::string, Val> split;
    for (auto& i : env_->topo) {
      const Val& Ai = A.at("components").at(i);
      const Val& Bi = B.at("components").at(i);
      const ReedyLimit& MTS = matching_telescope(*env_, G, S, i);
      Val totS = tel_total(b, MTS.tel);
      Val rho = mediate_matching(
          *env_, G, A, i, tel_proj(b, MTS.tel),
          [&](const std::string& j, const Val& alpha) {
            return b.compose(
                pB.at("comp").at(j),
                b.compose(split.at(j), MTS.cone.leg(j, alpha)));
          });
      Val Abar = b.reindex(rho, Ai);
      Val qrho = b.qmor(rho, Ai);
      Val pAbar = b.proj(totS, Abar);
      Val tau = mediate_matching(
          *env_, GA, B, i, qrho,
          [&](const std::string& j, const Val& alpha) {
            return b.compose(split.at(j),
                             b.compose(MTS.cone.leg(j, alpha), pAbar));
          });
      Val Bbar = b.reindex(tau, Bi);
      S["components"][i] = b.sigma_ty(totS, Abar, Bbar);

      Val Z = GAB.at("ob").at(i);
      Val base_i = b.compose(pA.at("comp").at(i), pB.at("comp").at(i));
      Val m1 = mediate_matching(
          *env_, G, S, i, base_i,
          [&](const std::string& j, const Val& alpha) {
            return b.compose(pr.at(j),
                             dia_ar(*env_, GAB, alpha.get<std::string>()));
          });
      Val hA = b.pair_into(rho, Ai, m1, pB.at("comp").at(i));
      Val hB = b.pair_into(tau, Bi, hA, b.identity(Z));
      pr[i] = b.compose(b.sigma_pair(totS, Abar, Bbar), hB);
      auto inv = b.invert(pr.at(i));
      if (!inv)
        throw Error("lifted sigma: pair component not invertible at " + i);
      split[i] = *inv;
    }
    SigmaData out{S, Val{{"dom", GAB}, {"cod", dm_->ext(G, S)}, {"comp", pr}}};
    return sigma_memo_.emplace(key, std::move(out)).first->second;
  }

  // Pi: the level component is the iterated Pi over the boundary-and-fiber
  // telescope of A of the B-component pulled back along a mediated map that
  // evaluates the lower function fibers at the boundary arguments.
  const PiData& pi_data(const Val& G, const Val& A, const Val& B) const {
    std::string key = dump(G) + "#" + dump(A) + "#" + dump(B);
    auto it = pi_memo_.find(key);
    if (it != pi_memo_.end()) return it->second;

    const Model& b = *env_->model;
    Val GA = dm_->ext(G, A);
    PiData pd;
    pd.P = Val{{"components", Val::object()}};
    for (auto& i : env_->topo) {
      const Val& Ai = A.at("components").at(i);
      const Val& Bi = B.at("components").at(i);
      const ReedyLimit& MTP = matching_telescope(*env_, G, pd.P, i);
      Val tot_i = tel_total(b, MTP.tel);
      const ReedyLimit& MTA = matching_telescope(*env_, G, A, i);
      Telescope Ay{G.at("ob").at(i), MTA.tel.links};
      Ay.links.push_back(Ai);
      Telescope AAw = tel_reindex(b, tel_proj(b, MTP.tel), Ay);
      Val Z = tel_total(b, AAw);
      Val q = tel_qmor(b, tel_proj(b, MTP.tel), Ay);
      Val pZ = tel_proj(b, AAw);
      Val fi = mediate_matching(
          *env_, GA, B, i, q,
          [&](const std::string& j, const Val& alpha) {
            Val u = b.compose(MTP.cone.leg(j, alpha), pZ);
            Val xj = b.compose(dia_ar(*env_, GA, alpha.get<std::string>()), q);
            Val wz = tel_pair_into(b, pd.pp.at(j), pd.ay.at(j), u, xj);
            Val t1 = b.compose(pd.evmap.at(j), wz);
            return b.compose(
                b.qmor(pd.fmap.at(j), B.at("components").at(j)), t1);
          });
      Telescope BB = tel_one(Z, b.reindex(fi, Bi));
      IteratedPi ip = iterated_pi(b, AAw, BB);
      pd.P["components"][i] = ip.pi.links[0];
      pd.pp[i] = b.compose(tel_proj(b, MTP.tel),
                           b.proj(tot_i, ip.pi.links[0]));
      pd.ay[i] = Ay;
      pd.fmap[i] = fi;
      pd.evmap[i] = ip.ev;
    }
    return pi_memo_.emplace(key, std::move(pd)).first->second;
  }

  // search a funext map against the lifted Pi and Id, validating the
  // computation rule on pointwise refl
  Val search_funext(const Val& G, const Val& A, const Val& B) const {
    const Model& m = *this;
    Val GA = m.ext(G, A);
    Val Pi = m.pi_ty(G, A, B);
    Val GP = m.ext(G, Pi);
    Val p1 = m.proj(G, Pi);
    Val Piw = m.reindex(p1, Pi);
    Val GPP = m.ext(GP, Piw);
    Val drop2 = m.proj(GP, Piw);
    Val IdB = m.id_ty(GA, B);
    Val IdPi = m.id_ty(G, Pi);

    Val At = m.reindex(p1, A);
    Val A2 = m.reindex(drop2, At);
    Val u1 = m.compose(m.pi_ev(G, A, B), m.qmor(drop2, At));
    Val Bp = m.reindex(m.qmor(p1, A), B);
    Val ev_w = m.pi_ev(GP, At, Bp);
    Val u2 = m.compose(m.qmor(m.qmor(p1, A), B), ev_w);
    Val e = m.pair_into(m.proj(GA, B), B, u1, u2);
    Val T = m.pi_ty(GPP, A2, m.reindex(e, IdB));

    Val delta = m.pair_into(p1, Pi, m.identity(GP), m.identity(GP));
    Val qd = m.qmor(delta, A2);
    Val ed = m.compose(e, qd);
    Val u1d = m.compose(u1, qd);
    Val GPA = m.ext(GP, At);
    Val sr = m.pair_into(ed, IdB, m.identity(GPA),
                         m.compose(m.refl(GA, B), u1d));
    Val td = m.pi_lambda(GP, At, m.reindex(ed, IdB), sr);
    Val c = m.compose(m.qmor(delta, T), td);
    Val cp = m.refl(G, Pi);

    Telescope IdT = tel_one(GPP, IdPi);
    for (auto& u : hom_over(m, m.proj(GPP, T), IdT)) {
      auto comp = find_homotopy(m, GPP, IdT, m.compose(u, c), cp);
      if (comp) return u;
    }
    throw Error("lifted funext: no map satisfies the computation rule");
  }
};

}  // namespace

ModelPtr lifted_cwa(std::shared_ptr<ReedyEnv> env) {
  return std::make_shared<LiftedModel>(std::move(env));
}

// ---------------------------------------------------------------------------

ComparisonComponent comparison_component(const ReedyEnv& env, const Val& Gam,
                                         const Val& A, const Val& B,
                                         const Val& f, const std::string& i) {
  const Model& b = *env.model;
  const ReedyLimit& MTA = matching_telescope(env, Gam, A, i);
  Val MA = tel_total(b, MTA.tel);
  Val med = mediate_matching(
      env, Gam, B, i, tel_proj(b, MTA.tel),
      [&](const std::string& j, const Val& alpha) {
        return b.compose(f.at("comp").at(j), MTA.cone.leg(j, alpha));
      });
  const Val& Ai = A.at("components").at(i);
  const Val& Bi = B.at("components").at(i);
  Val mm = b.pair_into(med, Bi, b.proj(MA, Ai), f.at("comp").at(i));
  return {med, mm};
}

ReedyElim reedy_elim_levelwise(const ReedyEnv& env, const Val& Gam, const Val& A,
                               const Val& B, const Val& f) {
  const Model& b = *env.model;
  ReedyElim out;
  for (auto& i : env.topo) {
    ComparisonComponent cc = comparison_component(env, Gam, A, B, f, i);
    Val MA = matching_total(env, Gam, A, i);
    Val uB = b.reindex(cc.med, B.at("components").at(i));
    out.emplace(i, elim_search(b, MA, tel_one(MA, A.at("components").at(i)),
                               tel_one(MA, uB), cc.m));
  }
  return out;
}

ElimStructure elim_from_levelwise(std::shared_ptr<ReedyEnv> env, const Val& Gam,
                                  const Val& A, const Val& B, const Val& f,
                                  const ReedyElim& levels) {
  // the supplied level structures must sit on the comparison components
  for (auto& [i, ei] : levels) {
    ComparisonComponent cc = comparison_component(*env, Gam, A, B, f, i);
    if (ei.jmap != cc.m)
      throw Error("elim_from_levelwise: structure at " + i +
                  " is not on the comparison component");
  }
  ModelPtr dm = diagram_cwa(env);
  ElimStructure e{Gam, tel_one(Gam, A), tel_one(Gam, B), f, nullptr};
  ElimStructure shell = e;
  e.elim = [env, dm, shell](const ElimQuery& q) -> Val {
    const Model& b = *env->model;
    const Model& d = *dm;
    Val lifted = elim_lifted(d, shell, q.f, q.E);
    Val Et = tel_total(d, q.E);
    Val EC = d.ext(Et, q.C);
    // level-by-level assembly: each component is a mediated section of the
    // fiber constrained by the defining equation of the eliminator
    Val comp = Val::object();
    std::function<bool(size_t)> rec = [&](size_t t) -> bool {
      if (t == env->topo.size()) return true;
      const std::string& i = env->topo[t];
      Val w = mediate_matching(
          *env, Et, q.C, i, b.identity(Et.at("ob").at(i)),
          [&](const std::string& j, const Val& alpha) {
            return b.compose(comp.at(j),
                             dia_ar(*env, Et, alpha.get<std::string>()));
          });
      const Val& Ci = q.C.at("components").at(i);
      Val wCi = b.reindex(w, Ci);
      for (auto& c : b.sections_of(Et.at("ob").at(i), wCi)) {
        Val cand = b.compose(b.qmor(w, Ci), c);
        if (b.compose(cand, lifted.at("comp").at(i)) != q.d.at("comp").at(i))
          continue;
        comp[i] = cand;
        if (rec(t + 1)) return true;
        comp.erase(i);
      }
      return false;
    };
    if (!rec(0)) throw Error("elim_from_levelwise: no eliminator found");
    return Val{{"dom", Et}, {"cod", EC}, {"comp", comp}};
  };
  return e;
}

LevelVerdict levelwise_equiv(const ReedyEnv& env, const Val& Gam, const Val& A,
                             const Val& B, const Val& f) {
  const Model& b = *env.model;
  for (auto& i : env.topo) {
    Telescope ta = level_telescope(env, tel_one(Gam, A), i);
    Telescope tb = level_telescope(env, tel_one(Gam, B), i);
    auto v = slice_equiv_verdict(b, Gam.at("ob").at(i), ta, tb,
                                 f.at("comp").at(i));
    if (!v) throw Error("levelwise_equiv: undecided at level " + i);
    if (!*v) return {false, i};
  }
  return {true, ""};
}

std::optional<ReedyEquivData> reedy_equiv(const ReedyEnv& env, const Val& Gam,
                                          const Val& A, const Val& B,
                                          const Val& f) {
  const Model& b = *env.model;
  ReedyEquivData out;
  for (auto& i : env.topo) {
    ComparisonComponent cc = comparison_component(env, Gam, A, B, f, i);
    Val MA = matching_total(env, Gam, A, i);
    Telescope ta = tel_one(MA, A.at("components").at(i));
    Telescope tb = tel_one(MA, b.reindex(cc.med, B.at("components").at(i)));
    auto d = equivalence_oracle(b, MA, ta, tb, cc.m);
    if (!d) return std::nullopt;
    out.emplace(i, *d);
  }
  return out;
}

std::vector<std::pair<std::string, HomotopyData>> homotopy_to_levelwise(
    const ReedyEnv& env, const HomotopyData& h) {
  const Model& b = *env.model;
  std::vector<std::pair<std::string, HomotopyData>> out;
  for (auto& i : env.topo) {
    Telescope ti = level_telescope(env, h.B, i);
    auto hi = find_homotopy(b, h.base.at("ob").at(i), ti,
                            h.f.at("comp").at(i), h.g.at("comp").at(i));
    if (!hi) throw Error("homotopy_to_levelwise: no witness at level " + i);
    out.emplace_back(i, *hi);
  }
  return out;
}

SliceDecision slice_equiv_decide(std::shared_ptr<ReedyEnv> env, const Val& Gam,
                                 const Val& A, const Val& B, const Val& f) {
  LevelVerdict lv = levelwise_equiv(*env, Gam, A, B, f);
  if (!lv.ok) return {"not-equivalence", lv.level, std::nullopt};
  ModelPtr dm = lifted_cwa(env);
  auto data =
      equivalence_oracle(*dm, Gam, tel_one(Gam, A), tel_one(Gam, B), f);
  if (!data)
    throw Error("slice_equiv_decide: levelwise equivalence without data");
  return {"equivalence", "", *data};
}

WeakLifts diagram_equiv_from_levelwise(std::shared_ptr<ReedyEnv> env,
                                       const Val& f, const Val& Ap, const Val& a,
                                       int fiber_bound) {
  ModelPtr dmp = lifted_cwa(env);
  const Model& dm = *dmp;
  const Val &X = f.at("dom"), &Y = f.at("cod");

  for (auto& B : dm.all_types(Y, fiber_bound)) {
    Val fB = dm.reindex(f, B);
    Val XfB = dm.ext(X, fB);
    for (auto& u : hom_over(dm, dm.proj(X, fB), tel_one(X, Ap))) {
      auto data =
          equivalence_oracle(dm, X, tel_one(X, fB), tel_one(X, Ap), u);
      if (!data) continue;
      // transport the section backwards and lift it through f
      Val sp = dm.compose(data->g, a);
      for (auto& bs : dm.sections_of(Y, B)) {
        Val pull = dm.pair_into(f, B, dm.identity(X), dm.compose(bs, f));
        if (find_homotopy(dm, X, tel_one(X, fB), pull, sp))
          return {B, u, data, bs};
      }
    }
  }
  throw Error("diagram_equiv_from_levelwise: no lifting witnesses found");
}

FunextLift lift_funext(const Model& dm, const ReedyEnv& env, const Val& Gam,
                       const Val& A, const Val& B) {
  FunextLift out;
  out.R = funext_r_map(dm, Gam, A, B);

  Val GA = dm.ext(Gam, A);
  Val Bw = dm.reindex(dm.proj(GA, B), B);
  Telescope AT = tel_one(Gam, A);
  Telescope BT{GA, {B}};
  Telescope BBB{GA, {B, Bw, dm.id_ty(GA, B)}};
  Telescope PiT = iterated_pi(dm, AT, BT).pi;
  Telescope PiB = iterated_pi(dm, AT, BBB).pi;

  const Model& b = *env.model;
  for (auto& i : env.topo) {
    Telescope lt = level_telescope(env, PiT, i);
    Telescope lb = level_telescope(env, PiB, i);
    auto d = equivalence_oracle(b, Gam.at("ob").at(i), lt, lb,
                                out.R.at("comp").at(i));
    if (!d) throw Error("lift_funext: component not an equivalence at " + i);
    out.levelwise.emplace(i, *d);
  }

  out.payload = equiv_to_funext(dm, Gam, A, B, funext_to_equiv(dm, Gam, A, B));
  return out;
}

}  // namespace cwa
