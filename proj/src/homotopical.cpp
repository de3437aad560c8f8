#include "homotopical.hpp"

#include "models/finset.hpp"

namespace cwa {

namespace {

std::vector<std::string> marked_nonid(const FinCategory& cat,
                                      const HomotopicalMarking& w) {
  std::vector<std::string> out;
  for (auto& a : cat.arrows)
    if (!cat.is_identity(a.id) && w.marked(cat, a.id)) out.push_back(a.id);
  return out;
}

bool all_marked(const FinCategory& cat, const HomotopicalMarking& w) {
  for (auto& a : cat.arrows)
    if (!w.marked(cat, a.id)) return false;
  return true;
}

}  // namespace

bool context_equivalence(const Model& b, const Val& f, int bound) {
  if (b.invert(f)) return true;
  GeneralVerdict gv = is_equivalence_general(b, f, bound);
  if (gv.verdict == "indeterminate")
    throw Error("context_equivalence: undecided");
  return gv.verdict == "equivalence";
}

HomotopicalVerdict is_homotopical_diagram(const ReedyEnv& env,
                                          const HomotopicalMarking& w,
                                          const Val& D, int bound) {
  HomotopicalVerdict out;
  for (auto& a : marked_nonid(env.cat, w)) {
    ComparisonCheck c;
    c.arrow = a;
    c.cmp = dia_ar(env, D, a);
    c.ok = context_equivalence(*env.model, c.cmp, bound);
    if (!c.ok && out.ok) {
      out.ok = false;
      out.witness = a;
    }
    out.comparisons.push_back(std::move(c));
  }
  return out;
}

HomotopicalVerdict is_homotopical_type(const ReedyEnv& env,
                                       const HomotopicalMarking& w,
                                       const Val& Gam, const Val& A) {
  const Model& b = *env.model;
  Val GA = comprehend(env, Gam, A).first;
  HomotopicalVerdict out;
  for (auto& a : marked_nonid(env.cat, w)) {
    const Arrow& ar = env.cat.arrow(a);
    Telescope Ti = level_telescope(env, tel_one(Gam, A), ar.src);
    Telescope Tj = level_telescope(env, tel_one(Gam, A), ar.dst);
    Val Ga = dia_ar(env, Gam, a);
    Val u = tel_pair_into(b, Ga, Tj, tel_proj(b, Ti), dia_ar(env, GA, a));
    ComparisonCheck c;
    c.arrow = a;
    c.cmp = u;
    auto v = slice_equiv_verdict(b, Gam.at("ob").at(ar.src), Ti,
                                 tel_reindex(b, Ga, Tj), u);
    if (!v) throw Error("is_homotopical_type: undecided at " + a);
    c.ok = *v;
    if (!c.ok && out.ok) {
      out.ok = false;
      out.witness = a;
    }
    out.comparisons.push_back(std::move(c));
  }
  return out;
}

namespace {

class HomotopicalView : public Model {
 public:
  HomotopicalView(std::shared_ptr<ReedyEnv> env, HomotopicalMarking w)
      : env_(std::move(env)), w_(std::move(w)), inner_(lifted_cwa(env_)) {}

  std::string name() const override {
    return env_->model->name() + "^(" + "marked)";
  }

  Val terminal() const override { return inner_->terminal(); }
  Val identity(const Val& G) const override { return inner_->identity(G); }
  Val compose(const Val& g, const Val& f) const override {
    return inner_->compose(g, f);
  }
  Val bang(const Val& G) const override { return inner_->bang(G); }

  Val reindex(const Val& f, const Val& A) const override {
    need_diagram(f.at("dom"));
    need_diagram(f.at("cod"));
    need_type(f.at("cod"), A);
    return inner_->reindex(f, A);
  }
  Val ext(const Val& G, const Val& A) const override {
    need_diagram(G);
    need_type(G, A);
    return inner_->ext(G, A);
  }
  Val proj(const Val& G, const Val& A) const override {
    return inner_->proj(G, A);
  }
  Val qmor(const Val& f, const Val& A) const override {
    return inner_->qmor(f, A);
  }
  Val pair_into(const Val& f, const Val& A, const Val& k,
                const Val& m) const override {
    return inner_->pair_into(f, A, k, m);
  }

  std::vector<Val> hom(const Val& X, const Val& Y) const override {
    return inner_->hom(X, Y);
  }
  std::vector<Val> all_types(const Val& G, int bound) const override {
    std::vector<Val> out;
    for (auto& A : inner_->all_types(G, bound))
      if (type_ok(G, A)) out.push_back(A);
    return out;
  }
  std::optional<Val> invert(const Val& f) const override {
    return inner_->invert(f);
  }
  std::vector<Val> sections_of(const Val& G, const Val& A) const override {
    return inner_->sections_of(G, A);
  }

  bool has_unit() const override { return inner_->has_unit(); }
  Val unit_ty(const Val& G) const override {
    need_diagram(G);
    return inner_->unit_ty(G);
  }
  Val unit_star(const Val& G) const override {
    need_diagram(G);
    return inner_->unit_star(G);
  }

  bool has_id() const override { return inner_->has_id(); }
  Val id_ty(const Val& G, const Val& A) const override {
    need_diagram(G);
    need_type(G, A);
    return inner_->id_ty(G, A);
  }
  Val refl(const Val& G, const Val& A) const override {
    need_diagram(G);
    need_type(G, A);
    return inner_->refl(G, A);
  }

  bool has_sigma() const override { return inner_->has_sigma(); }
  Val sigma_ty(const Val& G, const Val& A, const Val& B) const override {
    need_diagram(G);
    need_type(G, A);
    need_type(inner_->ext(G, A), B);
    return inner_->sigma_ty(G, A, B);
  }
  Val sigma_pair(const Val& G, const Val& A, const Val& B) const override {
    need_diagram(G);
    need_type(G, A);
    need_type(inner_->ext(G, A), B);
    return inner_->sigma_pair(G, A, B);
  }

  bool has_pi() const override { return inner_->has_pi(); }
  bool pi_eta() const override { return inner_->pi_eta(); }
  Val pi_ty(const Val& G, const Val& A, const Val& B) const override {
    need_all_marked();
    need_diagram(G);
    need_type(G, A);
    need_type(inner_->ext(G, A), B);
    return inner_->pi_ty(G, A, B);
  }
  Val pi_ev(const Val& G, const Val& A, const Val& B) const override {
    need_all_marked();
    return inner_->pi_ev(G, A, B);
  }
  Val pi_lambda(const Val& G, const Val& A, const Val& B,
                const Val& b) const override {
    need_all_marked();
    return inner_->pi_lambda(G, A, B, b);
  }

  bool has_funext() const override { return inner_->has_funext(); }
  Val funext_map(const Val& G, const Val& A, const Val& B) const override {
    need_all_marked();
    return inner_->funext_map(G, A, B);
  }

  Val id_J(const Val& G, const Val& A, const Telescope& E, const Val& C,
           const Val& d) const override {
    return inner_->id_J(G, A, E, C, d);
  }
  Val sigma_split(const Val& G, const Val& A, const Val& B, const Telescope& E,
                  const Val& C, const Val& d) const override {
    return inner_->sigma_split(G, A, B, E, C, d);
  }
  Val unit_rec(const Val& G, const Telescope& E, const Val& C,
               const Val& d) const override {
    return inner_->unit_rec(G, E, C, d);
  }

  std::optional<bool> is_equiv_verdict(const Val& base, const Telescope& A,
                                       const Telescope& B,
                                       const Val& f) const override {
    return inner_->is_equiv_verdict(base, A, B, f);
  }

 private:
  bool diagram_ok(const Val& D) const {
    auto it = dmemo_.find(dump(D));
    if (it != dmemo_.end()) return it->second;
    bool ok = is_homotopical_diagram(*env_, w_, D).ok;
    return dmemo_.emplace(dump(D), ok).first->second;
  }
  bool type_ok(const Val& G, const Val& A) const {
    std::string key = dump(G) + "|" + dump(A);
    auto it = tmemo_.find(key);
    if (it != tmemo_.end()) return it->second;
    bool ok = is_homotopical_type(*env_, w_, G, A).ok;
    return tmemo_.emplace(key, ok).first->second;
  }
  void need_diagram(const Val& D) const {
    if (!diagram_ok(D))
      throw Error("homotopical_view: context is not homotopical");
  }
  void need_type(const Val& G, const Val& A) const {
    if (!type_ok(G, A))
      throw Error("homotopical_view: type is not homotopical");
  }
  void need_all_marked() const {
    if (!all_marked(env_->cat, w_))
      throw Error("homotopical_view: pi requires every arrow to be marked");
  }

  std::shared_ptr<ReedyEnv> env_;
  HomotopicalMarking w_;
  ModelPtr inner_;
  mutable std::map<std::string, bool> dmemo_, tmemo_;
};

}  // namespace

ModelPtr homotopical_view(std::shared_ptr<ReedyEnv> env, HomotopicalMarking w) {
  return std::make_shared<HomotopicalView>(std::move(env), std::move(w));
}

Report closure_check(std::shared_ptr<ReedyEnv> env, const HomotopicalMarking& w,
                     const std::string& structure, const Val& Gam, const Val& A,
                     const Val& B) {
  ModelPtr mp = lifted_cwa(env);
  const Model& m = *mp;
  const Model& b = *env->model;
  Report rep;
  auto levelwise_ok = [&](const Val& f) {
    for (auto& i : env->topo)
      if (!context_equivalence(b, f.at("comp").at(i))) return false;
    return true;
  };

  if (structure == "unit") {
    Val U = m.unit_ty(Gam);
    rep.add("unit.star-levelwise-equivalence", levelwise_ok(m.unit_star(Gam)));
    rep.add("unit.type-homotopical", is_homotopical_type(*env, w, Gam, U).ok);
  } else if (structure == "id") {
    Val GA = m.ext(Gam, A);
    Val G2 = m.ext(GA, m.reindex(m.proj(Gam, A), A));
    Val I = m.id_ty(Gam, A);
    rep.add("id.refl-levelwise-equivalence", levelwise_ok(m.refl(Gam, A)));
    rep.add("id.type-homotopical", is_homotopical_type(*env, w, G2, I).ok);
  } else if (structure == "sigma") {
    Val S = m.sigma_ty(Gam, A, B);
    rep.add("sigma.pair-levelwise-equivalence",
            levelwise_ok(m.sigma_pair(Gam, A, B)));
    rep.add("sigma.type-homotopical", is_homotopical_type(*env, w, Gam, S).ok);
  } else if (structure == "pi") {
    if (!all_marked(env->cat, w))
      throw Error("closure_check: pi requires every arrow to be marked");
    Val P = m.pi_ty(Gam, A, B);
    rep.add("pi.type-homotopical", is_homotopical_type(*env, w, Gam, P).ok);
  } else {
    throw Error("closure_check: unknown structure " + structure);
  }
  return rep;
}

bool transfer_homotopical(std::shared_ptr<ReedyEnv> env,
                          const HomotopicalMarking& w, const EquivData& ed,
                          const std::string& known_side, bool known_verdict) {
  if (known_side != "A" && known_side != "B")
    throw Error("transfer_homotopical: side must be A or B");
  ModelPtr m = lifted_cwa(env);
  if (!equiv_valid(*m, ed))
    throw Error("transfer_homotopical: invalid equivalence data");
  if (!is_homotopical_diagram(*env, w, ed.base).ok)
    throw Error("transfer_homotopical: base diagram is not homotopical");
  // equivalences of Reedy comprehensions are levelwise, so homotopicality
  // passes across the data in both directions by two-out-of-three
  return known_verdict;
}

bool is_homotopical_map(const CwaMap& F, const std::vector<Val>& sample_equivs,
                        int bound) {
  for (auto& f : sample_equivs) {
    if (!context_equivalence(*F.src, f, bound))
      throw Error("is_homotopical_map: sample is not an equivalence");
    if (!context_equivalence(*F.dst, F.mor(f), bound)) return false;
  }
  return true;
}

WkMapReport wkmap_counterexample() {
  Val cj = Val{{"objects", {"0", "01", "1"}},
               {"arrows",
                {{{"id", "to0"}, {"src", "01"}, {"dst", "0"}},
                 {{"id", "to1"}, {"src", "01"}, {"dst", "1"}}}},
               {"composition", Val::array()}};
  auto cat = FinCategory::from_json(cj);
  HomotopicalMarking w;
  w.equivalences.insert("to0");
  auto env = make_reedy_env(make_finset_model(), cat, default_ordering(cat));
  ModelPtr dmp = diagram_cwa(env);
  ModelPtr lift = lifted_cwa(env);
  const Model& dm = *dmp;
  const Model& b = *env->model;
  Val G = dm.terminal();

  auto ty_size = [&](const Val& D) {
    size_t n = 0;
    for (auto& [i, s] : D.at("ob").items()) n += s.size();
    return n;
  };

  std::vector<Val> As;
  for (auto& A : dm.all_types(G, 2))
    if (is_homotopical_type(*env, w, G, A).ok) As.push_back(A);
  std::stable_sort(As.begin(), As.end(), [&](const Val& x, const Val& y) {
    return ty_size(dm.ext(G, x)) < ty_size(dm.ext(G, y));
  });

  for (auto& A : As) {
    Val GA = dm.ext(G, A);
    for (auto& B0 : b.all_types(GA.at("ob").at("0"), 2)) {
      for (auto& B1 : b.all_types(GA.at("ob").at("1"), 2)) {
        Val Bp = Val{{"components", {{"0", B0}, {"1", B1}}}};
        Val tot = matching_total(*env, GA, Bp, "01");
        size_t n = tot.size();
        if (n > 12) continue;
        // every homotopical B has at most one element over each point of the
        // matching total at the top level; enumerate the supports
        for (size_t mask = 0; mask < (size_t(1) << n); ++mask) {
          Val B = Bp;
          size_t k = 0;
          Val B01 = Val::array();
          for (auto& x : tot)
            B01.push_back(Val::array(
                {x, (mask >> k++) & 1 ? Val::array({"*"}) : Val::array()}));
          B["components"]["01"] = B01;
          if (!is_homotopical_type(*env, w, GA, B).ok) continue;
          Val P = lift->pi_ty(G, A, B);
          HomotopicalVerdict hv = is_homotopical_type(*env, w, G, P);
          if (hv.ok) continue;
          for (auto& c : hv.comparisons)
            if (!c.ok)
              return {G,
                      A,
                      B,
                      P,
                      c.arrow,
                      c.cmp,
                      Val{{"dom", c.cmp.at("dom").size()},
                          {"cod", c.cmp.at("cod").size()}}};
        }
      }
    }
  }
  throw Error("wkmap_counterexample: search exhausted without a failure");
}

}  // namespace cwa
