#include "trivial.hpp"

namespace cwa {

namespace {

class TrivialModel : public Model {
 public:
  explicit TrivialModel(const FinCategory& base) : cat(base) {
    // a CwA needs a chosen terminal object; freely adjoin one if absent
    top = "$top";
    cat.objects.push_back(top);
    cat.arrows.push_back({FinCategory::id_of(top), top, top});
    for (auto& o : cat.objects) {
      if (o == top) continue;
      cat.arrows.push_back({"!" + o, o, top});
    }
    for (auto& a : cat.arrows) {
      if (a.dst == top || cat.is_identity(a.id)) continue;
      cat.comp[{"!" + a.dst, a.id}] = "!" + a.src;
    }
    for (auto& o : cat.objects)
      if (o != top) cat.comp[{FinCategory::id_of(top), "!" + o}] = "!" + o;
    cat.validate_structure();
  }

  std::string name() const override { return "trivial"; }

  Val terminal() const override { return Val(top); }
  Val identity(const Val& G) const override {
    return mor(G, G, FinCategory::id_of(G.get<std::string>()));
  }
  Val compose(const Val& g, const Val& f) const override {
    return mor(f.at("dom"), g.at("cod"),
               cat.compose(g.at("arrow"), f.at("arrow")));
  }
  Val bang(const Val& G) const override {
    if (G == terminal()) return identity(G);
    return mor(G, terminal(), "!" + G.get<std::string>());
  }
  Val reindex(const Val&, const Val& A) const override { return A; }
  Val ext(const Val& G, const Val&) const override { return G; }
  Val proj(const Val& G, const Val&) const override { return identity(G); }
  Val qmor(const Val& f, const Val&) const override { return f; }
  Val pair_into(const Val&, const Val&, const Val& k, const Val&) const override {
    return k;
  }
  std::vector<Val> hom(const Val& X, const Val& Y) const override {
    std::vector<Val> out;
    for (auto& a : cat.arrows)
      if (a.src == X.get<std::string>() && a.dst == Y.get<std::string>())
        out.push_back(mor(X, Y, a.id));
    return out;
  }
  std::vector<Val> all_types(const Val&, int) const override {
    return {Val("*")};
  }

  bool has_unit() const override { return true; }
  Val unit_ty(const Val&) const override { return Val("*"); }
  Val unit_star(const Val& G) const override { return identity(G); }
  bool has_id() const override { return true; }
  Val id_ty(const Val&, const Val&) const override { return Val("*"); }
  Val refl(const Val& G, const Val& A) const override {
    return identity(ext(G, A));
  }
  bool has_sigma() const override { return true; }
  Val sigma_ty(const Val&, const Val&, const Val&) const override {
    return Val("*");
  }
  Val sigma_pair(const Val& G, const Val&, const Val&) const override {
    return identity(G);
  }
  bool has_pi() const override { return true; }
  bool pi_eta() const override { return true; }
  Val pi_ty(const Val&, const Val&, const Val&) const override {
    return Val("*");
  }
  Val pi_ev(const Val& G, const Val&, const Val&) const override {
    return identity(G);
  }
  Val pi_lambda(const Val&, const Val&, const Val&, const Val& b) const override {
    return b;
  }
  bool has_funext() const override { return true; }
  Val funext_map(const Val& G, const Val&, const Val&) const override {
    return identity(G);
  }
  std::optional<bool> is_equiv_verdict(const Val&, const Telescope&,
                                       const Telescope&,
                                       const Val&) const override {
    return true;
  }

 private:
  Val mor(const Val& d, const Val& c, const std::string& a) const {
    return Val{{"dom", d}, {"cod", c}, {"arrow", a}};
  }
  FinCategory cat;
  std::string top;
};

}  // namespace

ModelPtr make_trivial_model(const FinCategory& base) {
  return std::make_shared<TrivialModel>(base);
}

}  // namespace cwa
