/* The CwA of finite sets: Ty(X) = families of finite sets indexed by X,
   with label-preserving reindexing so all stability equations hold
   literally.  Carries unit, Id, Sigma, Pi (with eta) and funext. */
#pragma once

#include "cwa.hpp"

namespace cwa {

// object: sorted array of labels; morphism: {"dom","cod","map":[[x,fx],...]};
// type over G: sorted array of [x, fiber] covering G exactly.
Val fs_obj(std::vector<Val> labels);
Val fs_mor(const Val& dom, const Val& cod,
           const std::function<Val(const Val&)>& fn);
Val fs_apply(const Val& mor, const Val& x);
Val fs_fiber(const Val& A, const Val& x);
Val fs_ty(const Val& G, const std::function<Val(const Val&)>& fiber);

// CLI literals: {"ctx":[...]} and {"family":{label:[...]}} (string keys)
Val fs_ctx_from_json(const Val& j);
Val fs_family_from_json(const Val& G, const Val& j);

class FinSetModel : public Model {
 public:
  std::string name() const override { return "finset"; }

  Val terminal() const override;
  Val identity(const Val& G) const override;
  Val compose(const Val& g, const Val& f) const override;
  Val bang(const Val& G) const override;

  Val reindex(const Val& f, const Val& A) const override;
  Val ext(const Val& G, const Val& A) const override;
  Val proj(const Val& G, const Val& A) const override;
  Val qmor(const Val& f, const Val& A) const override;
  Val pair_into(const Val& f, const Val& A, const Val& k,
                const Val& m) const override;

  std::vector<Val> hom(const Val& X, const Val& Y) const override;
  std::vector<Val> all_types(const Val& G, int bound) const override;
  std::optional<Val> invert(const Val& f) const override;
  std::vector<Val> sections_of(const Val& G, const Val& A) const override;

  bool has_unit() const override { return true; }
  Val unit_ty(const Val& G) const override;
  Val unit_star(const Val& G) const override;

  bool has_id() const override { return true; }
  Val id_ty(const Val& G, const Val& A) const override;
  Val refl(const Val& G, const Val& A) const override;

  bool has_sigma() const override { return true; }
  Val sigma_ty(const Val& G, const Val& A, const Val& B) const override;
  Val sigma_pair(const Val& G, const Val& A, const Val& B) const override;

  bool has_pi() const override { return true; }
  bool pi_eta() const override { return true; }
  Val pi_ty(const Val& G, const Val& A, const Val& B) const override;
  Val pi_ev(const Val& G, const Val& A, const Val& B) const override;
  Val pi_lambda(const Val& G, const Val& A, const Val& B,
                const Val& b) const override;

  bool has_funext() const override { return true; }
  Val funext_map(const Val& G, const Val& A, const Val& B) const override;

  std::optional<bool> is_equiv_verdict(const Val& base, const Telescope& A,
                                       const Telescope& B,
                                       const Val& f) const override;
};

ModelPtr make_finset_model();

// FinSet with a freely adjoined terminal object "bot" carrying no types.
// Exists to reproduce the equivalence-but-not-levelwise counterexample.
ModelPtr make_finset_bot_model();

}  // namespace cwa
