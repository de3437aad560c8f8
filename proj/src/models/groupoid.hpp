/* The CwA of finite groupoids: a type over G is a strict functor from G to
   finite groupoids, extension is the Grothendieck construction, and the
   bundles (unit, Id, Sigma, Pi with eta, funext) are computed pointwise.
   Identity morphisms are always labelled ["id", x] and never stored. */
#pragma once

#include "cwa.hpp"

namespace cwa {

// groupoid: {"ob":[...], "mor":[{"id","src","dst"}...], "comp":[[g,f,gf]...]}
Val gp_gpd(std::vector<Val> obs, std::vector<std::array<Val, 3>> mors,
           const std::function<Val(const Val&, const Val&)>& comp);
Val gp_discrete(std::vector<Val> labels);
void gp_validate(const Val& G);

Val gp_id(const Val& x);
bool gp_is_id(const Val& label);
Val gp_src(const Val& G, const Val& m);
Val gp_dst(const Val& G, const Val& m);
Val gp_comp(const Val& G, const Val& g, const Val& f);
Val gp_inv(const Val& G, const Val& m);
std::vector<Val> gp_mors_between(const Val& G, const Val& a, const Val& b);
std::vector<Val> gp_all_mors(const Val& G);  // identities included

// functor: {"dom","cod","ob":[[x,Fx]...],"mor":[[m,Fm]...]} (identities implicit)
Val gp_functor(const Val& dom, const Val& cod,
               const std::function<Val(const Val&)>& obfn,
               const std::function<Val(const Val&)>& morfn);
Val gp_ob_apply(const Val& F, const Val& x);
Val gp_mor_apply(const Val& F, const Val& m);

// type over G: {"fib":[[x,gpd]...],"act":[[m,{"ob":..,"mor":..}]...]}
Val gp_ty(const Val& G, const std::function<Val(const Val&)>& fib,
          const std::function<Val(const Val&, const Val&)>& act_ob,
          const std::function<Val(const Val&, const Val&)>& act_mor);
Val gp_fib(const Val& A, const Val& x);
Val gp_act_ob(const Val& A, const Val& m, const Val& a);
Val gp_act_mor(const Val& A, const Val& m, const Val& p);

ModelPtr make_groupoid_model();

}  // namespace cwa
