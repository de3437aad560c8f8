/* Lifting logical structure from the base CwA to the CwA of strict Reedy
   types: per-level comparison components, Reedy elimination structures,
   unit/Id/Sigma/Pi/funext lifts, and the equivalence theory of diagrams. */
#pragma once

#include "elim.hpp"
#include "reedy.hpp"

namespace cwa {

// the diagram CwA with the logical bundles lifted from the base model
ModelPtr lifted_cwa(std::shared_ptr<ReedyEnv> env);

// present a telescope of Reedy types at one level as a base telescope over
// the level of its base diagram (matching links interleaved with components)
Telescope level_telescope(const ReedyEnv& env, const Telescope& t,
                          const std::string& i);

// f a map (Gam.A-comprehension) -> (Gam.B-comprehension) over Gam.
// The level-i component factors exactly as f_i = qmor(med, B_i) o m, with m
// the relative matching comparison A_i -> med*B_i over the matching total.
struct ComparisonComponent {
  Val med;  // matching total of A at i -> matching total of B at i
  Val m;    // (matching total of A at i).A_i -> (same).med*B_i
};
ComparisonComponent comparison_component(const ReedyEnv& env, const Val& Gam,
                                         const Val& A, const Val& B,
                                         const Val& f, const std::string& i);

// per-level elimination structures on the comparison components
using ReedyElim = std::map<std::string, ElimStructure>;
ReedyElim reedy_elim_levelwise(const ReedyEnv& env, const Val& Gam, const Val& A,
                               const Val& B, const Val& f);

// package levelwise structures on the components of f into a structure on f
// in the diagram CwA; queries are answered level by level in fold order
ElimStructure elim_from_levelwise(std::shared_ptr<ReedyEnv> env, const Val& Gam,
                                  const Val& A, const Val& B, const Val& f,
                                  const ReedyElim& levels);

// per-level equivalence data on the comparison components
using ReedyEquivData = std::map<std::string, EquivData>;

struct LevelVerdict {
  bool ok = true;
  std::string level;  // first failing level when !ok
};

// levelwise equivalence verdict for a map between single-type comprehensions
LevelVerdict levelwise_equiv(const ReedyEnv& env, const Val& Gam, const Val& A,
                             const Val& B, const Val& f);

// Reedy equivalence data: equivalence data on every comparison component
std::optional<ReedyEquivData> reedy_equiv(const ReedyEnv& env, const Val& Gam,
                                          const Val& A, const Val& B,
                                          const Val& f);

// homotopies between parallel maps into a comprehension restrict to every
// level; the data is re-witnessed levelwise
std::vector<std::pair<std::string, HomotopyData>> homotopy_to_levelwise(
    const ReedyEnv& env, const HomotopyData& h);

struct SliceDecision {
  std::string verdict;            // equivalence | not-equivalence
  std::string level;              // failing level on refutation
  std::optional<EquivData> data;  // data in the diagram CwA when positive
};

// decide whether f : Gam.A -> Gam.B over Gam is an equivalence of Reedy
// types; positive answers carry data, negative ones name a level
SliceDecision slice_equiv_decide(std::shared_ptr<ReedyEnv> env, const Val& Gam,
                                 const Val& A, const Val& B, const Val& f);

// weak lifting witnesses along a levelwise equivalence of diagrams f: X -> Y:
// a Reedy type over Y pulling back to Ap up to slice equivalence, and a
// section over Y whose pullback is homotopic to the transported section a
struct WeakLifts {
  Val type_lift;  // Reedy type over Y
  Val compare;    // X.f*(type_lift) -> X.Ap over X
  std::optional<EquivData> compare_data;
  Val term_lift;  // section of type_lift over Y
};
WeakLifts diagram_equiv_from_levelwise(std::shared_ptr<ReedyEnv> env,
                                       const Val& f, const Val& Ap, const Val& a,
                                       int fiber_bound);

struct FunextLift {
  Val R;                     // lambda(refl o ev) in the diagram CwA
  ReedyEquivData levelwise;  // level equivalence data on R's components
  FunextPayload payload;     // the funext map with its computation rule
};
FunextLift lift_funext(const Model& dm, const ReedyEnv& env, const Val& Gam,
                       const Val& A, const Val& B);

}  // namespace cwa
