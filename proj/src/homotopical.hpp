/* Homotopical diagrams over a marked inverse category: homotopicality checks
   for diagrams and Reedy types, the guarded sub-CwA of homotopical objects,
   closure of the lifted structure, transfer across equivalences, and the
   marked-span Pi counterexample. */
#pragma once

#include "lift.hpp"

namespace cwa {

struct ComparisonCheck {
  std::string arrow;
  Val cmp;  // the comparison map checked at this arrow
  bool ok = false;
};

struct HomotopicalVerdict {
  bool ok = true;
  std::string witness;  // first failing arrow
  std::vector<ComparisonCheck> comparisons;
};

// equivalence of contexts in the base model: literal inverse fast path, else
// the general lifting criterion over all types with fibers <= bound
bool context_equivalence(const Model& b, const Val& f, int bound = 2);

// a diagram is homotopical when every marked arrow acts by an equivalence
HomotopicalVerdict is_homotopical_diagram(const ReedyEnv& env,
                                          const HomotopicalMarking& w,
                                          const Val& D, int bound = 2);

// a Reedy type is homotopical when, at every marked arrow alpha : i -> j, the
// comparison map (Gam.A)_i -> Gam_alpha*((Gam.A)_j) is a slice equivalence
HomotopicalVerdict is_homotopical_type(const ReedyEnv& env,
                                       const HomotopicalMarking& w,
                                       const Val& Gam, const Val& A);

// the full sub-CwA of the lifted diagram model on homotopical diagrams and
// homotopical Reedy types; constructions on non-homotopical inputs throw.
// Pi additionally requires every arrow of the category to be marked.
ModelPtr homotopical_view(std::shared_ptr<ReedyEnv> env, HomotopicalMarking w);

// closure of the lifted structure ("unit" | "id" | "sigma" | "pi") on
// homotopical inputs: the constructor map is a levelwise context equivalence
// and the formed type is homotopical.  A and B are ignored where they do not
// apply; pi demands the fully marked category.
Report closure_check(std::shared_ptr<ReedyEnv> env, const HomotopicalMarking& w,
                     const std::string& structure, const Val& Gam,
                     const Val& A = Val(), const Val& B = Val());

// homotopicality transfers across validated equivalence data whose base
// diagram is homotopical; returns the verdict for the unspecified side
bool transfer_homotopical(std::shared_ptr<ReedyEnv> env,
                          const HomotopicalMarking& w, const EquivData& ed,
                          const std::string& known_side, bool known_verdict);

// sampled gate for CwA maps into homotopical views: every supplied context
// equivalence of the source must map to a context equivalence of the target
bool is_homotopical_map(const CwaMap& F, const std::vector<Val>& sample_equivs,
                        int bound = 2);

// the marked span (0 <~ 01 -> 1): an exhaustive search over homotopical pairs
// (A, B) with fibers <= 2 whose lifted Pi fails homotopicality at the marked
// arrow.  Existence is guaranteed; exhaustion without a hit is a hard error.
struct WkMapReport {
  Val Gam, A, B;    // the homotopical pair over the marked span
  Val pi;           // its lifted Pi type
  std::string arrow;
  Val cmp;          // the failing comparison map
  Val fiber_sizes;  // {"dom": n, "cod": m}
};
WkMapReport wkmap_counterexample();

}  // namespace cwa
