/* Derived machinery over an abstract model: elimination-structure
   combinators, identity contexts for telescopes, iterated Pi with ev and
   lambda, homotopies, equivalence data, and the map factorisation. */
#pragma once

#include "cwa.hpp"

namespace cwa {

// -- elimination structures -------------------------------------------------

// e_{C,d} := d o iso^{-1}; throws on non-invertible input.
ElimStructure elim_from_iso(const Model& m, const Val& base, const Telescope& dom,
                            const Telescope& cod, const Val& iso);
// invert the lifted map when possible, otherwise search sections exhaustively
ElimStructure elim_search(const Model& m, const Val& base, const Telescope& dom,
                          const Telescope& cod, const Val& jmap);
ElimStructure elim_identity(const Model& m, const Val& base, const Telescope& t);
// the canonical structure on refl, delegating to the model's J
ElimStructure elim_refl(const Model& m, const Val& G, const Val& A);

ElimStructure elim_compose(const Model& m, const ElimStructure& e1,
                           const ElimStructure& e2);
// extend e along a telescope W over the total of e.cod
ElimStructure elim_extend(const Model& m, const ElimStructure& e,
                          const Telescope& W);
// eliminate into a telescope target, linkwise
Val elim_widen(const Model& m, const ElimStructure& e, const Val& f,
               const Telescope& E, const Telescope& CC, const Val& d);
// diagonal filler for a commuting square (k, h) against the projection of C
Val elim_fill(const Model& m, const ElimStructure& e, const Val& C, const Val& k,
              const Val& h);

struct DescentData {
  Val r;  // retraction total(cod) -> total(dom), r o jmap = id
  Val D;  // r*C; jmap*(D) = C exactly
};
DescentData elim_descend(const Model& m, const ElimStructure& e, const Val& C);

// -- identity contexts ------------------------------------------------------

struct IdContext {
  Telescope doubled;  // AA ++ weakened AA, over AA.base
  Telescope id_tel;   // over total(doubled)
  Val r;              // total(AA) -> total of the full extension
  ElimStructure elim;
};
IdContext identity_context(const Model& m, const Telescope& AA);

// collapse a telescope to a single type by iterated Sigma (unit if empty)
struct Collapsed {
  Val S;    // over AA.base
  Val iso;  // total(AA) -> base.S, invertible
};
Collapsed sigma_collapse(const Model& m, const Telescope& AA);

// -- iterated Pi ------------------------------------------------------------

struct IteratedPi {
  Telescope pi;  // over AA.base, one link per link of BB
  Val ev;        // total(pi ++ weakened AA) -> total(AA ++ BB)
};
IteratedPi iterated_pi(const Model& m, const Telescope& AA, const Telescope& BB);
// b a telescope section of BB over total(AA); the abstraction is a telescope
// section of the Pi telescope over the base
Val iterated_lambda(const Model& m, const Telescope& AA, const Telescope& BB,
                    const Val& b);
// abstraction of a map w : total(AA ++ BB) -> total(AA ++ BBp) over total(AA)
Val lambda_map(const Model& m, const Telescope& AA, const Telescope& BB,
               const Telescope& BBp, const Val& w);

// -- homotopies -------------------------------------------------------------

bool homotopy_valid(const Model& m, const HomotopyData& hd);
HomotopyData refl_homotopy(const Model& m, const Val& base, const Telescope& B,
                           const Val& f);
std::optional<HomotopyData> find_homotopy(const Model& m, const Val& base,
                                          const Telescope& B, const Val& f,
                                          const Val& g);
HomotopyData homotopy_compose(const Model& m, const HomotopyData& h1,
                              const HomotopyData& h2);
HomotopyData homotopy_invert(const Model& m, const HomotopyData& h);
// precomposition with u is exact; postcomposition with a map over the base
// searches for the witness
HomotopyData homotopy_whisker_pre(const Model& m, const HomotopyData& h,
                                  const Val& u);
HomotopyData homotopy_whisker_post(const Model& m, const HomotopyData& h,
                                   const Val& w, const Telescope& Bp);

// -- equivalence data -------------------------------------------------------

bool equiv_valid(const Model& m, const EquivData& ed);
EquivData identity_equiv(const Model& m, const Val& base, const Telescope& A);
// search for equivalence data on f : total(A) -> total(B) over base
std::optional<EquivData> equivalence_oracle(const Model& m, const Val& base,
                                            const Telescope& A,
                                            const Telescope& B, const Val& f);
// fast path: model verdict if available, else data search
std::optional<bool> slice_equiv_verdict(const Model& m, const Val& base,
                                        const Telescope& A, const Telescope& B,
                                        const Val& f);

EquivData equiv_two_of_three(const Model& m, const Val& base, const Telescope& A,
                             const Telescope& B, const Telescope& C, const Val& f,
                             const Val& g, const std::string& unknown,
                             const EquivData& known1, const EquivData& known2);
EquivData equiv_right_proper(const Model& m, const EquivData& wdata,
                             const Telescope& AA);

// -- general equivalences ---------------------------------------------------

struct GeneralVerdict {
  std::string verdict;  // equivalence | not-equivalence | indeterminate
  Val witness;
};
GeneralVerdict is_equivalence_general(const Model& m, const Val& f, int bound,
                                      size_t budget = 2000000);

// -- factorisation ----------------------------------------------------------

struct Factorisation {
  Val w;           // total(A) -> middle, carries equivalence data
  Telescope rest;  // middle = total(B ++ rest)
  Val p;           // dependent projection middle -> total(B)
  EquivData wdata;
};
Factorisation factor_map(const Model& m, const Val& base, const Telescope& A,
                         const Telescope& B, const Val& f);

// -- funext as equivalence data ---------------------------------------------

struct FunextPayload {
  Val map;                 // the funext map over G.Pi.Pi
  HomotopyData comp_prop;  // funext o (pointwise refl) ~ refl of Pi
};
// the canonical map R = lambda(refl o ev) whose equivalence data encodes funext
Val funext_r_map(const Model& m, const Val& G, const Val& A, const Val& B);
EquivData funext_to_equiv(const Model& m, const Val& G, const Val& A,
                          const Val& B);
FunextPayload equiv_to_funext(const Model& m, const Val& G, const Val& A,
                              const Val& B, const EquivData& rdata);

struct PiCovariant {
  Val lam_w;
  EquivData data;
};
PiCovariant pi_covariant(const Model& m, const Telescope& AA, const Telescope& BB,
                         const Telescope& BBp, const Val& w);
HomotopyData homotopy_abstraction(const Model& m, const Telescope& AA,
                                  const Telescope& BB, const HomotopyData& h);

}  // namespace cwa
