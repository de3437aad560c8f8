/* Properties of the restriction functors between diagram CwAs along an
   ordered homotopical opfibration: cosieve lifting, Reedy replacement and
   factorisation, descent along equivalences, span-to-map, zigzag and
   square/grid completion over a base, weak lifting along homotopy
   equivalences, and classification of the three local lifting notions. */
#pragma once

#include "homotopical.hpp"

namespace cwa {

// a plain functor I -> J between the finite categories (not an opfibration)
struct Functor {
  std::map<std::string, std::string> ob;
  std::map<std::string, std::string> ar;  // non-identity arrows
};
void validate_functor(const FinCategory& I, const FinCategory& J,
                      const Functor& F);

// homotopy-equivalence data for u : J -> I: a retraction v with unit and
// counit given by single marked naturality families (eta_j : j -> u(v(j)) in
// I, eps_j : j -> v(u(j)) in J); always caller-supplied, never searched
struct HomotopyEquivData {
  Functor v;                                // I -> J
  std::map<std::string, std::string> eta;   // object of I -> arrow id of I
  std::map<std::string, std::string> eps;   // object of J -> arrow id of J
};
void validate_homotopy_equiv(const FinCategory& I, const FinCategory& J,
                             const OpfibWitness& u, const HomotopyEquivData& h,
                             const HomotopicalMarking& wI,
                             const HomotopicalMarking& wJ);

// -- cosieve lifting --------------------------------------------------------

// u injective: extend B (a Reedy type over u*Gam) to Bbar over Gam together
// with ebar : Gam.Bbar -> Gam.A over Gam extending e : u*Gam.B -> u*Gam.u*A.
// On the image of u both are literally the given data; outside, Bbar_j is the
// matching pullback (M_j ebar)*A_j and ebar_j the accompanying iso.
struct CosieveLift {
  Val Bbar;
  Val ebar;
};
CosieveLift cosieve_lift(std::shared_ptr<ReedyEnv> envJ,
                         std::shared_ptr<ReedyEnv> envI, const OpfibWitness& u,
                         const Val& Gam, const Val& A, const Val& B,
                         const Val& e);

// path/term lifting companion: extend a section of u*Bbar over u*Gam to a
// section of Bbar over Gam by constrained levelwise search
Val cosieve_extend_section(std::shared_ptr<ReedyEnv> envJ,
                           std::shared_ptr<ReedyEnv> envI,
                           const OpfibWitness& u, const Val& Gam,
                           const Val& Bbar, const Val& s);

// -- Reedy replacement and factorisation ------------------------------------

// present a context Z mapped onto a context tot as an extension: a family
// A over tot and an invertible w : Z -> tot.A with proj o w = m
struct FamilyPresentation {
  Val A;
  Val w;
};
FamilyPresentation present_as_family(const Model& b, const Val& Z,
                                     const Val& tot, const Val& m, int bound);

// Reedy replacement of an arbitrary levelwise extension pX : X -> Gam:
// a Reedy type A over Gam and a levelwise-invertible w : X -> Gam.A over Gam
struct ReedyReplacement {
  Val A;
  Val w;
};
ReedyReplacement reedy_replace(std::shared_ptr<ReedyEnv> env, const Val& pX,
                               int bound);

// factor f : Gam.AA -> Gam.BB through a single Reedy type C over Gam.BB:
// f = p o (collapse o w) with the first factor a certified equivalence
struct ReedyFactorisation {
  Val C;            // single type over total(BB)
  Val w;            // total(AA) -> total(BB).C over Gam
  Val p;            // total(BB).C -> total(BB)
  EquivData wdata;  // on the uncollapsed first factor
};
ReedyFactorisation reedy_factorisation(std::shared_ptr<ReedyEnv> env,
                                       const Val& Gam, const Telescope& AA,
                                       const Telescope& BB, const Val& f);

// -- descent and span-to-map ------------------------------------------------

// e : X -> Y a levelwise equivalence of diagrams, AA a telescope over X:
// a Reedy type B over Y and ebar : X.collapse(AA) -> Y.B over e
struct DescendType {
  Val B;
  Val ebar;
  EquivData compare;  // X.e*B -> X.collapse(AA) over X
  Collapsed collapsed;
};
DescendType descend_type(std::shared_ptr<ReedyEnv> env, const Val& e,
                         const Telescope& AA, int bound);

// a span of levelwise equivalences e0 : Gam.BB -> Gam.A0, e1 : Gam.BB ->
// Gam.A1 yields a direct equivalence b : Gam.A0 -> Gam.A1 over Gam
struct SpanToMap {
  Val b;
  EquivData data;
};
SpanToMap span_to_map(std::shared_ptr<ReedyEnv> env, const Val& Gam,
                      const Val& A0, const Val& A1, const Telescope& BB,
                      const Val& e0, const Val& e1);

// -- zigzags, squares, grids over a fixed base ------------------------------

// vertices are telescopes over the base diagram; legs are slice equivalences
// between consecutive vertices, forward or backward
struct ZigLeg {
  bool forward = true;
  Val map;
};
struct ZigZag {
  Val base;
  std::vector<Telescope> vertices;
  std::vector<ZigLeg> legs;
};
bool zigzag_valid(const Model& m, const ZigZag& z);

// collapse every vertex to a single Reedy type and eliminate span vertices
// via span_to_map; endpoints are preserved up to their collapse isos
ZigZag zigzag_improve(std::shared_ptr<ReedyEnv> env, const ZigZag& z);

// a square of single types over the base with up to one vertex and one edge
// missing; vertices in reading order A B / C D, edges ab, cd (horizontal,
// rightward) and ac, bd (vertical, downward), each an equivalence over base
struct Square {
  Val base;
  std::optional<Val> A, B, C, D;
  std::optional<Val> ab, cd, ac, bd;
};
// deterministic completion: a missing vertex is copied from its
// lexicographically earliest present neighbour with an identity edge; a
// missing edge is composed around the square using oracle inverses
Square complete_square(std::shared_ptr<ReedyEnv> env, const Square& s);

// a rectangular grid of single types over the base with horizontal maps
// h[i][j] : V[i][j] -> V[i][j+1] and vertical maps v[i][j] : V[i][j] ->
// V[i+1][j], some possibly missing; completed cell by cell from the bottom
// right, then the corner-to-corner equivalence is extracted
struct Grid {
  Val base;
  std::vector<std::vector<std::optional<Val>>> V;
  std::vector<std::vector<std::optional<Val>>> h, v;
};
struct GridResult {
  Grid completed;
  Val corner;  // V[0][0] -> V[last][last] over the base
  EquivData data;
};
GridResult complete_grid(std::shared_ptr<ReedyEnv> env, const Grid& g);

// -- weak lifting along a homotopy equivalence ------------------------------

// pull A back along the unit eta (levelwise telescopes over Gam), Reedy
// replace, and certify the comparison u*Abar -> A with equivalence data
struct WeakLift {
  Val Abar;  // Reedy type over Gam
  Val comp;  // u*Gam.u*Abar -> u*Gam.A over u*Gam
  EquivData data;
};
WeakLift weak_lift_homotopy_equiv(std::shared_ptr<ReedyEnv> envJ,
                                  std::shared_ptr<ReedyEnv> envI,
                                  const OpfibWitness& u,
                                  const HomotopyEquivData& h, const Val& Gam,
                                  const Val& A, int bound);

// -- classification ---------------------------------------------------------

// runs the constructive lifts on enumerated instances over the terminal
// diagram and revalidates each witness against the definitional checkers
struct LiftReport {
  Report fibration;          // equivalence + path lifting
  Report equivalence;        // weak type + weak term lifting
  Report trivial_fibration;  // strict type + strict term lifting
};
LiftReport classify(std::shared_ptr<ReedyEnv> envJ,
                    std::shared_ptr<ReedyEnv> envI, const OpfibWitness& u,
                    const std::optional<HomotopyEquivData>& h, int bound,
                    size_t max_instances = 24);

}  // namespace cwa
