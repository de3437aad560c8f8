/* The abstract CwA contract: objects, morphisms, types with strictly
   functorial reindexing, context extension with chosen pullback squares, and
   optional logical-structure bundles.  Every sort is a canonical json value,
   so equality at every sort is structural. */
#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "invcat.hpp"

namespace cwa {

struct Telescope;

class Model {
 public:
  virtual ~Model() = default;
  virtual std::string name() const = 0;

  // -- category core ---------------------------------------------------------
  virtual Val terminal() const = 0;
  virtual Val identity(const Val& G) const = 0;
  Val dom(const Val& f) const { return f.at("dom"); }
  Val cod(const Val& f) const { return f.at("cod"); }
  virtual Val compose(const Val& g, const Val& f) const = 0;
  virtual Val bang(const Val& G) const = 0;  // the map G -> 1

  // -- types and extension ---------------------------------------------------
  virtual Val reindex(const Val& f, const Val& A) const = 0;  // f*A, A in Ty(cod f)
  virtual Val ext(const Val& G, const Val& A) const = 0;      // G.A
  virtual Val proj(const Val& G, const Val& A) const = 0;     // p_A : G.A -> G
  virtual Val qmor(const Val& f, const Val& A) const = 0;     // f.A : dom f.f*A -> cod f.A
  // The mediating map of the chosen pullback square: the unique
  // u : dom k -> dom f . f*A  with  proj o u = k  and  qmor(f,A) o u = m.
  virtual Val pair_into(const Val& f, const Val& A, const Val& k, const Val& m) const = 0;

  // -- finite enumeration ----------------------------------------------------
  virtual std::vector<Val> hom(const Val& X, const Val& Y) const = 0;
  virtual std::vector<Val> all_types(const Val& G, int bound) const = 0;
  virtual std::optional<Val> invert(const Val& f) const;  // default: hom search
  // sections of A over G; default filters hom(G, G.A), models may do better
  virtual std::vector<Val> sections_of(const Val& G, const Val& A) const;

  // -- unit ------------------------------------------------------------------
  virtual bool has_unit() const { return false; }
  virtual Val unit_ty(const Val& G) const;
  virtual Val unit_star(const Val& G) const;  // section G -> G.1

  // -- identity types --------------------------------------------------------
  virtual bool has_id() const { return false; }
  virtual Val id_ty(const Val& G, const Val& A) const;  // in Ty(G.A.A)
  virtual Val refl(const Val& G, const Val& A) const;   // r_A : G.A -> G.A.A.Id_A

  // -- sigma -----------------------------------------------------------------
  virtual bool has_sigma() const { return false; }
  virtual Val sigma_ty(const Val& G, const Val& A, const Val& B) const;
  virtual Val sigma_pair(const Val& G, const Val& A, const Val& B) const;  // G.A.B -> G.Sigma

  // -- pi --------------------------------------------------------------------
  virtual bool has_pi() const { return false; }
  virtual bool pi_eta() const { return false; }
  virtual Val pi_ty(const Val& G, const Val& A, const Val& B) const;
  virtual Val pi_ev(const Val& G, const Val& A, const Val& B) const;  // G.Pi.A -> G.A.B
  // b a section of B over G.A; returns the section lambda(b) : G -> G.Pi
  virtual Val pi_lambda(const Val& G, const Val& A, const Val& B, const Val& b) const;

  // -- funext ----------------------------------------------------------------
  virtual bool has_funext() const { return false; }
  virtual Val funext_map(const Val& G, const Val& A, const Val& B) const;

  // -- Frobenius eliminators (strictly stable; defaults invert the
  //    constructor map, which is an isomorphism in the set-like models) ------
  virtual Val id_J(const Val& G, const Val& A, const Telescope& E, const Val& C,
                   const Val& d) const;
  virtual Val sigma_split(const Val& G, const Val& A, const Val& B,
                          const Telescope& E, const Val& C, const Val& d) const;
  virtual Val unit_rec(const Val& G, const Telescope& E, const Val& C,
                       const Val& d) const;

  // -- fast equivalence verdict (nullopt: no model-specific decision) --------
  virtual std::optional<bool> is_equiv_verdict(const Val& base,
                                               const Telescope& A,
                                               const Telescope& B,
                                               const Val& f) const;

 protected:
  Val elim_via_iso(const Val& cmap, const Telescope& E, const Val& C,
                   const Val& d) const;
};

using ModelPtr = std::shared_ptr<const Model>;

// ---------------------------------------------------------------------------

// A context extension: links[k] is a type over base.links[0]...links[k-1].
struct Telescope {
  Val base;
  std::vector<Val> links;

  size_t size() const { return links.size(); }
  bool operator==(const Telescope&) const = default;
};

Val tel_total(const Model& m, const Telescope& t);
// object after the first k links
Val tel_stage(const Model& m, const Telescope& t, size_t k);
// composite projection total -> base
Val tel_proj(const Model& m, const Telescope& t);
// projection from the total down to stage k
Val tel_proj_to(const Model& m, const Telescope& t, size_t k);
Telescope tel_reindex(const Model& m, const Val& f, const Telescope& t);
// f.t : dom(f).f*t -> cod(f).t
Val tel_qmor(const Model& m, const Val& f, const Telescope& t);
// mediating map into the telescope pullback: unique u with
// tel_proj o u = k and tel_qmor(f,t) o u = m
Val tel_pair_into(const Model& m, const Val& f, const Telescope& t, const Val& k,
                  const Val& m_);
// concatenation (u.base must be the total of t)
Telescope tel_concat(const Model& m, const Telescope& t, const Telescope& u);
// the telescope (A) of length one
Telescope tel_one(const Val& base, const Val& A);
// weaken a telescope over G to one over G.A (linkwise reindex along p_A)
Telescope tel_weaken(const Model& m, const Telescope& t, const Val& A);

// sections of A over G, i.e. maps s : G -> G.A with p o s = id
std::vector<Val> sections(const Model& m, const Val& G, const Val& A);
std::vector<Val> tel_sections(const Model& m, const Telescope& t);
bool is_section(const Model& m, const Val& G, const Val& A, const Val& s);

// maps X -> G.t over G (tel_proj o u = given base map)
std::vector<Val> hom_over(const Model& m, const Val& over_map, const Telescope& t);

// ---------------------------------------------------------------------------

// A stable Frobenius elimination structure attached to the map
// jmap : G.dom -> G.cod over G.  A query supplies a reindexing f : G' -> G,
// a Frobenius telescope E over G'.f*cod, a target type C over the total of E,
// and d : (G'.f*dom).(f*j)*E -> total(E).C lying over the lifted map; the
// answer is a section e of C with e o lifted = d.
struct ElimQuery {
  Val f;
  Telescope E;
  Val C;
  Val d;
};

struct ElimStructure {
  Val base;
  Telescope dom, cod;
  Val jmap;
  std::function<Val(const ElimQuery&)> elim;
};

// the pulled-back map f*j : G'.f*dom -> G'.f*cod over G'
Val pull_map(const Model& m, const Val& f, const Telescope& dom,
             const Telescope& cod, const Val& jmap);
// the lifted map (f*j).E of a query
Val elim_lifted(const Model& m, const ElimStructure& e, const Val& f,
                const Telescope& E);
// check one answer against the two defining equations
bool elim_answer_valid(const Model& m, const ElimStructure& e,
                       const ElimQuery& q, const Val& ans);

// ---------------------------------------------------------------------------

// h : X -> G.B.B.Id_B whose projection to G.B.B is (f,g).
struct HomotopyData {
  Val base;
  Telescope B;
  Val f, g;
  Val h;
};

struct EquivData {
  Val base;
  Telescope A, B;
  Val f;            // G.A -> G.B over G
  Val g;            // G.B -> G.A over G
  HomotopyData eta;  // f g ~ id
  Val gp;           // G.B -> G.A
  HomotopyData eps;  // gp f ~ id
};

// ---------------------------------------------------------------------------

struct Report {
  struct Entry {
    std::string name;
    std::string verdict;  // pass | fail | indeterminate
    Val witness;
  };
  std::vector<Entry> entries;

  void add(const std::string& name, bool pass, const Val& witness = Val());
  void add_indeterminate(const std::string& name, const Val& witness = Val());
  void merge(const Report& other);
  bool ok() const;
  int fails() const;
  Val to_json() const;
  std::string summary() const;
};

// Exhaustively (within budget) check the CwA laws of a model against a
// universe of sample contexts.
struct LawBudget {
  int fiber_bound = 2;
  size_t max_types = 64;
  size_t max_homs = 200000;
  bool check_pullback = true;
};

Report check_cwa_laws(const Model& m, const std::vector<Val>& universe,
                      const LawBudget& budget = {});

}  // namespace cwa
