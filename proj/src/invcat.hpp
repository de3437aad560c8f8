/* Finite (ordered, homotopical) inverse categories, co-presheaves on them,
   finite extensions, cones and discrete opfibrations. */
#pragma once

#include <json.hpp>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace cwa {

using Val = nlohmann::json;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string dump(const Val& v) { return v.dump(); }

// ---------------------------------------------------------------------------

struct Arrow {
  std::string id, src, dst;
};

// A finite category with a total composition table.  Identities are implicit
// in the serialized form (auto-named "id:<obj>") but explicit here.
struct FinCategory {
  std::vector<std::string> objects;
  std::vector<Arrow> arrows;                       // includes identities
  std::map<std::pair<std::string, std::string>, std::string> comp;  // (g,f)->gf

  static std::string id_of(const std::string& obj) { return "id:" + obj; }

  bool has_object(const std::string& o) const;
  const Arrow& arrow(const std::string& id) const;
  bool is_identity(const std::string& id) const;
  std::string compose(const std::string& g, const std::string& f) const;
  std::vector<std::string> out_arrows(const std::string& i) const;  // incl id

  // Structural validation: totality, associativity, units.
  void validate_structure() const;

  static FinCategory from_json(const Val& j);
  Val to_json() const;
};

// Per-object total order on out-arrows (identity forced on top by fg<g).
struct InverseStructure {
  std::map<std::string, std::vector<std::string>> order;  // ascending

  int rank(const std::string& obj, const std::string& arrow) const;
  void validate(const FinCategory& cat) const;
};

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> messages;
  Val witness;  // e.g. a cycle
  std::map<std::string, int> predecessor_count;
};

struct HomotopicalMarking {
  std::set<std::string> equivalences;  // arrow ids, identities always included

  bool marked(const FinCategory& cat, const std::string& id) const {
    return cat.is_identity(id) || equivalences.count(id) > 0;
  }
};

// Saturate a marking under 2-out-of-6; a marking is valid iff saturation is
// the identity on it.
HomotopicalMarking saturate_two_of_six(const FinCategory& cat,
                                       const HomotopicalMarking& w);
bool marking_valid(const FinCategory& cat, const HomotopicalMarking& w);

// ---------------------------------------------------------------------------

struct Copresheaf {
  // elements are arbitrary json values, kept sorted
  std::map<std::string, std::vector<Val>> sets;                 // by object
  std::map<std::string, std::map<std::string, Val>> action;     // arrow -> (dump x -> alpha x)

  const std::vector<Val>& at(const std::string& obj) const;
  bool has(const std::string& obj, const Val& x) const;
  Val act(const FinCategory& cat, const std::string& arrow, const Val& x) const;
  void validate(const FinCategory& cat) const;
  bool operator==(const Copresheaf&) const = default;
};

Copresheaf yoneda(const FinCategory& cat, const std::string& i);    // y i
Copresheaf boundary(const FinCategory& cat, const std::string& i);  // bd i

struct FiniteExtension {
  Copresheaf F, G;  // F componentwise subset of G
  std::vector<std::pair<std::string, Val>> complement_order;  // increasing

  void validate(const FinCategory& cat) const;
};

// Single-cell attachment: a new element at `obj`, boundary map sending each
// non-identity out-arrow of obj to an element of the already-built stage.
struct Attachment {
  std::string obj;
  Val element;
  std::map<std::string, Val> boundary;  // arrow id -> element of stage at dst
};

struct ConeData {
  Val apex;          // model object handle
  Copresheaf shape;  // F
  Val target;        // diagram handle (opaque here)
  std::map<std::pair<std::string, std::string>, Val> legs;  // (obj, dump elem) -> morphism

  const Val& leg(const std::string& obj, const Val& x) const;
  void set_leg(const std::string& obj, const Val& x, const Val& m);
};

struct OpfibWitness {
  FinCategory domain;                       // J
  std::map<std::string, std::string> ob;    // object map
  std::map<std::string, std::string> ar;    // arrow map
  std::map<std::pair<std::string, std::string>, std::string> lift;  // (j, alpha) -> arrow of J
  bool ordered = false, homotopical = false, injective = false;

  std::string ob_at(const std::string& j) const { return ob.at(j); }
  std::string ar_at(const std::string& a) const { return ar.at(a); }
};

// ---------------------------------------------------------------------------

ValidationReport validate_inverse(const FinCategory& cat);
InverseStructure default_ordering(const FinCategory& cat);

// (0 -> bd i, 0 -> y i); y i has id_i as its top element.
std::pair<FiniteExtension, FiniteExtension> boundary_extension(
    const FinCategory& cat, const InverseStructure& ord, const std::string& i);

std::vector<Attachment> decompose(const FinCategory& cat,
                                  const FiniteExtension& ext);

// Replay attachments starting from F; must reconstruct G exactly.
Copresheaf replay(const FinCategory& cat, const Copresheaf& F,
                  const std::vector<Attachment>& cells);

Copresheaf pushforward(const FinCategory& I, const OpfibWitness& u,
                       const Copresheaf& F);
FiniteExtension pushforward(const FinCategory& I, const OpfibWitness& u,
                            const FiniteExtension& ext);

// Relabel a pushed-forward boundary extension u_!(bd j -> y j) onto the
// canonical (bd uj -> y uj); returns the elementwise iso as json.
Val pushforward_boundary_iso(const FinCategory& I, const OpfibWitness& u,
                             const std::string& j);

ConeData transpose_cone(const FinCategory& I, const OpfibWitness& u,
                        const ConeData& c, bool from_pushforward);

std::optional<OpfibWitness> validate_opfibration(
    const FinCategory& J, const FinCategory& I,
    const std::map<std::string, std::string>& ob,
    const std::map<std::string, std::string>& ar,
    const InverseStructure* ordJ = nullptr, const InverseStructure* ordI = nullptr,
    const HomotopicalMarking* wJ = nullptr, const HomotopicalMarking* wI = nullptr,
    std::string* why = nullptr);

}  // namespace cwa
