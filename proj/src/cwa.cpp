#include "cwa.hpp"

#include <sstream>

namespace cwa {

// -- Model defaults ---------------------------------------------------------

std::optional<Val> Model::invert(const Val& f) const {
  Val d = dom(f), c = cod(f);
  for (auto& g : hom(c, d))
    if (compose(g, f) == identity(d) && compose(f, g) == identity(c)) return g;
  return std::nullopt;
}

static Val no_bundle(const std::string& model, const std::string& what) {
  throw Error("model " + model + " lacks " + what);
}

Val Model::unit_ty(const Val&) const { return no_bundle(name(), "unit"); }
Val Model::unit_star(const Val&) const { return no_bundle(name(), "unit"); }
Val Model::id_ty(const Val&, const Val&) const { return no_bundle(name(), "Id"); }
Val Model::refl(const Val&, const Val&) const { return no_bundle(name(), "Id"); }
Val Model::sigma_ty(const Val&, const Val&, const Val&) const {
  return no_bundle(name(), "Sigma");
}
Val Model::sigma_pair(const Val&, const Val&, const Val&) const {
  return no_bundle(name(), "Sigma");
}
Val Model::pi_ty(const Val&, const Val&, const Val&) const {
  return no_bundle(name(), "Pi");
}
Val Model::pi_ev(const Val&, const Val&, const Val&) const {
  return no_bundle(name(), "Pi");
}
Val Model::pi_lambda(const Val&, const Val&, const Val&, const Val&) const {
  return no_bundle(name(), "Pi");
}
Val Model::funext_map(const Val&, const Val&, const Val&) const {
  return no_bundle(name(), "funext");
}

Val Model::elim_via_iso(const Val& cmap, const Telescope& E, const Val& C,
                        const Val& d) const {
  Val lifted = tel_qmor(*this, cmap, E);
  if (auto inv = invert(lifted)) return compose(d, *inv);
  // the constructor map need not be invertible (e.g. refl on groupoids);
  // fall back to an exhaustive search for a valid eliminator
  Val tot = tel_total(*this, E);
  for (auto& s : sections(*this, tot, C))
    if (compose(s, lifted) == d) return s;
  throw Error("no eliminator found in " + name());
}

Val Model::id_J(const Val& G, const Val& A, const Telescope& E, const Val& C,
                const Val& d) const {
  return elim_via_iso(refl(G, A), E, C, d);
}

Val Model::sigma_split(const Val& G, const Val& A, const Val& B,
                       const Telescope& E, const Val& C, const Val& d) const {
  return elim_via_iso(sigma_pair(G, A, B), E, C, d);
}

Val Model::unit_rec(const Val& G, const Telescope& E, const Val& C,
                    const Val& d) const {
  return elim_via_iso(unit_star(G), E, C, d);
}

std::optional<bool> Model::is_equiv_verdict(const Val&, const Telescope&,
                                            const Telescope&, const Val&) const {
  return std::nullopt;
}

std::vector<Val> Model::sections_of(const Val& G, const Val& A) const {
  std::vector<Val> out;
  Val GA = ext(G, A);
  for (auto& s : hom(G, GA))
    if (compose(proj(G, A), s) == identity(G)) out.push_back(s);
  return out;
}

// -- telescopes -------------------------------------------------------------

Val tel_stage(const Model& m, const Telescope& t, size_t k) {
  Val cur = t.base;
  for (size_t i = 0; i < k; ++i) cur = m.ext(cur, t.links[i]);
  return cur;
}

Val tel_total(const Model& m, const Telescope& t) {
  return tel_stage(m, t, t.size());
}

Val tel_proj_to(const Model& m, const Telescope& t, size_t k) {
  Val p = m.identity(tel_total(m, t));
  for (size_t i = t.size(); i > k; --i) {
    Val stage = tel_stage(m, t, i - 1);
    p = m.compose(m.proj(stage, t.links[i - 1]), p);
  }
  return p;
}

Val tel_proj(const Model& m, const Telescope& t) { return tel_proj_to(m, t, 0); }

Telescope tel_reindex(const Model& m, const Val& f, const Telescope& t) {
  Telescope out;
  out.base = m.dom(f);
  Val cur = f;
  for (auto& A : t.links) {
    out.links.push_back(m.reindex(cur, A));
    cur = m.qmor(cur, A);
  }
  return out;
}

Val tel_qmor(const Model& m, const Val& f, const Telescope& t) {
  Val cur = f;
  for (auto& A : t.links) cur = m.qmor(cur, A);
  return cur;
}

Val tel_pair_into(const Model& m, const Val& f, const Telescope& t, const Val& k,
                  const Val& m_) {
  Val u = k, cur = f;
  for (size_t i = 0; i < t.size(); ++i) {
    Val mstep = m.compose(tel_proj_to(m, t, i + 1), m_);
    u = m.pair_into(cur, t.links[i], u, mstep);
    cur = m.qmor(cur, t.links[i]);
  }
  return u;
}

Telescope tel_concat(const Model& m, const Telescope& t, const Telescope& u) {
  if (tel_total(m, t) != u.base) throw Error("tel_concat: base mismatch");
  Telescope out = t;
  for (auto& A : u.links) out.links.push_back(A);
  return out;
}

Telescope tel_one(const Val& base, const Val& A) {
  Telescope t;
  t.base = base;
  t.links = {A};
  return t;
}

Telescope tel_weaken(const Model& m, const Telescope& t, const Val& A) {
  return tel_reindex(m, m.proj(t.base, A), t);
}

bool is_section(const Model& m, const Val& G, const Val& A, const Val& s) {
  return m.compose(m.proj(G, A), s) == m.identity(G);
}

std::vector<Val> sections(const Model& m, const Val& G, const Val& A) {
  return m.sections_of(G, A);
}

std::vector<Val> tel_sections(const Model& m, const Telescope& t) {
  if (t.links.empty()) return {m.identity(t.base)};
  std::vector<Val> out;
  Val A1 = t.links[0];
  Telescope rest{m.ext(t.base, A1), {t.links.begin() + 1, t.links.end()}};
  for (auto& s1 : m.sections_of(t.base, A1)) {
    Telescope pulled = tel_reindex(m, s1, rest);
    Val emb = tel_qmor(m, s1, rest);
    for (auto& r : tel_sections(m, pulled)) out.push_back(m.compose(emb, r));
  }
  return out;
}

std::vector<Val> hom_over(const Model& m, const Val& over_map, const Telescope& t) {
  Telescope pulled = tel_reindex(m, over_map, t);
  Val emb = tel_qmor(m, over_map, t);
  std::vector<Val> out;
  for (auto& s : tel_sections(m, pulled)) out.push_back(m.compose(emb, s));
  return out;
}

// -- elimination structures -------------------------------------------------

Val pull_map(const Model& m, const Val& f, const Telescope& dom,
             const Telescope& cod, const Val& jmap) {
  if (f == m.identity(m.cod(f))) return jmap;
  Telescope domf = tel_reindex(m, f, dom);
  Val k = tel_proj(m, domf);
  Val mm = m.compose(jmap, tel_qmor(m, f, dom));
  return tel_pair_into(m, f, cod, k, mm);
}

Val elim_lifted(const Model& m, const ElimStructure& e, const Val& f,
                const Telescope& E) {
  Val jf = pull_map(m, f, e.dom, e.cod, e.jmap);
  return tel_qmor(m, jf, E);
}

bool elim_answer_valid(const Model& m, const ElimStructure& e,
                       const ElimQuery& q, const Val& ans) {
  Val totE = tel_total(m, q.E);
  if (m.compose(m.proj(totE, q.C), ans) != m.identity(totE)) return false;
  Val lifted = elim_lifted(m, e, q.f, q.E);
  return m.compose(ans, lifted) == q.d;
}

// -- reports ----------------------------------------------------------------

void Report::add(const std::string& name, bool pass, const Val& witness) {
  entries.push_back({name, pass ? "pass" : "fail", witness});
}

void Report::add_indeterminate(const std::string& name, const Val& witness) {
  entries.push_back({name, "indeterminate", witness});
}

void Report::merge(const Report& other) {
  for (auto& e : other.entries) entries.push_back(e);
}

bool Report::ok() const {
  for (auto& e : entries)
    if (e.verdict == "fail") return false;
  return true;
}

int Report::fails() const {
  int n = 0;
  for (auto& e : entries) n += e.verdict == "fail";
  return n;
}

Val Report::to_json() const {
  Val out = Val::array();
  for (auto& e : entries)
    out.push_back({{"name", e.name}, {"verdict", e.verdict}, {"witness", e.witness}});
  return out;
}

std::string Report::summary() const {
  int pass = 0, fail = 0, ind = 0;
  for (auto& e : entries) {
    if (e.verdict == "pass") ++pass;
    else if (e.verdict == "fail") ++fail;
    else ++ind;
  }
  std::ostringstream os;
  os << pass << " passed, " << fail << " failed, " << ind << " indeterminate";
  return os.str();
}

// -- law checker ------------------------------------------------------------

Report check_cwa_laws(const Model& m, const std::vector<Val>& universe,
                      const LawBudget& budget) {
  Report rep;
  size_t work = 0;
  auto spent = [&] { return work > budget.max_homs; };

  // chosen terminal object
  {
    bool ok = true;
    Val witness;
    for (auto& X : universe) {
      auto hs = m.hom(X, m.terminal());
      if (hs.size() != 1 || hs[0] != m.bang(X)) {
        ok = false;
        witness = X;
        break;
      }
    }
    rep.add("terminal-unique", ok, witness);
  }

  auto types_of = [&](const Val& G) {
    auto ts = m.all_types(G, budget.fiber_bound);
    if (ts.size() > budget.max_types) ts.resize(budget.max_types);
    return ts;
  };

  // identity reindexing and qmor units
  {
    bool ok = true;
    Val witness;
    for (auto& G : universe)
      for (auto& A : types_of(G)) {
        ++work;
        Val GA = m.ext(G, A);
        if (m.reindex(m.identity(G), A) != A ||
            m.qmor(m.identity(G), A) != m.identity(GA) ||
            m.cod(m.proj(G, A)) != G || m.dom(m.proj(G, A)) != GA) {
          ok = false;
          witness = {{"G", G}, {"A", A}};
        }
      }
    rep.add("reindex-identity", ok, witness);
  }

  // functoriality of reindexing and qmor coherence; projection naturality
  {
    bool okf = true, okq = true, okp = true;
    Val wf, wq, wp;
    for (auto& G : universe) {
      for (auto& A : types_of(G))
        for (auto& Gp : universe) {
          if (spent()) break;
          for (auto& f : m.hom(Gp, G)) {
            ++work;
            Val fA = m.reindex(f, A);
            Val lhs = m.compose(m.proj(G, A), m.qmor(f, A));
            Val rhs = m.compose(f, m.proj(Gp, fA));
            if (lhs != rhs) okp = false, wp = {{"f", f}, {"A", A}};
            for (auto& Gpp : universe) {
              if (spent()) break;
              for (auto& g : m.hom(Gpp, Gp)) {
                ++work;
                if (m.reindex(g, fA) != m.reindex(m.compose(f, g), A))
                  okf = false, wf = {{"f", f}, {"g", g}, {"A", A}};
                Val q1 = m.qmor(m.compose(f, g), A);
                Val q2 = m.compose(m.qmor(f, A), m.qmor(g, fA));
                if (q1 != q2) okq = false, wq = {{"f", f}, {"g", g}, {"A", A}};
              }
            }
          }
        }
    }
    rep.add("reindex-functorial", okf, wf);
    rep.add("qmor-coherent", okq, wq);
    rep.add("proj-natural", okp, wp);
  }

  // pullback universal property of the chosen squares
  if (budget.check_pullback) {
    bool ok = true;
    bool exhausted = false;
    Val witness;
    for (auto& G : universe) {
      for (auto& A : types_of(G))
        for (auto& Gp : universe)
          for (auto& f : m.hom(Gp, G)) {
            Val fA = m.reindex(f, A);
            Val GpfA = m.ext(Gp, fA), GA = m.ext(G, A);
            for (auto& X : universe) {
              if (spent()) {
                exhausted = true;
                break;
              }
              auto homU = m.hom(X, GpfA);
              for (auto& k : m.hom(X, Gp))
                for (auto& mm : m.hom(X, GA)) {
                  ++work;
                  if (m.compose(f, k) != m.compose(m.proj(G, A), mm)) continue;
                  size_t count = 0;
                  Val found;
                  for (auto& u : homU)
                    if (m.compose(m.proj(Gp, fA), u) == k &&
                        m.compose(m.qmor(f, A), u) == mm) {
                      ++count;
                      found = u;
                    }
                  if (count != 1 || found != m.pair_into(f, A, k, mm)) {
                    ok = false;
                    witness = {{"f", f}, {"A", A}, {"k", k}, {"m", mm}};
                  }
                }
            }
          }
    }
    if (ok && exhausted)
      rep.add_indeterminate("pullback-universal", Val("budget exhausted"));
    else
      rep.add("pullback-universal", ok, witness);
  }

  return rep;
}

}  // namespace cwa
