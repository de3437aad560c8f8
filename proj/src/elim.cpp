#include "elim.hpp"

namespace cwa {

// -- elimination structures -------------------------------------------------

ElimStructure elim_from_iso(const Model& m, const Val& base, const Telescope& dom,
                            const Telescope& cod, const Val& iso) {
  if (!m.invert(iso)) throw Error("elim_from_iso: map is not invertible");
  ElimStructure e{base, dom, cod, iso, nullptr};
  const Model* mp = &m;
  ElimStructure copy = e;
  e.elim = [mp, copy](const ElimQuery& q) {
    Val lifted = elim_lifted(*mp, copy, q.f, q.E);
    auto inv = mp->invert(lifted);
    if (!inv) throw Error("elim_from_iso: lifted map is not invertible");
    return mp->compose(q.d, *inv);
  };
  return e;
}

ElimStructure elim_search(const Model& m, const Val& base, const Telescope& dom,
                          const Telescope& cod, const Val& jmap) {
  ElimStructure e{base, dom, cod, jmap, nullptr};
  const Model* mp = &m;
  ElimStructure copy = e;
  e.elim = [mp, copy](const ElimQuery& q) {
    Val lifted = elim_lifted(*mp, copy, q.f, q.E);
    if (auto inv = mp->invert(lifted)) return mp->compose(q.d, *inv);
    Val tot = tel_total(*mp, q.E);
    for (auto& s : sections(*mp, tot, q.C))
      if (mp->compose(s, lifted) == q.d) return s;
    throw Error("elim_search: no valid eliminator found");
  };
  return e;
}

ElimStructure elim_identity(const Model& m, const Val& base, const Telescope& t) {
  return elim_from_iso(m, base, t, t, m.identity(tel_total(m, t)));
}

ElimStructure elim_refl(const Model& m, const Val& G, const Val& A) {
  Val GA = m.ext(G, A);
  Val Aw = m.reindex(m.proj(G, A), A);
  Telescope dom{G, {A}};
  Telescope cod{G, {A, Aw, m.id_ty(G, A)}};
  ElimStructure e{G, dom, cod, m.refl(G, A), nullptr};
  const Model* mp = &m;
  Val Gc = G, Ac = A;
  e.elim = [mp, Gc, Ac](const ElimQuery& q) {
    Val Gf = mp->dom(q.f);
    Val Af = mp->reindex(q.f, Ac);
    return mp->id_J(Gf, Af, q.E, q.C, q.d);
  };
  return e;
}

ElimStructure elim_compose(const Model& m, const ElimStructure& e1,
                           const ElimStructure& e2) {
  if (e1.base != e2.base || tel_total(m, e1.cod) != tel_total(m, e2.dom))
    throw Error("elim_compose: structures do not match");
  ElimStructure e{e1.base, e1.dom, e2.cod, m.compose(e2.jmap, e1.jmap), nullptr};
  const Model* mp = &m;
  ElimStructure c1 = e1, c2 = e2;
  e.elim = [mp, c1, c2](const ElimQuery& q) {
    const Model& m = *mp;
    Val jf2 = pull_map(m, q.f, c2.dom, c2.cod, c2.jmap);
    Val lifted2 = tel_qmor(m, jf2, q.E);
    Telescope E1 = tel_reindex(m, jf2, q.E);
    Val lifted1 = elim_lifted(m, c1, q.f, E1);
    Val d1 = m.pair_into(lifted2, q.C, lifted1, q.d);
    Val a1 = c1.elim({q.f, E1, m.reindex(lifted2, q.C), d1});
    Val d2 = m.compose(m.qmor(lifted2, q.C), a1);
    return c2.elim({q.f, q.E, q.C, d2});
  };
  return e;
}

ElimStructure elim_extend(const Model& m, const ElimStructure& e,
                          const Telescope& W) {
  if (W.base != tel_total(m, e.cod)) throw Error("elim_extend: base mismatch");
  Telescope dom = tel_concat(m, e.dom, tel_reindex(m, e.jmap, W));
  Telescope cod = tel_concat(m, e.cod, W);
  ElimStructure out{e.base, dom, cod, tel_qmor(m, e.jmap, W), nullptr};
  const Model* mp = &m;
  ElimStructure c = e;
  Telescope Wc = W;
  out.elim = [mp, c, Wc](const ElimQuery& q) {
    const Model& m = *mp;
    Val qc = tel_qmor(m, q.f, c.cod);
    Telescope Wf = tel_reindex(m, qc, Wc);
    return c.elim({q.f, tel_concat(m, Wf, q.E), q.C, q.d});
  };
  return out;
}

Val elim_widen(const Model& m, const ElimStructure& e, const Val& f,
               const Telescope& E, const Telescope& CC, const Val& d) {
  Val lifted = elim_lifted(m, e, f, E);
  Val totE = tel_total(m, E);
  if (CC.base != totE) throw Error("elim_widen: target base mismatch");
  Val s = m.identity(totE);  // section of the first i links
  for (size_t i = 0; i < CC.size(); ++i) {
    Val Ci = CC.links[i];
    Val d_next = m.compose(tel_proj_to(m, CC, i + 1), d);
    Val Cp = m.reindex(s, Ci);
    Val dp = m.pair_into(s, Ci, lifted, d_next);
    Val a = e.elim({f, E, Cp, dp});
    s = m.compose(m.qmor(s, Ci), a);
  }
  return s;
}

Val elim_fill(const Model& m, const ElimStructure& e, const Val& C, const Val& k,
              const Val& h) {
  Val Y = tel_total(m, e.cod);
  if (m.dom(k) != Y) throw Error("elim_fill: k must start at the codomain total");
  Val Z = m.cod(k);
  if (m.compose(m.proj(Z, C), h) != m.compose(k, e.jmap))
    throw Error("elim_fill: square does not commute");
  Val dp = m.pair_into(k, C, e.jmap, h);
  Telescope E{Y, {}};
  Val a = e.elim({m.identity(e.base), E, m.reindex(k, C), dp});
  return m.compose(m.qmor(k, C), a);
}

DescentData elim_descend(const Model& m, const ElimStructure& e, const Val& C) {
  Val totD = tel_total(m, e.dom), totC = tel_total(m, e.cod);
  Telescope W = tel_reindex(m, tel_proj(m, e.cod), e.dom);
  Val d = tel_pair_into(m, tel_proj(m, e.cod), e.dom, e.jmap, m.identity(totD));
  Telescope E{totC, {}};
  Val s = elim_widen(m, e, m.identity(e.base), E, W, d);
  Val r = m.compose(tel_qmor(m, tel_proj(m, e.cod), e.dom), s);
  Val D = m.reindex(r, C);
  if (m.reindex(e.jmap, D) != C) throw Error("elim_descend: strictness failure");
  return {r, D};
}

// -- identity contexts ------------------------------------------------------

Collapsed sigma_collapse(const Model& m, const Telescope& AA) {
  if (AA.links.empty()) return {m.unit_ty(AA.base), m.unit_star(AA.base)};
  if (AA.size() == 1) return {AA.links[0], m.identity(m.ext(AA.base, AA.links[0]))};
  Val A1 = AA.links[0];
  Val GA = m.ext(AA.base, A1);
  Telescope rest{GA, {AA.links.begin() + 1, AA.links.end()}};
  Collapsed rec = sigma_collapse(m, rest);
  Val S = m.sigma_ty(AA.base, A1, rec.S);
  Val iso = m.compose(m.sigma_pair(AA.base, A1, rec.S), rec.iso);
  return {S, iso};
}

IdContext identity_context(const Model& m, const Telescope& AA) {
  const Val& G = AA.base;
  Telescope doubled = tel_concat(m, AA, tel_reindex(m, tel_proj(m, AA), AA));
  Val totAA = tel_total(m, AA);
  Val totD = tel_total(m, doubled);
  size_t n = AA.size();

  if (n == 0) {
    Telescope id_tel{G, {}};
    return {doubled, id_tel, m.identity(G), elim_identity(m, G, AA)};
  }
  if (n == 1) {
    Val A = AA.links[0];
    Telescope id_tel{totD, {m.id_ty(G, A)}};
    return {doubled, id_tel, m.refl(G, A), elim_refl(m, G, A)};
  }

  // collapse to a single type; compare collapsed points
  Collapsed col = sigma_collapse(m, AA);
  Val S = col.S, phi = col.iso;
  Val IdS = m.id_ty(G, S);
  Val qA = tel_qmor(m, tel_proj(m, AA), AA);  // second-copy projection
  Val rho = m.pair_into(m.proj(G, S), S,
                        m.compose(phi, tel_proj_to(m, doubled, n)),
                        m.compose(phi, qA));
  Val I = m.reindex(rho, IdS);
  Telescope id_tel{totD, {I}};
  Val diag = tel_pair_into(m, tel_proj(m, AA), AA, m.identity(totAA),
                           m.identity(totAA));
  Val r = m.pair_into(rho, IdS, diag, m.compose(m.refl(G, S), phi));
  Telescope full = tel_concat(m, doubled, id_tel);
  return {doubled, id_tel, r, elim_search(m, G, AA, full, r)};
}

// -- iterated Pi ------------------------------------------------------------

IteratedPi iterated_pi(const Model& m, const Telescope& AA, const Telescope& BB) {
  const Val& base = AA.base;
  Val totAA = tel_total(m, AA);
  if (BB.links.empty()) return {Telescope{base, {}}, m.identity(totAA)};

  if (BB.size() == 1) {
    Val B = BB.links[0];
    if (AA.links.empty()) return {tel_one(base, B), m.identity(m.ext(base, B))};
    Val A1 = AA.links[0];
    Val GA = m.ext(base, A1);
    Telescope rest{GA, {AA.links.begin() + 1, AA.links.end()}};
    IteratedPi rec = iterated_pi(m, rest, BB);
    Val Pp = rec.pi.links[0];
    Val Pi = m.pi_ty(base, A1, Pp);
    Val e1 = m.pi_ev(base, A1, Pp);
    Telescope restw = tel_weaken(m, rest, Pp);
    Val ev = m.compose(rec.ev, tel_qmor(m, e1, restw));
    return {tel_one(base, Pi), ev};
  }

  Telescope BBfront{BB.base, {BB.links.begin(), BB.links.end() - 1}};
  Val Bk = BB.links.back();
  IteratedPi rec = iterated_pi(m, AA, BBfront);
  Val D = tel_total(m, rec.pi);
  Telescope AAD = tel_reindex(m, tel_proj(m, rec.pi), AA);
  Val Bk_p = m.reindex(rec.ev, Bk);
  IteratedPi next = iterated_pi(m, AAD, tel_one(tel_total(m, AAD), Bk_p));
  Val Pnext = next.pi.links[0];
  Telescope pi = rec.pi;
  pi.links.push_back(Pnext);
  Val ev = m.compose(m.qmor(rec.ev, Bk), next.ev);
  return {pi, ev};
}

Val iterated_lambda(const Model& m, const Telescope& AA, const Telescope& BB,
                    const Val& b) {
  const Val& base = AA.base;
  Val totAA = tel_total(m, AA);
  if (BB.links.empty()) return m.identity(base);

  if (BB.size() == 1) {
    Val B = BB.links[0];
    if (AA.links.empty()) return b;
    Val A1 = AA.links[0];
    Val GA = m.ext(base, A1);
    Telescope rest{GA, {AA.links.begin() + 1, AA.links.end()}};
    Val brec = iterated_lambda(m, rest, BB, b);
    Val Pp = iterated_pi(m, rest, BB).pi.links[0];
    return m.pi_lambda(base, A1, Pp, brec);
  }

  Telescope BBfront{BB.base, {BB.links.begin(), BB.links.end() - 1}};
  Val Bk = BB.links.back();
  Val b1 = m.compose(tel_proj_to(m, tel_concat(m, AA, BB), AA.size() + BB.size() - 1), b);
  // b1 is the truncated section of BBfront; adjust: b is totAA -> tot(AA++BB)
  Val lam1 = iterated_lambda(m, AA, BBfront, b1);
  IteratedPi rec = iterated_pi(m, AA, BBfront);
  Val D = tel_total(m, rec.pi);
  Telescope AAD = tel_reindex(m, tel_proj(m, rec.pi), AA);
  Val Bk_p = m.reindex(rec.ev, Bk);
  IteratedPi next = iterated_pi(m, AAD, tel_one(tel_total(m, AAD), Bk_p));
  Val Pnext = next.pi.links[0];
  // component of b at the last link, as a section over total(AA)
  Val sk = m.pair_into(b1, Bk, m.identity(totAA), b);
  // lam1* of Pnext is the Pi of the pulled-back last type
  Val qhat = tel_qmor(m, lam1, AAD);
  Val Bkp2 = m.reindex(m.compose(rec.ev, qhat), Bk);
  Val t = iterated_lambda(m, AA, tel_one(totAA, Bkp2), sk);
  return m.compose(m.qmor(lam1, Pnext), t);
}

Val lambda_map(const Model& m, const Telescope& AA, const Telescope& BB,
               const Telescope& BBp, const Val& w) {
  IteratedPi P = iterated_pi(m, AA, BB);
  IteratedPi Pp = iterated_pi(m, AA, BBp);
  Val D = tel_total(m, P.pi);
  Val pD = tel_proj(m, P.pi);
  Telescope AAD = tel_reindex(m, pD, AA);
  Val u = tel_qmor(m, pD, AA);
  Val wev = m.compose(w, P.ev);
  Val s = tel_pair_into(m, u, BBp, m.identity(tel_total(m, AAD)), wev);
  Val lam = iterated_lambda(m, AAD, tel_reindex(m, u, BBp), s);
  return m.compose(tel_qmor(m, pD, Pp.pi), lam);
}

// -- homotopies -------------------------------------------------------------

static Val pair_endpoints(const Model& m, const Telescope& B, const Val& f,
                          const Val& g) {
  return tel_pair_into(m, tel_proj(m, B), B, f, g);
}

bool homotopy_valid(const Model& m, const HomotopyData& hd) {
  IdContext ic = identity_context(m, hd.B);
  Telescope full = tel_concat(m, ic.doubled, ic.id_tel);
  if (m.cod(hd.h) != tel_total(m, full)) return false;
  Val totB = tel_total(m, hd.B);
  if (m.cod(hd.f) != totB || m.cod(hd.g) != totB) return false;
  if (m.compose(tel_proj(m, hd.B), hd.f) != m.compose(tel_proj(m, hd.B), hd.g))
    return false;
  Val fg = pair_endpoints(m, hd.B, hd.f, hd.g);
  return m.compose(tel_proj_to(m, full, ic.doubled.size()), hd.h) == fg;
}

HomotopyData refl_homotopy(const Model& m, const Val& base, const Telescope& B,
                           const Val& f) {
  IdContext ic = identity_context(m, B);
  return {base, B, f, f, m.compose(ic.r, f)};
}

std::optional<HomotopyData> find_homotopy(const Model& m, const Val& base,
                                          const Telescope& B, const Val& f,
                                          const Val& g) {
  if (m.compose(tel_proj(m, B), f) != m.compose(tel_proj(m, B), g))
    return std::nullopt;
  IdContext ic = identity_context(m, B);
  Val fg = pair_endpoints(m, B, f, g);
  auto hs = hom_over(m, fg, ic.id_tel);
  if (hs.empty()) return std::nullopt;
  return HomotopyData{base, B, f, g, hs.front()};
}

HomotopyData homotopy_compose(const Model& m, const HomotopyData& h1,
                              const HomotopyData& h2) {
  if (h1.g != h2.f) throw Error("homotopy_compose: endpoint mismatch");
  auto h = find_homotopy(m, h1.base, h1.B, h1.f, h2.g);
  if (!h) throw Error("homotopy_compose: no composite witness found");
  return *h;
}

HomotopyData homotopy_invert(const Model& m, const HomotopyData& h) {
  auto r = find_homotopy(m, h.base, h.B, h.g, h.f);
  if (!r) throw Error("homotopy_invert: no inverse witness found");
  return *r;
}

HomotopyData homotopy_whisker_pre(const Model& m, const HomotopyData& h,
                                  const Val& u) {
  return {h.base, h.B, m.compose(h.f, u), m.compose(h.g, u), m.compose(h.h, u)};
}

HomotopyData homotopy_whisker_post(const Model& m, const HomotopyData& h,
                                   const Val& w, const Telescope& Bp) {
  auto r = find_homotopy(m, h.base, Bp, m.compose(w, h.f), m.compose(w, h.g));
  if (!r) throw Error("homotopy_whisker_post: no witness found");
  return *r;
}

// -- equivalence data -------------------------------------------------------

bool equiv_valid(const Model& m, const EquivData& ed) {
  Val totA = tel_total(m, ed.A), totB = tel_total(m, ed.B);
  if (m.dom(ed.f) != totA || m.cod(ed.f) != totB) return false;
  if (m.compose(tel_proj(m, ed.B), ed.f) != tel_proj(m, ed.A)) return false;
  if (m.compose(tel_proj(m, ed.A), ed.g) != tel_proj(m, ed.B)) return false;
  if (m.compose(tel_proj(m, ed.A), ed.gp) != tel_proj(m, ed.B)) return false;
  if (ed.eta.f != m.compose(ed.f, ed.g) || ed.eta.g != m.identity(totB))
    return false;
  if (ed.eps.f != m.compose(ed.gp, ed.f) || ed.eps.g != m.identity(totA))
    return false;
  return homotopy_valid(m, ed.eta) && homotopy_valid(m, ed.eps);
}

EquivData identity_equiv(const Model& m, const Val& base, const Telescope& A) {
  Val id = m.identity(tel_total(m, A));
  return {base, A, A, id, id, refl_homotopy(m, base, A, id), id,
          refl_homotopy(m, base, A, id)};
}

std::optional<EquivData> equivalence_oracle(const Model& m, const Val& base,
                                            const Telescope& A,
                                            const Telescope& B, const Val& f) {
  Val totA = tel_total(m, A), totB = tel_total(m, B);
  if (m.compose(tel_proj(m, B), f) != tel_proj(m, A))
    throw Error("equivalence_oracle: map not over the base");
  // an invertible map is an equivalence with both homotopies reflexive
  if (auto inv = m.invert(f)) {
    Val eta_f = m.compose(f, *inv), eps_f = m.compose(*inv, f);
    if (eta_f == m.identity(totB) && eps_f == m.identity(totA))
      return EquivData{base, A,    B,    f,
                       *inv, refl_homotopy(m, base, B, m.identity(totB)),
                       *inv, refl_homotopy(m, base, A, m.identity(totA))};
  }
  auto gs = hom_over(m, tel_proj(m, B), A);  // candidate maps total(B)->total(A)
  for (auto& g : gs) {
    auto eta = find_homotopy(m, base, B, m.compose(f, g), m.identity(totB));
    if (!eta) continue;
    auto eps = find_homotopy(m, base, A, m.compose(g, f), m.identity(totA));
    if (eps) return EquivData{base, A, B, f, g, *eta, g, *eps};
    for (auto& gp : gs) {
      auto e2 = find_homotopy(m, base, A, m.compose(gp, f), m.identity(totA));
      if (e2) return EquivData{base, A, B, f, g, *eta, gp, *e2};
    }
  }
  return std::nullopt;
}

std::optional<bool> slice_equiv_verdict(const Model& m, const Val& base,
                                        const Telescope& A, const Telescope& B,
                                        const Val& f) {
  if (auto v = m.is_equiv_verdict(base, A, B, f)) return v;
  return equivalence_oracle(m, base, A, B, f).has_value();
}

EquivData equiv_two_of_three(const Model& m, const Val& base, const Telescope& A,
                             const Telescope& B, const Telescope& C, const Val& f,
                             const Val& g, const std::string& unknown,
                             const EquivData& known1, const EquivData& known2) {
  if (!equiv_valid(m, known1) || !equiv_valid(m, known2))
    throw Error("equiv_two_of_three: supplied data invalid");
  std::optional<EquivData> out;
  if (unknown == "f") out = equivalence_oracle(m, base, A, B, f);
  else if (unknown == "g") out = equivalence_oracle(m, base, B, C, g);
  else if (unknown == "gf")
    out = equivalence_oracle(m, base, A, C, m.compose(g, f));
  else throw Error("equiv_two_of_three: unknown position");
  if (!out) throw Error("equiv_two_of_three: no data found");
  return *out;
}

EquivData equiv_right_proper(const Model& m, const EquivData& wdata,
                             const Telescope& AA) {
  if (AA.links.empty()) return wdata;
  if (AA.base != tel_total(m, wdata.B))
    throw Error("equiv_right_proper: telescope base mismatch");
  Telescope Ap = tel_concat(m, wdata.A, tel_reindex(m, wdata.f, AA));
  Telescope Bp = tel_concat(m, wdata.B, AA);
  Val wAA = tel_qmor(m, wdata.f, AA);
  auto out = equivalence_oracle(m, wdata.base, Ap, Bp, wAA);
  if (!out) throw Error("equiv_right_proper: no data found");
  return *out;
}

// -- general equivalences ---------------------------------------------------

GeneralVerdict is_equivalence_general(const Model& m, const Val& f, int bound,
                                      size_t budget) {
  Val Gp = m.dom(f), G = m.cod(f);
  size_t work = 0;
  // weak type lifting: every type over the domain arises, up to equivalence
  // after f-reindexing, from a type over the codomain
  for (auto& Bp : m.all_types(Gp, bound)) {
    bool found = false;
    for (auto& B : m.all_types(G, bound)) {
      Val fB = m.reindex(f, B);
      Telescope tA{Gp, {fB}}, tB{Gp, {Bp}};
      for (auto& u : hom_over(m, tel_proj(m, tB), tA)) {
        if (++work > budget) return {"indeterminate", Val("budget exhausted")};
        if (equivalence_oracle(m, Gp, tB, tA, u)) {
          found = true;
          break;
        }
      }
      if (found) break;
    }
    if (!found)
      return {"not-equivalence", Val{{"property", "weak type lifting"},
                                     {"type", Bp}}};
  }
  // weak term lifting: sections of f*B come, up to homotopy, from sections of B
  for (auto& B : m.all_types(G, bound)) {
    Val fB = m.reindex(f, B);
    Telescope tB{Gp, {fB}};
    for (auto& bp : sections(m, Gp, fB)) {
      bool found = false;
      for (auto& b : sections(m, G, B)) {
        if (++work > budget) return {"indeterminate", Val("budget exhausted")};
        Val s = m.pair_into(f, B, m.identity(Gp), m.compose(b, f));
        if (find_homotopy(m, Gp, tB, s, bp)) {
          found = true;
          break;
        }
      }
      if (!found)
        return {"not-equivalence", Val{{"property", "weak term lifting"},
                                       {"type", B}}};
    }
  }
  return {"equivalence", Val()};
}

// -- factorisation ----------------------------------------------------------

Factorisation factor_map(const Model& m, const Val& base, const Telescope& A,
                         const Telescope& B, const Val& f) {
  Val totA = tel_total(m, A), totB = tel_total(m, B);
  if (m.dom(f) != totA || m.cod(f) != totB ||
      m.compose(tel_proj(m, B), f) != tel_proj(m, A))
    throw Error("factor_map: map not over the base");
  Telescope A_B = tel_reindex(m, tel_proj(m, B), A);
  Telescope BA = tel_concat(m, B, A_B);
  Val totBA = tel_total(m, BA);
  Val qA2 = tel_qmor(m, tel_proj(m, B), A);  // total(B ++ A_B) -> total(A)
  IdContext ic = identity_context(m, B);
  // compare the carried B-point with the f-image of the carried A-point
  Val psi = pair_endpoints(m, B, tel_proj_to(m, BA, B.size()),
                           m.compose(f, qA2));
  Telescope I = tel_reindex(m, psi, ic.id_tel);
  Telescope rest = tel_concat(m, Telescope{totB, A_B.links}, I);
  Telescope middle_tel = tel_concat(m, B, rest);
  // w = (f(a), a, refl)
  Val w1 = tel_pair_into(m, tel_proj(m, B), A, f, m.identity(totA));
  Val w = tel_pair_into(m, psi, ic.id_tel, w1, m.compose(ic.r, f));
  Val p = tel_proj_to(m, middle_tel, B.size());
  if (m.compose(p, w) != f) throw Error("factor_map: recomposition failed");
  auto wdata = equivalence_oracle(m, base, A, middle_tel, w);
  if (!wdata) throw Error("factor_map: no equivalence data on the first factor");
  return {w, rest, p, *wdata};
}

// -- funext as equivalence data ---------------------------------------------

Val funext_r_map(const Model& m, const Val& G, const Val& A, const Val& B) {
  Val GA = m.ext(G, A);
  Val Bw = m.reindex(m.proj(GA, B), B);
  Telescope AT = tel_one(G, A);
  Telescope BT{GA, {B}};
  Telescope BBB{GA, {B, Bw, m.id_ty(GA, B)}};
  return lambda_map(m, AT, BT, BBB, m.refl(GA, B));
}

EquivData funext_to_equiv(const Model& m, const Val& G, const Val& A,
                          const Val& B) {
  Val GA = m.ext(G, A);
  Val Bw = m.reindex(m.proj(GA, B), B);
  Telescope AT = tel_one(G, A);
  Telescope BT{GA, {B}};
  Telescope BBB{GA, {B, Bw, m.id_ty(GA, B)}};
  Val R = funext_r_map(m, G, A, B);
  auto data = equivalence_oracle(m, G, iterated_pi(m, AT, BT).pi,
                                 iterated_pi(m, AT, BBB).pi, R);
  if (!data) throw Error("funext_to_equiv: no equivalence data on R");
  return *data;
}

FunextPayload equiv_to_funext(const Model& m, const Val& G, const Val& A,
                              const Val& B, const EquivData& rdata) {
  if (!equiv_valid(m, rdata)) throw Error("equiv_to_funext: data invalid");
  Val GA = m.ext(G, A);
  Val Pi = m.pi_ty(G, A, B);
  Val GP = m.ext(G, Pi);
  Val p1 = m.proj(G, Pi);
  Val Piw = m.reindex(p1, Pi);
  Val GPP = m.ext(GP, Piw);
  Val drop2 = m.proj(GP, Piw);
  Val IdB = m.id_ty(GA, B);
  Val IdPi = m.id_ty(G, Pi);

  // the two evaluation legs of the pointwise-comparison context
  Val At = m.reindex(p1, A);
  Val A2 = m.reindex(drop2, At);
  Val u1 = m.compose(m.pi_ev(G, A, B), m.qmor(drop2, At));
  Val Bp = m.reindex(m.qmor(p1, A), B);
  Val ev_w = m.pi_ev(GP, At, Bp);
  Val u2 = m.compose(m.qmor(m.qmor(p1, A), B), ev_w);
  Val e = m.pair_into(m.proj(GA, B), B, u1, u2);
  Val T = m.pi_ty(GPP, A2, m.reindex(e, IdB));

  // search for the funext map, preferring the model's own
  Val XT = m.ext(GPP, T);
  Val XI = m.ext(GPP, IdPi);
  Val delta = m.pair_into(p1, Pi, m.identity(GP), m.identity(GP));
  // pointwise refl, formed over the diagonal where the two legs agree
  Val qd = m.qmor(delta, A2);
  Val ed = m.compose(e, qd);
  Val u1d = m.compose(u1, qd);
  Val GPA = m.ext(GP, At);
  Val sr = m.pair_into(ed, IdB, m.identity(GPA),
                       m.compose(m.refl(GA, B), u1d));
  Val td = m.pi_lambda(GP, At, m.reindex(ed, IdB), sr);
  Val c = m.compose(m.qmor(delta, T), td);
  Val cp = m.refl(G, Pi);

  std::vector<Val> candidates;
  if (m.has_funext()) candidates.push_back(m.funext_map(G, A, B));
  Telescope IdT = tel_one(GPP, IdPi);
  for (auto& u : hom_over(m, m.proj(GPP, T), IdT)) candidates.push_back(u);
  for (auto& F : candidates) {
    if (m.dom(F) != XT || m.cod(F) != XI) continue;
    auto comp = find_homotopy(m, GPP, IdT, m.compose(F, c), cp);
    if (comp) return {F, *comp};
  }
  throw Error("equiv_to_funext: no funext map satisfies the computation rule");
}

PiCovariant pi_covariant(const Model& m, const Telescope& AA, const Telescope& BB,
                         const Telescope& BBp, const Val& w) {
  Val lam_w = lambda_map(m, AA, BB, BBp, w);
  auto data = equivalence_oracle(m, AA.base, iterated_pi(m, AA, BB).pi,
                                 iterated_pi(m, AA, BBp).pi, lam_w);
  if (!data) throw Error("pi_covariant: no equivalence data on the abstraction");
  return {lam_w, *data};
}

HomotopyData homotopy_abstraction(const Model& m, const Telescope& AA,
                                  const Telescope& BB, const HomotopyData& h) {
  Val lb = iterated_lambda(m, AA, BB, h.f);
  Val lbp = iterated_lambda(m, AA, BB, h.g);
  auto out = find_homotopy(m, AA.base, iterated_pi(m, AA, BB).pi, lb, lbp);
  if (!out) throw Error("homotopy_abstraction: no witness found");
  return *out;
}

}  // namespace cwa
