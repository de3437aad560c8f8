#include "induced.hpp"

namespace cwa {

namespace {

std::string through(const FinCategory& src,
                    const std::map<std::string, std::string>& ob,
                    const std::map<std::string, std::string>& ar,
                    const std::string& arrow) {
  if (src.is_identity(arrow))
    return FinCategory::id_of(ob.at(src.arrow(arrow).src));
  return ar.at(arrow);
}

std::string u_arrow(const FinCategory& J, const OpfibWitness& u,
                    const std::string& arrow) {
  if (J.is_identity(arrow))
    return FinCategory::id_of(u.ob_at(J.arrow(arrow).src));
  return u.ar_at(arrow);
}

std::map<std::string, std::string> image_preimage(const FinCategory& J,
                                                  const OpfibWitness& u) {
  std::map<std::string, std::string> pre;
  for (auto& j : J.objects) pre[u.ob_at(j)] = j;
  return pre;
}

}  // namespace

void validate_functor(const FinCategory& I, const FinCategory& J,
                      const Functor& F) {
  for (auto& i : I.objects)
    if (!J.has_object(F.ob.at(i))) throw Error("functor: bad object image");
  for (auto& a : I.arrows) {
    if (I.is_identity(a.id)) continue;
    const Arrow& fa = J.arrow(F.ar.at(a.id));
    if (fa.src != F.ob.at(a.src) || fa.dst != F.ob.at(a.dst))
      throw Error("functor: endpoints broken at " + a.id);
  }
  for (auto& g : I.arrows)
    for (auto& f : I.arrows) {
      if (g.src != f.dst) continue;
      std::string lhs = through(I, F.ob, F.ar, I.compose(g.id, f.id));
      std::string rhs = J.compose(through(I, F.ob, F.ar, g.id),
                                  through(I, F.ob, F.ar, f.id));
      if (lhs != rhs) throw Error("functor: composition broken");
    }
}

void validate_homotopy_equiv(const FinCategory& I, const FinCategory& J,
                             const OpfibWitness& u, const HomotopyEquivData& h,
                             const HomotopicalMarking& wI,
                             const HomotopicalMarking& wJ) {
  validate_functor(I, J, h.v);
  for (auto& i : I.objects) {
    const Arrow& e = I.arrow(h.eta.at(i));
    if (e.src != i || e.dst != u.ob_at(h.v.ob.at(i)))
      throw Error("eta: endpoints broken at " + i);
    if (!wI.marked(I, e.id)) throw Error("eta: unmarked arrow at " + i);
  }
  for (auto& j : J.objects) {
    const Arrow& e = J.arrow(h.eps.at(j));
    if (e.src != j || e.dst != h.v.ob.at(u.ob_at(j)))
      throw Error("eps: endpoints broken at " + j);
    if (!wJ.marked(J, e.id)) throw Error("eps: unmarked arrow at " + j);
  }
  // naturality of the unit in I
  for (auto& a : I.arrows) {
    if (I.is_identity(a.id)) continue;
    std::string uva = u_arrow(J, u, through(I, h.v.ob, h.v.ar, a.id));
    if (I.compose(h.eta.at(a.dst), a.id) != I.compose(uva, h.eta.at(a.src)))
      throw Error("eta: naturality broken at " + a.id);
  }
}

// -- cosieve lifting --------------------------------------------------------

CosieveLift cosieve_lift(std::shared_ptr<ReedyEnv> envJ,
                         std::shared_ptr<ReedyEnv> envI, const OpfibWitness& u,
                         const Val& Gam, const Val& A, const Val& B,
                         const Val& e) {
  if (!u.injective) throw Error("cosieve_lift: u must be injective");
  const Model& b = *envI->model;
  Val uGam = restrict_diagram(*envJ, *envI, u, Gam);
  auto pre = image_preimage(envJ->cat, u);

  Val Bbar = Val{{"components", Val::object()}};
  Val comp = Val::object();
  for (auto& i : envI->topo) {
    auto it = pre.find(i);
    if (it != pre.end()) {
      const std::string& j0 = it->second;
      Bbar["components"][i] = B.at("components").at(j0);
      if (matching_telescope(*envJ, uGam, B, j0).tel !=
          matching_telescope(*envI, Gam, Bbar, i).tel)
        throw Error("cosieve_lift: matching telescopes diverge at " + i);
      comp[i] = e.at("comp").at(j0);
    } else {
      const ReedyLimit& MT = matching_telescope(*envI, Gam, Bbar, i);
      Val Me = mediate_matching(
          *envI, Gam, A, i, tel_proj(b, MT.tel),
          [&](const std::string& j, const Val& alpha) {
            return b.compose(comp.at(j), MT.cone.leg(j, alpha));
          });
      const Val& Ai = A.at("components").at(i);
      Bbar["components"][i] = b.reindex(Me, Ai);
      comp[i] = b.qmor(Me, Ai);
    }
  }
  Val ebar = Val{{"dom", comprehend(*envI, Gam, Bbar).first},
                 {"cod", comprehend(*envI, Gam, A).first},
                 {"comp", comp}};
  return {Bbar, ebar};
}

Val cosieve_extend_section(std::shared_ptr<ReedyEnv> envJ,
                           std::shared_ptr<ReedyEnv> envI,
                           const OpfibWitness& u, const Val& Gam,
                           const Val& Bbar, const Val& s) {
  const Model& b = *envI->model;
  auto pre = image_preimage(envJ->cat, u);
  Val comp = Val::object();
  std::vector<std::string> open;
  for (auto& i : envI->topo) {
    auto it = pre.find(i);
    if (it != pre.end())
      comp[i] = s.at("comp").at(it->second);
    else
      open.push_back(i);
  }
  // levels outside the image are filled in fold order with backtracking;
  // naturality towards lower levels is enforced by the mediated matching map
  std::function<bool(size_t)> rec = [&](size_t t) -> bool {
    if (t == open.size()) return true;
    const std::string& i = open[t];
    Val w = mediate_matching(*envI, Gam, Bbar, i,
                             b.identity(Gam.at("ob").at(i)),
                             [&](const std::string& j, const Val& alpha) {
                               return b.compose(
                                   comp.at(j),
                                   dia_ar(*envI, Gam, alpha.get<std::string>()));
                             });
    const Val& Bi = Bbar.at("components").at(i);
    for (auto& c : b.sections_of(Gam.at("ob").at(i), b.reindex(w, Bi))) {
      comp[i] = b.compose(b.qmor(w, Bi), c);
      if (rec(t + 1)) return true;
      comp.erase(i);
    }
    return false;
  };
  if (!rec(0)) throw Error("cosieve_extend_section: no extension found");
  return Val{{"dom", Gam},
             {"cod", comprehend(*envI, Gam, Bbar).first},
             {"comp", comp}};
}

// -- Reedy replacement and factorisation ------------------------------------

FamilyPresentation present_as_family(const Model& b, const Val& Z,
                                     const Val& tot, const Val& m, int bound) {
  for (auto& A : b.all_types(tot, bound)) {
    Val E = b.ext(tot, A);
    if (E.is_array() && Z.is_array() && E.size() != Z.size()) continue;
    Val p = b.proj(tot, A);
    for (auto& w : b.hom(Z, E)) {
      if (b.compose(p, w) != m) continue;
      if (b.invert(w)) return {A, w};
    }
  }
  throw Error("present_as_family: no presentation within the bound");
}

ReedyReplacement reedy_replace(std::shared_ptr<ReedyEnv> env, const Val& pX,
                               int bound) {
  const Model& b = *env->model;
  const Val &X = pX.at("dom"), &Gam = pX.at("cod");
  Val A = Val{{"components", Val::object()}};
  Val comp = Val::object();
  for (auto& i : env->topo) {
    const ReedyLimit& MT = matching_telescope(*env, Gam, A, i);
    Val m = mediate_matching(
        *env, Gam, A, i, pX.at("comp").at(i),
        [&](const std::string& j, const Val& alpha) {
          return b.compose(comp.at(j),
                           dia_ar(*env, X, alpha.get<std::string>()));
        });
    FamilyPresentation fp = present_as_family(b, X.at("ob").at(i),
                                              tel_total(b, MT.tel), m, bound);
    A["components"][i] = fp.A;
    comp[i] = fp.w;
  }
  Val w = Val{{"dom", X},
              {"cod", comprehend(*env, Gam, A).first},
              {"comp", comp}};
  validate_diagram_map(*env, w);
  return {A, w};
}

ReedyFactorisation reedy_factorisation(std::shared_ptr<ReedyEnv> env,
                                       const Val& Gam, const Telescope& AA,
                                       const Telescope& BB, const Val& f) {
  ModelPtr mp = lifted_cwa(env);
  const Model& m = *mp;
  Factorisation F = factor_map(m, Gam, AA, BB, f);
  Val totB = tel_total(m, BB);
  Collapsed col = sigma_collapse(m, Telescope{totB, F.rest.links});
  Val w = m.compose(col.iso, F.w);
  Val p = m.proj(totB, col.S);
  if (m.compose(p, w) != f)
    throw Error("reedy_factorisation: recomposition failed");
  return {col.S, w, p, F.wdata};
}

// -- descent and span-to-map ------------------------------------------------

DescendType descend_type(std::shared_ptr<ReedyEnv> env, const Val& e,
                         const Telescope& AA, int bound) {
  ModelPtr mp = lifted_cwa(env);
  const Model& m = *mp;
  const Val &X = e.at("dom"), &Y = e.at("cod");
  if (AA.base != X) throw Error("descend_type: telescope not over the domain");
  Collapsed col = sigma_collapse(m, AA);
  // invertible e: transport the collapsed type along the inverse exactly
  if (auto einv = m.invert(e)) {
    Val B = m.reindex(*einv, col.S);
    if (m.reindex(e, B) == col.S) {
      Val ebar = m.compose(m.qmor(e, B), col.iso);
      return {B, ebar, identity_equiv(m, X, tel_one(X, col.S)), col};
    }
  }
  for (auto& B : m.all_types(Y, bound)) {
    Val eB = m.reindex(e, B);
    for (auto& uu : hom_over(m, m.proj(X, eB), tel_one(X, col.S))) {
      auto d = equivalence_oracle(m, X, tel_one(X, eB), tel_one(X, col.S), uu);
      if (!d) continue;
      Val ebar = m.compose(m.qmor(e, B), m.compose(d->g, col.iso));
      return {B, ebar, *d, col};
    }
  }
  throw Error("descend_type: no Reedy type descends within the bound");
}

SpanToMap span_to_map(std::shared_ptr<ReedyEnv> env, const Val& Gam,
                      const Val& A0, const Val& A1, const Telescope& BB,
                      const Val& e0, const Val& e1) {
  ModelPtr mp = lifted_cwa(env);
  const Model& m = *mp;
  Telescope A0t = tel_one(Gam, A0), A1t = tel_one(Gam, A1);
  Factorisation F = factor_map(m, Gam, BB, A0t, e0);
  Telescope middle = tel_concat(m, A0t, F.rest);
  Val totA0 = m.ext(Gam, A0);
  auto secs = tel_sections(m, Telescope{totA0, F.rest.links});
  if (secs.empty()) throw Error("span_to_map: the projection has no section");
  Val drop = tel_proj_to(m, middle, 1 + BB.size());
  Val qB = tel_qmor(m, tel_proj(m, A0t), BB);
  Val bmap = m.compose(e1, m.compose(qB, m.compose(drop, secs.front())));
  auto d = equivalence_oracle(m, Gam, A0t, A1t, bmap);
  if (!d) throw Error("span_to_map: the produced map is not an equivalence");
  return {bmap, *d};
}

// -- zigzags ----------------------------------------------------------------

bool zigzag_valid(const Model& m, const ZigZag& z) {
  if (z.vertices.size() != z.legs.size() + 1) return false;
  for (size_t k = 0; k < z.legs.size(); ++k) {
    const Telescope& s = z.vertices[z.legs[k].forward ? k : k + 1];
    const Telescope& t = z.vertices[z.legs[k].forward ? k + 1 : k];
    const Val& f = z.legs[k].map;
    if (m.dom(f) != tel_total(m, s) || m.cod(f) != tel_total(m, t))
      return false;
    if (m.compose(tel_proj(m, t), f) != tel_proj(m, s)) return false;
    if (!equivalence_oracle(m, z.base, s, t, f)) return false;
  }
  return true;
}

ZigZag zigzag_improve(std::shared_ptr<ReedyEnv> env, const ZigZag& z) {
  ModelPtr mp = lifted_cwa(env);
  const Model& m = *mp;

  // collapse every multi-link vertex to a single type, conjugating the legs
  ZigZag out;
  out.base = z.base;
  std::vector<Val> iso(z.vertices.size()), iso_inv(z.vertices.size());
  for (size_t k = 0; k < z.vertices.size(); ++k) {
    if (z.vertices[k].size() == 1) {
      out.vertices.push_back(z.vertices[k]);
      iso[k] = m.identity(tel_total(m, z.vertices[k]));
      iso_inv[k] = iso[k];
    } else {
      Collapsed col = sigma_collapse(m, z.vertices[k]);
      out.vertices.push_back(tel_one(z.base, col.S));
      iso[k] = col.iso;
      iso_inv[k] = *m.invert(col.iso);
    }
  }
  for (size_t k = 0; k < z.legs.size(); ++k) {
    size_t s = z.legs[k].forward ? k : k + 1;
    size_t t = z.legs[k].forward ? k + 1 : k;
    out.legs.push_back(
        {z.legs[k].forward, m.compose(iso[t], m.compose(z.legs[k].map, iso_inv[s]))});
  }

  // eliminate span vertices (both incident legs point away from them)
  for (bool changed = true; changed;) {
    changed = false;
    for (size_t k = 1; k + 1 < out.vertices.size(); ++k) {
      if (out.legs[k - 1].forward || !out.legs[k].forward) continue;
      const Val& L = out.vertices[k - 1].links[0];
      const Val& R = out.vertices[k + 1].links[0];
      SpanToMap sm = span_to_map(env, out.base, L, R, out.vertices[k],
                                 out.legs[k - 1].map, out.legs[k].map);
      out.vertices.erase(out.vertices.begin() + k);
      out.legs.erase(out.legs.begin() + k);
      out.legs[k - 1] = {true, sm.b};
      changed = true;
      break;
    }
  }
  if (!zigzag_valid(m, out)) throw Error("zigzag_improve: output invalid");
  return out;
}

// -- squares and grids ------------------------------------------------------

namespace {

Val slice_inverse(const Model& m, const Val& base, const Val& X, const Val& Y,
                  const Val& f) {
  auto d = equivalence_oracle(m, base, tel_one(base, X), tel_one(base, Y), f);
  if (!d) throw Error("square: an edge is not an equivalence");
  return d->g;
}

}  // namespace

Square complete_square(std::shared_ptr<ReedyEnv> env, const Square& s) {
  ModelPtr mp = lifted_cwa(env);
  const Model& m = *mp;
  Square o = s;

  int missing_v = !o.A + !o.B + !o.C + !o.D;
  if (missing_v > 1) throw Error("complete_square: boundary too sparse");
  if (missing_v == 0 && o.ab && o.cd && o.ac && o.bd)
    throw Error("complete_square: boundary already full");

  // a missing vertex is copied from its lexicographically earliest present
  // neighbour; the connecting edge becomes an identity
  auto copy_from = [&](std::optional<Val>& vtx, std::optional<Val>& edge,
                       const std::optional<Val>& nb) {
    if (vtx || !nb) return;
    vtx = *nb;
    edge = m.identity(m.ext(o.base, *nb));
  };
  if (!o.A) { copy_from(o.A, o.ab, o.B); copy_from(o.A, o.ac, o.C); }
  if (!o.B) { copy_from(o.B, o.ab, o.A); copy_from(o.B, o.bd, o.D); }
  if (!o.C) { copy_from(o.C, o.ac, o.A); copy_from(o.C, o.cd, o.D); }
  if (!o.D) { copy_from(o.D, o.bd, o.B); copy_from(o.D, o.cd, o.C); }
  if (!o.A || !o.B || !o.C || !o.D)
    throw Error("complete_square: boundary disconnected");

  // complete missing edges by composing around the square with quasi-inverses
  for (bool changed = true; changed;) {
    changed = false;
    if (!o.ab && o.ac && o.cd && o.bd) {
      o.ab = m.compose(slice_inverse(m, o.base, *o.B, *o.D, *o.bd),
                       m.compose(*o.cd, *o.ac));
      changed = true;
    }
    if (!o.cd && o.ac && o.ab && o.bd) {
      o.cd = m.compose(*o.bd,
                       m.compose(*o.ab, slice_inverse(m, o.base, *o.A, *o.C, *o.ac)));
      changed = true;
    }
    if (!o.ac && o.ab && o.bd && o.cd) {
      o.ac = m.compose(slice_inverse(m, o.base, *o.C, *o.D, *o.cd),
                       m.compose(*o.bd, *o.ab));
      changed = true;
    }
    if (!o.bd && o.ab && o.ac && o.cd) {
      o.bd = m.compose(*o.cd,
                       m.compose(*o.ac, slice_inverse(m, o.base, *o.A, *o.B, *o.ab)));
      changed = true;
    }
  }
  if (!o.ab || !o.cd || !o.ac || !o.bd)
    throw Error("complete_square: boundary disconnected");

  // every edge must validate as an equivalence
  slice_inverse(m, o.base, *o.A, *o.B, *o.ab);
  slice_inverse(m, o.base, *o.C, *o.D, *o.cd);
  slice_inverse(m, o.base, *o.A, *o.C, *o.ac);
  slice_inverse(m, o.base, *o.B, *o.D, *o.bd);
  return o;
}

GridResult complete_grid(std::shared_ptr<ReedyEnv> env, const Grid& g) {
  ModelPtr mp = lifted_cwa(env);
  const Model& m = *mp;
  Grid o = g;
  size_t R = o.V.size(), C = o.V.front().size();

  // bottom right to top left, upwards then leftwards
  for (size_t ii = R - 1; ii-- > 0;)
    for (size_t jj = C - 1; jj-- > 0;) {
      Square s;
      s.base = o.base;
      s.A = o.V[ii][jj];
      s.B = o.V[ii][jj + 1];
      s.C = o.V[ii + 1][jj];
      s.D = o.V[ii + 1][jj + 1];
      s.ab = o.h[ii][jj];
      s.cd = o.h[ii + 1][jj];
      s.ac = o.v[ii][jj];
      s.bd = o.v[ii][jj + 1];
      Square done = complete_square(env, s);
      o.V[ii][jj] = done.A;
      o.V[ii][jj + 1] = done.B;
      o.V[ii + 1][jj] = done.C;
      o.V[ii + 1][jj + 1] = done.D;
      o.h[ii][jj] = done.ab;
      o.h[ii + 1][jj] = done.cd;
      o.v[ii][jj] = done.ac;
      o.v[ii][jj + 1] = done.bd;
    }

  // corner-to-corner: along the top row, then down the right column
  Val f = m.identity(m.ext(o.base, *o.V[0][0]));
  for (size_t jj = 0; jj + 1 < C; ++jj) f = m.compose(*o.h[0][jj], f);
  for (size_t ii = 0; ii + 1 < R; ++ii) f = m.compose(*o.v[ii][C - 1], f);
  auto d = equivalence_oracle(m, o.base, tel_one(o.base, *o.V[0][0]),
                              tel_one(o.base, *o.V[R - 1][C - 1]), f);
  if (!d) throw Error("complete_grid: corner map is not an equivalence");
  return {o, f, *d};
}

// -- weak lifting along a homotopy equivalence ------------------------------

WeakLift weak_lift_homotopy_equiv(std::shared_ptr<ReedyEnv> envJ,
                                  std::shared_ptr<ReedyEnv> envI,
                                  const OpfibWitness& u,
                                  const HomotopyEquivData& h, const Val& Gam,
                                  const Val& A, int bound) {
  const Model& b = *envI->model;
  validate_functor(envI->cat, envJ->cat, h.v);
  for (auto& j : envJ->cat.objects) {
    const std::string& i = u.ob_at(j);
    if (h.v.ob.at(i) != j)
      throw Error("weak_lift: v must retract u on objects");
    if (!envI->cat.is_identity(h.eta.at(i)))
      throw Error("weak_lift: the unit must be an identity on the image of u");
  }

  Val uGam = restrict_diagram(*envJ, *envI, u, Gam);
  Val GAJ = comprehend(*envJ, uGam, A).first;

  // the unit pullback: X_i = eta_i^*((u*Gam . A)_{v(i)}) as a telescope
  std::map<std::string, Telescope> R;
  std::map<std::string, Val> q;  // X_i -> (u*Gam . A)_{v(i)}
  Val X = Val{{"ob", Val::object()}, {"ar", Val::object()}};
  Val pcomp = Val::object();
  for (auto& i : envI->cat.objects) {
    Telescope T = level_telescope(*envJ, tel_one(uGam, A), h.v.ob.at(i));
    Val ei = dia_ar(*envI, Gam, h.eta.at(i));
    R.emplace(i, tel_reindex(b, ei, T));
    X["ob"][i] = tel_total(b, R.at(i));
    pcomp[i] = tel_proj(b, R.at(i));
    q[i] = tel_qmor(b, ei, T);
  }
  for (auto& a : envI->cat.arrows) {
    if (envI->cat.is_identity(a.id)) continue;
    std::string va = through(envI->cat, h.v.ob, h.v.ar, a.id);
    Telescope Tp = level_telescope(*envJ, tel_one(uGam, A), h.v.ob.at(a.dst));
    Val ep = dia_ar(*envI, Gam, h.eta.at(a.dst));
    Val k = b.compose(dia_ar(*envI, Gam, a.id), pcomp.at(a.src));
    Val mm = b.compose(dia_ar(*envJ, GAJ, va), q.at(a.src));
    X["ar"][a.id] = tel_pair_into(b, ep, Tp, k, mm);
  }
  validate_diagram(*envI, X);
  Val pX = Val{{"dom", X}, {"cod", Gam}, {"comp", pcomp}};
  validate_diagram_map(*envI, pX);

  ReedyReplacement rr = reedy_replace(envI, pX, bound);

  // over the image of u the unit is an identity, so X_i is literally the
  // level of A; the comparison inverts the replacement and projects out
  Val uAbar = restrict_reedy_type(*envJ, *envI, u, uGam, Gam, rr.A);
  Val comp = Val::object();
  for (auto& j : envJ->cat.objects) {
    const std::string& i = u.ob_at(j);
    auto inv = b.invert(rr.w.at("comp").at(i));
    if (!inv) throw Error("weak_lift: replacement component not invertible");
    comp[j] = b.compose(q.at(i), *inv);
  }
  Val cmp = Val{{"dom", comprehend(*envJ, uGam, uAbar).first},
                {"cod", GAJ},
                {"comp", comp}};
  SliceDecision sd = slice_equiv_decide(envJ, uGam, uAbar, A, cmp);
  if (sd.verdict != "equivalence")
    throw Error("weak_lift: comparison fails at level " + sd.level);
  return {rr.A, cmp, *sd.data};
}

// -- classification ---------------------------------------------------------

LiftReport classify(std::shared_ptr<ReedyEnv> envJ,
                    std::shared_ptr<ReedyEnv> envI, const OpfibWitness& u,
                    const std::optional<HomotopyEquivData>& h, int bound,
                    size_t max_instances) {
  ModelPtr dmI = diagram_cwa(envI);
  ModelPtr dmJ = diagram_cwa(envJ);
  ModelPtr mJ = lifted_cwa(envJ);
  LiftReport out;
  Val GamI = dmI->terminal();
  Val uGam = restrict_diagram(*envJ, *envI, u, GamI);

  // equivalence lifting and path lifting along the identity comparison
  if (!u.injective) {
    out.fibration.entries.push_back({"fibration", "indeterminate", Val()});
  } else {
    auto As = dmI->all_types(GamI, bound);
    size_t stride = As.size() / max_instances + 1;
    for (size_t k = 0; k < As.size(); k += stride) {
      const Val& A = As[k];
      Val uA = restrict_reedy_type(*envJ, *envI, u, uGam, GamI, A);
      Val e = dmJ->identity(dmJ->ext(uGam, uA));
      CosieveLift cl = cosieve_lift(envJ, envI, u, GamI, A, uA, e);
      bool ok =
          restrict_reedy_type(*envJ, *envI, u, uGam, GamI, cl.Bbar) == uA &&
          levelwise_equiv(*envI, GamI, cl.Bbar, A, cl.ebar).ok;
      out.fibration.add("equivalence-lift#" + std::to_string(k), ok);
      Val uBbar = restrict_reedy_type(*envJ, *envI, u, uGam, GamI, cl.Bbar);
      auto ss = dmJ->sections_of(uGam, uBbar);
      if (!ss.empty()) {
        try {
          Val sbar = cosieve_extend_section(envJ, envI, u, GamI, cl.Bbar,
                                            ss.front());
          bool sok = restrict_diagram_map(*envJ, *envI, u, sbar) == ss.front();
          out.fibration.add("path-lift#" + std::to_string(k), sok);
        } catch (const Error&) {
          // the complete search found no extension: the family is empty
          // somewhere outside the image, which no lift could repair
        }
      }
    }
  }

  auto Bs = dmJ->all_types(uGam, bound);
  size_t stride = Bs.size() / max_instances + 1;
  if (!h) {
    out.equivalence.entries.push_back({"equivalence", "indeterminate", Val()});
    out.trivial_fibration.entries.push_back(
        {"trivial-fibration", "indeterminate", Val()});
    return out;
  }

  for (size_t k = 0; k < Bs.size(); k += stride) {
    const Val& B = Bs[k];
    WeakLift wl = weak_lift_homotopy_equiv(envJ, envI, u, *h, GamI, B, bound);
    bool tok = equiv_valid(*mJ, wl.data);
    out.equivalence.add("weak-type-lift#" + std::to_string(k), tok);
    // weak term lifting: a section downstairs comes from one upstairs up to
    // homotopy through the comparison
    auto as = dmJ->sections_of(uGam, B);
    if (!as.empty()) {
      bool found = false;
      for (auto& ab : dmI->sections_of(GamI, wl.Abar)) {
        Val uab = restrict_diagram_map(*envJ, *envI, u, ab);
        Val cand = dmJ->compose(wl.comp, uab);
        if (find_homotopy(*mJ, uGam, tel_one(uGam, B), cand, as.front())) {
          found = true;
          break;
        }
      }
      out.equivalence.add("weak-term-lift#" + std::to_string(k), found);
    }

    if (u.injective) {
      // corollary route: the weak lift's quasi-inverse feeds the cosieve
      // construction, whose output restricts on the nose
      CosieveLift cl =
          cosieve_lift(envJ, envI, u, GamI, wl.Abar, B, wl.data.g);
      bool sok =
          restrict_reedy_type(*envJ, *envI, u, uGam, GamI, cl.Bbar) == B;
      out.trivial_fibration.add("strict-type-lift#" + std::to_string(k), sok);
      auto ss = dmJ->sections_of(uGam, B);
      if (!ss.empty()) {
        Val sb = cosieve_extend_section(envJ, envI, u, GamI, cl.Bbar,
                                        ss.front());
        out.trivial_fibration.add(
            "strict-term-lift#" + std::to_string(k),
            restrict_diagram_map(*envJ, *envI, u, sb) == ss.front());
      }
    } else {
      out.trivial_fibration.entries.push_back(
          {"strict-type-lift#" + std::to_string(k), "indeterminate", Val()});
    }
  }
  return out;
}

}  // namespace cwa
