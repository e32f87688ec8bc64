// Copyright 2026 The qps Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qps/collineation.hpp"
#include "qps/error.hpp"
#include "qps/forms.hpp"
#include "qps/pg.hpp"
#include "qps/spectra.hpp"

namespace qps::surgery {

using forms::Family;
using forms::Form;
using forms::PolarKind;
using pg::Flat;
using pg::Frame;
using pg::PointIndex;
using pg::PointSet;
using pg::SpacePtr;

struct SurgeryRecord {
  std::string construction;
  std::optional<PointIndex> hyperplane;
  std::optional<PointIndex> vertex;
  std::vector<std::pair<std::string, Flat>> flats;
  PointSet removed;
  PointSet added;

  const Flat* flat(const std::string& name) const {
    for (const auto& [n, f] : flats)
      if (n == name) return &f;
    return nullptr;
  }
};

struct SurgeryResult {
  PointSet result;
  SurgeryRecord record;
};

inline PointSet section(const PointSet& s, PointIndex h) {
  return s & s.space().hyperplane_points(h);
}

inline std::string str(PointIndex p) { return std::to_string(p); }

inline SurgeryResult switch_set(const PointSet& s, PointIndex pi, const PointSet& removed,
                                const PointSet& added) {
  pg::check_index(s.space(), pi);
  const auto& hp = s.space().hyperplane_points(pi);
  if (!removed.is_subset_of(s)) throw Error(Errc::RemovedNotInSet, "removed points are not in the set");
  if (!removed.bits().is_subset_of(hp) || !added.bits().is_subset_of(hp))
    throw Error(Errc::SetsNotInHyperplane, "switched points must lie in the hyperplane");
  if (removed.bits().intersects(added.bits()))
    throw Error(Errc::InvalidArgument, "removed and added points overlap");
  SurgeryResult r{(s - removed) | added, {"switch", pi, std::nullopt, {}, removed, added}};
  return r;
}

// Lowest hyperplane other than `skip` containing all of `inside` and none of `outside`.
inline std::optional<PointIndex> lowest_hyperplane(const pg::ProjSpace& sp, PointIndex skip,
                                                   const std::vector<PointIndex>& inside,
                                                   const std::vector<PointIndex>& outside) {
  for (PointIndex h = 0; h < sp.num_hyperplanes(); ++h) {
    if (h == skip) continue;
    bool ok = true;
    for (auto p : inside) ok = ok && sp.incident(h, p);
    for (auto p : outside) ok = ok && !sp.incident(h, p);
    if (ok) return h;
  }
  return std::nullopt;
}

inline Flat meet_hyperplanes(const SpacePtr& sp, PointIndex a, PointIndex b) {
  auto va = sp->hyperplane(a), vb = sp->hyperplane(b);
  return Flat::of_equations(sp, {la::Vec(va.begin(), va.end()), la::Vec(vb.begin(), vb.end())});
}

struct ConeDecomposition {
  PointIndex vertex;
  Flat mu;
  PointSet base;
};

// Splits s ∩ pi as a point cone; mu is the lowest hyperplane of pi avoiding the vertex.
inline ConeDecomposition decompose_section(const PointSet& s, PointIndex pi) {
  const auto& sp = s.space_ptr();
  PointSet sec = section(s, pi);
  std::vector<PointIndex> vertices;
  sec.bits().for_each([&](std::size_t v) {
    if (forms::is_cone_vertex(sec, static_cast<PointIndex>(v))) vertices.push_back(static_cast<PointIndex>(v));
  });
  if (vertices.size() != 1) throw Error(Errc::NoConeDecomposition, "section has no unique cone vertex");
  PointIndex v = vertices[0];
  auto h = lowest_hyperplane(*sp, pi, {}, {v});
  if (!h) throw Error(Errc::NoConeDecomposition, "no base hyperplane");
  Flat mu = meet_hyperplanes(sp, pi, *h);
  PointSet base = sec & sp->hyperplane_points(*h);
  if (forms::point_cone(v, base) != sec) throw Error(Errc::NoConeDecomposition, "section is not a cone");
  return {v, mu, base};
}

// Classifies a set inside a flat as a polar space of the given family.
inline bool classifies_in(const Flat& carrier, const PointSet& set, Family family, bool need_classical) {
  if (carrier.dim() < 1) return set.empty();
  PolarKind k{family, carrier.dim(), carrier.space().q()};
  try {
    forms::validate_kind(k);
  } catch (const Error&) {
    return false;
  }
  Frame fr(carrier);
  PointSet local = fr.pull(set);
  if (fr.push(local) != set) return false;
  auto c = spectra::classify(local, k);
  if (!c.quasi_polar) return false;
  if (need_classical && (c.exceptional || static_cast<std::int64_t>(local.size()) != spectra::profile(k).cardinality))
    return false;
  return true;
}

inline SurgeryResult pivot(const PointSet& s, const PolarKind& kind, PointIndex pi, const PointSet& new_base) {
  forms::check_compatible(kind, s.space());
  pg::check_index(s.space(), pi);
  const auto& sp = s.space_ptr();
  auto prof = spectra::profile(kind);
  if (static_cast<std::int64_t>(section(s, pi).size()) != prof.singular_size)
    throw Error(Errc::NotSingular, "hyperplane " + str(pi) + " is not singular");
  auto dec = decompose_section(s, pi);
  Flat mu = dec.mu;
  if (!new_base.empty()) {
    auto h = lowest_hyperplane(*sp, pi, new_base.indices(), {dec.vertex});
    if (!h || !new_base.bits().is_subset_of(sp->hyperplane_points(pi)))
      throw Error(Errc::BaseWrongType, "new base is not in a hyperplane of pi avoiding the vertex");
    mu = meet_hyperplanes(sp, pi, *h);
  }
  if (!classifies_in(mu, new_base, kind.family, false))
    throw Error(Errc::BaseWrongType, "new base is not quasi-polar of the same type");
  PointSet removed = forms::point_cone(dec.vertex, dec.base);
  PointSet added = forms::point_cone(dec.vertex, new_base);
  SurgeryRecord rec{"pivot", pi, dec.vertex, {{"mu", mu}}, removed, added};
  return {(s - removed) | added, rec};
}

// Greedy flat of projective dimension k inside s, scanning points in index order.
inline std::optional<std::vector<PointIndex>> greedy_subspace(const PointSet& s, int k) {
  const auto& sp = s.space_ptr();
  std::vector<PointIndex> chosen;
  if (k < 0) return chosen;
  for (auto x : s.indices()) {
    if (static_cast<int>(chosen.size()) == k + 1) break;
    std::vector<PointIndex> trial = chosen;
    trial.push_back(x);
    Flat f = Flat::of_points(sp, trial);
    if (f.dim() + 1 != static_cast<int>(trial.size())) continue;
    if (f.points().is_subset_of(s)) chosen = std::move(trial);
  }
  if (static_cast<int>(chosen.size()) != k + 1) return std::nullopt;
  return chosen;
}

inline void require_even_parabolic(const pg::ProjSpace& sp) {
  if (sp.q() % 2) throw Error(Errc::NotEvenQ, "construction needs q even");
  if (sp.m() % 2 || sp.m() < 4) throw Error(Errc::IncompatibleKind, "construction needs PG(2n,q) with n >= 2");
}

inline PointIndex require_nucleus(const PointSet& s) {
  auto n = spectra::find_line_nucleus(s);
  if (!n) throw Error(Errc::NotQuasiPolar, "set has no nucleus");
  return *n;
}

struct NucleusFrame {
  ConeDecomposition dec;
  PointIndex nucleus;
  PointIndex mu_hyperplane;
  Flat mu;
  PointSet base;
};

// Singular hyperplane pi of a parabolic set with nucleus; base carrier through N.
inline NucleusFrame nucleus_frame(const PointSet& s, PointIndex pi) {
  const auto& sp = s.space_ptr();
  pg::check_index(*sp, pi);
  PolarKind kind{Family::parabolic, sp->m(), sp->q()};
  if (static_cast<std::int64_t>(section(s, pi).size()) != spectra::profile(kind).singular_size)
    throw Error(Errc::NotSingular, "hyperplane " + str(pi) + " is not singular");
  PointIndex n = require_nucleus(s);
  if (!sp->incident(pi, n)) throw Error(Errc::NotSingular, "singular hyperplane misses the nucleus");
  auto dec = decompose_section(s, pi);
  auto h = lowest_hyperplane(*sp, pi, {n}, {dec.vertex});
  if (!h) throw Error(Errc::NoConeDecomposition, "no base hyperplane through the nucleus");
  Flat mu = meet_hyperplanes(sp, pi, *h);
  PointSet base = section(s, pi) & sp->hyperplane_points(*h);
  return {dec, n, *h, mu, base};
}

inline SurgeryResult cone_swap(const PointSet& s, PointIndex pi) {
  const auto& sp = s.space_ptr();
  require_even_parabolic(*sp);
  auto nf = nucleus_frame(s, pi);
  const int n = sp->m() / 2;
  auto gen = greedy_subspace(nf.base, n - 2);
  if (!gen) throw Error(Errc::NoDisjointFlat, "base contains no flat of dimension n-2");
  Flat nu_p = Flat::of_points(sp, *gen);
  Flat t = nu_p.join(nf.nucleus);
  if ((t.points() & nf.base) != nu_p.points())
    throw Error(Errc::NoDisjointFlat, "tangent space meets the base outside nu_P");
  std::optional<Flat> nu_n;
  Frame tf(t);
  for (PointIndex h = 0; h < tf.local()->num_hyperplanes() && !nu_n; ++h) {
    Flat cand = tf.push(Flat::of_hyperplane(tf.local(), h));
    if (cand.contains(nf.nucleus) || cand == nu_p) continue;
    nu_n = cand;
  }
  if (!nu_n) throw Error(Errc::NoDisjointFlat, "no replacement flat");
  PointSet removed = nu_p.join(nf.dec.vertex).points();
  PointSet added = nu_n->join(nf.nucleus).points();
  SurgeryRecord rec{"cone_swap", pi, nf.dec.vertex,
                    {{"mu", nf.mu}, {"nu_P", nu_p}, {"nu_N", *nu_n}, {"tangent", t}}, removed, added};
  return {(s - removed) | added, rec};
}

inline SurgeryResult shifted_nucleus_pivot(const PointSet& s, PointIndex pi) {
  const auto& sp = s.space_ptr();
  require_even_parabolic(*sp);
  auto nf = nucleus_frame(s, pi);
  Frame fr(nf.mu);
  PointIndex n_local = *fr.to_local(nf.nucleus);
  PointSet base_local = fr.pull(nf.base);
  for (const auto& g : pg::elementary_generators(sp->field(), fr.local()->dim())) {
    if (pg::apply_matrix(g, *fr.local(), n_local) == n_local) continue;
    PointSet new_base = fr.push(pg::apply_matrix(g, base_local));
    auto r = pivot(s, {Family::parabolic, sp->m(), sp->q()}, pi, new_base);
    r.record.construction = "shifted_nucleus_pivot";
    r.record.flats = {{"mu", nf.mu}};
    return r;
  }
  throw std::logic_error("no collineation moves the nucleus");
}

struct BaseSlot {
  PointIndex point;
  PointIndex perp;
  Flat sigma;
  Flat axis;
  PointSet base;
};

// For each point R of the line pr: R^perp ∩ s = R·base with base in sigma.
inline std::vector<BaseSlot> repeated_pivot_slots(const Form& form, PointIndex p, PointIndex r) {
  const auto& sp = form.space_ptr();
  pg::check_index(*sp, p);
  pg::check_index(*sp, r);
  PointSet s = forms::point_set(form);
  if (p == r || !s.contains(p) || !s.contains(r)) throw Error(Errc::NotCollinear, "p and r must be distinct points of s");
  PointSet line = pg::line_through(sp, p, r);
  if (!line.is_subset_of(s)) throw Error(Errc::NotCollinear, "the line pr is not contained in s");
  Flat xi = meet_hyperplanes(sp, forms::perp(form, p), forms::perp(form, r));
  std::vector<BaseSlot> slots;
  for (auto x : line.indices()) {
    PointIndex hx = forms::perp(form, x);
    auto h = lowest_hyperplane(*sp, hx, {}, {x});
    Flat sigma = meet_hyperplanes(sp, hx, *h);
    PointSet base = section(s, hx) & sp->hyperplane_points(*h);
    slots.push_back({x, hx, sigma, sigma.meet(xi), base});
  }
  return slots;
}

// Images of a slot's base, other than the base, under collineations of sigma
// fixing its axis pointwise.
inline std::vector<PointSet> axis_fixing_bases(const BaseSlot& slot, std::size_t limit) {
  Frame fr(slot.sigma, pg::adapted_basis(slot.sigma, slot.axis));
  auto gens = pg::elementary_generators(slot.sigma.space().field(), fr.local()->dim(),
                                        static_cast<std::size_t>(slot.axis.dim() + 1));
  std::vector<PointSet> out;
  for (const auto& img : pg::collineation_images(fr.pull(slot.base), gens, limit)) out.push_back(fr.push(img));
  return out;
}

inline SurgeryResult repeated_pivot(const Form& form, PointIndex p, PointIndex r,
                                    const std::map<PointIndex, PointSet>& base_choices) {
  const auto& sp = form.space_ptr();
  PointSet s = forms::point_set(form);
  auto slots = repeated_pivot_slots(form, p, r);
  Flat xi = meet_hyperplanes(sp, forms::perp(form, p), forms::perp(form, r));
  PointSet xi_pts = xi.points();
  PointSet result(sp);
  for (const auto& slot : slots) {
    PointSet base = slot.base;
    auto it = base_choices.find(slot.point);
    if (it != base_choices.end()) {
      base = it->second;
      auto h = lowest_hyperplane(*sp, slot.perp, base.indices(), {slot.point});
      if (!h || !base.bits().is_subset_of(sp->hyperplane_points(slot.perp)))
        throw Error(Errc::BaseWrongType, "base for " + str(slot.point) + " is not in a hyperplane of its perp");
      if (!classifies_in(meet_hyperplanes(sp, slot.perp, *h), base, form.kind().family, true))
        throw Error(Errc::BaseWrongType, "base for " + str(slot.point) + " has the wrong type");
    }
    PointSet c = forms::point_cone(slot.point, base);
    PointSet orig = section(s, slot.perp);
    if ((c & xi_pts) != (orig & xi_pts))
      throw Error(Errc::ConstraintViolated, "constraint fails at point " + str(slot.point));
    result |= c;
  }
  SurgeryRecord rec{"repeated_pivot", std::nullopt, std::nullopt,
                    {{"line", Flat::of_points(sp, std::vector<PointIndex>{p, r})}, {"xi", xi}},
                    s - result, result - s};
  return {result, rec};
}

inline SurgeryResult affine_switch(const PointSet& s) {
  const auto& sp = s.space_ptr();
  const int m = sp->m();
  if (sp->q() != 2 || m % 2 == 0 || m < 3) throw Error(Errc::NotQ2Hyperbolic, "needs a hyperbolic set over GF(2)");
  PolarKind kind{Family::hyperbolic, m, 2};
  if (static_cast<std::int64_t>(s.size()) != spectra::profile(kind).cardinality || !spectra::classify(s, kind).quasi_polar)
    throw Error(Errc::NotQ2Hyperbolic, "set is not a hyperbolic quasi-quadric of classical size");
  const int n = (m - 1) / 2;
  auto gen = greedy_subspace(s, n);
  if (!gen) throw Error(Errc::NotQ2Hyperbolic, "no generator found");
  Flat g = Flat::of_points(sp, *gen);
  Flat nu = Flat::of_points(sp, std::vector<PointIndex>(gen->begin(), gen->end() - 1));
  PointSet gp = g.points();
  std::optional<Flat> g2;
  for (auto x : (s - gp).indices()) {
    Flat cand = nu.join(x);
    if (cand.points().is_subset_of(s)) {
      g2 = cand;
      break;
    }
  }
  if (!g2) throw Error(Errc::NotQ2Hyperbolic, "no second generator through nu");
  PointSet g2p = g2->points();
  PointSet removed = (gp - g2p) | (g2p - gp);
  Flat span = g.join(*g2);
  auto hs = pg::hyperplanes_containing(span);
  SurgeryRecord rec{"affine_switch", hs.front(), std::nullopt,
                    {{"generator", g}, {"generator2", *g2}, {"nu", nu}}, removed, PointSet(sp)};
  return {s - removed, rec};
}

inline SurgeryResult nonsingular_switch_q2(const PointSet& s, PointIndex pi, const PointSet& new_section) {
  const auto& sp = s.space_ptr();
  pg::check_index(*sp, pi);
  if (sp->q() != 2) throw Error(Errc::NotQ2, "construction needs q = 2");
  if (sp->m() % 2 || sp->m() < 2) throw Error(Errc::IncompatibleKind, "needs PG(2n,2)");
  PolarKind kind{Family::parabolic, sp->m(), 2};
  auto prof = spectra::profile(kind);
  PointSet old = section(s, pi);
  auto t = prof.type_of(static_cast<std::int64_t>(old.size()));
  if (t == spectra::HyperplaneType::singular) throw Error(Errc::SingularHyperplane, "hyperplane is singular");
  if (t == spectra::HyperplaneType::inadmissible) throw Error(Errc::NotQuasiPolar, "section size is not admissible");
  if (!new_section.bits().is_subset_of(sp->hyperplane_points(pi)))
    throw Error(Errc::SetsNotInHyperplane, "new section is not inside the hyperplane");
  Family eps = t == spectra::HyperplaneType::elliptic ? Family::elliptic : Family::hyperbolic;
  if (!classifies_in(Flat::of_hyperplane(sp, pi), new_section, eps, true))
    throw Error(Errc::SectionWrongType, "new section has the wrong type");
  SurgeryRecord rec{"nonsingular_switch_q2", pi, std::nullopt, {}, old, new_section};
  return {(s - old) | new_section, rec};
}

inline SurgeryResult internal_switch_q3(const Form& form, PointIndex xi, const Flat& pi_sub) {
  const auto& sp = form.space_ptr();
  pg::check_index(*sp, xi);
  if (form.kind().family != Family::parabolic || sp->q() != 3) throw Error(Errc::NotQ3, "needs a parabolic quadric over GF(3)");
  const int m = sp->m();
  PointSet s = forms::point_set(form);
  auto prof = spectra::profile(form.kind());
  PointSet sec = section(s, xi);
  auto t = prof.type_of(static_cast<std::int64_t>(sec.size()));
  if (t != spectra::HyperplaneType::elliptic && t != spectra::HyperplaneType::hyperbolic)
    throw Error(Errc::BadHyperplanes, "xi is not a non-singular hyperplane");
  Family eps = t == spectra::HyperplaneType::elliptic ? Family::elliptic : Family::hyperbolic;
  Flat xi_flat = Flat::of_hyperplane(sp, xi);
  if (pi_sub.space_ptr() != sp || pi_sub.dim() != m - 2 || !xi_flat.contains(pi_sub))
    throw Error(Errc::BadHyperplanes, "pi_sub is not a hyperplane of xi");
  PointSet pi_pts = pi_sub.points();
  if (static_cast<std::int64_t>((sec & pi_pts).size()) != spectra::cone_size(eps, m - 3, 3))
    throw Error(Errc::BadHyperplanes, "pi_sub is not singular for the section");
  PointSet removed = sec - pi_pts;
  PointSet added(sp);
  // Points whose polar hyperplane has the type of xi: internal for elliptic xi,
  // external for hyperbolic xi.
  auto wanted = eps == Family::elliptic ? forms::PointClass::internal : forms::PointClass::external;
  (xi_flat.points() - pi_pts).bits().for_each([&](std::size_t x) {
    auto p = static_cast<PointIndex>(x);
    if (forms::point_class(form, p) == wanted) added.insert(p);
  });
  SurgeryRecord rec{"internal_switch_q3", xi, std::nullopt, {{"pi_sub", pi_sub}}, removed, added};
  return {(s - removed) | added, rec};
}

// A line meeting s in exactly k points, as its two lowest points.
inline std::optional<std::pair<PointIndex, PointIndex>> k_secant_line(const PointSet& s, std::size_t k) {
  const auto& sp = s.space();
  auto pts = s.indices();
  std::vector<PointIndex> line;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      sp.line_points(pts[i], pts[j], line);
      std::size_t c = 0;
      for (auto x : line) c += s.contains(x);
      if (c == k) {
        std::sort(line.begin(), line.end());
        return std::make_pair(line[0], line[1]);
      }
    }
  return std::nullopt;
}

inline bool is_oval(const PointSet& s) {
  const auto& sp = s.space();
  if (sp.m() != 2 || static_cast<int>(s.size()) != sp.q() + 1) return false;
  for (PointIndex h = 0; h < sp.num_hyperplanes(); ++h)
    if (s.meet_count(sp.hyperplane_points(h)) > 2) return false;
  return true;
}

inline SurgeryResult oval_nucleus_swap(const PointSet& s, PointIndex tangent) {
  const auto& sp = s.space_ptr();
  pg::check_index(*sp, tangent);
  if (sp->m() != 2) throw Error(Errc::NotOval, "ovals live in planes");
  if (sp->q() % 2) throw Error(Errc::NotEvenQ, "oval nucleus needs q even");
  if (!is_oval(s)) throw Error(Errc::NotOval, "set is not an oval");
  PointSet on = section(s, tangent);
  if (on.size() != 1) throw Error(Errc::NotTangent, "line is not a tangent");
  PointIndex n = require_nucleus(s);
  PointSet added(sp);
  added.insert(n);
  SurgeryRecord rec{"oval_nucleus_swap", tangent, std::nullopt, {}, on, added};
  return {(s - on) | added, rec};
}

}  // namespace qps::surgery
