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

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qps/collineation.hpp"
#include "qps/error.hpp"
#include "qps/forms.hpp"
#include "qps/parallel.hpp"
#include "qps/pg.hpp"
#include "qps/spectra.hpp"
#include "qps/surgery.hpp"

namespace qps::census {

using forms::Family;
using forms::Form;
using forms::PolarKind;
using pg::Flat;
using pg::Frame;
using pg::PointIndex;
using pg::PointSet;
using pg::SpacePtr;

inline constexpr std::size_t kWitnessCap = 10;
inline constexpr std::uint64_t kMaxForms = std::uint64_t{1} << 24;

struct CensusResult {
  CensusResult() = default;
  CensusResult(std::string n, int m_, int q_) : name(std::move(n)), m(m_), q(q_) {}

  std::string name;
  int m = 0;
  int q = 0;
  std::int64_t total_candidates = 0;
  std::map<std::string, std::int64_t> breakdown;
  std::map<std::string, std::vector<PointSet>> witnesses;
  std::vector<std::pair<std::string, std::int64_t>> facts;
  double runtime_ms = 0;

  void tally(const std::string& label, const PointSet* witness = nullptr) {
    ++total_candidates;
    ++breakdown[label];
    if (witness) {
      auto& w = witnesses[label];
      if (w.size() < kWitnessCap) w.push_back(*witness);
    }
  }
  std::int64_t count(const std::string& label) const {
    auto it = breakdown.find(label);
    return it == breakdown.end() ? 0 : it->second;
  }
  std::optional<std::int64_t> fact(const std::string& key) const {
    for (const auto& [k, v] : facts)
      if (k == key) return v;
    return std::nullopt;
  }
};

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

namespace detail {

// Splits [0, n) into a fixed number of chunks and concatenates per-chunk
// outputs in order.
template <class T, class F>
std::vector<T> chunked(std::uint64_t n, F&& body) {
  const std::size_t chunks = 64;
  std::vector<std::vector<T>> parts(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    std::uint64_t lo = n * c / chunks, hi = n * (c + 1) / chunks;
    body(lo, hi, parts[c]);
  });
  std::vector<T> out;
  for (auto& p : parts) out.insert(out.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
  return out;
}

inline void sort_unique(std::vector<Bitset>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

inline std::vector<Bitset> quadratic_sets(const SpacePtr& sp, Family family) {
  const auto& f = sp->field();
  const int d = static_cast<int>(sp->dim());
  const int k = d * (d + 1) / 2;
  std::uint64_t total = 1;
  for (int i = 0; i < k; ++i) {
    total *= static_cast<std::uint64_t>(f.q());
    if (total > kMaxForms) throw Error(Errc::SpaceTooLarge, "too many quadratic forms to enumerate");
  }
  const PolarKind kind{family, sp->m(), f.q()};
  const std::size_t target = static_cast<std::size_t>(spectra::polar_size(family, sp->m(), f.q()));
  const std::size_t n = sp->num_points();
  std::vector<std::pair<int, int>> mono;
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) mono.push_back({i, j});
  std::vector<gf::Elem> mval(n * k);
  for (PointIndex p = 0; p < n; ++p) {
    auto x = sp->point(p);
    for (int t = 0; t < k; ++t) mval[p * k + t] = f.mul(x[mono[t].first], x[mono[t].second]);
  }
  const int q = f.q();
  auto out = chunked<Bitset>(total, [&](std::uint64_t lo, std::uint64_t hi, std::vector<Bitset>& found) {
    std::vector<gf::Elem> c(k);
    for (std::uint64_t idx = lo; idx < hi; ++idx) {
      std::uint64_t rest = idx;
      for (int t = k - 1; t >= 0; --t) {
        c[t] = static_cast<gf::Elem>(rest % q);
        rest /= q;
      }
      int lead = 0;
      while (lead < k && c[lead] == 0) ++lead;
      if (lead == k || c[lead] != 1) continue;
      Bitset zeros(n);
      std::size_t count = 0;
      bool over = false;
      for (PointIndex p = 0; p < n && !over; ++p) {
        gf::Elem v = 0;
        const gf::Elem* mv = &mval[p * k];
        for (int t = 0; t < k; ++t)
          if (c[t]) v = f.add(v, f.mul(c[t], mv[t]));
        if (v == 0) {
          zeros.set(p);
          over = ++count > target;
        }
      }
      if (count != target) continue;
      la::Mat coeffs(d, la::Vec(d, 0));
      for (int t = 0; t < k; ++t) coeffs[mono[t].first][mono[t].second] = c[t];
      Form form(sp, kind, std::move(coeffs));
      if (form.nondegenerate()) found.push_back(std::move(zeros));
    }
  });
  sort_unique(out);
  return out;
}

inline std::vector<Bitset> hermitian_sets(const SpacePtr& sp) {
  const auto& f = sp->field();
  if (!f.has_conj()) throw Error(Errc::IncompatibleKind, "hermitian forms need a square order");
  const int d = static_cast<int>(sp->dim());
  std::vector<gf::Elem> fixed;
  for (int a = 0; a < f.q(); ++a)
    if (f.conj(static_cast<gf::Elem>(a)) == a) fixed.push_back(static_cast<gf::Elem>(a));
  const int off = d * (d - 1) / 2;
  std::uint64_t total = 1;
  for (int i = 0; i < d; ++i) total *= fixed.size();
  for (int i = 0; i < off; ++i) {
    total *= static_cast<std::uint64_t>(f.q());
    if (total > kMaxForms) throw Error(Errc::SpaceTooLarge, "too many hermitian forms to enumerate");
  }
  const PolarKind kind{Family::hermitian, sp->m(), f.q()};
  const std::size_t target = static_cast<std::size_t>(spectra::polar_size(Family::hermitian, sp->m(), f.q()));
  auto out = chunked<Bitset>(total, [&](std::uint64_t lo, std::uint64_t hi, std::vector<Bitset>& found) {
    for (std::uint64_t idx = lo; idx < hi; ++idx) {
      std::uint64_t rest = idx;
      la::Mat a(d, la::Vec(d, 0));
      for (int i = 0; i < d; ++i) {
        a[i][i] = fixed[rest % fixed.size()];
        rest /= fixed.size();
      }
      for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
          a[i][j] = static_cast<gf::Elem>(rest % f.q());
          a[j][i] = f.conj(a[i][j]);
          rest /= f.q();
        }
      if (!la::invertible(f, a)) continue;
      Form form(sp, kind, std::move(a));
      PointSet zeros = forms::point_set(form);
      if (zeros.size() == target) found.push_back(zeros.bits());
    }
  });
  sort_unique(out);
  return out;
}

}  // namespace detail

// All non-degenerate point sets of the family in the space, sorted.
inline std::vector<PointSet> enumerate_quadrics(const SpacePtr& sp, Family family) {
  forms::check_compatible({family, sp->m(), sp->q()}, *sp);
  auto sets = family == Family::hermitian ? detail::hermitian_sets(sp) : detail::quadratic_sets(sp, family);
  std::vector<PointSet> out;
  out.reserve(sets.size());
  for (auto& b : sets) out.emplace_back(sp, std::move(b));
  return out;
}

inline CensusResult quadrics_census(const SpacePtr& sp, Family family) {
  Stopwatch sw;
  CensusResult r{"quadrics", sp->m(), sp->q()};
  for (const auto& s : enumerate_quadrics(sp, family)) r.tally(std::string(forms::family_name(family)), &s);
  r.runtime_ms = sw.ms();
  return r;
}

// Section types of the non-singular hyperplanes, each with its lowest hyperplane.
inline std::vector<std::pair<spectra::HyperplaneType, std::vector<PointIndex>>> nonsingular_hyperplanes(
    const PointSet& s, const PolarKind& kind) {
  auto prof = spectra::profile(kind);
  auto spec = spectra::spectrum(s);
  std::map<spectra::HyperplaneType, std::vector<PointIndex>> by;
  for (PointIndex h = 0; h < spec.per_hyperplane.size(); ++h) {
    auto t = prof.type_of(spec.per_hyperplane[h]);
    if (t != spectra::HyperplaneType::singular && t != spectra::HyperplaneType::inadmissible) by[t].push_back(h);
  }
  return {by.begin(), by.end()};
}

inline Family section_family(const PolarKind& kind, spectra::HyperplaneType t) {
  switch (kind.family) {
    case Family::parabolic: return t == spectra::HyperplaneType::elliptic ? Family::elliptic : Family::hyperbolic;
    case Family::hermitian: return Family::hermitian;
    default: return Family::parabolic;
  }
}

inline CensusResult nucleus_pivot_census(const Form& form) {
  Stopwatch sw;
  const auto& sp = form.space_ptr();
  const auto& kind = form.kind();
  if (kind.family != Family::parabolic || kind.q != 2) throw Error(Errc::NotQ2, "census needs Q(2n,2)");
  CensusResult r{"nucleus-pivot", kind.m, kind.q};
  PointSet s = forms::point_set(form);
  auto local = pg::cached_space(kind.m - 1, 2);
  bool independent = true;
  std::int64_t checked = 0;
  for (const auto& [type, hyperplanes] : nonsingular_hyperplanes(s, kind)) {
    Family fam = section_family(kind, type);
    auto candidates = enumerate_quadrics(local, fam);
    std::string label(forms::family_name(fam));
    std::optional<std::int64_t> reference;
    for (std::size_t hi = 0; hi < hyperplanes.size(); ++hi) {
      PointIndex pi = hyperplanes[hi];
      Frame fr(Flat::of_hyperplane(sp, pi));
      std::vector<PointSet> results(candidates.size(), PointSet(sp));
      std::vector<char> has(candidates.size());
      parallel_for(candidates.size(), [&](std::size_t i) {
        results[i] = surgery::nonsingular_switch_q2(s, pi, fr.push(candidates[i])).result;
        has[i] = spectra::find_line_nucleus(results[i]).has_value();
      });
      std::int64_t without = std::count(has.begin(), has.end(), 0);
      ++checked;
      if (!reference) {
        reference = without;
        for (std::size_t i = 0; i < candidates.size(); ++i)
          r.tally(label + (has[i] ? ":nucleus" : ":no_nucleus"), &results[i]);
      } else if (*reference != without) {
        independent = false;
      }
    }
  }
  r.facts = {{"hyperplanes_checked", checked}, {"independent_of_hyperplane", independent ? 1 : 0}};
  r.runtime_ms = sw.ms();
  return r;
}

inline bool is_arc(const PointSet& s, const Flat& plane) {
  const auto& sp = s.space();
  auto pts = s.indices();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      std::vector<PointIndex> line;
      sp.line_points(pts[i], pts[j], line);
      int c = 0;
      for (auto x : line) c += s.contains(x);
      if (c > 2) return false;
    }
  for (auto p : pts)
    if (!plane.contains(p)) return false;
  return true;
}

struct ShapeContext {
  SpacePtr space;
  PointIndex pi;
  PointIndex p;
  PointIndex n;
  Flat mu_p;  // plane of pi avoiding P
  Flat mu_n;  // plane of pi avoiding N
  PointSet pi_points;
};

inline ShapeContext shape_context(const PointSet& s, PointIndex pi, PointIndex p, PointIndex n) {
  const auto& sp = s.space_ptr();
  auto hp = surgery::lowest_hyperplane(*sp, pi, {}, {p});
  auto hn = surgery::lowest_hyperplane(*sp, pi, {}, {n});
  return {sp, pi, p, n, surgery::meet_hyperplanes(sp, pi, *hp), surgery::meet_hyperplanes(sp, pi, *hn),
          PointSet(sp, sp->hyperplane_points(pi))};
}

inline PointSet truncated_cone(PointIndex v, const PointSet& base) {
  PointSet c = forms::point_cone(v, base);
  c.erase(v);
  return c;
}

namespace detail {

inline bool shape_cone(const ShapeContext& c, const PointSet& sec, PointIndex v, const Flat& mu) {
  if (!sec.contains(v)) return false;
  PointSet base = sec & mu.points();
  return static_cast<int>(base.size()) == c.space->q() + 1 && is_arc(base, mu) && forms::point_cone(v, base) == sec;
}

inline bool shape_trunc_line(const ShapeContext& c, const PointSet& sec, PointIndex v, PointIndex w, const Flat& mu) {
  if (sec.contains(v) || !sec.contains(w)) return false;
  const auto& sp = *c.space;
  std::set<Bitset> tried;
  for (auto x : sec.indices()) {
    if (x == w) continue;
    PointSet line = pg::line_through(c.space, w, x);
    if (line.contains(v) || !line.is_subset_of(sec) || !tried.insert(line.bits()).second) continue;
    PointSet rest = sec - line;
    PointSet base = rest & mu.points();
    if (static_cast<int>(base.size()) != sp.q() || !is_arc(base, mu)) continue;
    PointSet tc = truncated_cone(v, base);
    if (tc == rest && !tc.bits().intersects(line.bits())) return true;
  }
  return false;
}

}  // namespace detail

inline const std::vector<std::string>& shape_names() {
  static const std::vector<std::string> names = {"cone_P", "cone_N", "truncP_lineN", "truncN_lineP"};
  return names;
}

// The four section shapes a switched singular section can take, tested in order.
inline std::vector<std::string> q4_shape_classify(const ShapeContext& c, const PointSet& sec) {
  std::vector<std::string> out;
  if (detail::shape_cone(c, sec, c.p, c.mu_p)) out.push_back("cone_P");
  if (detail::shape_cone(c, sec, c.n, c.mu_n)) out.push_back("cone_N");
  if (detail::shape_trunc_line(c, sec, c.p, c.n, c.mu_p)) out.push_back("truncP_lineN");
  if (detail::shape_trunc_line(c, sec, c.n, c.p, c.mu_n)) out.push_back("truncN_lineP");
  return out;
}

namespace detail {

inline void subsets(const std::vector<PointIndex>& pool, std::size_t k, std::size_t start,
                    std::vector<PointIndex>& cur, std::vector<std::vector<PointIndex>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i + (k - cur.size()) <= pool.size(); ++i) {
    cur.push_back(pool[i]);
    subsets(pool, k, i + 1, cur, out);
    cur.pop_back();
  }
}

inline std::vector<PointSet> arcs_in(const SpacePtr& sp, const Flat& plane, std::size_t k) {
  std::vector<std::vector<PointIndex>> all;
  std::vector<PointIndex> cur;
  subsets(plane.point_list(), k, 0, cur, all);
  std::vector<PointSet> out;
  for (const auto& sub : all) {
    PointSet ps(sp, sub);
    if (is_arc(ps, plane)) out.push_back(ps);
  }
  return out;
}

inline std::vector<PointSet> lines_through_in(const ShapeContext& c, PointIndex w) {
  std::set<Bitset> seen;
  std::vector<PointSet> out;
  c.pi_points.bits().for_each([&](std::size_t x) {
    if (x == w) return;
    PointSet l = pg::line_through(c.space, w, static_cast<PointIndex>(x));
    if (seen.insert(l.bits()).second) out.push_back(l);
  });
  return out;
}

}  // namespace detail

// Direct construction of every section of the four shapes.
inline std::vector<PointSet> q4_shape_constructions(const ShapeContext& c) {
  const int q = c.space->q();
  std::set<Bitset> acc;
  for (auto [v, w, mu] : {std::tuple{c.p, c.n, c.mu_p}, std::tuple{c.n, c.p, c.mu_n}}) {
    for (const auto& oval : detail::arcs_in(c.space, mu, q + 1)) acc.insert(forms::point_cone(v, oval).bits());
    auto lines = detail::lines_through_in(c, w);
    for (const auto& arc : detail::arcs_in(c.space, mu, q)) {
      PointSet tc = truncated_cone(v, arc);
      for (const auto& l : lines) {
        if (l.contains(v) || tc.bits().intersects(l.bits())) continue;
        acc.insert((tc | l).bits());
      }
    }
  }
  std::vector<PointSet> out;
  for (const auto& b : acc) out.emplace_back(c.space, b);
  return out;
}

// Union of truncated lines through P or N plus all of PN or exactly one of P, N.
inline bool conelike(const ShapeContext& c, const PointSet& sec) {
  PointSet pn = pg::line_through(c.space, c.p, c.n);
  PointSet on = sec & pn;
  bool parity = on == pn || (on.size() == 1 && (on.contains(c.p) || on.contains(c.n)));
  if (!parity) return false;
  const auto& sp = *c.space;
  std::vector<PointIndex> line;
  bool ok = true;
  (sec - pn).bits().for_each([&](std::size_t x) {
    if (!ok) return;
    bool covered = false;
    for (auto v : {c.p, c.n}) {
      sp.line_points(v, static_cast<PointIndex>(x), line);
      bool all = true;
      for (auto y : line) all = all && (y == v || sec.contains(y));
      covered = covered || all;
    }
    ok = covered;
  });
  return ok;
}

inline CensusResult singular_switch_census(const Form& form, std::optional<PointIndex> pi_opt = std::nullopt) {
  Stopwatch sw;
  const auto& sp = form.space_ptr();
  const auto& kind = form.kind();
  if (kind.family != Family::parabolic || kind.m != 4 || kind.q != 2)
    throw Error(Errc::IncompatibleKind, "census needs Q(4,2)");
  CensusResult r{"singular-switch", 4, 2};
  PointSet s = forms::point_set(form);
  PointIndex n = forms::nucleus_point(form);
  PointIndex pi = pi_opt ? *pi_opt : forms::perp(form, s.indices().front());
  auto prof = spectra::profile(kind);
  if (static_cast<std::int64_t>(surgery::section(s, pi).size()) != prof.singular_size)
    throw Error(Errc::NotSingular, "hyperplane is not singular");
  auto dec = surgery::decompose_section(s, pi);
  auto ctx = shape_context(s, pi, dec.vertex, n);
  PointSet outside = s - ctx.pi_points;

  std::vector<std::vector<PointIndex>> all;
  std::vector<PointIndex> cur;
  detail::subsets(ctx.pi_points.indices(), static_cast<std::size_t>(prof.singular_size), 0, cur, all);
  std::vector<char> quasi(all.size());
  parallel_for(all.size(), [&](std::size_t i) {
    quasi[i] = spectra::is_quasi_polar(outside | PointSet(sp, all[i]), prof);
  });

  std::set<Bitset> survivors;
  std::int64_t overlap = 0, conelike_ok = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    PointSet sec(sp, all[i]);
    if (!quasi[i]) {
      r.tally("not_quasi");
      continue;
    }
    survivors.insert(sec.bits());
    auto shapes = q4_shape_classify(ctx, sec);
    if (shapes.size() > 1) ++overlap;
    conelike_ok += conelike(ctx, sec);
    r.tally(shapes.empty() ? "unmatched" : shapes.front(), &sec);
  }
  std::set<Bitset> built;
  for (const auto& x : q4_shape_constructions(ctx)) built.insert(x.bits());
  r.facts = {{"survivors", static_cast<std::int64_t>(survivors.size())},
             {"constructed", static_cast<std::int64_t>(built.size())},
             {"agree", survivors == built ? 1 : 0},
             {"multi_shape", overlap},
             {"conelike", conelike_ok}};
  r.runtime_ms = sw.ms();
  return r;
}

inline std::map<std::string, std::int64_t> classical_distribution(const Form& form, const Flat& flat) {
  if (flat.dim() != form.space().m() - 2) throw Error(Errc::InvalidArgument, "flat must have codimension 2");
  PointSet s = forms::point_set(form);
  auto prof = spectra::profile(form.kind());
  std::map<std::string, std::int64_t> out;
  for (auto h : pg::hyperplanes_containing(flat))
    ++out[std::string(spectra::type_name(prof.type_of(static_cast<std::int64_t>(surgery::section(s, h).size()))))];
  return out;
}

inline std::string dist_key(const std::map<std::string, std::int64_t>& d) {
  std::string k;
  for (const auto& [t, c] : d) k += (k.empty() ? "" : ",") + t + "=" + std::to_string(c);
  return k;
}

// Checks the hyperplane-type distribution through every codimension-2 flat of
// every singular hyperplane against the expected case table.
inline CensusResult classical_distribution_census(const Form& form) {
  Stopwatch sw;
  const auto& sp = form.space_ptr();
  const auto& kind = form.kind();
  CensusResult r{"classical-dist", kind.m, kind.q};
  PointSet s = forms::point_set(form);
  auto prof = spectra::profile(kind);
  auto spec = spectra::spectrum(s);
  const bool even_parabolic = kind.family == Family::parabolic && kind.q % 2 == 0;
  std::optional<PointIndex> nucleus;
  if (even_parabolic) nucleus = forms::nucleus_point(form);
  const std::int64_t q = kind.q;
  std::int64_t violations = 0;
  std::optional<spectra::SpectrumProfile> base_prof;
  if (kind.m - 2 >= 1) {
    try {
      base_prof = spectra::profile({kind.family, kind.m - 2, kind.q});
    } catch (const Error&) {
    }
  }

  for (const auto& e : sp->codim2()) {
    for (auto pi : e.hyperplanes) {
      if (spec.per_hyperplane[pi] != prof.singular_size) continue;
      auto dec = surgery::decompose_section(s, pi);
      Flat nu = Flat::of_equations(sp, {la::Vec(sp->hyperplane(e.h1).begin(), sp->hyperplane(e.h1).end()),
                                        la::Vec(sp->hyperplane(e.h2).begin(), sp->hyperplane(e.h2).end())});
      std::map<std::string, std::int64_t> others;
      for (auto h : e.hyperplanes)
        if (h != pi) ++others[std::string(spectra::type_name(prof.type_of(spec.per_hyperplane[h])))];
      std::map<std::string, std::int64_t> all = others;
      ++all["singular"];
      std::string kase;
      bool ok = true;
      if (nu.contains(dec.vertex)) {
        kase = "through_vertex";
        ok = others.size() == 1;
        if (ok && base_prof) {
          PointSet cut = dec.base & nu.points();
          auto t = base_prof->type_of(static_cast<std::int64_t>(cut.size()));
          ok = others.begin()->first == spectra::type_name(t);
        }
      } else if (even_parabolic) {
        if (nu.contains(*nucleus)) {
          kase = "avoids_vertex_contains_nucleus";
        } else {
          kase = "avoids_vertex_avoids_nucleus";
          ok = all["elliptic"] == q / 2 && all["hyperbolic"] == q / 2;
        }
      } else if (kind.family == Family::hermitian) {
        kase = "avoids_vertex";
        std::int64_t rq = forms::isqrt(kind.q);
        ok = others["singular"] == rq && others["nonsingular"] == q - rq;
      } else {
        kase = "avoids_vertex";
        std::int64_t nonsing = all["nonsingular"] + all["elliptic"] + all["hyperbolic"];
        ok = all["singular"] == 2 && nonsing == q - 1;
        if (ok && kind.family == Family::parabolic)
          ok = all["elliptic"] == (q - 1) / 2 && all["hyperbolic"] == (q - 1) / 2;
      }
      violations += !ok;
      r.tally(kase + "|" + dist_key(others));
    }
  }
  r.facts = {{"violations", violations}};
  r.runtime_ms = sw.ms();
  return r;
}

inline std::int64_t two_secant_count(const Form& form, PointIndex p) {
  const auto& sp = form.space();
  pg::check_index(sp, p);
  const auto& kind = form.kind();
  if (kind.family != Family::parabolic || kind.q % 2) throw Error(Errc::NotParabolicEven, "needs Q(2n,q) with q even");
  if (form.vanishes(p)) throw Error(Errc::PointOnQuadric, "point lies on the quadric");
  if (p == forms::nucleus_point(form)) throw Error(Errc::PointIsNucleus, "point is the nucleus");
  PointSet s = forms::point_set(form);
  Bitset seen(sp.num_points());
  std::vector<PointIndex> line;
  std::int64_t x = 0;
  for (PointIndex r = 0; r < sp.num_points(); ++r) {
    if (r == p || seen.test(r)) continue;
    sp.line_points(p, r, line);
    int c = 0;
    for (auto y : line) {
      seen.set(y);
      c += s.contains(y);
    }
    x += c == 2;
  }
  return x;
}

inline CensusResult two_secant_census(const Form& form) {
  Stopwatch sw;
  const auto& kind = form.kind();
  CensusResult r{"two-secants", kind.m, kind.q};
  PointIndex n = forms::nucleus_point(form);
  const auto& sp = form.space();
  std::vector<std::int64_t> x(sp.num_points(), -1);
  parallel_for(sp.num_points(), [&](std::size_t p) {
    auto pi = static_cast<PointIndex>(p);
    if (pi != n && !form.vanishes(pi)) x[p] = two_secant_count(form, pi);
  });
  for (auto v : x)
    if (v >= 0) r.tally("X=" + std::to_string(v));
  r.runtime_ms = sw.ms();
  return r;
}

// Replaces the section of the lowest non-singular hyperplane of each type by
// every same-type polar space of the hyperplane.
inline CensusResult nonsingular_switch_census(const Form& form) {
  Stopwatch sw;
  const auto& sp = form.space_ptr();
  const auto& kind = form.kind();
  CensusResult r{"nonsingular-switch", kind.m, kind.q};
  PointSet s = forms::point_set(form);
  auto prof = spectra::profile(kind);
  auto local = pg::cached_space(kind.m - 1, kind.q);
  for (const auto& [type, hyperplanes] : nonsingular_hyperplanes(s, kind)) {
    PointIndex pi = hyperplanes.front();
    Family fam = section_family(kind, type);
    Frame fr(Flat::of_hyperplane(sp, pi));
    PointSet old = surgery::section(s, pi);
    PointSet outside = s - old;
    auto candidates = enumerate_quadrics(local, fam);
    std::vector<PointSet> results(candidates.size(), PointSet(sp));
    std::vector<char> quasi(candidates.size()), same(candidates.size());
    parallel_for(candidates.size(), [&](std::size_t i) {
      PointSet sec = fr.push(candidates[i]);
      same[i] = sec == old;
      results[i] = outside | sec;
      quasi[i] = spectra::is_quasi_polar(results[i], prof);
    });
    std::string label(spectra::type_name(type));
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      std::string tag = same[i] ? (quasi[i] ? ":identity" : ":identity_not_quasi") : (quasi[i] ? ":quasi" : ":not_quasi");
      r.tally(label + tag, quasi[i] ? &results[i] : nullptr);
    }
  }
  r.runtime_ms = sw.ms();
  return r;
}

// Switching an oval of PG(2,q) in each line by every subset of that line.
inline CensusResult oval_switch_census(const SpacePtr& sp) {
  Stopwatch sw;
  if (sp->m() != 2) throw Error(Errc::IncompatibleKind, "oval census needs a plane");
  CensusResult r{"oval-switch", 2, sp->q()};
  auto ovals = enumerate_quadrics(sp, Family::parabolic);
  const std::size_t lines = sp->num_hyperplanes();
  const std::size_t per_line = std::size_t{1} << (sp->q() + 1);
  std::vector<std::string> labels(ovals.size() * lines * per_line);
  parallel_for(ovals.size(), [&](std::size_t oi) {
    const PointSet& o = ovals[oi];
    for (PointIndex l = 0; l < lines; ++l) {
      auto line = PointSet(sp, sp->hyperplane_points(l)).indices();
      PointSet outside = o - PointSet(sp, sp->hyperplane_points(l));
      PointSet on = surgery::section(o, l);
      // The unique point of the line on two tangents, for secant lines.
      std::optional<PointIndex> external;
      if (on.size() == 2) {
        for (auto x : line) {
          if (o.contains(x)) continue;
          int tangents = 0;
          for (PointIndex h = 0; h < lines; ++h)
            if (sp->incident(h, x) && o.meet_count(sp->hyperplane_points(h)) == 1) ++tangents;
          if (tangents == 2) external = x;
        }
      }
      for (std::size_t mask = 0; mask < per_line; ++mask) {
        PointSet t(sp);
        for (std::size_t b = 0; b < line.size(); ++b)
          if (mask >> b & 1) t.insert(line[b]);
        PointSet res = outside | t;
        std::string label;
        if (res == o) {
          label = "identity";
        } else if (!surgery::is_oval(res)) {
          label = "not_oval";
        } else {
          bool swap = external && t.size() == 2 && t.contains(*external) && (t & on).size() == 1;
          label = swap ? "external_swap" : "other_oval";
        }
        labels[(oi * lines + l) * per_line + mask] = label;
      }
    }
  });
  for (const auto& l : labels) r.tally(l);
  r.facts = {{"ovals", static_cast<std::int64_t>(ovals.size())}};
  r.runtime_ms = sw.ms();
  return r;
}

}  // namespace qps::census
