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

#include <gtest/gtest.h>

#include <map>
#include <set>

#include "qps/collineation.hpp"
#include "qps/forms.hpp"
#include "qps/spectra.hpp"
#include "qps/surgery.hpp"

namespace qps::surgery {
namespace {

using pg::cached_space;

Form canonical(const PolarKind& k) { return forms::canonical_form(k, cached_space(k.m, k.q)); }

// Hyperplane sizes recomputed point by point against the profile.
bool verifies(const PointSet& s, const PolarKind& k) {
  const auto& sp = s.space();
  auto prof = spectra::profile(k);
  for (PointIndex h = 0; h < sp.num_hyperplanes(); ++h) {
    std::int64_t c = 0;
    for (auto p : s.indices()) c += la::dot(sp.field(), sp.hyperplane(h), sp.point(p)) == 0;
    if (!prof.admissible(c)) return false;
  }
  return true;
}

template <class F>
Errc error_of(F&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::InvalidArgument;
}

// Collineation images of the base of pi inside its carrier, the first one being the base itself.
std::vector<PointSet> alternative_bases(const PointSet& s, PointIndex pi, std::size_t count) {
  auto dec = decompose_section(s, pi);
  Frame fr(dec.mu);
  auto gens = pg::elementary_generators(s.space().field(), fr.local()->dim());
  std::vector<PointSet> out{dec.base};
  for (const auto& img : pg::collineation_images(fr.pull(dec.base), gens, count)) out.push_back(fr.push(img));
  return out;
}

class Pivot : public ::testing::TestWithParam<PolarKind> {};

TEST_P(Pivot, NonIdentityBasesGiveQuasiPolarSpaces) {
  auto k = GetParam();
  auto form = canonical(k);
  auto s = forms::point_set(form);
  PointIndex pi = forms::perp(form, s.indices().front());
  auto bases = alternative_bases(s, pi, 3);
  ASSERT_EQ(bases.size(), 4u);
  std::set<Bitset> results;
  for (std::size_t i = 1; i < bases.size(); ++i) {
    auto r = pivot(s, k, pi, bases[i]);
    EXPECT_NE(r.result, s);
    EXPECT_EQ(r.result.size(), s.size());
    EXPECT_TRUE(verifies(r.result, k));
    EXPECT_EQ(r.record.vertex, s.indices().front());
    results.insert(r.result.bits());
  }
  EXPECT_EQ(results.size(), 3u);
  EXPECT_EQ(pivot(s, k, pi, bases[0]).result, s);
}

INSTANTIATE_TEST_SUITE_P(Kinds, Pivot,
                         ::testing::Values(PolarKind{Family::parabolic, 4, 2}, PolarKind{Family::parabolic, 4, 3},
                                           PolarKind{Family::hyperbolic, 5, 2}, PolarKind{Family::elliptic, 5, 2},
                                           PolarKind{Family::hermitian, 3, 4}, PolarKind{Family::hyperbolic, 3, 3}));

TEST(Pivot, Errors) {
  PolarKind k{Family::parabolic, 4, 3};
  auto form = canonical(k);
  auto s = forms::point_set(form);
  const auto& sp = form.space_ptr();
  PointIndex pi = forms::perp(form, s.indices().front());
  PointIndex other = 0;
  while (static_cast<std::int64_t>(section(s, other).size()) == spectra::profile(k).singular_size) ++other;
  auto base = decompose_section(s, pi).base;
  EXPECT_EQ(error_of([&] { pivot(s, k, other, base); }), Errc::NotSingular);
  auto line = base.indices();
  PointSet bad = pg::line_through(sp, line[0], line[1]);
  EXPECT_EQ(error_of([&] { pivot(s, k, pi, bad); }), Errc::BaseWrongType);
}

TEST(ConeSwap, GivesQuasiQuadricsThatAreNotPivots) {
  for (auto [m, q] : {std::pair{4, 2}, std::pair{4, 4}, std::pair{6, 2}}) {
    PolarKind k{Family::parabolic, m, q};
    auto form = canonical(k);
    auto s = forms::point_set(form);
    PointIndex pi = forms::perp(form, s.indices().front());
    auto r = cone_swap(s, pi);
    EXPECT_TRUE(verifies(r.result, k));
    EXPECT_EQ(r.result.size(), s.size());
    PointSet sec = section(r.result, pi);
    EXPECT_NE(sec, section(s, pi));
    // The old vertex is gone from the section and the nucleus is in.
    EXPECT_FALSE(sec.contains(*r.record.vertex));
    EXPECT_TRUE(sec.contains(forms::nucleus_point(form)));
    auto vertices = forms::cone_vertices(sec);
    if (q == 2 && m == 4) {
      // At q = 2 the section is a cone with vertex nu_N, a point other than P.
      ASSERT_EQ(vertices.size(), 1u);
      EXPECT_TRUE(r.record.flat("nu_N")->contains(vertices[0]));
      EXPECT_NE(vertices[0], *r.record.vertex);
    } else {
      EXPECT_TRUE(vertices.empty());
    }
  }
}

TEST(ShiftedNucleus, RemovesTheNucleus) {
  for (auto [m, q] : {std::pair{4, 2}, std::pair{4, 4}, std::pair{6, 2}}) {
    PolarKind k{Family::parabolic, m, q};
    auto form = canonical(k);
    auto s = forms::point_set(form);
    PointIndex pi = forms::perp(form, s.indices().front());
    auto r = shifted_nucleus_pivot(s, pi);
    EXPECT_TRUE(verifies(r.result, k));
    EXPECT_FALSE(spectra::find_line_nucleus(r.result).has_value());
    // Brute force: no point lies only on 1-secants.
    const auto& sp = r.result.space();
    std::vector<PointIndex> line;
    for (PointIndex n = 0; n < sp.num_points(); ++n) {
      if (r.result.contains(n)) continue;
      bool all_tangent = true;
      for (PointIndex x = 0; x < sp.num_points() && all_tangent; ++x) {
        if (x == n) continue;
        sp.line_points(n, x, line);
        std::size_t c = 0;
        for (auto y : line) c += r.result.contains(y);
        all_tangent = c == 1;
      }
      EXPECT_FALSE(all_tangent);
    }
  }
  auto odd = forms::point_set(canonical({Family::parabolic, 4, 3}));
  EXPECT_EQ(error_of([&] { shifted_nucleus_pivot(odd, 0); }), Errc::NotEvenQ);
}

TEST(RepeatedPivot, NonIdentityChoiceStaysQuasi) {
  for (auto k : {PolarKind{Family::hyperbolic, 5, 2}, PolarKind{Family::parabolic, 4, 2}}) {
    auto form = canonical(k);
    auto s = forms::point_set(form);
    PointIndex p = s.indices().front();
    PointIndex r = 0;
    for (auto x : s.indices())
      if (x != p && pg::line_through(form.space_ptr(), p, x).is_subset_of(s)) {
        r = x;
        break;
      }
    auto slots = repeated_pivot_slots(form, p, r);
    ASSERT_EQ(slots.size(), 3u);
    auto alts = axis_fixing_bases(slots[0], 1);
    ASSERT_EQ(alts.size(), 1u);
    auto res = repeated_pivot(form, p, r, {{slots[0].point, alts[0]}});
    EXPECT_NE(res.result, s);
    EXPECT_TRUE(verifies(res.result, k));
    EXPECT_EQ(repeated_pivot(form, p, r, {}).result, s);
  }
  auto form = canonical({Family::hyperbolic, 5, 2});
  auto s = forms::point_set(form);
  EXPECT_EQ(error_of([&] { repeated_pivot_slots(form, s.indices()[0], s.indices()[0]); }), Errc::NotCollinear);
}

TEST(AffineSwitch, HyperbolicToElliptic) {
  for (auto [m, size] : {std::pair{3, 5}, std::pair{5, 27}}) {
    auto s = forms::point_set(canonical({Family::hyperbolic, m, 2}));
    auto r = affine_switch(s);
    EXPECT_EQ(static_cast<int>(r.result.size()), size);
    EXPECT_TRUE(verifies(r.result, {Family::elliptic, m, 2}));
    EXPECT_TRUE(r.record.added.empty());
  }
  auto s3 = forms::point_set(canonical({Family::hyperbolic, 3, 3}));
  EXPECT_EQ(error_of([&] { affine_switch(s3); }), Errc::NotQ2Hyperbolic);
}

TEST(NonsingularSwitchQ2, CollineationImageSection) {
  PolarKind k{Family::parabolic, 4, 2};
  auto form = canonical(k);
  auto s = forms::point_set(form);
  const auto& sp = form.space_ptr();
  auto prof = spectra::profile(k);
  for (PointIndex pi = 0; pi < sp->num_hyperplanes(); ++pi) {
    auto t = prof.type_of(static_cast<std::int64_t>(section(s, pi).size()));
    if (t == spectra::HyperplaneType::singular) continue;
    Frame fr(Flat::of_hyperplane(sp, pi));
    auto gens = pg::elementary_generators(sp->field(), fr.local()->dim());
    auto imgs = pg::collineation_images(fr.pull(section(s, pi)), gens, 2);
    auto r = nonsingular_switch_q2(s, pi, fr.push(imgs[1]));
    EXPECT_TRUE(verifies(r.result, k));
  }
  PointIndex sing = forms::perp(form, s.indices().front());
  EXPECT_EQ(error_of([&] { nonsingular_switch_q2(s, sing, section(s, sing)); }), Errc::SingularHyperplane);
  PointIndex ns = 0;
  while (prof.type_of(static_cast<std::int64_t>(section(s, ns).size())) == spectra::HyperplaneType::singular) ++ns;
  auto wrong = section(s, ns);
  wrong.erase(wrong.indices().front());
  EXPECT_EQ(error_of([&] { nonsingular_switch_q2(s, ns, wrong); }), Errc::SectionWrongType);
}

TEST(InternalSwitchQ3, BothHyperplaneTypes) {
  PolarKind k{Family::parabolic, 4, 3};
  auto form = canonical(k);
  auto s = forms::point_set(form);
  const auto& sp = form.space_ptr();
  auto prof = spectra::profile(k);
  std::set<spectra::HyperplaneType> done;
  for (PointIndex xi = 0; xi < sp->num_hyperplanes() && done.size() < 2; ++xi) {
    auto t = prof.type_of(static_cast<std::int64_t>(section(s, xi).size()));
    if (t == spectra::HyperplaneType::singular || done.count(t)) continue;
    Family eps = t == spectra::HyperplaneType::elliptic ? Family::elliptic : Family::hyperbolic;
    for (PointIndex h = 0; h < sp->num_hyperplanes(); ++h) {
      if (h == xi) continue;
      Flat sub = meet_hyperplanes(sp, xi, h);
      if (static_cast<std::int64_t>((section(s, xi) & sub.points()).size()) != spectra::cone_size(eps, 1, 3)) continue;
      auto r = internal_switch_q3(form, xi, sub);
      EXPECT_EQ(r.result.size(), 40u);
      EXPECT_EQ(r.record.added.size(), 9u);
      EXPECT_TRUE(verifies(r.result, k));
      EXPECT_TRUE(k_secant_line(r.result, 3).has_value());
      EXPECT_FALSE(k_secant_line(s, 3).has_value());
      done.insert(t);
      break;
    }
  }
  EXPECT_EQ(done.size(), 2u);
  auto form2 = canonical({Family::parabolic, 4, 2});
  EXPECT_EQ(error_of([&] { internal_switch_q3(form2, 0, Flat()); }), Errc::NotQ3);
}

TEST(OvalSwap, TangentPointForNucleus) {
  auto sp = cached_space(2, 4);
  auto s = forms::point_set(canonical({Family::parabolic, 2, 4}));
  PointIndex tangent = 0;
  while (s.meet_count(sp->hyperplane_points(tangent)) != 1) ++tangent;
  auto r = oval_nucleus_swap(s, tangent);
  EXPECT_TRUE(is_oval(r.result));
  EXPECT_NE(r.result, s);
  EXPECT_EQ((r.result - s).indices(), std::vector<PointIndex>{*spectra::find_line_nucleus(s)});
  PointIndex secant = 0;
  while (s.meet_count(sp->hyperplane_points(secant)) != 2) ++secant;
  EXPECT_EQ(error_of([&] { oval_nucleus_swap(s, secant); }), Errc::NotTangent);
  auto odd = forms::point_set(canonical({Family::parabolic, 2, 3}));
  EXPECT_EQ(error_of([&] { oval_nucleus_swap(odd, 0); }), Errc::NotEvenQ);
}

TEST(Plane, BaerSubplaneMinusLineIsFourArc) {
  auto sp = cached_space(2, 4);
  PointSet baer(sp);
  for (PointIndex p = 0; p < sp->num_points(); ++p) {
    auto v = sp->point(p);
    if (std::all_of(v.begin(), v.end(), [](auto x) { return x < 2; })) baer.insert(p);
  }
  // Remove the Baer line x0 = 0.
  PointSet rest = baer - (baer & sp->hyperplane_points(sp->index_of(la::Vec{1, 0, 0})));
  EXPECT_EQ(rest.size(), 4u);
  EXPECT_TRUE(spectra::classify(rest, {Family::parabolic, 2, 4}).quasi_polar);
}

TEST(GreedySubspace, FindsGenerators) {
  auto s = forms::point_set(canonical({Family::hyperbolic, 5, 2}));
  auto g = greedy_subspace(s, 2);
  ASSERT_TRUE(g);
  Flat f = Flat::of_points(s.space_ptr(), *g);
  EXPECT_EQ(f.dim(), 2);
  EXPECT_TRUE(f.points().is_subset_of(s));
  EXPECT_FALSE(greedy_subspace(s, 3).has_value());
}

}  // namespace
}  // namespace qps::surgery
