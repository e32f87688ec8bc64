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

#include <cstddef>
#include <deque>
#include <set>
#include <vector>

#include "qps/linalg.hpp"
#include "qps/pg.hpp"

namespace qps::pg {

// Linear collineations act on row vectors: x -> x M.
inline PointIndex apply_matrix(const la::Mat& m, const ProjSpace& s, PointIndex p) {
  return s.index_of(la::row_times(s.field(), s.point(p), m));
}

inline PointSet apply_matrix(const la::Mat& m, const PointSet& set) {
  PointSet out(set.space_ptr());
  set.bits().for_each([&](std::size_t p) { out.insert(apply_matrix(m, set.space(), static_cast<PointIndex>(p))); });
  return out;
}

// Elementary generators of PGL(d,q) that fix span(e_0..e_{fixed-1}) pointwise:
// transvections, then row swaps, then scalings.
inline std::vector<la::Mat> elementary_generators(const gf::FieldTable& f, std::size_t d,
                                                  std::size_t fixed = 0) {
  std::vector<la::Mat> gens;
  for (std::size_t i = fixed; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      if (i == j) continue;
      for (int l = 1; l < f.q(); ++l) {
        auto m = la::identity(d);
        m[i][j] = static_cast<gf::Elem>(l);
        gens.push_back(std::move(m));
      }
    }
  for (std::size_t i = fixed; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      auto m = la::identity(d);
      std::swap(m[i], m[j]);
      gens.push_back(std::move(m));
    }
  if (d - fixed > 1 || fixed > 0)
    for (std::size_t i = fixed; i < d; ++i)
      for (int l = 2; l < f.q(); ++l) {
        auto m = la::identity(d);
        m[i][i] = static_cast<gf::Elem>(l);
        gens.push_back(std::move(m));
      }
  return gens;
}

// Distinct images of s other than s, breadth first over words in gens.
inline std::vector<PointSet> collineation_images(const PointSet& s, const std::vector<la::Mat>& gens,
                                                 std::size_t limit) {
  std::vector<PointSet> out;
  std::set<Bitset> seen{s.bits()};
  std::deque<PointSet> queue{s};
  while (!queue.empty() && out.size() < limit) {
    PointSet cur = queue.front();
    queue.pop_front();
    for (const auto& g : gens) {
      PointSet img = apply_matrix(g, cur);
      if (!seen.insert(img.bits()).second) continue;
      out.push_back(img);
      queue.push_back(img);
      if (out.size() >= limit) break;
    }
  }
  return out;
}

// Completes the vectors of `sub` to an ordered basis of `flat`, sub first.
inline la::Mat adapted_basis(const Flat& flat, const Flat& sub) {
  const auto& f = flat.space().field();
  la::Mat basis = sub.basis();
  for (const auto& v : flat.basis()) {
    if (la::in_span(f, basis, v)) continue;
    basis.push_back(v);
  }
  return basis;
}

}  // namespace qps::pg
