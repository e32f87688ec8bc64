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
#include <span>
#include <utility>
#include <vector>

#include "qps/gf.hpp"

namespace qps::la {

using gf::Elem;
using gf::FieldTable;
using Vec = std::vector<Elem>;
using Mat = std::vector<Vec>;

inline bool is_zero(std::span<const Elem> v) {
  for (auto x : v)
    if (x) return false;
  return true;
}

inline Elem dot(const FieldTable& f, std::span<const Elem> a, std::span<const Elem> b) {
  Elem s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s = f.add(s, f.mul(a[i], b[i]));
  return s;
}

// Scales v so that its first nonzero entry is 1. Zero vectors are unchanged.
inline void normalize(const FieldTable& f, Vec& v) {
  for (auto x : v) {
    if (!x) continue;
    Elem inv = f.inv(x);
    for (auto& y : v) y = f.mul(y, inv);
    return;
  }
}

// v * M with v a row vector.
inline Vec row_times(const FieldTable& f, std::span<const Elem> v, const Mat& m) {
  Vec out(m.empty() ? 0 : m[0].size(), 0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i]) continue;
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = f.add(out[j], f.mul(v[i], m[i][j]));
  }
  return out;
}

inline Mat multiply(const FieldTable& f, const Mat& a, const Mat& b) {
  Mat out;
  out.reserve(a.size());
  for (const auto& row : a) out.push_back(row_times(f, row, b));
  return out;
}

inline Mat identity(std::size_t n) {
  Mat m(n, Vec(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

// Reduced row echelon form in place; zero rows are dropped. Returns pivot columns.
inline std::vector<std::size_t> rref(const FieldTable& f, Mat& rows) {
  std::vector<std::size_t> pivots;
  if (rows.empty()) return pivots;
  std::size_t ncols = rows[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < ncols && r < rows.size(); ++c) {
    std::size_t sel = r;
    while (sel < rows.size() && rows[sel][c] == 0) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[r], rows[sel]);
    Elem inv = f.inv(rows[r][c]);
    for (auto& x : rows[r]) x = f.mul(x, inv);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      Elem k = f.neg(rows[i][c]);
      for (std::size_t j = 0; j < ncols; ++j) rows[i][j] = f.add(rows[i][j], f.mul(k, rows[r][j]));
    }
    pivots.push_back(c);
    ++r;
  }
  rows.resize(r);
  return pivots;
}

inline std::size_t rank(const FieldTable& f, Mat rows) { return rref(f, rows).size(); }

// Basis of {x : rows . x = 0}, in reduced echelon form.
inline Mat nullspace(const FieldTable& f, Mat rows, std::size_t ncols) {
  auto pivots = rref(f, rows);
  std::vector<bool> is_pivot(ncols, false);
  for (auto c : pivots) is_pivot[c] = true;
  Mat basis;
  for (std::size_t free = 0; free < ncols; ++free) {
    if (is_pivot[free]) continue;
    Vec v(ncols, 0);
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = f.neg(rows[r][free]);
    basis.push_back(std::move(v));
  }
  rref(f, basis);
  return basis;
}

inline bool in_span(const FieldTable& f, const Mat& basis, std::span<const Elem> v) {
  Mat m = basis;
  std::size_t r = rref(f, m).size();
  m.emplace_back(v.begin(), v.end());
  return rref(f, m).size() == r;
}

inline Mat transpose(const Mat& m) {
  if (m.empty()) return {};
  Mat t(m[0].size(), Vec(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
  return t;
}

inline bool invertible(const FieldTable& f, const Mat& m) { return rank(f, m) == m.size(); }

}  // namespace qps::la
