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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qps/error.hpp"
#include "qps/linalg.hpp"
#include "qps/pg.hpp"

namespace qps::forms {

using gf::Elem;
using pg::Flat;
using pg::PointIndex;
using pg::PointSet;
using pg::SpacePtr;

enum class Family { parabolic, hyperbolic, elliptic, hermitian };

constexpr std::string_view family_name(Family f) {
  switch (f) {
    case Family::parabolic: return "parabolic";
    case Family::hyperbolic: return "hyperbolic";
    case Family::elliptic: return "elliptic";
    case Family::hermitian: return "hermitian";
  }
  return "";
}

inline std::optional<Family> parse_family(std::string_view s) {
  for (auto f : {Family::parabolic, Family::hyperbolic, Family::elliptic, Family::hermitian})
    if (family_name(f) == s) return f;
  return std::nullopt;
}

struct PolarKind {
  Family family;
  int m;
  int q;
  friend bool operator==(const PolarKind&, const PolarKind&) = default;
};

inline std::string to_string(const PolarKind& k) {
  return std::string(family_name(k.family)) + " PG(" + std::to_string(k.m) + "," +
         std::to_string(k.q) + ")";
}

inline bool is_square(int q) {
  for (int r = 1; r * r <= q; ++r)
    if (r * r == q) return true;
  return false;
}

inline int isqrt(int q) {
  int r = 0;
  while ((r + 1) * (r + 1) <= q) ++r;
  return r;
}

inline void validate_kind(const PolarKind& k) {
  bool ok = k.m >= 1 && k.q >= 2;
  switch (k.family) {
    case Family::parabolic: ok = ok && k.m % 2 == 0; break;
    case Family::hyperbolic:
    case Family::elliptic: ok = ok && k.m % 2 == 1; break;
    case Family::hermitian: ok = ok && is_square(k.q); break;
  }
  if (!ok) throw Error(Errc::IncompatibleKind, "invalid kind " + to_string(k));
}

inline void check_compatible(const PolarKind& k, const pg::ProjSpace& s) {
  validate_kind(k);
  if (k.m != s.m() || k.q != s.q())
    throw Error(Errc::IncompatibleKind, to_string(k) + " does not match the ambient space");
}

class Form {
 public:
  // Quadratic: coeffs upper triangular, f = sum_{i<=j} c_ij x_i x_j.
  // Hermitian: coeffs conjugate symmetric, h = sum_ij x_i c_ij conj(x_j).
  Form(SpacePtr space, PolarKind kind, la::Mat coeffs)
      : space_(std::move(space)), kind_(kind), c_(std::move(coeffs)) {
    check_compatible(kind_, *space_);
    const auto& f = space_->field();
    const std::size_t d = space_->dim();
    if (c_.size() != d) throw Error(Errc::InvalidArgument, "coefficient matrix has wrong size");
    for (const auto& r : c_)
      if (r.size() != d) throw Error(Errc::InvalidArgument, "coefficient matrix has wrong size");
    gram_.assign(d, la::Vec(d, 0));
    if (is_hermitian()) {
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
          if (c_[j][i] != f.conj(c_[i][j]))
            throw Error(Errc::InvalidArgument, "matrix is not conjugate symmetric");
      gram_ = c_;
    } else {
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < i; ++j)
          if (c_[i][j]) throw Error(Errc::InvalidArgument, "quadratic coefficients must be upper triangular");
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) {
          if (i == j) {
            gram_[i][i] = f.add(c_[i][i], c_[i][i]);
          } else {
            gram_[i][j] = c_[i][j];
            gram_[j][i] = c_[i][j];
          }
        }
    }
  }

  const SpacePtr& space_ptr() const noexcept { return space_; }
  const pg::ProjSpace& space() const noexcept { return *space_; }
  const PolarKind& kind() const noexcept { return kind_; }
  const la::Mat& coeffs() const noexcept { return c_; }
  bool is_hermitian() const noexcept { return kind_.family == Family::hermitian; }

  Elem value(std::span<const Elem> x) const {
    const auto& f = space_->field();
    const std::size_t d = x.size();
    Elem s = 0;
    if (is_hermitian()) {
      for (std::size_t i = 0; i < d; ++i) {
        if (!x[i]) continue;
        for (std::size_t j = 0; j < d; ++j)
          if (x[j] && c_[i][j]) s = f.add(s, f.mul(f.mul(x[i], c_[i][j]), f.conj(x[j])));
      }
    } else {
      for (std::size_t i = 0; i < d; ++i) {
        if (!x[i]) continue;
        for (std::size_t j = i; j < d; ++j)
          if (x[j] && c_[i][j]) s = f.add(s, f.mul(c_[i][j], f.mul(x[i], x[j])));
      }
    }
    return s;
  }
  bool vanishes(PointIndex p) const { return value(space_->point(p)) == 0; }

  // Dual coordinates c with B(x, y) = 0 iff sum c_j y_j = 0.
  la::Vec polar_row(std::span<const Elem> x) const {
    const auto& f = space_->field();
    la::Vec c = la::row_times(f, x, gram_);
    if (is_hermitian())
      for (auto& v : c) v = f.conj(v);
    return c;
  }

  Elem polar(std::span<const Elem> x, std::span<const Elem> y) const {
    const auto& f = space_->field();
    la::Vec row = la::row_times(f, x, gram_);
    Elem s = 0;
    for (std::size_t j = 0; j < y.size(); ++j)
      s = f.add(s, f.mul(row[j], is_hermitian() ? f.conj(y[j]) : y[j]));
    return s;
  }

  Flat radical() const {
    return Flat(space_, la::nullspace(space_->field(), la::transpose(gram_), space_->dim()));
  }

  // No point of the radical lies on the form.
  bool nondegenerate() const {
    for (auto p : radical().point_list())
      if (vanishes(p)) return false;
    return true;
  }

 private:
  SpacePtr space_;
  PolarKind kind_;
  la::Mat c_;
  la::Mat gram_;
};

// Smallest a with t^2 + t + a irreducible over GF(q).
inline Elem elliptic_constant(const gf::FieldTable& f) {
  for (int a = 0; a < f.q(); ++a) {
    bool root = false;
    for (int t = 0; t < f.q() && !root; ++t) {
      Elem tt = static_cast<Elem>(t);
      root = f.add(f.add(f.mul(tt, tt), tt), static_cast<Elem>(a)) == 0;
    }
    if (!root) return static_cast<Elem>(a);
  }
  throw std::logic_error("no irreducible t^2+t+a");
}

inline Form canonical_form(const PolarKind& kind, const SpacePtr& space) {
  check_compatible(kind, *space);
  const std::size_t d = space->dim();
  la::Mat c(d, la::Vec(d, 0));
  switch (kind.family) {
    case Family::parabolic:
      c[0][0] = 1;
      for (std::size_t i = 1; i + 1 < d; i += 2) c[i][i + 1] = 1;
      break;
    case Family::hyperbolic:
      for (std::size_t i = 0; i + 1 < d; i += 2) c[i][i + 1] = 1;
      break;
    case Family::elliptic:
      c[0][0] = 1;
      c[0][1] = 1;
      c[1][1] = elliptic_constant(space->field());
      for (std::size_t i = 2; i + 1 < d; i += 2) c[i][i + 1] = 1;
      break;
    case Family::hermitian:
      for (std::size_t i = 0; i < d; ++i) c[i][i] = 1;
      break;
  }
  Form form(space, kind, std::move(c));
  if (!form.nondegenerate()) throw std::logic_error("canonical form is degenerate");
  return form;
}

inline PointSet point_set(const Form& form) {
  const auto& s = form.space();
  PointSet out(form.space_ptr());
  for (PointIndex p = 0; p < s.num_points(); ++p)
    if (form.vanishes(p)) out.insert(p);
  return out;
}

inline PointIndex perp(const Form& form, PointIndex p) {
  pg::check_index(form.space(), p);
  la::Vec row = form.polar_row(form.space().point(p));
  if (la::is_zero(row)) {
    if (form.kind().family == Family::parabolic && form.kind().q % 2 == 0)
      throw Error(Errc::NucleusHasNoPerp, "the nucleus has no tangent hyperplane");
    throw Error(Errc::DegenerateForm, "point lies in the radical");
  }
  return form.space().index_of(row);
}

inline PointIndex nucleus_point(const Form& form) {
  if (form.kind().family != Family::parabolic || form.kind().q % 2 != 0)
    throw Error(Errc::NotParabolicEven, "nucleus needs a parabolic quadric with q even");
  auto rad = form.radical();
  if (rad.dim() != 0) throw Error(Errc::DegenerateForm, "radical is not a point");
  return form.space().index_of(rad.basis()[0]);
}

struct ConeSpec {
  Flat vertex;
  PointSet base;
};

inline PointSet cone(const ConeSpec& spec) {
  const auto& sp = spec.vertex.space_ptr();
  if (spec.base.space_ptr() != sp) throw Error(Errc::SpaceMismatch, "cone parts in different spaces");
  PointSet out = spec.vertex.points();
  auto base = spec.base.indices();
  if (base.empty()) return out;
  Flat carrier = Flat::of_points(sp, base);
  if (spec.vertex.meet(carrier).dim() >= 0)
    throw Error(Errc::VertexMeetsBase, "vertex meets the span of the base");
  for (auto b : base) out |= spec.vertex.join(b).points();
  return out;
}

inline PointSet point_cone(PointIndex vertex, const PointSet& base) {
  return cone({Flat::of_point(base.space_ptr(), vertex), base});
}

// Is every line through v meeting s \ {v} contained in s up to v?
inline bool is_cone_vertex(const PointSet& s, PointIndex v) {
  const auto& sp = s.space();
  std::vector<PointIndex> line;
  bool ok = true;
  s.bits().for_each([&](std::size_t x) {
    if (!ok || x == v) return;
    sp.line_points(v, static_cast<PointIndex>(x), line);
    for (auto y : line)
      if (y != v && !s.contains(y)) {
        ok = false;
        return;
      }
  });
  return ok;
}

inline std::vector<PointIndex> cone_vertices(const PointSet& s) {
  std::vector<PointIndex> out;
  for (PointIndex v = 0; v < s.space().num_points(); ++v)
    if (is_cone_vertex(s, v)) out.push_back(v);
  return out;
}

enum class PointClass { on, internal, external, nucleus };

constexpr std::string_view class_name(PointClass c) {
  switch (c) {
    case PointClass::on: return "on";
    case PointClass::internal: return "internal";
    case PointClass::external: return "external";
    case PointClass::nucleus: return "nucleus";
  }
  return "";
}

inline PointClass point_class(const Form& form, PointIndex p) {
  pg::check_index(form.space(), p);
  if (form.vanishes(p)) return PointClass::on;
  const auto& k = form.kind();
  if (k.family != Family::parabolic)
    throw Error(Errc::NotApplicable, "internal/external points need a parabolic quadric");
  if (k.q % 2 == 0) {
    if (p == nucleus_point(form)) return PointClass::nucleus;
    throw Error(Errc::NotApplicable, "internal/external points need q odd");
  }
  PointIndex h = perp(form, p);
  std::size_t on = 0;
  form.space().hyperplane_points(h).for_each([&](std::size_t x) {
    if (form.vanishes(static_cast<PointIndex>(x))) ++on;
  });
  // Elliptic sections of Q(2n,q) are the small ones.
  std::int64_t q = k.q, n = k.m / 2;
  std::int64_t elliptic = (pg::ipow(q, n) + 1) * (pg::ipow(q, n - 1) - 1) / (q - 1);
  return static_cast<std::int64_t>(on) == elliptic ? PointClass::internal : PointClass::external;
}

}  // namespace qps::forms
