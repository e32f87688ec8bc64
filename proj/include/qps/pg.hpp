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
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qps/bitset.hpp"
#include "qps/error.hpp"
#include "qps/gf.hpp"
#include "qps/linalg.hpp"
#include "qps/parallel.hpp"

namespace qps::pg {

using gf::Elem;
using PointIndex = std::uint32_t;

inline constexpr std::size_t kMaxPoints = 1'000'000;
// Incidence is a dense |points| x |points| bit matrix; keep it under 512 MiB.
inline constexpr std::size_t kMaxIncidenceBits = std::size_t{1} << 32;
inline constexpr std::size_t kMaxCodim2 = 5'000'000;

inline std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// Number of points of PG(k,q); 0 for k < 0.
inline std::int64_t count_points(int k, std::int64_t q) {
  return k < 0 ? 0 : (ipow(q, k + 1) - 1) / (q - 1);
}

class ProjSpace;
using SpacePtr = std::shared_ptr<const ProjSpace>;

class ProjSpace {
 public:
  struct Codim2 {
    PointIndex h1;
    PointIndex h2;
    std::vector<PointIndex> hyperplanes;
  };

  ProjSpace(int m, gf::FieldTable field) : m_(m), field_(std::move(field)) {
    if (m < 0) throw Error(Errc::InvalidArgument, "negative dimension");
    const std::int64_t q = field_.q();
    std::int64_t n = 1;
    for (int i = 0; i < m; ++i) {
      n = n * q + 1;
      if (static_cast<std::size_t>(n) > kMaxPoints)
        throw Error(Errc::SpaceTooLarge, "PG(" + std::to_string(m) + "," +
                                             std::to_string(q) + ") has too many points");
    }
    n_ = static_cast<std::size_t>(n);
    if (n_ * n_ > kMaxIncidenceBits)
      throw Error(Errc::SpaceTooLarge, "incidence matrix of PG(" + std::to_string(m) + "," +
                                           std::to_string(q) + ") exceeds the memory guard");

    const std::size_t d = dim();
    pow_q_.assign(d, 1);
    for (std::size_t i = 1; i < d; ++i) pow_q_[i] = pow_q_[i - 1] * static_cast<std::size_t>(q);
    offset_.resize(d);
    for (std::size_t k = 0; k < d; ++k)
      offset_[k] = static_cast<std::size_t>(count_points(m - static_cast<int>(k) - 1, q));

    coords_.assign(n_ * d, 0);
    std::size_t idx = 0;
    for (int k = m; k >= 0; --k) {
      std::size_t tails = pow_q_[m - k];
      for (std::size_t t = 0; t < tails; ++t, ++idx) {
        Elem* v = &coords_[idx * d];
        v[k] = 1;
        std::size_t rest = t;
        for (int j = m; j > k; --j) {
          v[j] = static_cast<Elem>(rest % q);
          rest /= q;
        }
      }
    }

    incidence_.assign(n_, Bitset(n_));
    parallel_for(n_, [&](std::size_t h) {
      auto hv = point(static_cast<PointIndex>(h));
      for (std::size_t p = 0; p < n_; ++p)
        if (la::dot(field_, hv, point(static_cast<PointIndex>(p))) == 0) incidence_[h].set(p);
    });
  }

  ProjSpace(const ProjSpace&) = delete;
  ProjSpace& operator=(const ProjSpace&) = delete;

  int m() const noexcept { return m_; }
  int q() const noexcept { return field_.q(); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(m_) + 1; }
  const gf::FieldTable& field() const noexcept { return field_; }
  std::size_t num_points() const noexcept { return n_; }
  std::size_t num_hyperplanes() const noexcept { return n_; }

  std::span<const Elem> point(PointIndex i) const noexcept {
    return {coords_.data() + static_cast<std::size_t>(i) * dim(), dim()};
  }
  // Hyperplanes share the point enumeration through their dual coordinates.
  std::span<const Elem> hyperplane(PointIndex h) const noexcept { return point(h); }

  PointIndex index_of(std::span<const Elem> v) const {
    std::size_t k = 0;
    while (k < v.size() && v[k] == 0) ++k;
    if (k == v.size()) throw Error(Errc::ZeroVector, "zero vector has no projective point");
    Elem inv = field_.inv(v[k]);
    std::size_t t = 0;
    for (std::size_t j = k + 1; j < v.size(); ++j) t = t * field_.q() + field_.mul(v[j], inv);
    return static_cast<PointIndex>(offset_[k] + t);
  }

  bool incident(PointIndex h, PointIndex p) const noexcept { return incidence_[h].test(p); }
  const Bitset& hyperplane_points(PointIndex h) const noexcept { return incidence_[h]; }
  // The incidence matrix is symmetric under the shared enumeration.
  const Bitset& hyperplanes_through(PointIndex p) const noexcept { return incidence_[p]; }

  // The q+1 points of the line pr, r first.
  void line_points(PointIndex p, PointIndex r, std::vector<PointIndex>& out) const {
    out.clear();
    out.push_back(r);
    auto a = point(p), b = point(r);
    la::Vec v(dim());
    for (int l = 0; l < q(); ++l) {
      for (std::size_t i = 0; i < dim(); ++i)
        v[i] = field_.add(a[i], field_.mul(static_cast<Elem>(l), b[i]));
      out.push_back(index_of(v));
    }
  }

  // Codimension-2 flats, each as the dual line through its two lowest
  // hyperplanes, ordered by that pair.
  const std::vector<Codim2>& codim2() const {
    std::call_once(codim2_once_, [this] { build_codim2(); });
    return codim2_;
  }

 private:
  void build_codim2() const {
    if (m_ < 1) return;
    const std::int64_t q = this->q();
    std::int64_t expected = count_points(m_, q) * count_points(m_ - 1, q) / (q + 1);
    if (static_cast<std::size_t>(expected) > kMaxCodim2)
      throw Error(Errc::SpaceTooLarge, "too many codimension-2 flats");
    codim2_.reserve(static_cast<std::size_t>(expected));
    std::vector<PointIndex> members;
    Bitset seen(n_);
    for (PointIndex h1 = 0; h1 < n_; ++h1) {
      seen.clear();
      for (PointIndex h2 = h1 + 1; h2 < n_; ++h2) {
        if (seen.test(h2)) continue;
        line_points(h2, h1, members);
        bool lowest = true;
        for (auto x : members) {
          seen.set(x);
          if (x < h1) lowest = false;
        }
        if (!lowest) continue;
        std::sort(members.begin(), members.end());
        codim2_.push_back({h1, h2, members});
      }
    }
  }

  int m_;
  gf::FieldTable field_;
  std::size_t n_ = 0;
  std::vector<std::size_t> pow_q_, offset_;
  std::vector<Elem> coords_;
  std::vector<Bitset> incidence_;
  mutable std::once_flag codim2_once_;
  mutable std::vector<Codim2> codim2_;
};

inline SpacePtr build_space(int m, const gf::FieldTable& f) {
  return std::make_shared<const ProjSpace>(m, f);
}

// Shared spaces keyed by (m, q); sets built from the same key are compatible.
inline SpacePtr cached_space(int m, int q) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, SpacePtr> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{m, q}];
  if (!slot) slot = build_space(m, gf::build_field(q));
  return slot;
}

inline PointIndex normalize_point(const ProjSpace& s, std::span<const Elem> v) {
  if (v.size() != s.dim()) throw Error(Errc::InvalidArgument, "coordinate vector has wrong length");
  for (auto x : v)
    if (x >= s.q()) throw Error(Errc::IndexOutOfRange, "coordinate out of field range");
  return s.index_of(v);
}

inline void check_index(const ProjSpace& s, std::size_t i) {
  if (i >= s.num_points())
    throw Error(Errc::IndexOutOfRange, "index " + std::to_string(i));
}

inline bool incident(const ProjSpace& s, PointIndex h, PointIndex p) {
  check_index(s, h);
  check_index(s, p);
  return s.incident(h, p);
}

class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(SpacePtr s) : space_(std::move(s)), bits_(space_->num_points()) {}
  PointSet(SpacePtr s, std::span<const PointIndex> pts) : PointSet(std::move(s)) {
    for (auto p : pts) insert(p);
  }
  PointSet(SpacePtr s, Bitset bits) : space_(std::move(s)), bits_(std::move(bits)) {
    if (bits_.size() != space_->num_points())
      throw Error(Errc::SpaceMismatch, "bitset length differs from the space");
  }

  const ProjSpace& space() const noexcept { return *space_; }
  const SpacePtr& space_ptr() const noexcept { return space_; }
  const Bitset& bits() const noexcept { return bits_; }

  bool contains(PointIndex p) const noexcept { return bits_.test(p); }
  void insert(PointIndex p) {
    check_index(*space_, p);
    bits_.set(p);
  }
  void erase(PointIndex p) {
    check_index(*space_, p);
    bits_.reset(p);
  }
  std::size_t size() const noexcept { return bits_.count(); }
  bool empty() const noexcept { return bits_.none(); }
  std::vector<PointIndex> indices() const { return bits_.indices(); }

  bool is_subset_of(const PointSet& o) const {
    same(o);
    return bits_.is_subset_of(o.bits_);
  }
  std::size_t meet_count(const Bitset& b) const noexcept { return bits_.and_count(b); }

  PointSet& operator|=(const PointSet& o) {
    same(o);
    bits_ |= o.bits_;
    return *this;
  }
  PointSet& operator&=(const PointSet& o) {
    same(o);
    bits_ &= o.bits_;
    return *this;
  }
  PointSet& operator-=(const PointSet& o) {
    same(o);
    bits_.subtract(o.bits_);
    return *this;
  }
  PointSet& operator&=(const Bitset& b) {
    bits_ &= b;
    return *this;
  }
  friend PointSet operator|(PointSet a, const PointSet& b) { return a |= b; }
  friend PointSet operator&(PointSet a, const PointSet& b) { return a &= b; }
  friend PointSet operator-(PointSet a, const PointSet& b) { return a -= b; }
  friend PointSet operator&(PointSet a, const Bitset& b) { return a &= b; }
  friend bool operator==(const PointSet& a, const PointSet& b) {
    return a.space_ == b.space_ && a.bits_ == b.bits_;
  }
  friend bool operator<(const PointSet& a, const PointSet& b) { return a.bits_ < b.bits_; }

 private:
  void same(const PointSet& o) const {
    if (space_ != o.space_) throw Error(Errc::SpaceMismatch, "point sets live in different spaces");
  }

  SpacePtr space_;
  Bitset bits_;
};

inline PointSet line_through(const SpacePtr& s, PointIndex p, PointIndex r) {
  check_index(*s, p);
  check_index(*s, r);
  if (p == r) throw Error(Errc::SamePoint, "a line needs two distinct points");
  std::vector<PointIndex> pts;
  s->line_points(p, r, pts);
  return PointSet(s, pts);
}

class Flat {
 public:
  Flat() = default;
  Flat(SpacePtr s, la::Mat vectors) : space_(std::move(s)), basis_(std::move(vectors)) {
    for (const auto& v : basis_)
      if (v.size() != space_->dim()) throw Error(Errc::InvalidArgument, "basis vector has wrong length");
    la::rref(space_->field(), basis_);
    equations_ = la::nullspace(space_->field(), basis_, space_->dim());
  }

  static Flat of_point(const SpacePtr& s, PointIndex p) {
    auto v = s->point(p);
    return Flat(s, {la::Vec(v.begin(), v.end())});
  }
  static Flat of_points(const SpacePtr& s, std::span<const PointIndex> pts) {
    la::Mat m;
    for (auto p : pts) {
      auto v = s->point(p);
      m.emplace_back(v.begin(), v.end());
    }
    return Flat(s, std::move(m));
  }
  static Flat of_hyperplane(const SpacePtr& s, PointIndex h) {
    auto v = s->hyperplane(h);
    return Flat(s, la::nullspace(s->field(), {la::Vec(v.begin(), v.end())}, s->dim()));
  }
  // The flat cut out by the given dual vectors.
  static Flat of_equations(const SpacePtr& s, la::Mat eqs) {
    return Flat(s, la::nullspace(s->field(), std::move(eqs), s->dim()));
  }

  const SpacePtr& space_ptr() const noexcept { return space_; }
  const ProjSpace& space() const noexcept { return *space_; }
  const la::Mat& basis() const noexcept { return basis_; }
  const la::Mat& equations() const noexcept { return equations_; }
  int dim() const noexcept { return static_cast<int>(basis_.size()) - 1; }

  bool contains_vec(std::span<const Elem> v) const {
    for (const auto& e : equations_)
      if (la::dot(space_->field(), e, v) != 0) return false;
    return true;
  }
  bool contains(PointIndex p) const { return contains_vec(space_->point(p)); }
  bool contains(const Flat& o) const {
    for (const auto& v : o.basis_)
      if (!contains_vec(v)) return false;
    return true;
  }

  std::vector<PointIndex> point_list() const {
    std::vector<PointIndex> out;
    const auto& f = space_->field();
    const int k = dim();
    if (k < 0) return out;
    la::Vec c(basis_.size()), v(space_->dim());
    for (int lead = 0; lead <= k; ++lead) {
      std::int64_t tails = ipow(f.q(), k - lead);
      for (std::int64_t t = 0; t < tails; ++t) {
        std::fill(c.begin(), c.end(), 0);
        c[lead] = 1;
        std::int64_t rest = t;
        for (int j = k; j > lead; --j) {
          c[j] = static_cast<Elem>(rest % f.q());
          rest /= f.q();
        }
        v = la::row_times(f, c, basis_);
        out.push_back(space_->index_of(v));
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }
  PointSet points() const { return PointSet(space_, point_list()); }

  Flat join(const Flat& o) const {
    la::Mat m = basis_;
    m.insert(m.end(), o.basis_.begin(), o.basis_.end());
    return Flat(space_, std::move(m));
  }
  Flat join(PointIndex p) const { return join(of_point(space_, p)); }
  Flat meet(const Flat& o) const {
    la::Mat eqs = equations_;
    eqs.insert(eqs.end(), o.equations_.begin(), o.equations_.end());
    return of_equations(space_, std::move(eqs));
  }

  friend bool operator==(const Flat& a, const Flat& b) {
    return a.space_ == b.space_ && a.basis_ == b.basis_;
  }
  friend bool operator!=(const Flat& a, const Flat& b) { return !(a == b); }

 private:
  SpacePtr space_;
  la::Mat basis_;
  la::Mat equations_;
};

// Hyperplanes containing f, ascending.
inline std::vector<PointIndex> hyperplanes_containing(const Flat& f) {
  const auto& s = f.space();
  Bitset acc = Bitset(s.num_points()).complement();
  for (const auto& v : f.basis()) acc &= s.hyperplanes_through(s.index_of(v));
  return acc.indices();
}

inline std::vector<Flat> flats_of_codim(const SpacePtr& s, int c) {
  std::vector<Flat> out;
  if (c == 1) {
    out.reserve(s->num_hyperplanes());
    for (PointIndex h = 0; h < s->num_hyperplanes(); ++h) out.push_back(Flat::of_hyperplane(s, h));
  } else if (c == 2) {
    const auto& list = s->codim2();
    out.reserve(list.size());
    for (const auto& e : list) {
      auto a = s->hyperplane(e.h1), b = s->hyperplane(e.h2);
      out.push_back(Flat::of_equations(s, {la::Vec(a.begin(), a.end()), la::Vec(b.begin(), b.end())}));
    }
  } else {
    throw Error(Errc::InvalidArgument, "only codimension 1 and 2 are enumerated");
  }
  return out;
}

// Local coordinates on a flat: its points as PG(k,q) in the basis order.
class Frame {
 public:
  explicit Frame(Flat flat) : Frame(flat, flat.basis()) {}

  // Local coordinates relative to an explicit basis of the flat.
  Frame(Flat flat, la::Mat basis) : flat_(std::move(flat)), basis_(std::move(basis)) {
    const auto& g = flat_.space();
    if (Flat(flat_.space_ptr(), basis_) != flat_ || static_cast<int>(basis_.size()) != flat_.dim() + 1)
      throw Error(Errc::InvalidArgument, "frame basis does not span the flat");
    if (flat_.dim() < 0) throw Error(Errc::InvalidArgument, "empty flat has no frame");
    local_ = cached_space(flat_.dim(), g.q());
    to_global_.resize(local_->num_points());
    to_local_.assign(g.num_points(), -1);
    for (PointIndex i = 0; i < local_->num_points(); ++i) {
      auto v = la::row_times(g.field(), local_->point(i), basis_);
      PointIndex gi = g.index_of(v);
      to_global_[i] = gi;
      to_local_[gi] = static_cast<std::int32_t>(i);
    }
  }

  const Flat& flat() const noexcept { return flat_; }
  const SpacePtr& local() const noexcept { return local_; }
  const SpacePtr& global() const noexcept { return flat_.space_ptr(); }

  PointIndex to_global(PointIndex l) const { return to_global_.at(l); }
  std::optional<PointIndex> to_local(PointIndex g) const {
    auto v = to_local_.at(g);
    if (v < 0) return std::nullopt;
    return static_cast<PointIndex>(v);
  }
  la::Vec global_vec(std::span<const Elem> local_coords) const {
    return la::row_times(flat_.space().field(), local_coords, basis_);
  }

  // s restricted to the flat, in local indices.
  PointSet pull(const PointSet& s) const {
    PointSet out(local_);
    for (PointIndex i = 0; i < to_global_.size(); ++i)
      if (s.contains(to_global_[i])) out.insert(i);
    return out;
  }
  PointSet push(const PointSet& local) const {
    PointSet out(flat_.space_ptr());
    local.bits().for_each([&](std::size_t i) { out.insert(to_global_[i]); });
    return out;
  }
  Flat push(const Flat& local) const {
    la::Mat m;
    for (const auto& v : local.basis()) m.push_back(global_vec(v));
    return Flat(flat_.space_ptr(), std::move(m));
  }
  Flat pull(const Flat& global) const {
    la::Mat m;
    for (const auto& v : global.basis()) {
      auto l = to_local(flat_.space().index_of(v));
      if (!l) throw Error(Errc::InvalidArgument, "flat is not inside the frame");
      auto c = local_->point(*l);
      m.emplace_back(c.begin(), c.end());
    }
    return Flat(local_, std::move(m));
  }

 private:
  Flat flat_;
  la::Mat basis_;
  SpacePtr local_;
  std::vector<PointIndex> to_global_;
  std::vector<std::int32_t> to_local_;
};

}  // namespace qps::pg
