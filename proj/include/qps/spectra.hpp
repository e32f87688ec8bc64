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
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qps/error.hpp"
#include "qps/forms.hpp"
#include "qps/parallel.hpp"
#include "qps/pg.hpp"

namespace qps::spectra {

using forms::Family;
using forms::PolarKind;
using pg::PointIndex;
using pg::PointSet;

// Size of the classical polar space of the family in PG(m,q). Hermitian q is
// the full field order. Empty for m below the first non-trivial dimension.
inline std::int64_t polar_size(Family family, int m, std::int64_t q) {
  using pg::ipow;
  switch (family) {
    case Family::parabolic:
      return m <= 0 ? 0 : (ipow(q, m) - 1) / (q - 1);
    case Family::hyperbolic:
    case Family::elliptic: {
      if (m < 1) return 0;
      int n = (m - 1) / 2;
      std::int64_t eps = family == Family::hyperbolic ? 1 : -1;
      return (ipow(q, n + 1) - eps) * (ipow(q, n) + eps) / (q - 1);
    }
    case Family::hermitian: {
      if (m < 1) return 0;
      std::int64_t r = forms::isqrt(static_cast<int>(q));
      std::int64_t sgn = m % 2 == 0 ? 1 : -1;
      return (ipow(r, m + 1) + sgn) * (ipow(r, m) - sgn) / (q - 1);
    }
  }
  return 0;
}

// Point cone over the same-family space of PG(m,q), living in PG(m+2,q).
inline std::int64_t cone_size(Family family, int m, std::int64_t q) {
  return q * polar_size(family, m, q) + 1;
}

enum class HyperplaneType { singular, elliptic, hyperbolic, nonsingular, inadmissible };

constexpr std::string_view type_name(HyperplaneType t) {
  switch (t) {
    case HyperplaneType::singular: return "singular";
    case HyperplaneType::elliptic: return "elliptic";
    case HyperplaneType::hyperbolic: return "hyperbolic";
    case HyperplaneType::nonsingular: return "nonsingular";
    case HyperplaneType::inadmissible: return "inadmissible";
  }
  return "";
}

struct SpectrumProfile {
  PolarKind kind;
  std::vector<std::int64_t> sizes;  // ascending
  std::vector<HyperplaneType> types;
  std::vector<std::int64_t> expected_counts;
  std::int64_t cardinality = 0;
  bool cardinality_forced = true;
  std::int64_t singular_size = 0;

  HyperplaneType type_of(std::int64_t size) const {
    for (std::size_t i = 0; i < sizes.size(); ++i)
      if (sizes[i] == size) return types[i];
    return HyperplaneType::inadmissible;
  }
  bool admissible(std::int64_t size) const {
    return std::find(sizes.begin(), sizes.end(), size) != sizes.end();
  }
  std::int64_t expected(std::int64_t size) const {
    for (std::size_t i = 0; i < sizes.size(); ++i)
      if (sizes[i] == size) return expected_counts[i];
    return 0;
  }
};

namespace detail {

using i128 = __int128;

inline i128 det3(const i128 a[3][3]) {
  return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
         a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
         a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

// Hyperplane counts per size from the three standard counting equations.
inline std::vector<std::int64_t> solve_counts(const std::vector<std::int64_t>& u, std::int64_t s,
                                              int m, std::int64_t q) {
  const i128 hyper = pg::count_points(m, q);
  const i128 t1 = pg::count_points(m - 1, q);
  const i128 t2 = pg::count_points(m - 2, q);
  const i128 rhs[3] = {hyper, s * t1, i128(s) * (s - 1) * t2};
  const std::size_t k = u.size();
  std::vector<std::int64_t> out(k);
  if (k == 2) {
    i128 d = u[1] - u[0];
    i128 a = hyper * u[1] - rhs[1];
    i128 b = rhs[1] - hyper * u[0];
    if (a % d || b % d) throw std::logic_error("non-integral hyperplane counts");
    out = {static_cast<std::int64_t>(a / d), static_cast<std::int64_t>(b / d)};
  } else {
    i128 m3[3][3];
    for (std::size_t j = 0; j < 3; ++j) {
      m3[0][j] = 1;
      m3[1][j] = u[j];
      m3[2][j] = i128(u[j]) * (u[j] - 1);
    }
    i128 d = det3(m3);
    for (std::size_t j = 0; j < 3; ++j) {
      i128 c[3][3];
      for (int r = 0; r < 3; ++r)
        for (int col = 0; col < 3; ++col) c[r][col] = col == static_cast<int>(j) ? rhs[r] : m3[r][col];
      i128 nj = det3(c);
      if (nj % d) throw std::logic_error("non-integral hyperplane counts");
      out[j] = static_cast<std::int64_t>(nj / d);
    }
  }
  return out;
}

}  // namespace detail

inline SpectrumProfile profile(const PolarKind& kind) {
  forms::validate_kind(kind);
  const int m = kind.m;
  const std::int64_t q = kind.q;
  SpectrumProfile p;
  p.kind = kind;
  p.cardinality = polar_size(kind.family, m, q);
  switch (kind.family) {
    case Family::parabolic:
      p.sizes = {polar_size(Family::elliptic, m - 1, q), cone_size(Family::parabolic, m - 2, q),
                 polar_size(Family::hyperbolic, m - 1, q)};
      p.types = {HyperplaneType::elliptic, HyperplaneType::singular, HyperplaneType::hyperbolic};
      p.singular_size = p.sizes[1];
      p.cardinality_forced = false;
      break;
    case Family::hyperbolic:
    case Family::elliptic:
    case Family::hermitian: {
      std::int64_t ns = kind.family == Family::hermitian ? polar_size(Family::hermitian, m - 1, q)
                                                         : polar_size(Family::parabolic, m - 1, q);
      std::int64_t sg = cone_size(kind.family, m - 2, q);
      p.singular_size = sg;
      if (ns < sg) {
        p.sizes = {ns, sg};
        p.types = {HyperplaneType::nonsingular, HyperplaneType::singular};
      } else {
        p.sizes = {sg, ns};
        p.types = {HyperplaneType::singular, HyperplaneType::nonsingular};
      }
      break;
    }
  }
  p.expected_counts = detail::solve_counts(p.sizes, p.cardinality, m, q);
  return p;
}

struct Spectrum {
  std::map<std::int64_t, std::int64_t> histogram;
  std::vector<std::int64_t> per_hyperplane;
};

inline Spectrum spectrum(const PointSet& s) {
  const auto& sp = s.space();
  Spectrum out;
  out.per_hyperplane.resize(sp.num_hyperplanes());
  parallel_for(sp.num_hyperplanes(), [&](std::size_t h) {
    out.per_hyperplane[h] =
        static_cast<std::int64_t>(s.meet_count(sp.hyperplane_points(static_cast<PointIndex>(h))));
  });
  for (auto v : out.per_hyperplane) ++out.histogram[v];
  return out;
}

struct Classification {
  bool quasi_polar = false;
  std::vector<HyperplaneType> hyperplane_types;
  std::optional<std::string> exceptional;
};

inline Classification classify(const PointSet& s, const Spectrum& spec, const PolarKind& kind) {
  forms::check_compatible(kind, s.space());
  auto prof = profile(kind);
  Classification c;
  c.quasi_polar = true;
  c.hyperplane_types.reserve(spec.per_hyperplane.size());
  for (auto v : spec.per_hyperplane) {
    auto t = prof.type_of(v);
    if (t == HyperplaneType::inadmissible) c.quasi_polar = false;
    c.hyperplane_types.push_back(t);
  }
  const std::int64_t size = static_cast<std::int64_t>(s.size());
  // On a projective line every set passes the size test.
  if (kind.m == 1 && size != prof.cardinality) c.quasi_polar = false;
  if (c.quasi_polar) {
    if (kind.family == Family::elliptic && kind.m == 3 && size == kind.q + 1)
      c.exceptional = "line";
    if (kind.family == Family::hermitian && kind.m == 2 &&
        size == kind.q + forms::isqrt(kind.q) + 1)
      c.exceptional = "baer_subplane";
  }
  return c;
}

inline Classification classify(const PointSet& s, const PolarKind& kind) {
  forms::check_compatible(kind, s.space());
  return classify(s, spectrum(s), kind);
}

// Early-exit variant of classify(..).quasi_polar for census loops.
inline bool is_quasi_polar(const PointSet& s, const SpectrumProfile& prof) {
  const auto& sp = s.space();
  if (prof.kind.m == 1 && static_cast<std::int64_t>(s.size()) != prof.cardinality) return false;
  for (PointIndex h = 0; h < sp.num_hyperplanes(); ++h)
    if (!prof.admissible(static_cast<std::int64_t>(s.meet_count(sp.hyperplane_points(h)))))
      return false;
  return true;
}

inline std::map<std::string, std::int64_t> type_summary(const std::vector<HyperplaneType>& types) {
  std::map<std::string, std::int64_t> out;
  for (auto t : types) ++out[std::string(type_name(t))];
  return out;
}

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
  friend bool operator==(const Rational&, const Rational&) = default;
};

struct CardinalityRoots {
  std::int64_t root_classical = 0;
  Rational root_other;
  bool integral = false;
};

inline CardinalityRoots cardinality_roots(const PolarKind& kind) {
  forms::validate_kind(kind);
  if (kind.family == Family::parabolic || kind.m < 2)
    throw Error(Errc::IncompatibleKind, "roots need an elliptic, hyperbolic or hermitian kind with m >= 2");
  auto prof = profile(kind);
  using detail::i128;
  const i128 hyper = pg::count_points(kind.m, kind.q);
  const i128 t1 = pg::count_points(kind.m - 1, kind.q);
  const i128 t2 = pg::count_points(kind.m - 2, kind.q);
  const i128 u = prof.sizes[0], v = prof.sizes[1];
  // T2 S^2 - (T2 + T1 (u+v-1)) S + H u v = 0.
  const i128 b = t2 + t1 * (u + v - 1);
  const i128 s0 = prof.cardinality;
  if (t2 * s0 * s0 - b * s0 + hyper * u * v != 0) throw std::logic_error("classical size is not a root");
  i128 num = b - s0 * t2, den = t2;
  i128 g = std::gcd(static_cast<std::int64_t>(num < 0 ? -num : num), static_cast<std::int64_t>(den));
  if (g == 0) g = 1;
  CardinalityRoots r;
  r.root_classical = prof.cardinality;
  r.root_other = {static_cast<std::int64_t>(num / g), static_cast<std::int64_t>(den / g)};
  r.integral = r.root_other.den == 1 && r.root_other.num > 0;
  return r;
}

inline std::vector<PointIndex> singular_hyperplanes(const PointSet& s, const PolarKind& kind) {
  auto spec = spectrum(s);
  auto cls = classify(s, spec, kind);
  if (!cls.quasi_polar) throw Error(Errc::NotQuasiPolar, "set is not quasi-polar of kind " + to_string(kind));
  auto prof = profile(kind);
  std::vector<PointIndex> out;
  for (PointIndex h = 0; h < spec.per_hyperplane.size(); ++h)
    if (spec.per_hyperplane[h] == prof.singular_size) out.push_back(h);
  return out;
}

// Every line through n meets s in exactly one point.
inline bool is_line_nucleus(const PointSet& s, PointIndex n) {
  const auto& sp = s.space();
  if (s.contains(n)) return false;
  if (static_cast<std::int64_t>(s.size()) != pg::count_points(sp.m() - 1, sp.q())) return false;
  std::vector<PointIndex> line;
  bool ok = true;
  s.bits().for_each([&](std::size_t x) {
    if (!ok) return;
    sp.line_points(n, static_cast<PointIndex>(x), line);
    for (auto y : line)
      if (y != x && s.contains(y)) ok = false;
  });
  return ok;
}

inline std::optional<PointIndex> find_line_nucleus(const PointSet& s) {
  const auto& sp = s.space();
  if (static_cast<std::int64_t>(s.size()) != pg::count_points(sp.m() - 1, sp.q())) return std::nullopt;
  std::optional<PointIndex> found;
  for (PointIndex n = 0; n < sp.num_points(); ++n) {
    if (!is_line_nucleus(s, n)) continue;
    if (found) return std::nullopt;
    found = n;
  }
  return found;
}

struct ConditionReport {
  bool a = false, b = false, b_prime = false, c = false, c_prime = false, d = false, d_prime = false;
  std::optional<PointIndex> nucleus_candidate;
  std::int64_t singular_count = 0;
};

// Global conditions (a), (b'), (c') plus the pointwise conditions evaluated at
// one candidate N: the lowest point satisfying (c), else (d'), else (d), else (b).
inline ConditionReport nucleus_conditions(const PointSet& s) {
  const auto& sp = s.space();
  const int m = sp.m();
  if (m < 2 || m % 2) throw Error(Errc::IncompatibleKind, "conditions need an even ambient dimension");
  const std::int64_t q = sp.q();
  const std::int64_t qm = polar_size(Family::elliptic, m - 1, q);
  const std::int64_t qs = cone_size(Family::parabolic, m - 2, q);
  const std::int64_t qp = polar_size(Family::hyperbolic, m - 1, q);
  const std::size_t n = sp.num_points();

  auto spec = spectrum(s);
  ConditionReport r;
  r.a = static_cast<std::int64_t>(s.size()) == polar_size(Family::parabolic, m, q);
  Bitset singular(n), nonsingular(n);
  r.b_prime = true;
  for (PointIndex h = 0; h < n; ++h) {
    auto v = spec.per_hyperplane[h];
    if (v == qs) singular.set(h);
    else if (v == qm || v == qp) nonsingular.set(h);
    else r.b_prime = false;
  }
  r.singular_count = static_cast<std::int64_t>(singular.count());

  r.c_prime = true;
  for (const auto& e : sp.codim2()) {
    bool hit = false;
    for (auto h : e.hyperplanes) hit = hit || singular.test(h);
    if (!hit) {
      r.c_prime = false;
      break;
    }
  }

  Bitset common = Bitset(n).complement();
  singular.for_each([&](std::size_t h) { common &= sp.hyperplane_points(static_cast<PointIndex>(h)); });

  auto cond_c = [&](PointIndex x) { return is_line_nucleus(s, x); };
  auto cond_d = [&](PointIndex x) { return common.test(x); };
  auto cond_dp = [&](PointIndex x) { return cond_d(x) && sp.hyperplanes_through(x).is_subset_of(singular); };
  auto cond_b = [&](PointIndex x) {
    return !s.contains(x) && sp.hyperplanes_through(x).complement().is_subset_of(nonsingular);
  };

  std::optional<PointIndex> pick;
  for (auto pred : {0, 1, 2, 3}) {
    for (PointIndex x = 0; x < n && !pick; ++x) {
      bool ok = pred == 0 ? cond_c(x) : pred == 1 ? cond_dp(x) : pred == 2 ? cond_d(x) : cond_b(x);
      if (ok) pick = x;
    }
    if (pick) break;
  }
  if (pick) {
    r.b = cond_b(*pick);
    r.c = cond_c(*pick);
    r.d = cond_d(*pick);
    r.d_prime = cond_dp(*pick);
    if (r.c || r.d_prime) r.nucleus_candidate = pick;
  }
  return r;
}

}  // namespace qps::spectra
