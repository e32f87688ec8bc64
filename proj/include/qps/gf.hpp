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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qps/error.hpp"

namespace qps::gf {

using Elem = std::uint8_t;

inline constexpr int kMaxOrder = 32;

// Conway polynomials for the non-prime orders, constant term first.
struct Modulus {
  int q;
  std::vector<int> coeffs;
};

inline const std::vector<Modulus>& conway_moduli() {
  static const std::vector<Modulus> table = {
      {4, {1, 1, 1}},        {8, {1, 1, 0, 1}},    {9, {2, 2, 1}},
      {16, {1, 1, 0, 0, 1}}, {25, {2, 4, 1}},      {27, {1, 2, 0, 1}},
      {32, {1, 0, 1, 0, 0, 1}},
  };
  return table;
}

class FieldTable {
 public:
  int q() const noexcept { return q_; }
  int p() const noexcept { return p_; }
  int e() const noexcept { return e_; }
  const std::vector<int>& modulus() const noexcept { return modulus_; }
  bool has_conj() const noexcept { return sqrt_q_ != 0; }
  // 0 when q is not a square.
  int sqrt_q() const noexcept { return sqrt_q_; }

  Elem add(Elem a, Elem b) const noexcept { return add_[a * q_ + b]; }
  Elem sub(Elem a, Elem b) const noexcept { return add_[a * q_ + neg_[b]]; }
  Elem mul(Elem a, Elem b) const noexcept { return mul_[a * q_ + b]; }
  Elem neg(Elem a) const noexcept { return neg_[a]; }

  Elem inv(Elem a) const {
    if (a == 0) throw Error(Errc::DivisionByZero, "inverse of 0");
    return inv_[a];
  }
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

  Elem pow(Elem a, std::uint64_t k) const noexcept {
    Elem r = 1;
    Elem b = a;
    while (k) {
      if (k & 1) r = mul(r, b);
      b = mul(b, b);
      k >>= 1;
    }
    return r;
  }

  Elem conj(Elem a) const {
    if (!sqrt_q_)
      throw Error(Errc::NotASquareOrder,
                  "GF(" + std::to_string(q_) + ") has no conjugation");
    return conj_[a];
  }

  std::vector<int> digits(Elem a) const {
    std::vector<int> d(e_);
    int n = a;
    for (int i = 0; i < e_; ++i) {
      d[i] = n % p_;
      n /= p_;
    }
    return d;
  }

 private:
  friend FieldTable build_field(int q);

  int q_ = 0;
  int p_ = 0;
  int e_ = 0;
  int sqrt_q_ = 0;
  std::vector<int> modulus_;
  std::vector<Elem> add_, mul_, neg_, inv_, conj_;
};

inline FieldTable build_field(int q) {
  if (q < 2)
    throw Error(Errc::NotPrimePower, std::to_string(q) + " is not a prime power");
  int p = 2;
  while (q % p != 0) ++p;
  int e = 0;
  int rest = q;
  while (rest % p == 0) {
    rest /= p;
    ++e;
  }
  if (rest != 1)
    throw Error(Errc::NotPrimePower, std::to_string(q) + " is not a prime power");
  if (q > kMaxOrder)
    throw Error(Errc::OrderTooLarge,
                std::to_string(q) + " exceeds " + std::to_string(kMaxOrder));

  FieldTable f;
  f.q_ = q;
  f.p_ = p;
  f.e_ = e;
  if (e == 1) {
    f.modulus_ = {0, 1};
  } else {
    for (const auto& m : conway_moduli())
      if (m.q == q) f.modulus_ = m.coeffs;
  }

  auto digits = [&](int n) {
    std::vector<int> d(e);
    for (int i = 0; i < e; ++i) {
      d[i] = n % p;
      n /= p;
    }
    return d;
  };
  auto encode = [&](const std::vector<int>& d) {
    int n = 0;
    for (int i = e - 1; i >= 0; --i) n = n * p + d[i];
    return n;
  };

  f.add_.resize(q * q);
  f.mul_.resize(q * q);
  f.neg_.resize(q);
  f.inv_.assign(q, 0);
  for (int a = 0; a < q; ++a) {
    auto da = digits(a);
    std::vector<int> dn(e);
    for (int i = 0; i < e; ++i) dn[i] = (p - da[i]) % p;
    f.neg_[a] = static_cast<Elem>(encode(dn));
    for (int b = 0; b < q; ++b) {
      auto db = digits(b);
      std::vector<int> ds(e);
      for (int i = 0; i < e; ++i) ds[i] = (da[i] + db[i]) % p;
      f.add_[a * q + b] = static_cast<Elem>(encode(ds));

      std::vector<int> prod(2 * e, 0);
      for (int i = 0; i < e; ++i)
        for (int j = 0; j < e; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
      // Reduce by the monic modulus from the top degree down.
      for (int k = 2 * e - 2; k >= e; --k) {
        int c = prod[k];
        if (!c) continue;
        for (int i = 0; i <= e; ++i)
          prod[k - e + i] = ((prod[k - e + i] - c * f.modulus_[i]) % p + p) % p;
      }
      prod.resize(e);
      f.mul_[a * q + b] = static_cast<Elem>(encode(prod));
    }
  }

  for (int a = 1; a < q; ++a) {
    for (int b = 1; b < q; ++b)
      if (f.mul_[a * q + b] == 1) f.inv_[a] = static_cast<Elem>(b);
    if (f.inv_[a] == 0) throw std::logic_error("modulus is not irreducible");
  }

  if (e % 2 == 0) {
    int r = 1;
    for (int i = 0; i < e / 2; ++i) r *= p;
    f.sqrt_q_ = r;
    f.conj_.resize(q);
    for (int a = 0; a < q; ++a) f.conj_[a] = f.pow(static_cast<Elem>(a), r);
  }
  return f;
}

enum class Op { add, mul, inv, neg };

inline Elem arithmetic(const FieldTable& f, Op op, int a, std::optional<int> b = {}) {
  auto check = [&](int v) {
    if (v < 0 || v >= f.q())
      throw Error(Errc::IndexOutOfRange, "element " + std::to_string(v));
    return static_cast<Elem>(v);
  };
  Elem x = check(a);
  switch (op) {
    case Op::add:
      if (!b) throw Error(Errc::InvalidArgument, "add needs two operands");
      return f.add(x, check(*b));
    case Op::mul:
      if (!b) throw Error(Errc::InvalidArgument, "mul needs two operands");
      return f.mul(x, check(*b));
    case Op::inv:
      return f.inv(x);
    case Op::neg:
      return f.neg(x);
  }
  return 0;
}

inline Elem conj(const FieldTable& f, Elem a) { return f.conj(a); }

}  // namespace qps::gf
