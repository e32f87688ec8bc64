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
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace qps {

class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

  std::size_t size() const noexcept { return n_; }
  std::size_t num_words() const noexcept { return words_.size(); }
  const std::uint64_t* data() const noexcept { return words_.data(); }

  void set(std::size_t i) noexcept { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) noexcept { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  bool test(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1; }
  void clear() noexcept { std::fill(words_.begin(), words_.end(), 0); }

  std::size_t count() const noexcept {
    std::size_t c = 0;
    for (auto w : words_) c += std::popcount(w);
    return c;
  }
  bool any() const noexcept {
    for (auto w : words_)
      if (w) return true;
    return false;
  }
  bool none() const noexcept { return !any(); }

  std::size_t and_count(const Bitset& o) const noexcept {
    std::size_t c = 0;
    for (std::size_t i = 0; i < words_.size(); ++i) c += std::popcount(words_[i] & o.words_[i]);
    return c;
  }
  bool intersects(const Bitset& o) const noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & o.words_[i]) return true;
    return false;
  }
  bool is_subset_of(const Bitset& o) const noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }

  Bitset& operator&=(const Bitset& o) noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  Bitset& operator|=(const Bitset& o) noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  Bitset& operator^=(const Bitset& o) noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
    return *this;
  }
  Bitset& subtract(const Bitset& o) noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
  }
  Bitset complement() const {
    Bitset r(n_);
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = ~words_[i];
    if (n_ & 63) r.words_.back() &= (std::uint64_t{1} << (n_ & 63)) - 1;
    return r;
  }

  friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }
  friend Bitset operator|(Bitset a, const Bitset& b) { return a |= b; }
  friend Bitset operator^(Bitset a, const Bitset& b) { return a ^= b; }
  friend Bitset operator-(Bitset a, const Bitset& b) { return a.subtract(b); }

  friend bool operator==(const Bitset& a, const Bitset& b) noexcept {
    return a.n_ == b.n_ && a.words_ == b.words_;
  }
  // Orders sets by their ascending index lists, lexicographically.
  friend bool operator<(const Bitset& a, const Bitset& b) noexcept {
    for (std::size_t i = 0; i < a.words_.size() && i < b.words_.size(); ++i) {
      std::uint64_t d = a.words_[i] ^ b.words_[i];
      if (!d) continue;
      std::uint64_t low = d & (~d + 1);
      // A list owning the first differing index is smaller unless the other
      // list has already ended.
      bool a_has = a.words_[i] & low;
      if (a_has) return b.has_from(i, low);
      return !a.has_from(i, low);
    }
    return a.n_ < b.n_;
  }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w) {
        f(i * 64 + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
  }

  std::vector<std::uint32_t> indices() const {
    std::vector<std::uint32_t> out;
    out.reserve(count());
    for_each([&](std::size_t i) { out.push_back(static_cast<std::uint32_t>(i)); });
    return out;
  }

  std::size_t hash() const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto w : words_) h = (h ^ std::hash<std::uint64_t>{}(w)) * 1099511628211ull;
    return h;
  }

 private:
  // Whether any bit strictly above `low` in word i, or in a later word, is set.
  bool has_from(std::size_t i, std::uint64_t low) const noexcept {
    std::uint64_t above = ~((low << 1) - 1);
    if (low == (std::uint64_t{1} << 63)) above = 0;
    if (words_[i] & above) return true;
    for (std::size_t j = i + 1; j < words_.size(); ++j)
      if (words_[j]) return true;
    return false;
  }

  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace qps
