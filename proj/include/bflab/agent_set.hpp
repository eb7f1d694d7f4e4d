// Copyright 2026 The Authors.
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

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace bflab {

/// Subset of agents {0, ..., 127} as a two-word bitmask.
class AgentSet {
 public:
  constexpr AgentSet() : lo_(0), hi_(0) {}

  static AgentSet of(std::initializer_list<int> agents) {
    AgentSet s;
    for (int a : agents) s.insert(a);
    return s;
  }
  static AgentSet single(int i) {
    AgentSet s;
    s.insert(i);
    return s;
  }
  static AgentSet full(int n) {
    AgentSet s;
    check(n == 0 ? 0 : n - 1);
    if (n >= 64) {
      s.lo_ = ~0ull;
      s.hi_ = (n == 128) ? ~0ull : ((1ull << (n - 64)) - 1);
    } else {
      s.lo_ = (n == 0) ? 0 : ((n == 64) ? ~0ull : ((1ull << n) - 1));
    }
    return s;
  }
  static AgentSet from_mask(std::uint64_t lo) {
    AgentSet s;
    s.lo_ = lo;
    return s;
  }

  bool contains(int i) const {
    check(i);
    return ((i < 64 ? lo_ >> i : hi_ >> (i - 64)) & 1) != 0;
  }
  void insert(int i) {
    check(i);
    (i < 64 ? lo_ : hi_) |= 1ull << (i & 63);
  }
  void erase(int i) {
    check(i);
    (i < 64 ? lo_ : hi_) &= ~(1ull << (i & 63));
  }
  AgentSet with(int i) const {
    AgentSet s = *this;
    s.insert(i);
    return s;
  }
  AgentSet without(int i) const {
    AgentSet s = *this;
    s.erase(i);
    return s;
  }

  int count() const { return std::popcount(lo_) + std::popcount(hi_); }
  bool empty() const { return lo_ == 0 && hi_ == 0; }
  bool subset_of(const AgentSet& t) const {
    return (lo_ & ~t.lo_) == 0 && (hi_ & ~t.hi_) == 0;
  }

  friend AgentSet operator|(const AgentSet& a, const AgentSet& b) {
    AgentSet s;
    s.lo_ = a.lo_ | b.lo_;
    s.hi_ = a.hi_ | b.hi_;
    return s;
  }
  friend AgentSet operator&(const AgentSet& a, const AgentSet& b) {
    AgentSet s;
    s.lo_ = a.lo_ & b.lo_;
    s.hi_ = a.hi_ & b.hi_;
    return s;
  }
  friend AgentSet operator^(const AgentSet& a, const AgentSet& b) {
    AgentSet s;
    s.lo_ = a.lo_ ^ b.lo_;
    s.hi_ = a.hi_ ^ b.hi_;
    return s;
  }
  AgentSet minus(const AgentSet& b) const {
    AgentSet s;
    s.lo_ = lo_ & ~b.lo_;
    s.hi_ = hi_ & ~b.hi_;
    return s;
  }
  friend bool operator==(const AgentSet& a, const AgentSet& b) {
    return a.lo_ == b.lo_ && a.hi_ == b.hi_;
  }
  friend bool operator!=(const AgentSet& a, const AgentSet& b) { return !(a == b); }

  int smallest() const {
    if (lo_ != 0) return std::countr_zero(lo_);
    if (hi_ != 0) return 64 + std::countr_zero(hi_);
    return -1;
  }

  /// Lexicographic order on the sorted member lists; the set owning the
  /// smallest element of the symmetric difference is the smaller one.
  friend bool lex_less(const AgentSet& a, const AgentSet& b) {
    AgentSet d = a ^ b;
    if (d.empty()) return false;
    return a.contains(d.smallest());
  }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    std::uint64_t w = lo_;
    while (w != 0) {
      fn(std::countr_zero(w));
      w &= w - 1;
    }
    w = hi_;
    while (w != 0) {
      fn(64 + std::countr_zero(w));
      w &= w - 1;
    }
  }

  std::vector<int> members() const {
    std::vector<int> v;
    v.reserve(count());
    for_each([&](int i) { v.push_back(i); });
    return v;
  }

  /// Low 64-bit word; valid as a table index only when all agents are < 64.
  std::uint64_t low_mask() const {
    if (hi_ != 0) throw std::length_error("AgentSet: agents above 63 present");
    return lo_;
  }

  std::string str() const {
    std::string s = "{";
    bool first = true;
    for_each([&](int i) {
      if (!first) s += ",";
      s += std::to_string(i);
      first = false;
    });
    return s + "}";
  }

 private:
  static void check(int i) {
    if (i < 0 || i >= 128) throw std::domain_error("AgentSet: index out of range");
  }
  std::uint64_t lo_;
  std::uint64_t hi_;
};

}  // namespace bflab
