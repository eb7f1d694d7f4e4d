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

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace bflab {

/// Exact rational number on int64 numerator/denominator.
///
/// Always stored reduced with a positive denominator. Intermediate products
/// use 128-bit arithmetic; if a reduced result does not fit in int64 the
/// operation throws std::overflow_error instead of silently wrapping.
class Rat {
 public:
  constexpr Rat() : num_(0), den_(1) {}
  constexpr Rat(std::int64_t n) : num_(n), den_(1) {}  // NOLINT: implicit
  Rat(std::int64_t n, std::int64_t d) {
    if (d == 0) throw std::domain_error("Rat: zero denominator");
    __int128 nn = n, dd = d;
    if (dd < 0) {
      nn = -nn;
      dd = -dd;
    }
    assign_reduced(nn, dd);
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  bool is_negative() const { return num_ < 0; }
  bool is_positive() const { return num_ > 0; }
  int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  /// Parses "p/q", "p", or a plain decimal like "0.46" / "-1.25".
  static Rat parse(const std::string& s);

  /// Renders as "p/q", or just "p" when the denominator is 1.
  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend Rat operator+(const Rat& a, const Rat& b) {
    __int128 n = i128(a.num_) * b.den_ + i128(b.num_) * a.den_;
    return from_reduced(n, i128(a.den_) * b.den_);
  }
  friend Rat operator-(const Rat& a, const Rat& b) {
    __int128 n = i128(a.num_) * b.den_ - i128(b.num_) * a.den_;
    return from_reduced(n, i128(a.den_) * b.den_);
  }
  friend Rat operator*(const Rat& a, const Rat& b) {
    return from_reduced(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
  }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.num_ == 0) throw std::domain_error("Rat: division by zero");
    __int128 n = i128(a.num_) * b.den_;
    __int128 d = i128(a.den_) * b.num_;
    if (d < 0) {
      n = -n;
      d = -d;
    }
    return from_reduced(n, d);
  }
  Rat operator-() const {
    Rat r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }
  Rat& operator+=(const Rat& b) { return *this = *this + b; }
  Rat& operator-=(const Rat& b) { return *this = *this - b; }
  Rat& operator*=(const Rat& b) { return *this = *this * b; }
  Rat& operator/=(const Rat& b) { return *this = *this / b; }

  // Comparisons are exact: cross products of int64 values always fit in 128
  // bits, so no reduction is needed.
  friend bool operator==(const Rat& a, const Rat& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) {
    return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
  }
  friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
  friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
  friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

  friend Rat min(const Rat& a, const Rat& b) { return a < b ? a : b; }
  friend Rat max(const Rat& a, const Rat& b) { return a < b ? b : a; }
  friend Rat abs(const Rat& a) { return a.num_ < 0 ? -a : a; }

  std::uint64_t hash_mix() const {
    auto h = static_cast<std::uint64_t>(num_) * 0x9e3779b97f4a7c15ull;
    return h ^ (static_cast<std::uint64_t>(den_) + (h >> 31));
  }

 private:
  static __int128 i128(std::int64_t v) { return static_cast<__int128>(v); }

  static __int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  void assign_reduced(__int128 n, __int128 d) {
    if (n == 0) {
      num_ = 0;
      den_ = 1;
      return;
    }
    __int128 g = gcd128(n, d);
    n /= g;
    d /= g;
    constexpr __int128 kMax = INT64_MAX;
    if (n > kMax || n < -kMax || d > kMax) {
      throw std::overflow_error("Rat: value exceeds 64-bit range");
    }
    num_ = static_cast<std::int64_t>(n);
    den_ = static_cast<std::int64_t>(d);
  }

  static Rat from_reduced(__int128 n, __int128 d) {
    Rat r;
    r.assign_reduced(n, d);
    return r;
  }

  std::int64_t num_;
  std::int64_t den_;
};

inline Rat Rat::parse(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("Rat::parse: empty string");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    std::size_t p1 = 0, p2 = 0;
    std::int64_t n = std::stoll(s.substr(0, slash), &p1);
    std::int64_t d = std::stoll(s.substr(slash + 1), &p2);
    if (p1 != slash || p2 != s.size() - slash - 1) {
      throw std::invalid_argument("Rat::parse: bad rational '" + s + "'");
    }
    return Rat(n, d);
  }
  auto dot = s.find('.');
  if (dot == std::string::npos) {
    std::size_t p = 0;
    std::int64_t n = std::stoll(s, &p);
    if (p != s.size()) throw std::invalid_argument("Rat::parse: bad integer '" + s + "'");
    return Rat(n);
  }
  bool neg = s[0] == '-';
  std::string digits = s.substr(neg ? 1 : 0);
  auto d2 = digits.find('.');
  std::string frac = digits.substr(d2 + 1);
  digits = digits.substr(0, d2) + frac;
  if (digits.empty() || frac.size() > 17 || digits.size() > 18 ||
      digits.find_first_not_of("0123456789") != std::string::npos) {
    throw std::invalid_argument("Rat::parse: bad decimal '" + s + "'");
  }
  std::int64_t n = digits.empty() ? 0 : std::stoll(digits);
  std::int64_t d = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) d *= 10;
  return Rat(neg ? -n : n, d);
}

}  // namespace bflab
