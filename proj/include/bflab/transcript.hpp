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

#include <boost/container/small_vector.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

#include "bflab/rational.hpp"
#include "bflab/rng.hpp"

namespace bflab {

/// Record of every random word a mechanism run consumed. Coins beyond the
/// pre-supplied ones are derived deterministically from the seed, so a
/// transcript replays a run bit-for-bit on any platform. Tests may inject
/// explicit coin words to force particular branches.
struct CoinTranscript {
  std::uint64_t seed = 0;
  boost::container::small_vector<std::uint64_t, 8> coins;

  static CoinTranscript from_seed(std::uint64_t s) {
    CoinTranscript t;
    t.seed = s;
    return t;
  }
};

/// Sequential reader that materializes coins into the transcript as they are
/// consumed.
class CoinCursor {
 public:
  explicit CoinCursor(CoinTranscript& t) : t_(&t) {}

  std::uint64_t next() {
    if (pos_ == t_->coins.size()) {
      t_->coins.push_back(splitmix64_at(t_->seed, pos_));
    }
    return t_->coins[pos_++];
  }

 private:
  CoinTranscript* t_;
  std::size_t pos_ = 0;
};

/// Exact Bernoulli(prob) from one uniform 64-bit word:
/// true iff raw/2^64 < prob, decided in integer arithmetic.
inline bool coin_bernoulli(std::uint64_t raw, const Rat& prob) {
  if (prob.num() <= 0) return false;
  if (prob >= Rat(1)) return true;
  using u128 = unsigned __int128;
  u128 lhs = static_cast<u128>(raw) * static_cast<u128>(prob.den());
  u128 rhs = static_cast<u128>(prob.num()) << 64;
  return lhs < rhs;
}

namespace detail {

// Exact Binomial(n, p) inverse-CDF tables. Entry k holds
// (cumulative pmf numerator up to k) << 64, against a common denominator
// den(p)^n; a uniform word r maps to the smallest k with
// r * den(p)^n < table[k].
struct BinomialTable {
  std::vector<boost::multiprecision::cpp_int> thresholds;
  boost::multiprecision::cpp_int denominator;
};

inline const BinomialTable& binomial_table(int n, const Rat& p) {
  using boost::multiprecision::cpp_int;
  static std::mutex mu;
  static std::map<std::tuple<int, std::int64_t, std::int64_t>,
                  std::unique_ptr<BinomialTable>>
      cache;
  std::scoped_lock lock(mu);
  auto key = std::make_tuple(n, p.num(), p.den());
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;

  auto table = std::make_unique<BinomialTable>();
  cpp_int pn = p.num();
  cpp_int qn = p.den() - p.num();  // numerator of 1-p over den(p)
  cpp_int den = 1;
  for (int i = 0; i < n; ++i) den *= p.den();
  table->denominator = den;

  // pmf numerator at k: C(n,k) * pn^k * qn^(n-k)
  cpp_int binom = 1;
  cpp_int pk = 1;
  std::vector<cpp_int> qpow(n + 1);
  qpow[0] = 1;
  for (int i = 1; i <= n; ++i) qpow[i] = qpow[i - 1] * qn;
  cpp_int cum = 0;
  table->thresholds.reserve(n + 1);
  for (int k = 0; k <= n; ++k) {
    cum += binom * pk * qpow[n - k];
    table->thresholds.push_back(cum << 64);
    binom = binom * (n - k) / (k + 1);
    pk *= pn;
  }
  auto& ref = *table;
  cache.emplace(key, std::move(table));
  return ref;
}

}  // namespace detail

/// Exact inverse-CDF draw from Binomial(n, p) using one uniform word.
inline int draw_binomial(std::uint64_t raw, int n, const Rat& p) {
  if (n < 0) throw std::domain_error("draw_binomial: n < 0");
  if (p.is_negative() || p > Rat(1)) throw std::domain_error("draw_binomial: p out of range");
  if (n == 0 || p.is_zero()) return 0;
  if (p == Rat(1)) return n;
  const auto& table = detail::binomial_table(n, p);
  boost::multiprecision::cpp_int lhs = table.denominator;
  lhs *= raw;
  int lo = 0, hi = n;
  while (lo < hi) {
    int mid = (lo + hi) / 2;
    if (lhs < table.thresholds[mid]) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

}  // namespace bflab
