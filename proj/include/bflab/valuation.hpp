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

#include <algorithm>
#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "bflab/agent_set.hpp"
#include "bflab/rational.hpp"

namespace bflab {

enum class ValKind { kAdditive, kMonotoneSubmodular, kGeneralSubmodular };

inline const char* to_string(ValKind k) {
  switch (k) {
    case ValKind::kAdditive: return "additive";
    case ValKind::kMonotoneSubmodular: return "monotone-submodular";
    case ValKind::kGeneralSubmodular: return "general-submodular";
  }
  return "?";
}

/// Set-function value oracle over agents {0..n-1}.
///
/// Four concrete families: additive weights, weighted coverage, symmetric
/// graph cut, and an explicit lookup table (the latter mainly for planting
/// violations in tests and for the lower-bound lab). Values are exact
/// rationals; eval is a pure function and instances are immutable, so an
/// oracle can be shared freely across threads. Copies share the payload.
class ValuationOracle {
 public:
  struct Additive {
    std::vector<Rat> weights;
  };
  struct Coverage {
    int universe = 0;                     // elements are {0..universe-1}, universe <= 64
    std::vector<std::uint64_t> sets;      // element bitmask per agent
    std::vector<Rat> element_weights;     // one per element, >= 0
  };
  struct GraphCut {
    std::vector<std::vector<Rat>> w;      // symmetric, zero diagonal, >= 0
  };
  struct Lookup {
    std::vector<Rat> values;              // size 2^n, indexed by agent bitmask
  };

  static ValuationOracle additive(std::vector<Rat> weights) {
    for (const Rat& w : weights) {
      if (w.is_negative()) throw std::invalid_argument("additive: negative weight");
    }
    int n = static_cast<int>(weights.size());
    return ValuationOracle(n, ValKind::kAdditive, Additive{std::move(weights)});
  }

  static ValuationOracle coverage(int universe, std::vector<std::vector<int>> sets,
                                  std::vector<Rat> element_weights) {
    if (universe < 0 || universe > 64) throw std::invalid_argument("coverage: universe size");
    if (static_cast<int>(element_weights.size()) != universe) {
      throw std::invalid_argument("coverage: weight count != universe");
    }
    for (const Rat& w : element_weights) {
      if (w.is_negative()) throw std::invalid_argument("coverage: negative weight");
    }
    Coverage payload;
    payload.universe = universe;
    payload.element_weights = std::move(element_weights);
    payload.sets.reserve(sets.size());
    for (const auto& s : sets) {
      std::uint64_t mask = 0;
      for (int e : s) {
        if (e < 0 || e >= universe) throw std::invalid_argument("coverage: element out of range");
        mask |= 1ull << e;
      }
      payload.sets.push_back(mask);
    }
    int n = static_cast<int>(payload.sets.size());
    return ValuationOracle(n, ValKind::kMonotoneSubmodular, std::move(payload));
  }

  static ValuationOracle graph_cut(std::vector<std::vector<Rat>> w) {
    int n = static_cast<int>(w.size());
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(w[i].size()) != n) throw std::invalid_argument("cut: matrix not square");
      if (!w[i][i].is_zero()) throw std::invalid_argument("cut: nonzero diagonal");
      for (int j = 0; j < n; ++j) {
        if (w[i][j].is_negative()) throw std::invalid_argument("cut: negative weight");
        if (w[i][j] != w[j][i]) throw std::invalid_argument("cut: matrix not symmetric");
      }
    }
    return ValuationOracle(n, ValKind::kGeneralSubmodular, GraphCut{std::move(w)});
  }

  static ValuationOracle lookup(int n, std::vector<Rat> values, ValKind declared) {
    if (n < 0 || n > 20) throw std::invalid_argument("lookup: n out of range");
    if (values.size() != (std::size_t{1} << n)) throw std::invalid_argument("lookup: need 2^n values");
    if (!values[0].is_zero()) throw std::invalid_argument("lookup: v(empty) must be 0");
    for (const Rat& v : values) {
      if (v.is_negative()) throw std::invalid_argument("lookup: negative value");
    }
    return ValuationOracle(n, declared, Lookup{std::move(values)});
  }

  int ground_size() const { return p_->n; }
  ValKind kind() const { return p_->kind; }
  bool is_monotone() const { return p_->kind != ValKind::kGeneralSubmodular; }

  Rat eval(const AgentSet& s) const {
    if (!s.subset_of(AgentSet::full(p_->n))) {
      throw std::domain_error("eval: agent index out of range");
    }
    if (!p_->table.empty()) return p_->table[s.low_mask()];
    return eval_direct(s);
  }

  /// v(i | S) = v(S + i) - v(S). Requires i not in S.
  Rat marginal(int i, const AgentSet& s) const {
    if (i < 0 || i >= p_->n) throw std::domain_error("marginal: agent out of range");
    if (s.contains(i)) throw std::domain_error("marginal: agent already in set");
    if (!p_->table.empty()) {
      std::uint64_t m = s.low_mask();
      return p_->table[m | (1ull << i)] - p_->table[m];
    }
    return eval_direct(s.with(i)) - eval_direct(s);
  }

  Rat singleton(int i) const { return marginal(i, AgentSet()); }

  const Additive* as_additive() const { return std::get_if<Additive>(&p_->payload); }
  const Coverage* as_coverage() const { return std::get_if<Coverage>(&p_->payload); }
  const GraphCut* as_cut() const { return std::get_if<GraphCut>(&p_->payload); }
  const Lookup* as_lookup() const { return std::get_if<Lookup>(&p_->payload); }

 private:
  using Payload = std::variant<Additive, Coverage, GraphCut, Lookup>;

  struct Shared {
    int n;
    ValKind kind;
    Payload payload;
    std::vector<Rat> table;  // all 2^n values when n is small; empty otherwise
  };

  static constexpr int kTableMaxN = 14;

  ValuationOracle(int n, ValKind kind, Payload payload) {
    auto sh = std::make_shared<Shared>();
    sh->n = n;
    sh->kind = kind;
    sh->payload = std::move(payload);
    p_ = std::move(sh);
    if (n <= kTableMaxN) {
      std::vector<Rat> table(std::size_t{1} << n);
      for (std::uint64_t m = 0; m < table.size(); ++m) {
        table[m] = eval_direct(AgentSet::from_mask(m));
      }
      const_cast<Shared*>(p_.get())->table = std::move(table);
    }
  }

  Rat eval_direct(const AgentSet& s) const {
    const Shared& sh = *p_;
    if (const auto* a = std::get_if<Additive>(&sh.payload)) {
      Rat v;
      s.for_each([&](int i) { v += a->weights[i]; });
      return v;
    }
    if (const auto* c = std::get_if<Coverage>(&sh.payload)) {
      std::uint64_t covered = 0;
      s.for_each([&](int i) { covered |= c->sets[i]; });
      Rat v;
      while (covered != 0) {
        int e = std::countr_zero(covered);
        v += c->element_weights[e];
        covered &= covered - 1;
      }
      return v;
    }
    if (const auto* g = std::get_if<GraphCut>(&sh.payload)) {
      Rat v;
      s.for_each([&](int i) {
        for (int j = 0; j < sh.n; ++j) {
          if (!s.contains(j)) v += g->w[i][j];
        }
      });
      return v;
    }
    const auto& lk = std::get<Lookup>(sh.payload);
    return lk.values[s.low_mask()];
  }

  std::shared_ptr<const Shared> p_;
};

struct Counterexample {
  AgentSet s;
  AgentSet t;
  std::optional<int> agent;
  Rat lhs;
  Rat rhs;
};

struct PropertyReport {
  bool passed = true;
  std::optional<Counterexample> counterexample;
};

namespace detail {

/// All subset masks of `comp`, ordered by (popcount, lexicographic set order).
inline std::vector<std::uint64_t> submasks_by_size(std::uint64_t comp) {
  std::vector<std::uint64_t> out;
  std::uint64_t sub = 0;
  while (true) {
    out.push_back(sub);
    if (sub == comp) break;
    sub = (sub - comp) & comp;
  }
  std::sort(out.begin(), out.end(), [](std::uint64_t a, std::uint64_t b) {
    int ca = std::popcount(a), cb = std::popcount(b);
    if (ca != cb) return ca < cb;
    return lex_less(AgentSet::from_mask(a), AgentSet::from_mask(b));
  });
  return out;
}

}  // namespace detail

/// Checks v(i|S) >= v(i|T) for every S subseteq T, i notin T.
/// Enumeration is by (|S|, S), then (|T|, T) over supersets, then i ascending;
/// the first violation in that order is reported.
inline PropertyReport check_submodular(const ValuationOracle& oracle, int max_n = 12) {
  int n = oracle.ground_size();
  if (n > max_n) throw std::length_error("check_submodular: ground set too large");
  std::uint64_t all = (n == 64) ? ~0ull : (1ull << n) - 1;
  auto s_order = detail::submasks_by_size(all);
  for (std::uint64_t sm : s_order) {
    AgentSet s = AgentSet::from_mask(sm);
    for (std::uint64_t um : detail::submasks_by_size(all & ~sm)) {
      if (um == 0) continue;  // S == T holds trivially
      AgentSet t = AgentSet::from_mask(sm | um);
      for (int i = 0; i < n; ++i) {
        if (t.contains(i)) continue;
        Rat lhs = oracle.marginal(i, s);
        Rat rhs = oracle.marginal(i, t);
        if (lhs < rhs) {
          return {false, Counterexample{s, t, i, lhs, rhs}};
        }
      }
    }
  }
  return {};
}

/// Checks v(T) <= v(S) + sum_{i in T\S} v(i|S) + sum_{i in S\T} v(i|(S u T)-i)
/// over all pairs (S, T), in (|S|, S, |T|, T) order.
inline PropertyReport check_nemhauser(const ValuationOracle& oracle, int max_n = 12) {
  int n = oracle.ground_size();
  if (n > max_n) throw std::length_error("check_nemhauser: ground set too large");
  std::uint64_t all = (n == 64) ? ~0ull : (1ull << n) - 1;
  auto order = detail::submasks_by_size(all);
  for (std::uint64_t sm : order) {
    AgentSet s = AgentSet::from_mask(sm);
    Rat vs = oracle.eval(s);
    for (std::uint64_t tm : order) {
      AgentSet t = AgentSet::from_mask(tm);
      Rat rhs = vs;
      AgentSet uni = s | t;
      t.minus(s).for_each([&](int i) { rhs += oracle.marginal(i, s); });
      s.minus(t).for_each([&](int i) { rhs += oracle.marginal(i, uni.without(i)); });
      Rat lhs = oracle.eval(t);
      if (lhs > rhs) {
        return {false, Counterexample{s, t, std::nullopt, lhs, rhs}};
      }
    }
  }
  return {};
}

/// Checks v(S) <= v(T) for all S subseteq T (meaningful for monotone-tagged oracles).
inline PropertyReport check_monotone(const ValuationOracle& oracle, int max_n = 12) {
  int n = oracle.ground_size();
  if (n > max_n) throw std::length_error("check_monotone: ground set too large");
  std::uint64_t all = (n == 64) ? ~0ull : (1ull << n) - 1;
  for (std::uint64_t sm : detail::submasks_by_size(all)) {
    AgentSet s = AgentSet::from_mask(sm);
    Rat vs = oracle.eval(s);
    for (int i = 0; i < n; ++i) {
      if (s.contains(i)) continue;
      Rat vt = oracle.eval(s.with(i));
      if (vs > vt) {
        return {false, Counterexample{s, s.with(i), i, vs, vt}};
      }
    }
  }
  return {};
}

}  // namespace bflab
