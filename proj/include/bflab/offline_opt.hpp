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
#include <optional>
#include <stdexcept>
#include <vector>

#include "bflab/instance.hpp"

namespace bflab {

/// A feasible solution to the packing problem max v(S) s.t. c(S) <= B.
struct Solution {
  AgentSet set;
  Rat value;
  Rat total_cost;
};

namespace detail {

/// Flip-one-agent evaluator used by the exhaustive solver; keeps v(S) and
/// c(S) current in O(payload row) per flip instead of re-evaluating sets.
class IncrementalEval {
 public:
  explicit IncrementalEval(const Instance& inst) : inst_(&inst) {
    const auto& oracle = inst.oracle();
    if (const auto* c = oracle.as_coverage()) {
      counts_.assign(c->universe, 0);
    }
  }

  const AgentSet& set() const { return set_; }
  const Rat& value() const { return value_; }
  const Rat& cost() const { return cost_; }

  void flip(int i) {
    bool adding = !set_.contains(i);
    const auto& oracle = inst_->oracle();
    if (const auto* a = oracle.as_additive()) {
      value_ += adding ? a->weights[i] : -a->weights[i];
    } else if (const auto* c = oracle.as_coverage()) {
      std::uint64_t m = c->sets[i];
      while (m != 0) {
        int e = std::countr_zero(m);
        m &= m - 1;
        if (adding) {
          if (counts_[e]++ == 0) value_ += c->element_weights[e];
        } else {
          if (--counts_[e] == 0) value_ -= c->element_weights[e];
        }
      }
    } else if (const auto* g = oracle.as_cut()) {
      // Adding i: edges to outside start crossing, edges into S stop.
      for (int j = 0; j < inst_->n(); ++j) {
        if (j == i || g->w[i][j].is_zero()) continue;
        bool inside = set_.contains(j);
        if (adding) {
          value_ += inside ? -g->w[i][j] : g->w[i][j];
        } else {
          value_ += inside ? g->w[i][j] : -g->w[i][j];
        }
      }
    }
    if (adding) {
      set_.insert(i);
      cost_ += inst_->cost(i);
    } else {
      set_.erase(i);
      cost_ -= inst_->cost(i);
    }
    if (oracle.as_lookup() != nullptr) {
      value_ = oracle.eval(set_);
    }
  }

 private:
  const Instance* inst_;
  AgentSet set_;
  Rat value_;
  Rat cost_;
  std::vector<int> counts_;
};

inline void update_best(std::optional<Solution>& best, const AgentSet& s, const Rat& v,
                        const Rat& c) {
  if (!best || v > best->value || (v == best->value && lex_less(s, best->set))) {
    best = Solution{s, v, c};
  }
}

}  // namespace detail

/// Exact optimum of the packing problem over the restricted ground set, by
/// Gray-code enumeration of all subsets. Ties broken toward the
/// lexicographically smallest set. Refuses ground sets above 24 agents.
inline Solution brute_force_opt(const Instance& inst,
                                std::optional<AgentSet> restrict = std::nullopt) {
  AgentSet ground = restrict.value_or(AgentSet::full(inst.n()));
  if (!ground.subset_of(AgentSet::full(inst.n()))) {
    throw std::domain_error("brute_force_opt: restriction outside ground set");
  }
  std::vector<int> members = ground.members();
  int r = static_cast<int>(members.size());
  if (r > 24) throw std::length_error("brute_force_opt: ground set too large");

  std::optional<Solution> best;
  detail::update_best(best, AgentSet(), Rat(0), Rat(0));
  detail::IncrementalEval ev(inst);
  std::uint64_t total = 1ull << r;
  for (std::uint64_t g = 1; g < total; ++g) {
    ev.flip(members[std::countr_zero(g)]);
    if (ev.cost() <= inst.budget()) {
      detail::update_best(best, ev.set(), ev.value(), ev.cost());
    }
  }
  return *best;
}

/// Partial-enumeration greedy for monotone submodular knapsack: every seed
/// subset of size <= 3 is completed greedily by best marginal-value-per-cost
/// among agents fitting the residual budget; the best completion wins.
/// Guarantees value >= (1 - 1/e) * OPT(restrict). Ratio ties go to the
/// lowest agent index.
inline Solution greedy_knapsack_monotone(const Instance& inst,
                                         std::optional<AgentSet> restrict = std::nullopt) {
  if (!inst.oracle().is_monotone()) {
    throw std::logic_error("greedy_knapsack_monotone: oracle must be monotone");
  }
  AgentSet ground = restrict.value_or(AgentSet::full(inst.n()));
  if (!ground.subset_of(AgentSet::full(inst.n()))) {
    throw std::domain_error("greedy_knapsack_monotone: restriction outside ground set");
  }
  std::vector<int> members = ground.members();
  int r = static_cast<int>(members.size());
  const Rat& budget = inst.budget();

  std::optional<Solution> best;
  detail::update_best(best, AgentSet(), Rat(0), Rat(0));

  auto complete = [&](AgentSet seed, Rat seed_cost) {
    AgentSet cur = seed;
    Rat cost = seed_cost;
    Rat value = inst.oracle().eval(cur);
    while (true) {
      int pick = -1;
      Rat pick_marginal, pick_cost;
      for (int i : members) {
        if (cur.contains(i)) continue;
        const Rat& ci = inst.cost(i);
        if (cost + ci > budget) continue;
        Rat m = inst.oracle().marginal(i, cur);
        if (!m.is_positive()) continue;
        // m/ci > pick_marginal/pick_cost, strictly, keeps the lowest index.
        if (pick < 0 || m * pick_cost > pick_marginal * ci) {
          pick = i;
          pick_marginal = m;
          pick_cost = ci;
        }
      }
      if (pick < 0) break;
      cur.insert(pick);
      cost += pick_cost;
      value += pick_marginal;
    }
    detail::update_best(best, cur, value, cost);
  };

  auto seed_cost = [&](const AgentSet& s) {
    Rat c;
    s.for_each([&](int i) { c += inst.cost(i); });
    return c;
  };

  complete(AgentSet(), Rat(0));
  for (int a = 0; a < r; ++a) {
    AgentSet s1 = AgentSet::single(members[a]);
    Rat c1 = seed_cost(s1);
    if (c1 > budget) continue;
    complete(s1, c1);
    for (int b = a + 1; b < r; ++b) {
      AgentSet s2 = s1.with(members[b]);
      Rat c2 = seed_cost(s2);
      if (c2 > budget) continue;
      complete(s2, c2);
      for (int c = b + 1; c < r; ++c) {
        AgentSet s3 = s2.with(members[c]);
        Rat c3 = seed_cost(s3);
        if (c3 > budget) continue;
        complete(s3, c3);
      }
    }
  }
  return *best;
}

/// Solver used inside the sampling mechanisms for general submodular
/// objectives. Up to 20 agents it returns the exact restricted optimum
/// (which dominates the 1/e requirement); beyond that it falls back to a
/// deterministic greedy heuristic with no certified factor.
inline Solution solve_sample_nonmonotone(const Instance& inst,
                                         std::optional<AgentSet> restrict = std::nullopt) {
  AgentSet ground = restrict.value_or(AgentSet::full(inst.n()));
  if (ground.count() <= 20) return brute_force_opt(inst, ground);

  std::vector<int> members = ground.members();
  const Rat& budget = inst.budget();
  std::optional<Solution> best;
  detail::update_best(best, AgentSet(), Rat(0), Rat(0));

  // Heuristic: ratio greedy and value greedy over positive marginals,
  // keeping the best prefix seen (the objective may be non-monotone).
  for (bool by_ratio : {true, false}) {
    AgentSet cur;
    Rat cost, value;
    while (true) {
      int pick = -1;
      Rat pick_marginal, pick_cost;
      for (int i : members) {
        if (cur.contains(i)) continue;
        const Rat& ci = inst.cost(i);
        if (cost + ci > budget) continue;
        Rat m = inst.oracle().marginal(i, cur);
        if (!m.is_positive()) continue;
        bool better = pick < 0 || (by_ratio ? m * pick_cost > pick_marginal * ci
                                            : m > pick_marginal);
        if (better) {
          pick = i;
          pick_marginal = m;
          pick_cost = ci;
        }
      }
      if (pick < 0) break;
      cur.insert(pick);
      cost += pick_cost;
      value += pick_marginal;
      detail::update_best(best, cur, value, cost);
    }
  }
  for (int i : members) {
    if (inst.cost(i) <= budget) {
      detail::update_best(best, AgentSet::single(i), inst.oracle().singleton(i), inst.cost(i));
    }
  }
  return *best;
}

}  // namespace bflab
