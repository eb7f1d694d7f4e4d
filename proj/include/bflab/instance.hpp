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

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bflab/rng.hpp"
#include "bflab/valuation.hpp"

namespace bflab {

/// A procurement instance: n agents with private costs, a budget, and a
/// valuation oracle over the agents. True costs satisfy 0 < c_i <= B.
class Instance {
 public:
  Instance(std::vector<Rat> costs, Rat budget, ValuationOracle oracle)
      : costs_(std::move(costs)), budget_(std::move(budget)), oracle_(std::move(oracle)) {
    if (!budget_.is_positive()) throw std::invalid_argument("Instance: budget must be positive");
    if (oracle_.ground_size() != n()) {
      throw std::invalid_argument("Instance: oracle ground size != cost count");
    }
    for (const Rat& c : costs_) {
      if (!c.is_positive() || c > budget_) {
        throw std::invalid_argument("Instance: costs must lie in (0, B]");
      }
    }
  }

  int n() const { return static_cast<int>(costs_.size()); }
  const std::vector<Rat>& costs() const { return costs_; }
  const Rat& cost(int i) const { return costs_.at(i); }
  const Rat& budget() const { return budget_; }
  const ValuationOracle& oracle() const { return oracle_; }

  /// Copy with agent i's *declared* cost replaced. Declarations live in
  /// [0, B] (0 is legal in deviation sweeps even though true costs are
  /// positive), so this bypasses the positivity check.
  Instance with_cost_unchecked(int i, Rat declared) const {
    if (declared.is_negative() || declared > budget_) {
      throw std::domain_error("declared cost must lie in [0, B]");
    }
    Instance copy = *this;
    copy.costs_.at(i) = std::move(declared);
    return copy;
  }

 private:
  std::vector<Rat> costs_;
  Rat budget_;
  ValuationOracle oracle_;
};

/// Instance plus a prediction omega of the optimal value. epsilon is an
/// optional annotation recorded when the prediction was derived from a known
/// optimum via omega = (1 - epsilon) * opt.
struct AugmentedInstance {
  Instance base;
  Rat omega;
  std::optional<Rat> epsilon;
};

/// omega = (1 - epsilon) * optimum, epsilon in [0, 1), optimum > 0.
inline AugmentedInstance attach_prediction(Instance inst, const Rat& epsilon,
                                           const Rat& optimum) {
  if (epsilon.is_negative() || epsilon >= Rat(1)) {
    throw std::domain_error("attach_prediction: epsilon must lie in [0, 1)");
  }
  if (!optimum.is_positive()) {
    throw std::domain_error("attach_prediction: optimum must be positive");
  }
  Rat omega = (Rat(1) - epsilon) * optimum;
  return AugmentedInstance{std::move(inst), omega, epsilon};
}

/// Raw prediction without an error annotation (robustness sweeps).
inline AugmentedInstance with_raw_prediction(Instance inst, Rat omega) {
  if (!omega.is_positive()) throw std::domain_error("prediction omega must be positive");
  return AugmentedInstance{std::move(inst), std::move(omega), std::nullopt};
}

/// Arrival permutation: slot t (0-based) holds agent slot_to_agent[t].
struct ArrivalOrder {
  std::vector<int> slot_to_agent;
  std::uint64_t seed = 0;

  int n() const { return static_cast<int>(slot_to_agent.size()); }
  int agent_at(int slot) const { return slot_to_agent.at(slot); }

  static ArrivalOrder of(std::vector<int> perm) {
    ArrivalOrder o;
    o.slot_to_agent = std::move(perm);
    std::vector<bool> seen(o.slot_to_agent.size(), false);
    for (int a : o.slot_to_agent) {
      if (a < 0 || a >= o.n() || seen[a]) throw std::invalid_argument("not a permutation");
      seen[a] = true;
    }
    return o;
  }
  static ArrivalOrder identity(int n) {
    ArrivalOrder o;
    o.slot_to_agent.resize(n);
    for (int i = 0; i < n; ++i) o.slot_to_agent[i] = i;
    return o;
  }
};

/// Uniform random permutation via Fisher-Yates; identical seed, identical order.
inline ArrivalOrder sample_arrival(int n, std::uint64_t seed) {
  if (n < 1) throw std::domain_error("sample_arrival: n must be >= 1");
  ArrivalOrder o = ArrivalOrder::identity(n);
  o.seed = seed;
  SplitMix rng(seed);
  for (int i = n - 1; i >= 1; --i) {
    int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(o.slot_to_agent[i], o.slot_to_agent[j]);
  }
  return o;
}

enum class OracleFamily { kAdditive, kCoverage, kCut };
enum class CostDist { kUniform, kCorrelated };

/// Generator config. Costs land on a denominator-1000 grid and are clamped
/// into (0, B].
struct GeneratorSpec {
  OracleFamily family = OracleFamily::kAdditive;
  int n = 4;
  Rat budget = Rat(1);
  CostDist cost_dist = CostDist::kUniform;
  Rat cost_lo = Rat(1, 10);
  Rat cost_hi = Rat(1);
  int universe = 12;      // coverage only
  int max_weight = 10;    // payload weight scale
};

namespace detail {

inline Rat clamp_cost(Rat c, const Rat& budget) {
  if (c > budget) c = budget;
  if (!c.is_positive()) c = budget / Rat(1000);
  return c;
}

}  // namespace detail

inline Instance generate_instance(const GeneratorSpec& spec, std::uint64_t seed) {
  if (spec.n < 1 || spec.n > 64) throw std::invalid_argument("generate_instance: n out of range");
  if (!spec.budget.is_positive()) throw std::invalid_argument("generate_instance: budget");
  if (spec.max_weight < 1) throw std::invalid_argument("generate_instance: max_weight");
  if (spec.cost_dist == CostDist::kUniform && spec.cost_lo > spec.cost_hi) {
    throw std::invalid_argument("generate_instance: empty cost interval");
  }
  SplitMix rng(seed);

  ValuationOracle oracle = [&] {
    switch (spec.family) {
      case OracleFamily::kAdditive: {
        std::vector<Rat> w(spec.n);
        for (auto& wi : w) wi = Rat(1 + static_cast<std::int64_t>(rng.below(spec.max_weight)));
        return ValuationOracle::additive(std::move(w));
      }
      case OracleFamily::kCoverage: {
        if (spec.universe < 1 || spec.universe > 64) {
          throw std::invalid_argument("generate_instance: universe out of range");
        }
        std::vector<std::vector<int>> sets(spec.n);
        for (auto& s : sets) {
          for (int e = 0; e < spec.universe; ++e) {
            if (rng.below(3) == 0) s.push_back(e);
          }
          if (s.empty()) s.push_back(static_cast<int>(rng.below(spec.universe)));
        }
        std::vector<Rat> ew(spec.universe);
        for (auto& w : ew) w = Rat(1 + static_cast<std::int64_t>(rng.below(3)));
        return ValuationOracle::coverage(spec.universe, std::move(sets), std::move(ew));
      }
      case OracleFamily::kCut: {
        std::vector<std::vector<Rat>> w(spec.n, std::vector<Rat>(spec.n));
        for (int i = 0; i < spec.n; ++i) {
          for (int j = i + 1; j < spec.n; ++j) {
            if (rng.below(2) == 0) {
              Rat wt(1 + static_cast<std::int64_t>(rng.below(spec.max_weight)));
              w[i][j] = wt;
              w[j][i] = wt;
            }
          }
        }
        return ValuationOracle::graph_cut(std::move(w));
      }
    }
    throw std::invalid_argument("generate_instance: unknown family");
  }();

  std::vector<Rat> costs(spec.n);
  if (spec.cost_dist == CostDist::kUniform) {
    Rat span = spec.cost_hi - spec.cost_lo;
    for (auto& c : costs) {
      Rat u(static_cast<std::int64_t>(rng.below(1001)), 1000);
      c = detail::clamp_cost(spec.cost_lo + span * u, spec.budget);
    }
  } else {
    // Cost correlated with standalone value: c_i ~ B * (v(i)/maxv) * noise.
    Rat maxv(0);
    for (int i = 0; i < spec.n; ++i) maxv = max(maxv, oracle.singleton(i));
    if (maxv.is_zero()) maxv = Rat(1);
    for (int i = 0; i < spec.n; ++i) {
      Rat noise(static_cast<std::int64_t>(500 + rng.below(501)), 1000);
      costs[i] = detail::clamp_cost(spec.budget * (oracle.singleton(i) / maxv) * noise,
                                    spec.budget);
    }
  }
  return Instance(std::move(costs), spec.budget, std::move(oracle));
}

}  // namespace bflab
