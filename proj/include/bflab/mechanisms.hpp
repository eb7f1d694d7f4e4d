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
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "bflab/instance.hpp"
#include "bflab/offline_opt.hpp"
#include "bflab/transcript.hpp"

namespace bflab {

/// Parameter bundle for all mechanisms; each runner reads only the fields it
/// names. tau/p_pred/q_dynkin are probabilities, z > 1, k > 1, delta in
/// (0, 1/2) (delta is analysis-only and never read at runtime).
struct MechParams {
  Rat tau;
  Rat p_pred;
  Rat a;
  Rat z;
  Rat q_dynkin;
  Rat beta;
  Rat delta;
  Rat k;
};

inline constexpr const char* kBranchDynkin = "dynkin";
inline constexpr const char* kBranchFixedPrice = "fixed-price";
inline constexpr const char* kBranchPosted = "posted-price";
inline constexpr const char* kBranchDegenerate = "degenerate";

struct PostedOffer {
  int agent;
  Rat price;
};

struct TwoSolAssignment {
  int agent;
  int set_index;  // 1 or 2
  Rat price;
};

/// Internal two-solution snapshot at termination (non-monotone mechanisms).
struct TwoSolState {
  AgentSet s1, s2;
  Rat b1, b2;
};

struct MechanismOutcome {
  AgentSet winners;
  boost::container::small_vector<std::pair<int, Rat>, 8> payments;  // winners only
  Rat value;
  Rat residual_budget;
  const char* arm = "";     // mixture arm ("pred"/"sample") when applicable
  const char* branch = "";  // executed leaf branch
  CoinTranscript transcript;
  boost::container::small_vector<PostedOffer, 8> offers;  // posted prices, incl. rejected
  boost::container::small_vector<TwoSolAssignment, 8> assignments;
  std::optional<TwoSolState> two_sol;
  int chosen_set = 0;    // 1 or 2 for two-solution runs
  int sample_size = -1;  // xi_1 when a sampling phase ran

  Rat payment_for(int agent) const {
    for (const auto& [a, p] : payments) {
      if (a == agent) return p;
    }
    return Rat(0);
  }
  Rat total_payments() const {
    Rat s;
    for (const auto& [a, p] : payments) s += p;
    return s;
  }
  std::string branch_label() const {
    if (arm[0] == '\0') return branch;
    return std::string(arm) + "/" + branch;
  }
};

/// Optional memo shared across runs of the *same* instance (same costs,
/// budget, oracle): caches the inner solver results per sampled set. Purely
/// an optimization; outcomes are identical with or without it.
struct RunContext {
  std::unordered_map<std::uint64_t, Solution> greedy_memo;
  std::unordered_map<std::uint64_t, Solution> sample_memo;
};

namespace detail {

inline int floor_n_over_e(int n) {
  constexpr long double kE = 2.71828182845904523536L;
  int r = static_cast<int>(static_cast<long double>(n) / kE);
  while ((r + 1) * kE <= static_cast<long double>(n)) ++r;
  while (r > 0 && r * kE > static_cast<long double>(n)) --r;
  return r;
}

inline void validate_prob(const Rat& p, const char* name) {
  if (p.is_negative() || p > Rat(1)) {
    throw std::domain_error(std::string(name) + " must lie in [0, 1]");
  }
}

inline void validate_z(const Rat& z) {
  if (z <= Rat(1)) throw std::domain_error("z must exceed 1");
}

/// Hire the first agent from `from_slot` whose standalone value meets `thr`,
/// at price B.
inline void fixed_price_into(MechanismOutcome& out, const Instance& inst,
                             const ArrivalOrder& order, int from_slot, const Rat& thr) {
  out.residual_budget = inst.budget();
  for (int slot = from_slot; slot < order.n(); ++slot) {
    int j = order.agent_at(slot);
    if (inst.oracle().singleton(j) >= thr) {
      out.winners = AgentSet::single(j);
      out.payments.push_back({j, inst.budget()});
      out.residual_budget = Rat(0);
      return;
    }
  }
}

/// Dynkin's secretary rule: observe the first floor(n/e) agents, then hire
/// the first one matching the observed maximum, paying B. An empty sample
/// means threshold 0, so the first agent is hired.
inline void dynkin_into(MechanismOutcome& out, const Instance& inst,
                        const ArrivalOrder& order) {
  out.branch = kBranchDynkin;
  int r = floor_n_over_e(order.n());
  Rat thr(0);
  for (int slot = 0; slot < r; ++slot) {
    Rat v = inst.oracle().singleton(order.agent_at(slot));
    if (v > thr) thr = v;  // strict keeps the earliest arrival on ties
  }
  fixed_price_into(out, inst, order, r, thr);
}

/// The posted-price loop shared by the single-solution mechanisms: offer
/// p_i = (B/t) * v(i|S); accept iff the declared cost clears the offer and
/// the residual budget covers it.
inline void posted_loop_into(MechanismOutcome& out, const Instance& inst,
                             const ArrivalOrder& order, int from_slot, const Rat& t) {
  out.branch = kBranchPosted;
  const Rat& budget = inst.budget();
  Rat scale = budget / t;
  Rat remaining = budget;
  AgentSet s;
  for (int slot = from_slot; slot < order.n(); ++slot) {
    int i = order.agent_at(slot);
    Rat offer = scale * inst.oracle().marginal(i, s);
    out.offers.push_back({i, offer});
    if (inst.cost(i) <= offer && remaining - offer >= Rat(0)) {
      s.insert(i);
      out.payments.push_back({i, offer});
      remaining -= offer;
    }
  }
  out.winners = s;
  out.residual_budget = remaining;
}

inline AgentSet prefix_set(const ArrivalOrder& order, int len) {
  AgentSet s;
  for (int slot = 0; slot < len; ++slot) s.insert(order.agent_at(slot));
  return s;
}

inline Solution greedy_cached(const Instance& inst, const AgentSet& restrict,
                              RunContext* ctx) {
  if (ctx == nullptr) return greedy_knapsack_monotone(inst, restrict);
  auto [it, inserted] = ctx->greedy_memo.try_emplace(restrict.low_mask());
  if (inserted) it->second = greedy_knapsack_monotone(inst, restrict);
  return it->second;
}

inline Solution sample_solver_cached(const Instance& inst, const AgentSet& restrict,
                                     RunContext* ctx) {
  if (ctx == nullptr) return solve_sample_nonmonotone(inst, restrict);
  auto [it, inserted] = ctx->sample_memo.try_emplace(restrict.low_mask());
  if (inserted) it->second = solve_sample_nonmonotone(inst, restrict);
  return it->second;
}

inline void finish(MechanismOutcome& out, const Instance& inst) {
  out.value = inst.oracle().eval(out.winners);
}

MechanismOutcome run_pred_impl(const AugmentedInstance& aug, const ArrivalOrder& order,
                               CoinCursor& cur, const MechParams& mp);
MechanismOutcome run_sample_impl(const Instance& inst, const ArrivalOrder& order,
                                 CoinCursor& cur, const MechParams& mp, RunContext* ctx);
MechanismOutcome run_calibrated_impl(const AugmentedInstance& aug, const ArrivalOrder& order,
                                     CoinCursor& cur, const MechParams& mp, RunContext* ctx);

inline MechanismOutcome run_pred_impl(const AugmentedInstance& aug, const ArrivalOrder& order,
                                      CoinCursor& cur, const MechParams& mp) {
  if (!aug.omega.is_positive()) throw std::domain_error("prediction omega must be positive");
  validate_prob(mp.p_pred, "p");
  validate_z(mp.z);
  if (mp.a.is_negative()) throw std::domain_error("a must be non-negative");
  const Instance& inst = aug.base;
  MechanismOutcome out;
  if (coin_bernoulli(cur.next(), mp.p_pred)) {
    out.branch = kBranchFixedPrice;
    fixed_price_into(out, inst, order, 0, mp.a * aug.omega / mp.z);
  } else {
    Rat t = mp.a * aug.omega;
    if (!t.is_positive()) {
      throw std::domain_error("degenerate threshold: a * omega must be positive");
    }
    posted_loop_into(out, inst, order, 0, t);
  }
  finish(out, inst);
  return out;
}

inline MechanismOutcome run_sample_impl(const Instance& inst, const ArrivalOrder& order,
                                        CoinCursor& cur, const MechParams& mp,
                                        RunContext* ctx) {
  if (!inst.oracle().is_monotone()) {
    throw std::logic_error("sampling mechanism requires a monotone oracle");
  }
  validate_prob(mp.q_dynkin, "q");
  if (mp.beta.is_negative()) throw std::domain_error("beta must be non-negative");
  MechanismOutcome out;
  if (coin_bernoulli(cur.next(), mp.q_dynkin)) {
    dynkin_into(out, inst, order);
  } else {
    int xi = draw_binomial(cur.next(), inst.n(), Rat(1, 2));
    out.sample_size = xi;
    Solution t1 = greedy_cached(inst, prefix_set(order, xi), ctx);
    Rat t = mp.beta * t1.value;
    if (!t.is_positive()) {
      out.branch = kBranchDegenerate;
      out.residual_budget = inst.budget();
    } else {
      posted_loop_into(out, inst, order, xi, t);
    }
  }
  finish(out, inst);
  return out;
}

inline MechanismOutcome run_calibrated_impl(const AugmentedInstance& aug,
                                            const ArrivalOrder& order, CoinCursor& cur,
                                            const MechParams& mp, RunContext* ctx) {
  const Instance& inst = aug.base;
  if (!inst.oracle().is_monotone()) {
    throw std::logic_error("sampling mechanism requires a monotone oracle");
  }
  if (!aug.omega.is_positive()) throw std::domain_error("prediction omega must be positive");
  validate_prob(mp.q_dynkin, "q");
  if (mp.a.is_negative()) throw std::domain_error("a must be non-negative");
  if (mp.beta.is_negative()) throw std::domain_error("beta must be non-negative");
  if (mp.k <= Rat(1)) throw std::domain_error("k must exceed 1");
  MechanismOutcome out;
  if (coin_bernoulli(cur.next(), mp.q_dynkin)) {
    dynkin_into(out, inst, order);
  } else {
    int xi = draw_binomial(cur.next(), inst.n(), Rat(1) / mp.k);
    out.sample_size = xi;
    Solution t1 = greedy_cached(inst, prefix_set(order, xi), ctx);
    Rat t = mp.a * aug.omega + mp.beta * t1.value;
    if (!t.is_positive()) {
      out.branch = kBranchDegenerate;
      out.residual_budget = inst.budget();
    } else {
      posted_loop_into(out, inst, order, xi, t);
    }
  }
  finish(out, inst);
  return out;
}

}  // namespace detail

/// Dynkin's algorithm as a standalone mechanism (consumes no coins).
inline MechanismOutcome run_dynkin(const Instance& inst, const ArrivalOrder& order,
                                   CoinTranscript transcript) {
  if (order.n() != inst.n() || inst.n() < 1) {
    throw std::domain_error("run_dynkin: order/instance size mismatch");
  }
  MechanismOutcome out;
  detail::dynkin_into(out, inst, order);
  detail::finish(out, inst);
  out.transcript = std::move(transcript);
  return out;
}

/// Prediction-guided posted-price mechanism. Coin 1 picks the branch: with
/// probability p hire the first agent with v(j) >= a*omega/z at price B;
/// otherwise run the posted-price loop over all agents with t = a*omega.
inline MechanismOutcome run_mech_pred(const AugmentedInstance& aug, const ArrivalOrder& order,
                                      CoinTranscript transcript, const MechParams& mp) {
  CoinCursor cur(transcript);
  MechanismOutcome out = detail::run_pred_impl(aug, order, cur, mp);
  out.transcript = std::move(transcript);
  return out;
}

/// Sampling posted-price mechanism: with probability q run Dynkin; otherwise
/// reject the first xi_1 ~ Binomial(n, 1/2) agents, solve the packing problem
/// on them, and price the remaining agents with t = beta * v(T_1).
inline MechanismOutcome run_mech_sample(const Instance& inst, const ArrivalOrder& order,
                                        CoinTranscript transcript, const MechParams& mp,
                                        RunContext* ctx = nullptr) {
  CoinCursor cur(transcript);
  MechanismOutcome out = detail::run_sample_impl(inst, order, cur, mp, ctx);
  out.transcript = std::move(transcript);
  return out;
}

/// Convex combination: with probability tau trust the prediction mechanism,
/// otherwise the sampling mechanism.
inline MechanismOutcome run_mech_convex(const AugmentedInstance& aug, const ArrivalOrder& order,
                                        CoinTranscript transcript, const MechParams& mp,
                                        RunContext* ctx = nullptr) {
  detail::validate_prob(mp.tau, "tau");
  CoinCursor cur(transcript);
  MechanismOutcome out;
  if (coin_bernoulli(cur.next(), mp.tau)) {
    out = detail::run_pred_impl(aug, order, cur, mp);
    out.arm = "pred";
  } else {
    out = detail::run_sample_impl(aug.base, order, cur, mp, ctx);
    out.arm = "sample";
  }
  out.transcript = std::move(transcript);
  return out;
}

/// Sampling-calibrated mechanism: sampling rate 1/k and threshold
/// t = a*omega + beta*v(T_1); prices only the post-sample agents.
inline MechanismOutcome run_mech_calibrated(const AugmentedInstance& aug,
                                            const ArrivalOrder& order,
                                            CoinTranscript transcript, const MechParams& mp,
                                            RunContext* ctx = nullptr) {
  CoinCursor cur(transcript);
  MechanismOutcome out = detail::run_calibrated_impl(aug, order, cur, mp, ctx);
  out.transcript = std::move(transcript);
  return out;
}

}  // namespace bflab
