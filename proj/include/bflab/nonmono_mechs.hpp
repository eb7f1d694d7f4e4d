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

#include "bflab/mechanisms.hpp"

namespace bflab {

namespace detail {

/// Two-disjoint-solutions pricing loop: each arriving agent is offered the
/// price of her larger marginal between S1 and S2 (ties toward S1) and, on
/// acceptance, joins that set against its own budget ledger. The returned
/// set was drawn before any pricing; only its members are paid. Offers are
/// never clamped: a negative marginal prices below any declared cost.
inline void twosol_loop_into(MechanismOutcome& out, const Instance& inst,
                             const ArrivalOrder& order, int from_slot, const Rat& t,
                             int chosen_j) {
  out.branch = kBranchPosted;
  out.chosen_set = chosen_j;
  const Rat& budget = inst.budget();
  Rat scale = budget / t;
  AgentSet s1, s2;
  Rat b1 = budget, b2 = budget;
  for (int slot = from_slot; slot < order.n(); ++slot) {
    int i = order.agent_at(slot);
    Rat m1 = inst.oracle().marginal(i, s1);
    Rat m2 = inst.oracle().marginal(i, s2);
    int j = (m1 >= m2) ? 1 : 2;
    Rat offer = scale * (j == 1 ? m1 : m2);
    out.offers.push_back({i, offer});
    Rat& bj = (j == 1) ? b1 : b2;
    if (inst.cost(i) <= offer && bj - offer >= Rat(0)) {
      (j == 1 ? s1 : s2).insert(i);
      out.assignments.push_back({i, j, offer});
      bj -= offer;
    }
  }
  out.two_sol = TwoSolState{s1, s2, b1, b2};
  out.winners = (chosen_j == 1) ? s1 : s2;
  out.residual_budget = (chosen_j == 1) ? b1 : b2;
  for (const auto& a : out.assignments) {
    if (a.set_index == chosen_j) out.payments.push_back({a.agent, a.price});
  }
}

inline int draw_chosen_set(CoinCursor& cur) {
  return coin_bernoulli(cur.next(), Rat(1, 2)) ? 1 : 2;
}

inline MechanismOutcome run_twosol_pred_impl(const AugmentedInstance& aug,
                                             const ArrivalOrder& order, CoinCursor& cur,
                                             const MechParams& mp) {
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
    int chosen = draw_chosen_set(cur);
    twosol_loop_into(out, inst, order, 0, t, chosen);
  }
  finish(out, inst);
  return out;
}

inline MechanismOutcome run_twosol_sample_impl(const Instance& inst, const ArrivalOrder& order,
                                               CoinCursor& cur, const MechParams& mp,
                                               RunContext* ctx) {
  validate_prob(mp.q_dynkin, "q");
  if (mp.beta.is_negative()) throw std::domain_error("beta must be non-negative");
  MechanismOutcome out;
  if (coin_bernoulli(cur.next(), mp.q_dynkin)) {
    dynkin_into(out, inst, order);
  } else {
    int xi = draw_binomial(cur.next(), inst.n(), Rat(1, 2));
    out.sample_size = xi;
    Solution t1 = sample_solver_cached(inst, prefix_set(order, xi), ctx);
    Rat t = mp.beta * t1.value;
    int chosen = draw_chosen_set(cur);
    if (!t.is_positive()) {
      out.branch = kBranchDegenerate;
      out.chosen_set = chosen;
      out.residual_budget = inst.budget();
    } else {
      twosol_loop_into(out, inst, order, xi, t, chosen);
    }
  }
  finish(out, inst);
  return out;
}

inline MechanismOutcome run_twosol_calibrated_impl(const AugmentedInstance& aug,
                                                   const ArrivalOrder& order, CoinCursor& cur,
                                                   const MechParams& mp, RunContext* ctx) {
  const Instance& inst = aug.base;
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
    Solution t1 = sample_solver_cached(inst, prefix_set(order, xi), ctx);
    Rat t = mp.a * aug.omega + mp.beta * t1.value;
    int chosen = draw_chosen_set(cur);
    if (!t.is_positive()) {
      out.branch = kBranchDegenerate;
      out.chosen_set = chosen;
      out.residual_budget = inst.budget();
    } else {
      twosol_loop_into(out, inst, order, xi, t, chosen);
    }
  }
  finish(out, inst);
  return out;
}

}  // namespace detail

/// Non-monotone analogue of run_mech_pred with two disjoint candidate sets.
inline MechanismOutcome run_twosol_pred(const AugmentedInstance& aug, const ArrivalOrder& order,
                                        CoinTranscript transcript, const MechParams& mp) {
  CoinCursor cur(transcript);
  MechanismOutcome out = detail::run_twosol_pred_impl(aug, order, cur, mp);
  out.transcript = std::move(transcript);
  return out;
}

/// Non-monotone sampling mechanism (two disjoint sets, 1/e-quality inner
/// solver on the sampled half).
inline MechanismOutcome run_twosol_sample(const Instance& inst, const ArrivalOrder& order,
                                          CoinTranscript transcript, const MechParams& mp,
                                          RunContext* ctx = nullptr) {
  CoinCursor cur(transcript);
  MechanismOutcome out = detail::run_twosol_sample_impl(inst, order, cur, mp, ctx);
  out.transcript = std::move(transcript);
  return out;
}

/// Convex combination of the two non-monotone mechanisms.
inline MechanismOutcome run_nonmono_convex(const AugmentedInstance& aug,
                                           const ArrivalOrder& order, CoinTranscript transcript,
                                           const MechParams& mp, RunContext* ctx = nullptr) {
  detail::validate_prob(mp.tau, "tau");
  CoinCursor cur(transcript);
  MechanismOutcome out;
  if (coin_bernoulli(cur.next(), mp.tau)) {
    out = detail::run_twosol_pred_impl(aug, order, cur, mp);
    out.arm = "pred";
  } else {
    out = detail::run_twosol_sample_impl(aug.base, order, cur, mp, ctx);
    out.arm = "sample";
  }
  out.transcript = std::move(transcript);
  return out;
}

/// Non-monotone sampling-calibrated mechanism: t = a*omega + beta*v(T_1),
/// sampling rate 1/k, two disjoint sets over the post-sample agents.
inline MechanismOutcome run_twosol_calibrated(const AugmentedInstance& aug,
                                              const ArrivalOrder& order,
                                              CoinTranscript transcript, const MechParams& mp,
                                              RunContext* ctx = nullptr) {
  CoinCursor cur(transcript);
  MechanismOutcome out = detail::run_twosol_calibrated_impl(aug, order, cur, mp, ctx);
  out.transcript = std::move(transcript);
  return out;
}

/// Mechanism ids: mech1..mech4 are the monotone family (convex combination,
/// prediction, sampling, calibrated), mech5..mech8 the non-monotone analogues.
enum class MechanismId {
  kDynkin,
  kMech1,
  kMech2,
  kMech3,
  kMech4,
  kMech5,
  kMech6,
  kMech7,
  kMech8,
};

inline const char* to_string(MechanismId id) {
  switch (id) {
    case MechanismId::kDynkin: return "dynkin";
    case MechanismId::kMech1: return "mech1";
    case MechanismId::kMech2: return "mech2";
    case MechanismId::kMech3: return "mech3";
    case MechanismId::kMech4: return "mech4";
    case MechanismId::kMech5: return "mech5";
    case MechanismId::kMech6: return "mech6";
    case MechanismId::kMech7: return "mech7";
    case MechanismId::kMech8: return "mech8";
  }
  return "?";
}

inline std::optional<MechanismId> mechanism_from_string(const std::string& s) {
  for (MechanismId id :
       {MechanismId::kDynkin, MechanismId::kMech1, MechanismId::kMech2, MechanismId::kMech3,
        MechanismId::kMech4, MechanismId::kMech5, MechanismId::kMech6, MechanismId::kMech7,
        MechanismId::kMech8}) {
    if (s == to_string(id)) return id;
  }
  return std::nullopt;
}

inline bool mechanism_requires_monotone(MechanismId id) {
  switch (id) {
    case MechanismId::kMech1:
    case MechanismId::kMech2:
    case MechanismId::kMech3:
    case MechanismId::kMech4:
      return true;
    default:
      return false;
  }
}

inline MechanismOutcome run_mechanism(MechanismId id, const AugmentedInstance& aug,
                                      const ArrivalOrder& order, CoinTranscript transcript,
                                      const MechParams& mp, RunContext* ctx = nullptr) {
  switch (id) {
    case MechanismId::kDynkin:
      return run_dynkin(aug.base, order, std::move(transcript));
    case MechanismId::kMech1:
      return run_mech_convex(aug, order, std::move(transcript), mp, ctx);
    case MechanismId::kMech2:
      return run_mech_pred(aug, order, std::move(transcript), mp);
    case MechanismId::kMech3:
      return run_mech_sample(aug.base, order, std::move(transcript), mp, ctx);
    case MechanismId::kMech4:
      return run_mech_calibrated(aug, order, std::move(transcript), mp, ctx);
    case MechanismId::kMech5:
      return run_nonmono_convex(aug, order, std::move(transcript), mp, ctx);
    case MechanismId::kMech6:
      return run_twosol_pred(aug, order, std::move(transcript), mp);
    case MechanismId::kMech7:
      return run_twosol_sample(aug.base, order, std::move(transcript), mp, ctx);
    case MechanismId::kMech8:
      return run_twosol_calibrated(aug, order, std::move(transcript), mp, ctx);
  }
  throw std::invalid_argument("unknown mechanism id");
}

}  // namespace bflab
