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

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bflab {

/// 50-significant-digit float backing every closed-form guarantee, so the
/// corollary-constant reproductions are insensitive to rounding.
using Real = boost::multiprecision::cpp_bin_float_50;

inline const Real& euler_e() {
  static const Real e = exp(Real(1));
  return e;
}

/// Bernstein deviation bound 2*exp(-(d^2/2) / (V + C*d/3)) for a sum with
/// variance V and per-variable range C.
inline Real bernstein_tail(const Real& delta, const Real& variance, const Real& range_bound) {
  if (delta <= 0) throw std::domain_error("bernstein_tail: delta must be positive");
  if (variance < 0) throw std::domain_error("bernstein_tail: variance must be non-negative");
  if (range_bound <= 0) throw std::domain_error("bernstein_tail: range bound must be positive");
  Real denom = variance + range_bound * delta / 3;
  if (denom == 0) throw std::domain_error("bernstein_tail: degenerate denominator");
  return 2 * exp(-(delta * delta / 2) / denom);
}

/// One evaluated guarantee: named term values, the min (or mixture) bound,
/// the binding term, and the Bernstein probability where the analysis uses
/// one. A raw p-tilde below zero means "no guarantee"; it is clamped to 0
/// and flagged so the tuner can traverse such regions.
struct BoundReport {
  std::string mechanism;
  std::vector<std::pair<std::string, Real>> params;
  Real epsilon = 0;
  std::vector<std::pair<std::string, Real>> terms;
  std::optional<Real> tilde_p;
  bool tilde_p_clamped = false;
  Real bound = 0;
  std::string binding_term;

  bool has_reciprocal() const { return bound > 0; }
  Real reciprocal() const {
    if (!has_reciprocal()) throw std::domain_error("bound is not positive");
    return Real(1) / bound;
  }
  const Real& term(const std::string& name) const {
    for (const auto& [k, v] : terms) {
      if (k == name) return v;
    }
    throw std::invalid_argument("no term named " + name);
  }
};

namespace detail {

inline void take_min(BoundReport& r) {
  bool first = true;
  for (const auto& [name, v] : r.terms) {
    if (first || v < r.bound) {
      r.bound = v;
      r.binding_term = name;
      first = false;
    }
  }
}

inline Real clamp_ptilde(Real raw, bool& clamped) {
  if (raw < 0) {
    clamped = true;
    return Real(0);
  }
  return raw;
}

inline void check_eps(const Real& eps) {
  if (eps < 0 || eps >= 1) throw std::domain_error("epsilon must lie in [0, 1)");
}
inline void check_prob(const Real& p, const char* name) {
  if (p < 0 || p > 1) throw std::domain_error(std::string(name) + " must lie in [0, 1]");
}
inline void check_z(const Real& z) {
  if (z <= 1) throw std::domain_error("z must exceed 1");
}
inline void check_delta(const Real& d) {
  if (d <= 0 || d >= Real(1) / 2) throw std::domain_error("delta must lie in (0, 1/2)");
}

}  // namespace detail

/// f1: the prediction mechanism's guarantee,
/// min{ a(1-e)p/z, (1-p)(1-(1-e)a), (1-p)a(1-e)(z-1)/z }.
inline BoundReport eval_bound_mono_pred(const Real& p, const Real& a, const Real& z,
                                        const Real& eps) {
  detail::check_prob(p, "p");
  detail::check_z(z);
  detail::check_eps(eps);
  if (a < 0) throw std::domain_error("a must be non-negative");
  BoundReport r;
  r.mechanism = "mono-pred";
  r.params = {{"p", p}, {"a", a}, {"z", z}};
  r.epsilon = eps;
  Real ae = a * (1 - eps);
  r.terms = {
      {"single_agent", ae * p / z},
      {"rejection", (1 - p) * (1 - ae)},
      {"budget_exhaustion", (1 - p) * ae * (z - 1) / z},
  };
  detail::take_min(r);
  return r;
}

/// f2: the sampling mechanism's guarantee with the Bernstein probability
/// p~ = 1 - 2 exp( -(d^2/2) / ((b/z * (e-1)/e * (1/2-d)) * (1/4 + d/3)) ).
inline BoundReport eval_bound_mono_sample(const Real& q, const Real& z, const Real& beta,
                                          const Real& delta) {
  detail::check_prob(q, "q");
  detail::check_z(z);
  detail::check_delta(delta);
  if (beta <= 0) throw std::domain_error("beta must be positive");
  const Real& e = euler_e();
  Real half_less = Real(1) / 2 - delta;
  Real base = beta / z * (e - 1) / e * half_less;
  BoundReport r;
  r.mechanism = "mono-sample";
  r.params = {{"q", q}, {"z", z}, {"beta", beta}, {"delta", delta}};
  Real raw = 1 - bernstein_tail(delta, base / 4, base);
  Real pt = detail::clamp_ptilde(raw, r.tilde_p_clamped);
  r.tilde_p = pt;
  r.terms = {
      {"single_agent", q / e * base},
      {"rejection", (1 - q) * pt * (half_less - beta)},
      {"budget_exhaustion", (1 - q) * pt * (z - 1) * base},
  };
  detail::take_min(r);
  return r;
}

/// Mixture guarantee tau*f1 + (1-tau)*f2 for the monotone convex mechanism.
inline BoundReport eval_bound_mech1(const Real& tau, const Real& p, const Real& a,
                                    const Real& z_pred, const Real& q, const Real& z_sample,
                                    const Real& beta, const Real& delta, const Real& eps) {
  detail::check_prob(tau, "tau");
  BoundReport f1 = eval_bound_mono_pred(p, a, z_pred, eps);
  BoundReport f2 = eval_bound_mono_sample(q, z_sample, beta, delta);
  BoundReport r;
  r.mechanism = "mech1";
  r.params = {{"tau", tau}, {"p", p},    {"a", a},         {"z_pred", z_pred}, {"q", q},
              {"z", z_sample}, {"beta", beta}, {"delta", delta}};
  r.epsilon = eps;
  r.terms = {{"f1", f1.bound}, {"f2", f2.bound}};
  for (const auto& [k, v] : f1.terms) r.terms.emplace_back("f1." + k, v);
  for (const auto& [k, v] : f2.terms) r.terms.emplace_back("f2." + k, v);
  r.tilde_p = f2.tilde_p;
  r.tilde_p_clamped = f2.tilde_p_clamped;
  r.bound = tau * f1.bound + (1 - tau) * f2.bound;
  r.binding_term = "mixture";
  return r;
}

/// The calibrated mechanism's guarantee: threshold mass
/// A = a(1-e) + b*(e-1)/e*(1/k - d), Dynkin term qA/(ez), rejection term
/// (1-q)p~((k-1)/k - d - (a(1-e)+b)), budget term (1-q)p~(z-1)/z*A.
inline BoundReport eval_bound_mech4(const Real& q, const Real& a, const Real& z,
                                    const Real& beta, const Real& delta, const Real& k,
                                    const Real& eps) {
  detail::check_prob(q, "q");
  detail::check_z(z);
  detail::check_delta(delta);
  detail::check_eps(eps);
  if (a < 0) throw std::domain_error("a must be non-negative");
  if (beta < 0) throw std::domain_error("beta must be non-negative");
  if (k <= 1) throw std::domain_error("k must exceed 1");
  if (1 / k - delta <= 0) throw std::domain_error("bound vacuous: 1/k - delta must be positive");
  const Real& e = euler_e();
  Real ae = a * (1 - eps);
  Real mass = ae + beta * (e - 1) / e * (1 / k - delta);
  if (mass <= 0) throw std::domain_error("degenerate threshold mass");
  BoundReport r;
  r.mechanism = "mech4";
  r.params = {{"q", q}, {"a", a}, {"z", z}, {"beta", beta}, {"delta", delta}, {"k", k}};
  r.epsilon = eps;
  Real variance_part = (k - 1) / (k * k) / z * mass;
  Real raw = 1 - bernstein_tail(delta, variance_part, mass / z);
  Real pt = detail::clamp_ptilde(raw, r.tilde_p_clamped);
  r.tilde_p = pt;
  r.terms = {
      {"single_agent", q / (e * z) * mass},
      {"rejection", (1 - q) * pt * ((k - 1) / k - delta - (ae + beta))},
      {"budget_exhaustion", (1 - q) * pt * (z - 1) / z * mass},
  };
  detail::take_min(r);
  return r;
}

enum class NonmonoVariant { kPred, kSample, kConvex, kCalibrated };

struct NonmonoParams {
  Real tau = 0;
  Real p = 0;
  Real a = 0;
  Real z_pred = 2;
  Real q = 0;
  Real z = 2;
  Real beta = 0;
  Real delta = Real(1) / 4;
  Real k = 2;
};

/// Non-monotone guarantees (two-disjoint-solutions analyses). The pred/sample
/// formulas halve the pricing terms relative to the monotone case; the
/// calibrated variant uses threshold mass a(1-e) + (b/e)(1/k - d).
inline BoundReport eval_bound_nonmono(NonmonoVariant variant, const NonmonoParams& np,
                                      const Real& eps) {
  detail::check_eps(eps);
  const Real& e = euler_e();
  switch (variant) {
    case NonmonoVariant::kPred: {
      detail::check_prob(np.p, "p");
      detail::check_z(np.z_pred);
      if (np.a < 0) throw std::domain_error("a must be non-negative");
      BoundReport r;
      r.mechanism = "nonmono-pred";
      r.params = {{"p", np.p}, {"a", np.a}, {"z", np.z_pred}};
      r.epsilon = eps;
      Real ae = np.a * (1 - eps);
      r.terms = {
          {"single_agent", ae * np.p / np.z_pred},
          {"rejection", (1 - np.p) * (Real(1) / 4 - ae / 2)},
          {"budget_exhaustion", (1 - np.p) * ae * (np.z_pred - 1) / (2 * np.z_pred)},
      };
      detail::take_min(r);
      return r;
    }
    case NonmonoVariant::kSample: {
      detail::check_prob(np.q, "q");
      detail::check_z(np.z);
      detail::check_delta(np.delta);
      if (np.beta <= 0) throw std::domain_error("beta must be positive");
      Real half_less = Real(1) / 2 - np.delta;
      Real base = np.beta / (np.z * e) * half_less;
      BoundReport r;
      r.mechanism = "nonmono-sample";
      r.params = {{"q", np.q}, {"z", np.z}, {"beta", np.beta}, {"delta", np.delta}};
      Real raw = 1 - bernstein_tail(np.delta, base / 4, base);
      Real pt = detail::clamp_ptilde(raw, r.tilde_p_clamped);
      r.tilde_p = pt;
      r.terms = {
          {"single_agent", np.q / e * np.beta / np.z / e * half_less},
          {"rejection", (1 - np.q) * pt * (Real(1) / 8 - np.delta / 4 - np.beta / 2)},
          {"budget_exhaustion",
           (1 - np.q) * pt * (np.z - 1) / (2 * np.z) * np.beta / e * half_less},
      };
      detail::take_min(r);
      return r;
    }
    case NonmonoVariant::kConvex: {
      detail::check_prob(np.tau, "tau");
      BoundReport f1 = eval_bound_nonmono(NonmonoVariant::kPred, np, eps);
      BoundReport f2 = eval_bound_nonmono(NonmonoVariant::kSample, np, eps);
      BoundReport r;
      r.mechanism = "mech5";
      r.params = {{"tau", np.tau}, {"p", np.p},       {"a", np.a},     {"z_pred", np.z_pred},
                  {"q", np.q},     {"z", np.z},       {"beta", np.beta}, {"delta", np.delta}};
      r.epsilon = eps;
      r.terms = {{"f1", f1.bound}, {"f2", f2.bound}};
      for (const auto& [k2, v] : f1.terms) r.terms.emplace_back("f1." + k2, v);
      for (const auto& [k2, v] : f2.terms) r.terms.emplace_back("f2." + k2, v);
      r.tilde_p = f2.tilde_p;
      r.tilde_p_clamped = f2.tilde_p_clamped;
      r.bound = np.tau * f1.bound + (1 - np.tau) * f2.bound;
      r.binding_term = "mixture";
      return r;
    }
    case NonmonoVariant::kCalibrated: {
      detail::check_prob(np.q, "q");
      detail::check_z(np.z);
      detail::check_delta(np.delta);
      if (np.a < 0) throw std::domain_error("a must be non-negative");
      if (np.beta < 0) throw std::domain_error("beta must be non-negative");
      if (np.k <= 1) throw std::domain_error("k must exceed 1");
      if (1 / np.k - np.delta <= 0) {
        throw std::domain_error("bound vacuous: 1/k - delta must be positive");
      }
      Real ae = np.a * (1 - eps);
      Real mass = ae + np.beta / e * (1 / np.k - np.delta);
      if (mass <= 0) throw std::domain_error("degenerate threshold mass");
      BoundReport r;
      r.mechanism = "mech8";
      r.params = {{"q", np.q},       {"a", np.a}, {"z", np.z},
                  {"beta", np.beta}, {"delta", np.delta}, {"k", np.k}};
      r.epsilon = eps;
      Real variance_part = (np.k - 1) / (np.k * np.k) / np.z * mass;
      Real raw = 1 - bernstein_tail(np.delta, variance_part, mass / np.z);
      Real pt = detail::clamp_ptilde(raw, r.tilde_p_clamped);
      r.tilde_p = pt;
      r.terms = {
          {"single_agent", np.q / (e * np.z) * mass},
          {"rejection", (1 - np.q) * pt *
                            (((np.k - 1) / np.k - np.delta) / 4 - (ae + np.beta) / 2)},
          {"budget_exhaustion", (1 - np.q) * pt * (np.z - 1) / (2 * np.z) * mass},
      };
      detail::take_min(r);
      return r;
    }
  }
  throw std::invalid_argument("unknown nonmono variant");
}

}  // namespace bflab
