// Copyright 2026 The minimax-ope Authors.
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

#include <cstddef>
#include <vector>

#include "ope/bandit.h"

namespace ope {

/// Membership mask over the action space.
class ActionSubset {
 public:
  ActionSubset() = default;
  explicit ActionSubset(std::size_t k) : members_(k, false) {}

  static ActionSubset empty(std::size_t k) { return ActionSubset(k); }
  static ActionSubset full(std::size_t k);
  static ActionSubset of(std::size_t k, const std::vector<std::size_t>& actions);

  std::size_t k() const { return members_.size(); }
  bool contains(std::size_t a) const { return members_[a]; }
  void insert(std::size_t a) { members_[a] = true; }
  std::size_t count() const;
  bool is_empty() const { return count() == 0; }
  std::vector<std::size_t> actions() const;
  const std::vector<bool>& mask() const { return members_; }

  friend bool operator==(const ActionSubset&, const ActionSubset&) = default;

 private:
  std::vector<bool> members_;
};

/// Minimizer of the truncation program
///
///   min_v  sqrt( (1/8n) sum_a (target(a) - v(a))^2 / behavior(a) ) + (1/2) sum_a |v(a)|
///
/// together with the quantities its optimality conditions are stated in.
struct SwitchSolution {
  ActionSubset s_star;       // support of v_star
  double c = 0.0;            // likelihood-ratio threshold; S* = {rho > c}
  std::vector<double> v_star;
  double dual_value = 0.0;   // optimal objective value
  double t1 = 0.0;           // sum_{S*} (target - v*)^2 / behavior
  double t2 = 0.0;           // sum_{not S*} behavior * rho^2
  double epsilon = 1.0;      // 1 - 2n behavior(S*)
};

/// Objective of the truncation program at an arbitrary v. Returns +inf when
/// v differs from the target on an action the behavior never plays.
double truncation_objective(const Policy& target, const Policy& behavior, std::size_t n,
                            const std::vector<double>& v);

/// Exact solver. Sorts the finite ratios, enumerates suffix supports with the
/// closed-form threshold c = sqrt(2n T2 / (1 - 2n behavior(S))), keeps the
/// candidates consistent with the optimality conditions, adds the v = target
/// endpoint, and returns the smallest objective. O(k log k).
SwitchSolution solve_optimal_subset(const Policy& target, const Policy& behavior,
                                    std::size_t n);

/// target(S)^2 + sum_{a not in S} behavior(a) rho(a)^2 / n, +inf when an
/// infinite-ratio action sits outside S.
double switch_subset_objective(const Policy& target, const Policy& behavior,
                               std::size_t n, const ActionSubset& s);

struct SubsetOptimum {
  ActionSubset subset;
  double objective = 0.0;
};

inline constexpr std::size_t kDefaultBruteForceLimit = 15;

/// Exhaustive minimization of switch_subset_objective over all 2^k subsets.
/// Throws TooLarge when k > k_limit.
SubsetOptimum brute_force_subset(const Policy& target, const Policy& behavior,
                                 std::size_t n,
                                 std::size_t k_limit = kDefaultBruteForceLimit);

struct RiskSurrogate {
  double value = 0.0;        // r_max^2 * (pi_t_sstar^2 + t2_over_n)
  double pi_t_sstar = 0.0;
  double t2_over_n = 0.0;
};

/// Order-of-magnitude minimax risk r_max^2 {target(S*)^2 + T2/n}.
RiskSurrogate minimax_risk_surrogate(const Policy& target, const Policy& behavior,
                                     std::size_t n, double r_max);

/// 3 r_max^2 {target(S)^2 + sum_{a not in S} behavior rho^2 / n}; +inf when an
/// infinite-ratio action is outside S.
double switch_mse_upper_bound(const Policy& target, const Policy& behavior, std::size_t n,
                              double r_max, const ActionSubset& s);

}  // namespace ope
