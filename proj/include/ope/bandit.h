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
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "ope/error.h"

namespace ope {

inline constexpr double kNormalizationTolerance = 1e-12;

// Likelihood ratio assigned to actions the target plays but the behavior
// policy never does. Set explicitly; never produced by dividing by zero.
inline constexpr double kInfiniteRatio = std::numeric_limits<double>::infinity();

inline bool is_infinite_ratio(double rho) { return rho == kInfiniteRatio; }

/// A probability distribution over k actions. Immutable once validated.
class Policy {
 public:
  /// Validates without renormalizing. Throws NegativeWeight, NotNormalized
  /// (|sum - 1| > 1e-12) or EmptyPolicy.
  static Policy validate(std::vector<double> weights);

  /// Uniform over the first `support` actions of a k-action space.
  static Policy uniform(std::size_t k, std::size_t support);
  static Policy uniform(std::size_t k) { return uniform(k, k); }

  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t a) const { return weights_[a]; }
  std::span<const double> weights() const { return weights_; }

  /// Mass of the actions flagged in `mask`.
  double mass(const std::vector<bool>& mask) const;

 private:
  explicit Policy(std::vector<double> weights) : weights_(std::move(weights)) {}
  std::vector<double> weights_;
};

inline Policy validate_policy(std::vector<double> weights) {
  return Policy::validate(std::move(weights));
}

/// Ground truth for simulation: policies, mean rewards r_f(a) and the reward
/// ceiling. Simulated rewards are Bernoulli on {0, r_max}.
class BanditInstance {
 public:
  static BanditInstance create(Policy target, Policy behavior,
                               std::vector<double> mean_rewards, double r_max);

  std::size_t k() const { return mean_rewards_.size(); }
  const Policy& target() const { return target_; }
  const Policy& behavior() const { return behavior_; }
  std::span<const double> mean_rewards() const { return mean_rewards_; }
  double mean_reward(std::size_t a) const { return mean_rewards_[a]; }
  double r_max() const { return r_max_; }

  /// Same rewards and behavior, different target policy.
  BanditInstance with_target(Policy target) const;

 private:
  BanditInstance(Policy target, Policy behavior, std::vector<double> mean_rewards,
                 double r_max)
      : target_(std::move(target)),
        behavior_(std::move(behavior)),
        mean_rewards_(std::move(mean_rewards)),
        r_max_(r_max) {}

  Policy target_;
  Policy behavior_;
  std::vector<double> mean_rewards_;
  double r_max_;
};

enum class SamplingMode { kMultinomial, kPoisson };

struct Observation {
  std::uint32_t action;
  double reward;
};

/// Logged (action, reward) pairs. In multinomial mode `n == pairs.size()`;
/// in Poisson mode `n` is the rate parameter and `pairs.size()` the realized
/// total count.
struct Dataset {
  std::vector<Observation> pairs;
  std::size_t n = 0;
  std::size_t k = 0;
  SamplingMode mode = SamplingMode::kMultinomial;
};

/// Checks actions lie in [k] and rewards in [0, r_max]. Throws otherwise.
void validate_dataset(const Dataset& data, double r_max);

/// rho(a) = target(a) / behavior(a) with 0/0 = 0; a positive target weight on
/// an action the behavior never plays yields kInfiniteRatio.
std::vector<double> likelihood_ratio(const Policy& target, const Policy& behavior);

/// V_f(target) = sum_a target(a) r_f(a).
double value_function(const BanditInstance& instance);

}  // namespace ope
