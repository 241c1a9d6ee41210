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

#include "ope/bandit.h"

#include <cmath>
#include <numeric>
#include <string>

namespace ope {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNegativeWeight: return "NegativeWeight";
    case ErrorCode::kNotNormalized: return "NotNormalized";
    case ErrorCode::kEmptyPolicy: return "EmptyPolicy";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kRewardOutOfRange: return "RewardOutOfRange";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInfiniteRatioObserved: return "InfiniteRatioObserved";
    case ErrorCode::kInfiniteRatioOutsideS: return "InfiniteRatioOutsideS";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kDegenerateInterval: return "DegenerateInterval";
    case ErrorCode::kZeroDenominator: return "ZeroDenominator";
    case ErrorCode::kNonPositiveInput: return "NonPositiveInput";
    case ErrorCode::kNonSquareK: return "NonSquareK";
    case ErrorCode::kMalformedCsv: return "MalformedCsv";
    case ErrorCode::kInsufficientMovies: return "InsufficientMovies";
    case ErrorCode::kConfigParse: return "ConfigParse";
    case ErrorCode::kUnknownSubcommand: return "UnknownSubcommand";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

Policy Policy::validate(std::vector<double> weights) {
  if (weights.empty()) {
    throw OpeError(ErrorCode::kEmptyPolicy, "policy must have at least one action");
  }
  for (std::size_t a = 0; a < weights.size(); ++a) {
    if (!(weights[a] >= 0.0) || !std::isfinite(weights[a])) {
      throw OpeError(ErrorCode::kNegativeWeight,
                     "weight of action " + std::to_string(a) + " is " +
                         std::to_string(weights[a]));
    }
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(total - 1.0) > kNormalizationTolerance) {
    throw OpeError(ErrorCode::kNotNormalized,
                   "weights sum to " + std::to_string(total));
  }
  return Policy(std::move(weights));
}

Policy Policy::uniform(std::size_t k, std::size_t support) {
  if (support == 0 || support > k) {
    throw OpeError(ErrorCode::kInvalidArgument, "uniform support must lie in [1, k]");
  }
  std::vector<double> w(k, 0.0);
  for (std::size_t a = 0; a < support; ++a) w[a] = 1.0 / static_cast<double>(support);
  return validate(std::move(w));
}

double Policy::mass(const std::vector<bool>& mask) const {
  double total = 0.0;
  for (std::size_t a = 0; a < weights_.size(); ++a) {
    if (mask[a]) total += weights_[a];
  }
  return total;
}

BanditInstance BanditInstance::create(Policy target, Policy behavior,
                                      std::vector<double> mean_rewards, double r_max) {
  if (target.size() != behavior.size() || target.size() != mean_rewards.size()) {
    throw OpeError(ErrorCode::kDimensionMismatch,
                   "target, behavior and mean rewards must have the same length");
  }
  if (!(r_max > 0.0) || !std::isfinite(r_max)) {
    throw OpeError(ErrorCode::kInvalidArgument, "r_max must be positive and finite");
  }
  for (std::size_t a = 0; a < mean_rewards.size(); ++a) {
    if (!(mean_rewards[a] >= 0.0 && mean_rewards[a] <= r_max)) {
      throw OpeError(ErrorCode::kRewardOutOfRange,
                     "mean reward of action " + std::to_string(a) + " outside [0, r_max]");
    }
  }
  return BanditInstance(std::move(target), std::move(behavior), std::move(mean_rewards),
                        r_max);
}

BanditInstance BanditInstance::with_target(Policy target) const {
  return create(std::move(target), behavior_, mean_rewards_, r_max_);
}

void validate_dataset(const Dataset& data, double r_max) {
  for (const auto& obs : data.pairs) {
    if (obs.action >= data.k) {
      throw OpeError(ErrorCode::kInvalidArgument,
                     "action " + std::to_string(obs.action) + " outside [k]");
    }
    if (!(obs.reward >= 0.0 && obs.reward <= r_max)) {
      throw OpeError(ErrorCode::kRewardOutOfRange, "reward outside [0, r_max]");
    }
  }
  if (data.mode == SamplingMode::kMultinomial && data.pairs.size() != data.n) {
    throw OpeError(ErrorCode::kInvalidArgument,
                   "multinomial dataset must contain exactly n pairs");
  }
}

std::vector<double> likelihood_ratio(const Policy& target, const Policy& behavior) {
  if (target.size() != behavior.size()) {
    throw OpeError(ErrorCode::kDimensionMismatch, "policies differ in action count");
  }
  std::vector<double> rho(target.size());
  for (std::size_t a = 0; a < rho.size(); ++a) {
    if (target[a] == 0.0) {
      rho[a] = 0.0;
    } else if (behavior[a] == 0.0) {
      rho[a] = kInfiniteRatio;
    } else {
      rho[a] = target[a] / behavior[a];
    }
  }
  return rho;
}

double value_function(const BanditInstance& instance) {
  double v = 0.0;
  for (std::size_t a = 0; a < instance.k(); ++a) {
    v += instance.target()[a] * instance.mean_reward(a);
  }
  return v;
}

}  // namespace ope
