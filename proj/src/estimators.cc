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

#include "ope/estimators.h"

#include <string>

namespace ope {

ArmStatistics ArmStatistics::from(const Dataset& data) {
  ArmStatistics stats{std::vector<std::size_t>(data.k, 0), std::vector<double>(data.k, 0.0)};
  for (const auto& obs : data.pairs) {
    ++stats.counts[obs.action];
    stats.reward_sums[obs.action] += obs.reward;
  }
  return stats;
}

namespace {

void check_policy_size(const Dataset& data, const Policy& policy) {
  if (policy.size() != data.k) {
    throw OpeError(ErrorCode::kDimensionMismatch, "policy and dataset differ in k");
  }
}

void check_multinomial(const Dataset& data) {
  if (data.mode != SamplingMode::kMultinomial) {
    throw OpeError(ErrorCode::kInvalidArgument,
                   "importance-weighted estimators need a multinomial dataset");
  }
}

// (1/n) sum_i rho(A_i) R_i 1{A_i not in S}; `skip` may be null for plain IS.
double weighted_sum(const Dataset& data, const Policy& target, const Policy& behavior,
                    const ActionSubset* skip, ErrorCode infinite_code) {
  check_multinomial(data);
  check_policy_size(data, target);
  check_policy_size(data, behavior);
  const std::vector<double> rho = likelihood_ratio(target, behavior);
  if (skip != nullptr) {
    for (std::size_t a = 0; a < rho.size(); ++a) {
      if (!skip->contains(a) && is_infinite_ratio(rho[a])) {
        throw OpeError(infinite_code,
                       "action " + std::to_string(a) + " has an infinite ratio outside S");
      }
    }
  }
  double total = 0.0;
  for (const auto& obs : data.pairs) {
    if (skip != nullptr && skip->contains(obs.action)) continue;
    if (is_infinite_ratio(rho[obs.action])) {
      throw OpeError(infinite_code, "logged action " + std::to_string(obs.action) +
                                        " has zero behavior probability");
    }
    total += rho[obs.action] * obs.reward;
  }
  return total / static_cast<double>(data.n);
}

}  // namespace

double plug_in(const ArmStatistics& stats, const Policy& target) {
  double v = 0.0;
  for (std::size_t a = 0; a < target.size(); ++a) v += target[a] * stats.mean(a);
  return v;
}

double plug_in(const Dataset& data, const Policy& target) {
  check_policy_size(data, target);
  return plug_in(ArmStatistics::from(data), target);
}

double importance_sampling(const Dataset& data, const Policy& target, const Policy& behavior) {
  return weighted_sum(data, target, behavior, nullptr, ErrorCode::kInfiniteRatioObserved);
}

double truncated_is(const Dataset& data, const Policy& target, const Policy& behavior,
                    const ActionSubset& s) {
  if (s.k() != data.k) {
    throw OpeError(ErrorCode::kDimensionMismatch, "subset and dataset differ in k");
  }
  return weighted_sum(data, target, behavior, &s, ErrorCode::kInfiniteRatioOutsideS);
}

double switch_estimate(const Dataset& data, const Policy& target, const Policy& behavior,
                       const ActionSubset& s) {
  const double is_part = truncated_is(data, target, behavior, s);
  const ArmStatistics stats = ArmStatistics::from(data);
  double plug_part = 0.0;
  for (std::size_t a = 0; a < target.size(); ++a) {
    if (s.contains(a)) plug_part += target[a] * stats.mean(a);
  }
  return plug_part + is_part;
}

}  // namespace ope
