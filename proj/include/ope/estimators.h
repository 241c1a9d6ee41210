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

#include <vector>

#include "ope/bandit.h"
#include "ope/subset_solver.h"

namespace ope {

/// Per-action counts and reward sums of a dataset.
struct ArmStatistics {
  std::vector<std::size_t> counts;
  std::vector<double> reward_sums;

  static ArmStatistics from(const Dataset& data);

  /// Empirical mean reward, 0 for an unobserved action.
  double mean(std::size_t a) const {
    return counts[a] > 0 ? reward_sums[a] / static_cast<double>(counts[a]) : 0.0;
  }
};

double plug_in(const Dataset& data, const Policy& target);
double plug_in(const ArmStatistics& stats, const Policy& target);

/// (1/n) sum_i rho(A_i) R_i. Requires a multinomial dataset; throws
/// InfiniteRatioObserved if a logged action has zero behavior probability.
double importance_sampling(const Dataset& data, const Policy& target, const Policy& behavior);

/// Plug-in on S, importance sampling off S.
double switch_estimate(const Dataset& data, const Policy& target, const Policy& behavior,
                       const ActionSubset& s);

/// Importance sampling off S, zero on S.
double truncated_is(const Dataset& data, const Policy& target, const Policy& behavior,
                    const ActionSubset& s);

}  // namespace ope
