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

#include <cstdint>
#include <random>
#include <vector>

#include "ope/bandit.h"

namespace ope {

/// (base_seed, trial_index) fully determines one trial's random stream.
struct SeedSpec {
  std::uint64_t base_seed = 0;
  std::uint64_t trial_index = 0;
};

// One independent stream per trial. The engine seed is a SplitMix64 hash of
// both seed components, so neighbouring trials get unrelated streams and the
// result of a trial never depends on which thread ran it.
class TrialRng {
 public:
  explicit TrialRng(const SeedSpec& seed);

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Poisson(rate) variate: sequential inversion below rate 30, Hormann's
/// transformed rejection (PTRS) at and above it.
std::uint64_t sample_poisson(double rate, TrialRng& rng);

/// Inverse-CDF sampler over a fixed probability vector. Zero-probability
/// actions are never returned.
class CategoricalSampler {
 public:
  explicit CategoricalSampler(const Policy& policy);
  std::uint32_t operator()(TrialRng& rng) const;

 private:
  std::vector<double> cdf_;
};

/// n i.i.d. actions from the behavior policy with Bernoulli {0, r_max} rewards.
Dataset draw_multinomial_dataset(const BanditInstance& instance, std::size_t n,
                                 const SeedSpec& seed);

/// Independent counts n(a) ~ Poisson(n * behavior(a)), each followed by that
/// many Bernoulli {0, r_max} rewards. Pairs are grouped by action.
Dataset draw_poisson_dataset(const BanditInstance& instance, std::size_t n,
                             const SeedSpec& seed);

std::vector<std::size_t> action_counts(const Dataset& data);

}  // namespace ope
