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
#include "ope/config.h"
#include "ope/results_io.h"

namespace ope {

/// Constants used by the Chebyshev experiments unless the config overrides
/// them. The library-wide defaults (kDefaultC0) give a degree too low to
/// correct the bias visibly at these k.
inline constexpr double kExperimentChebyshevC0 = 1.0;
inline constexpr double kExperimentChebyshevC1 = 4.0;

/// Uniform target; sqrt(k) actions with behavior 1/k^2, the rest sharing
/// 1 - k^{-3/2} equally; Bernoulli(1/2) rewards. Throws NonSquareK.
BanditInstance switch_scaling_instance(std::size_t k, double r_max);

/// Target uniform over the first s actions; behavior 1/(n ln k) on the first
/// k - 1 actions with the remainder on the last; rewards r_max / 2.
BanditInstance competitive_ratio_instance(std::size_t k, std::size_t n, std::size_t s,
                                          double r_max);

/// Uniform target; behavior k^{-3/2} on all but the first action, which takes
/// the rest; rewards r_max / 2.
BanditInstance chebyshev_scaling_instance(std::size_t k, double r_max);

std::vector<std::size_t> default_k_values(ExperimentKind kind);

/// 1, stride, 2 stride, ..., always ending at k.
std::vector<std::size_t> support_sizes(std::size_t k, std::size_t stride);

/// Per k: plugin, is and switch at S* with n = round(1.5 k), then slope rows.
std::vector<ResultRow> experiment_switch_scaling(const ExperimentConfig& config);

/// Per s: plugin MSE, switch-surrogate MSE and their ratio at n = 2k.
std::vector<ResultRow> experiment_competitive_ratio(const ExperimentConfig& config);

/// Per k: plugin and chebyshev on Poisson data with n = round(k^{3/2}), then slopes.
std::vector<ResultRow> experiment_chebyshev_scaling(const ExperimentConfig& config);

/// Ratings log evaluation: plugin, is, switch at S* and chebyshev on
/// resampled logs for each n in n_values, then slopes.
std::vector<ResultRow> experiment_ratings(const ExperimentConfig& config);

std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

}  // namespace ope
