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
#include <span>
#include <utility>
#include <vector>

#include "ope/bandit.h"
#include "ope/monte_carlo.h"
#include "ope/subset_solver.h"

namespace ope {

/// E[1{X > 0} / X] for X ~ Binomial(n, p), summed with log-binomial terms.
double binomial_inverse_moment(std::size_t n, double p);

/// Exact MSE of the plug-in estimator under multinomial sampling with
/// Bernoulli {0, r_max} rewards: squared bias, within-arm variance and the
/// variance of the observed-arm indicators.
double plugin_mse_exact(const BanditInstance& instance, std::size_t n);

struct SlopeFit {
  double slope = 0.0;
  double std_error = 0.0;   // NaN with exactly two points
  double intercept = 0.0;
  std::size_t points = 0;
};

/// Least squares of ln(mse) on ln(n). Throws NonPositiveInput for a
/// non-positive coordinate, InvalidArgument for fewer than 2 points.
SlopeFit loglog_slope(std::span<const std::pair<double, double>> points);

struct CompetitiveRatio {
  double ratio = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;           // Monte Carlo MSE of switch at S*
  double denominator_std_error = 0.0;
  std::size_t surrogate_trials = 0;
  std::uint64_t surrogate_seed = 0;
  RiskSurrogate analytic;             // r_max^2 {target(S*)^2 + T2/n}, for comparison
};

inline constexpr std::size_t kDefaultSurrogateTrials = 10000;

/// numerator_mse divided by the simulated MSE of the switch estimator at the
/// optimal subset. Throws ZeroDenominator if that MSE is zero.
CompetitiveRatio competitive_ratio(double numerator_mse, const BanditInstance& instance,
                                   std::size_t n,
                                   std::size_t surrogate_trials = kDefaultSurrogateTrials,
                                   std::uint64_t surrogate_seed = 0);

/// Spearman rank correlation with average ranks for ties.
double spearman_correlation(std::span<const double> x, std::span<const double> y);

}  // namespace ope
