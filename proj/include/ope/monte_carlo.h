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
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ope/bandit.h"
#include "ope/chebyshev.h"
#include "ope/sampler.h"
#include "ope/subset_solver.h"

namespace ope {

enum class EstimatorKind {
  kPlugIn,
  kImportanceSampling,
  kSwitch,
  kTruncatedIs,
  kChebyshev,
  kZero,
};

/// CLI spelling: plugin, is, switch, truncated-is, chebyshev, zero.
std::string_view estimator_kind_name(EstimatorKind kind);
EstimatorKind parse_estimator_kind(std::string_view name);

/// An estimator with everything it needs besides the data: the subset for
/// switch / truncated IS and the shared read-only weights for Chebyshev.
struct EstimatorSpec {
  EstimatorKind kind = EstimatorKind::kPlugIn;
  std::string name;
  ActionSubset subset;
  std::shared_ptr<const ChebyshevWeights> weights;

  static EstimatorSpec plug_in();
  static EstimatorSpec importance_sampling();
  static EstimatorSpec switch_at(ActionSubset s);
  static EstimatorSpec truncated_is(ActionSubset s);
  static EstimatorSpec chebyshev(ChebyshevWeights weights);
  static EstimatorSpec zero();

  EstimatorSpec named(std::string label) const;

  double evaluate(const Dataset& data, const Policy& target, const Policy& behavior) const;
};

struct MseReport {
  double mean_squared_error = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
  std::string estimator_name;
  std::size_t n = 0;
  std::size_t k = 0;
  std::uint64_t seed = 0;
};

enum class Execution { kSerial, kParallel };

/// Produces the dataset of one trial. Must be a pure function of its argument.
using DatasetGenerator = std::function<Dataset(const SeedSpec&)>;

DatasetGenerator simulated_data(const BanditInstance& instance, std::size_t n,
                                SamplingMode mode);

/// Squared errors (estimate - truth)^2, laid out estimator-major:
/// result[e * trials + t]. Trial t always uses SeedSpec{base_seed, t}, so the
/// output is identical for both execution modes and any thread count. If any
/// trial throws, the exception of the lowest failing trial index is rethrown.
std::vector<double> trial_squared_errors(std::span<const EstimatorSpec> estimators,
                                         const Policy& target, const Policy& behavior,
                                         double truth, const DatasetGenerator& generate,
                                         std::size_t trials, std::uint64_t base_seed,
                                         Execution execution = Execution::kParallel);

/// Mean and standard error of one estimator's squared errors, summed in trial
/// order with Neumaier compensation.
MseReport summarize_squared_errors(std::span<const double> squared_errors,
                                   std::string estimator_name, std::size_t n, std::size_t k,
                                   std::uint64_t seed);

/// One report per estimator; all estimators see the same datasets. Requires
/// trials >= 2.
std::vector<MseReport> monte_carlo_mse(std::span<const EstimatorSpec> estimators,
                                       const BanditInstance& instance, std::size_t n,
                                       std::size_t trials, std::uint64_t base_seed,
                                       SamplingMode mode = SamplingMode::kMultinomial,
                                       Execution execution = Execution::kParallel);

MseReport monte_carlo_mse(const EstimatorSpec& estimator, const BanditInstance& instance,
                          std::size_t n, std::size_t trials, std::uint64_t base_seed,
                          SamplingMode mode = SamplingMode::kMultinomial,
                          Execution execution = Execution::kParallel);

/// Variant for externally generated data (e.g. resampled logs); `truth` is
/// the value being estimated.
std::vector<MseReport> monte_carlo_mse(std::span<const EstimatorSpec> estimators,
                                       const Policy& target, const Policy& behavior,
                                       double truth, const DatasetGenerator& generate,
                                       std::size_t n, std::size_t trials,
                                       std::uint64_t base_seed,
                                       Execution execution = Execution::kParallel);

}  // namespace ope
