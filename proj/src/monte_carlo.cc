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

#include "ope/monte_carlo.h"

#include <cmath>
#include <exception>
#include <limits>
#include <string>

#include "ope/estimators.h"

namespace ope {

std::string_view estimator_kind_name(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::kPlugIn: return "plugin";
    case EstimatorKind::kImportanceSampling: return "is";
    case EstimatorKind::kSwitch: return "switch";
    case EstimatorKind::kTruncatedIs: return "truncated-is";
    case EstimatorKind::kChebyshev: return "chebyshev";
    case EstimatorKind::kZero: return "zero";
  }
  return "unknown";
}

EstimatorKind parse_estimator_kind(std::string_view name) {
  for (EstimatorKind kind : {EstimatorKind::kPlugIn, EstimatorKind::kImportanceSampling,
                             EstimatorKind::kSwitch, EstimatorKind::kTruncatedIs,
                             EstimatorKind::kChebyshev, EstimatorKind::kZero}) {
    if (estimator_kind_name(kind) == name) return kind;
  }
  throw OpeError(ErrorCode::kInvalidArgument, "unknown estimator '" + std::string(name) + "'");
}

namespace {

EstimatorSpec make_spec(EstimatorKind kind) {
  EstimatorSpec spec;
  spec.kind = kind;
  spec.name = std::string(estimator_kind_name(kind));
  return spec;
}

}  // namespace

EstimatorSpec EstimatorSpec::plug_in() { return make_spec(EstimatorKind::kPlugIn); }

EstimatorSpec EstimatorSpec::importance_sampling() {
  return make_spec(EstimatorKind::kImportanceSampling);
}

EstimatorSpec EstimatorSpec::switch_at(ActionSubset s) {
  EstimatorSpec spec = make_spec(EstimatorKind::kSwitch);
  spec.subset = std::move(s);
  return spec;
}

EstimatorSpec EstimatorSpec::truncated_is(ActionSubset s) {
  EstimatorSpec spec = make_spec(EstimatorKind::kTruncatedIs);
  spec.subset = std::move(s);
  return spec;
}

EstimatorSpec EstimatorSpec::chebyshev(ChebyshevWeights weights) {
  EstimatorSpec spec = make_spec(EstimatorKind::kChebyshev);
  spec.weights = std::make_shared<const ChebyshevWeights>(std::move(weights));
  return spec;
}

EstimatorSpec EstimatorSpec::zero() { return make_spec(EstimatorKind::kZero); }

EstimatorSpec EstimatorSpec::named(std::string label) const {
  EstimatorSpec copy = *this;
  copy.name = std::move(label);
  return copy;
}

double EstimatorSpec::evaluate(const Dataset& data, const Policy& target,
                               const Policy& behavior) const {
  switch (kind) {
    case EstimatorKind::kPlugIn: return ope::plug_in(data, target);
    case EstimatorKind::kImportanceSampling:
      return ope::importance_sampling(data, target, behavior);
    case EstimatorKind::kSwitch: return switch_estimate(data, target, behavior, subset);
    case EstimatorKind::kTruncatedIs: return ope::truncated_is(data, target, behavior, subset);
    case EstimatorKind::kChebyshev:
      if (!weights) throw OpeError(ErrorCode::kInvalidArgument, "chebyshev spec without weights");
      return chebyshev_estimate(data, target, *weights).value;
    case EstimatorKind::kZero: return 0.0;
  }
  return 0.0;
}

DatasetGenerator simulated_data(const BanditInstance& instance, std::size_t n,
                                SamplingMode mode) {
  if (mode == SamplingMode::kPoisson) {
    return [&instance, n](const SeedSpec& seed) { return draw_poisson_dataset(instance, n, seed); };
  }
  return [&instance, n](const SeedSpec& seed) {
    return draw_multinomial_dataset(instance, n, seed);
  };
}

namespace {

void run_trial(std::span<const EstimatorSpec> estimators, const Policy& target,
               const Policy& behavior, double truth, const DatasetGenerator& generate,
               std::size_t trials, std::uint64_t base_seed, std::size_t t, double* out) {
  const Dataset data = generate(SeedSpec{base_seed, t});
  for (std::size_t e = 0; e < estimators.size(); ++e) {
    const double err = estimators[e].evaluate(data, target, behavior) - truth;
    out[e * trials + t] = err * err;
  }
}

}  // namespace

std::vector<double> trial_squared_errors(std::span<const EstimatorSpec> estimators,
                                         const Policy& target, const Policy& behavior,
                                         double truth, const DatasetGenerator& generate,
                                         std::size_t trials, std::uint64_t base_seed,
                                         Execution execution) {
  std::vector<double> out(estimators.size() * trials, 0.0);
  if (execution == Execution::kSerial) {
    for (std::size_t t = 0; t < trials; ++t) {
      run_trial(estimators, target, behavior, truth, generate, trials, base_seed, t, out.data());
    }
    return out;
  }

  const auto count = static_cast<std::int64_t>(trials);
  std::int64_t first_failure = count;
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t t = 0; t < count; ++t) {
    try {
      run_trial(estimators, target, behavior, truth, generate, trials, base_seed,
                static_cast<std::size_t>(t), out.data());
    } catch (...) {
#pragma omp critical(ope_mc_failure)
      {
        if (t < first_failure) {
          first_failure = t;
          failure = std::current_exception();
        }
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

namespace {

// Neumaier's variant of Kahan summation, consumed strictly in index order.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace

MseReport summarize_squared_errors(std::span<const double> squared_errors,
                                   std::string estimator_name, std::size_t n, std::size_t k,
                                   std::uint64_t seed) {
  const std::size_t trials = squared_errors.size();
  if (trials < 2) throw OpeError(ErrorCode::kInvalidArgument, "need at least 2 trials");
  CompensatedSum total;
  for (double x : squared_errors) total.add(x);
  const double mean = total.value() / static_cast<double>(trials);
  CompensatedSum spread;
  for (double x : squared_errors) spread.add((x - mean) * (x - mean));
  const double variance = spread.value() / static_cast<double>(trials - 1);

  MseReport report;
  report.mean_squared_error = mean;
  report.std_error = std::sqrt(variance / static_cast<double>(trials));
  report.trials = trials;
  report.estimator_name = std::move(estimator_name);
  report.n = n;
  report.k = k;
  report.seed = seed;
  return report;
}

std::vector<MseReport> monte_carlo_mse(std::span<const EstimatorSpec> estimators,
                                       const Policy& target, const Policy& behavior,
                                       double truth, const DatasetGenerator& generate,
                                       std::size_t n, std::size_t trials,
                                       std::uint64_t base_seed, Execution execution) {
  if (trials < 2) throw OpeError(ErrorCode::kInvalidArgument, "need at least 2 trials");
  const std::vector<double> sq = trial_squared_errors(estimators, target, behavior, truth,
                                                      generate, trials, base_seed, execution);
  std::vector<MseReport> reports;
  reports.reserve(estimators.size());
  for (std::size_t e = 0; e < estimators.size(); ++e) {
    reports.push_back(summarize_squared_errors(
        std::span<const double>(sq).subspan(e * trials, trials), estimators[e].name, n,
        target.size(), base_seed));
  }
  return reports;
}

std::vector<MseReport> monte_carlo_mse(std::span<const EstimatorSpec> estimators,
                                       const BanditInstance& instance, std::size_t n,
                                       std::size_t trials, std::uint64_t base_seed,
                                       SamplingMode mode, Execution execution) {
  return monte_carlo_mse(estimators, instance.target(), instance.behavior(),
                         value_function(instance), simulated_data(instance, n, mode), n, trials,
                         base_seed, execution);
}

MseReport monte_carlo_mse(const EstimatorSpec& estimator, const BanditInstance& instance,
                          std::size_t n, std::size_t trials, std::uint64_t base_seed,
                          SamplingMode mode, Execution execution) {
  return monte_carlo_mse(std::span<const EstimatorSpec>(&estimator, 1), instance, n, trials,
                         base_seed, mode, execution)
      .front();
}

}  // namespace ope
