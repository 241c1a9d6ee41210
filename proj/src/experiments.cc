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

#include "ope/experiments.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "ope/analysis.h"
#include "ope/chebyshev.h"
#include "ope/monte_carlo.h"
#include "ope/ratings.h"
#include "ope/subset_solver.h"

namespace ope {

namespace {

std::size_t exact_sqrt(std::size_t k) {
  auto root = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(k))));
  if (root * root != k) {
    throw OpeError(ErrorCode::kNonSquareK, "k = " + std::to_string(k) + " is not a perfect square");
  }
  return root;
}

std::vector<double> constant(std::size_t k, double value) { return std::vector<double>(k, value); }

std::vector<std::size_t> k_grid(const ExperimentConfig& config) {
  return config.k_values.empty() ? default_k_values(config.experiment) : config.k_values;
}

// Appends one slope row per estimator name, fitted over (n, mse) in row order.
void append_slopes(std::vector<ResultRow>& rows, const std::vector<std::string>& names) {
  for (const auto& name : names) {
    std::vector<std::pair<double, double>> points;
    for (const auto& row : rows) {
      if (row.estimator == name && row.n) {
        points.emplace_back(static_cast<double>(*row.n), row.mse);
      }
    }
    if (points.size() < 2) continue;
    bool positive = true;
    for (const auto& p : points) positive = positive && p.second > 0.0;
    if (!positive) continue;
    rows.push_back(ResultRow::from_slope(name, loglog_slope(points)));
  }
}

void append_reports(std::vector<ResultRow>& rows, const std::vector<MseReport>& reports) {
  for (const auto& r : reports) rows.push_back(ResultRow::from_report(r));
}

double chebyshev_c0(const ExperimentConfig& config) {
  return config.chebyshev_c0.value_or(kExperimentChebyshevC0);
}

double chebyshev_c1(const ExperimentConfig& config) {
  return config.chebyshev_c1.value_or(kExperimentChebyshevC1);
}

}  // namespace

BanditInstance switch_scaling_instance(std::size_t k, double r_max) {
  const std::size_t root = exact_sqrt(k);
  const auto dk = static_cast<double>(k);
  std::vector<double> behavior(k);
  for (std::size_t a = 0; a < k; ++a) {
    behavior[a] = a < root ? 1.0 / (dk * dk)
                           : (1.0 - std::pow(dk, -1.5)) / (dk - static_cast<double>(root));
  }
  return BanditInstance::create(Policy::uniform(k), Policy::validate(std::move(behavior)),
                                constant(k, r_max / 2.0), r_max);
}

BanditInstance competitive_ratio_instance(std::size_t k, std::size_t n, std::size_t s,
                                          double r_max) {
  if (k < 2 || s < 1 || s > k || n < 1) {
    throw OpeError(ErrorCode::kInvalidArgument, "need k >= 2, 1 <= s <= k, n >= 1");
  }
  const double small = 1.0 / (static_cast<double>(n) * std::log(static_cast<double>(k)));
  if (small * static_cast<double>(k - 1) >= 1.0) {
    throw OpeError(ErrorCode::kInvalidArgument, "n too small for the behavior construction");
  }
  std::vector<double> behavior(k, small);
  behavior[k - 1] = 1.0 - small * static_cast<double>(k - 1);
  return BanditInstance::create(Policy::uniform(k, s), Policy::validate(std::move(behavior)),
                                constant(k, r_max / 2.0), r_max);
}

BanditInstance chebyshev_scaling_instance(std::size_t k, double r_max) {
  if (k < 2) throw OpeError(ErrorCode::kInvalidArgument, "need k >= 2");
  const double small = std::pow(static_cast<double>(k), -1.5);
  std::vector<double> behavior(k, small);
  behavior[0] = 1.0 - static_cast<double>(k - 1) * small;
  return BanditInstance::create(Policy::uniform(k), Policy::validate(std::move(behavior)),
                                constant(k, r_max / 2.0), r_max);
}

std::vector<std::size_t> default_k_values(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kSwitchScaling: return {100, 400, 1600};
    case ExperimentKind::kCompetitiveRatio: return {100};
    case ExperimentKind::kChebyshevScaling: return {100, 250, 630};
    case ExperimentKind::kCustom: return {};
  }
  return {};
}

std::vector<std::size_t> support_sizes(std::size_t k, std::size_t stride) {
  if (stride == 0) throw OpeError(ErrorCode::kInvalidArgument, "stride must be >= 1");
  std::vector<std::size_t> out{1};
  for (std::size_t s = stride; s <= k; s += stride) {
    if (s > out.back()) out.push_back(s);
  }
  if (out.back() != k) out.push_back(k);
  return out;
}

std::vector<ResultRow> experiment_switch_scaling(const ExperimentConfig& config) {
  config.validate();
  std::vector<ResultRow> rows;
  for (std::size_t k : k_grid(config)) {
    const BanditInstance instance = switch_scaling_instance(k, config.r_max);
    const auto n = static_cast<std::size_t>(std::llround(1.5 * static_cast<double>(k)));
    const SwitchSolution sol = solve_optimal_subset(instance.target(), instance.behavior(), n);
    const std::vector<EstimatorSpec> estimators{EstimatorSpec::plug_in(),
                                                EstimatorSpec::importance_sampling(),
                                                EstimatorSpec::switch_at(sol.s_star)};
    append_reports(rows, monte_carlo_mse(estimators, instance, n, config.trials,
                                         config.base_seed));
  }
  append_slopes(rows, {"plugin", "is", "switch"});
  return rows;
}

std::vector<ResultRow> experiment_competitive_ratio(const ExperimentConfig& config) {
  config.validate();
  const std::size_t k = k_grid(config).front();
  const std::size_t n = 2 * k;
  const std::size_t denominator_trials = config.effective_denominator_trials();
  const std::uint64_t denominator_seed = config.base_seed + 1;
  std::vector<ResultRow> rows;
  for (std::size_t s : support_sizes(k, config.s_stride)) {
    const BanditInstance instance = competitive_ratio_instance(k, n, s, config.r_max);
    const MseReport plugin =
        monte_carlo_mse(EstimatorSpec::plug_in(), instance, n, config.trials, config.base_seed);
    const CompetitiveRatio ratio = competitive_ratio(plugin.mean_squared_error, instance, n,
                                                     denominator_trials, denominator_seed);
    rows.push_back(ResultRow::from_report(plugin, s));

    ResultRow surrogate;
    surrogate.k = k;
    surrogate.n = n;
    surrogate.s = s;
    surrogate.estimator = "switch_surrogate";
    surrogate.mse = ratio.denominator;
    surrogate.std_error = ratio.denominator_std_error;
    surrogate.trials = ratio.surrogate_trials;
    surrogate.seed = ratio.surrogate_seed;
    rows.push_back(surrogate);

    ResultRow r;
    r.k = k;
    r.n = n;
    r.s = s;
    r.estimator = "competitive_ratio";
    r.mse = ratio.ratio;
    r.trials = config.trials;
    r.seed = config.base_seed;
    rows.push_back(r);
  }
  return rows;
}

std::vector<ResultRow> experiment_chebyshev_scaling(const ExperimentConfig& config) {
  config.validate();
  std::vector<ResultRow> rows;
  for (std::size_t k : k_grid(config)) {
    const BanditInstance instance = chebyshev_scaling_instance(k, config.r_max);
    const double dk = static_cast<double>(k);
    const auto n = static_cast<std::size_t>(std::llround(std::pow(dk, 1.5)));
    const double nu = std::pow(dk, -1.5);
    const ChebyshevWeights weights = chebyshev_weights_or_plug_in(
        ChebyshevConfig::from_constants(nu, k, n, chebyshev_c0(config), chebyshev_c1(config)));
    const std::vector<EstimatorSpec> estimators{EstimatorSpec::plug_in(),
                                                EstimatorSpec::chebyshev(weights)};
    append_reports(rows, monte_carlo_mse(estimators, instance, n, config.trials,
                                         config.base_seed, SamplingMode::kPoisson));
  }
  append_slopes(rows, {"plugin", "chebyshev"});
  return rows;
}

std::vector<ResultRow> experiment_ratings(const ExperimentConfig& config) {
  config.validate();
  if (config.ratings_path.empty()) {
    throw OpeError(ErrorCode::kInvalidArgument, "ratings_path is required");
  }
  RatingsInstanceSpec spec;
  spec.ratings_path = config.ratings_path;
  spec.movie_count = config.movie_count;
  spec.min_ratings = config.min_ratings;
  spec.rating_scale_max = config.rating_scale_max;
  spec.subsample_seed = config.subsample_seed;
  spec.r_max = config.r_max;
  const RatingsData data = ingest_ratings(spec);
  const BanditInstance& instance = data.instance;
  const std::size_t k = instance.k();

  double nu = 1.0;
  for (double p : instance.behavior().weights()) nu = std::min(nu, p);
  const std::vector<std::size_t> n_values =
      config.n_values.empty() ? std::vector<std::size_t>{250, 500, 1000, 2000} : config.n_values;

  std::vector<ResultRow> rows;
  for (std::size_t n : n_values) {
    const SwitchSolution sol = solve_optimal_subset(instance.target(), instance.behavior(), n);
    const ChebyshevWeights weights = chebyshev_weights_or_plug_in(
        ChebyshevConfig::from_constants(nu, k, n, chebyshev_c0(config), chebyshev_c1(config)));
    const std::vector<EstimatorSpec> estimators{
        EstimatorSpec::plug_in(), EstimatorSpec::importance_sampling(),
        EstimatorSpec::switch_at(sol.s_star), EstimatorSpec::chebyshev(weights)};
    append_reports(rows, monte_carlo_mse(estimators, instance.target(), instance.behavior(),
                                         value_function(instance), resampled_data(data, n), n,
                                         config.trials, config.base_seed));
  }
  append_slopes(rows, {"plugin", "is", "switch", "chebyshev"});
  return rows;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& config) {
  switch (config.experiment) {
    case ExperimentKind::kSwitchScaling: return experiment_switch_scaling(config);
    case ExperimentKind::kCompetitiveRatio: return experiment_competitive_ratio(config);
    case ExperimentKind::kChebyshevScaling: return experiment_chebyshev_scaling(config);
    case ExperimentKind::kCustom: return experiment_ratings(config);
  }
  throw OpeError(ErrorCode::kInvalidArgument, "unknown experiment");
}

}  // namespace ope
