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

#include "ope/analysis.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ope {

double binomial_inverse_moment(std::size_t n, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw OpeError(ErrorCode::kInvalidArgument, "p must lie in [0, 1]");
  }
  if (n == 0 || p == 0.0) return 0.0;
  if (p == 1.0) return 1.0 / static_cast<double>(n);
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  const auto dn = static_cast<double>(n);
  double log_choose = 0.0;  // log C(n, j), built up incrementally
  double total = 0.0;
  for (std::size_t j = 1; j <= n; ++j) {
    const auto dj = static_cast<double>(j);
    log_choose += std::log(dn - dj + 1.0) - std::log(dj);
    total += std::exp(log_choose + dj * log_p + (dn - dj) * log_q) / dj;
  }
  return total;
}

namespace {

// (1 - p)^n evaluated as exp(n log1p(-p)) so that tiny results underflow
// gracefully instead of through repeated multiplication.
double miss_probability(double p, std::size_t n) {
  if (p >= 1.0) return 0.0;
  return std::exp(static_cast<double>(n) * std::log1p(-p));
}

}  // namespace

double plugin_mse_exact(const BanditInstance& instance, std::size_t n) {
  if (n == 0) throw OpeError(ErrorCode::kInvalidArgument, "sample size must be >= 1");
  const std::size_t k = instance.k();
  const Policy& target = instance.target();
  const Policy& behavior = instance.behavior();
  const double r_max = instance.r_max();

  std::vector<double> w(k);
  std::vector<double> miss(k);
  double bias = 0.0;
  double within = 0.0;
  for (std::size_t a = 0; a < k; ++a) {
    const double r = instance.mean_reward(a);
    w[a] = target[a] * r;
    miss[a] = miss_probability(behavior[a], n);
    bias -= w[a] * miss[a];
    const double sigma2 = r * (r_max - r);
    if (target[a] > 0.0 && sigma2 > 0.0) {
      within += target[a] * target[a] * sigma2 * binomial_inverse_moment(n, behavior[a]);
    }
  }

  double indicator = 0.0;
  for (std::size_t a = 0; a < k; ++a) {
    if (w[a] == 0.0) continue;
    indicator += w[a] * w[a] * miss[a] * (1.0 - miss[a]);
    for (std::size_t b = a + 1; b < k; ++b) {
      if (w[b] == 0.0) continue;
      const double both = miss_probability(behavior[a] + behavior[b], n);
      indicator += 2.0 * w[a] * w[b] * (both - miss[a] * miss[b]);
    }
  }
  return bias * bias + within + indicator;
}

SlopeFit loglog_slope(std::span<const std::pair<double, double>> points) {
  if (points.size() < 2) throw OpeError(ErrorCode::kInvalidArgument, "need at least 2 points");
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& [n, mse] : points) {
    if (!(n > 0.0) || !(mse > 0.0)) {
      throw OpeError(ErrorCode::kNonPositiveInput, "log-log fit needs positive n and mse");
    }
    x.push_back(std::log(n));
    y.push_back(std::log(mse));
  }
  const auto m = static_cast<double>(x.size());
  const double x_bar = std::accumulate(x.begin(), x.end(), 0.0) / m;
  const double y_bar = std::accumulate(y.begin(), y.end(), 0.0) / m;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - x_bar) * (x[i] - x_bar);
    sxy += (x[i] - x_bar) * (y[i] - y_bar);
  }
  if (!(sxx > 0.0)) throw OpeError(ErrorCode::kInvalidArgument, "all n values coincide");

  SlopeFit fit;
  fit.points = x.size();
  fit.slope = sxy / sxx;
  fit.intercept = y_bar - fit.slope * x_bar;
  if (x.size() == 2) {
    fit.std_error = std::numeric_limits<double>::quiet_NaN();
  } else {
    double ssr = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double resid = y[i] - fit.intercept - fit.slope * x[i];
      ssr += resid * resid;
    }
    fit.std_error = std::sqrt(ssr / (m - 2.0) / sxx);
  }
  return fit;
}

CompetitiveRatio competitive_ratio(double numerator_mse, const BanditInstance& instance,
                                   std::size_t n, std::size_t surrogate_trials,
                                   std::uint64_t surrogate_seed) {
  if (!(numerator_mse >= 0.0)) {
    throw OpeError(ErrorCode::kInvalidArgument, "numerator MSE must be non-negative");
  }
  const SwitchSolution sol = solve_optimal_subset(instance.target(), instance.behavior(), n);
  const MseReport surrogate = monte_carlo_mse(EstimatorSpec::switch_at(sol.s_star), instance, n,
                                              surrogate_trials, surrogate_seed);
  if (!(surrogate.mean_squared_error > 0.0)) {
    throw OpeError(ErrorCode::kZeroDenominator, "switch surrogate MSE is zero");
  }
  CompetitiveRatio out;
  out.numerator = numerator_mse;
  out.denominator = surrogate.mean_squared_error;
  out.denominator_std_error = surrogate.std_error;
  out.ratio = numerator_mse / surrogate.mean_squared_error;
  out.surrogate_trials = surrogate_trials;
  out.surrogate_seed = surrogate_seed;
  out.analytic =
      minimax_risk_surrogate(instance.target(), instance.behavior(), n, instance.r_max());
  return out;
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t m = i; m <= j; ++m) ranks[order[m]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw OpeError(ErrorCode::kInvalidArgument, "need two equal-length samples of size >= 2");
  }
  const std::vector<double> rx = average_ranks(x);
  const std::vector<double> ry = average_ranks(y);
  const auto m = static_cast<double>(x.size());
  const double mean = (m + 1.0) / 2.0;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mean) * (ry[i] - mean);
    sxx += (rx[i] - mean) * (rx[i] - mean);
    syy += (ry[i] - mean) * (ry[i] - mean);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace ope
