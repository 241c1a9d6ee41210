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

#include "ope/chebyshev.h"

#include <cmath>
#include <string>

namespace ope {

ChebyshevConfig ChebyshevConfig::from_constants(double nu, std::size_t k, std::size_t n,
                                                double c0, double c1) {
  if (k == 0 || n == 0) {
    throw OpeError(ErrorCode::kInvalidArgument, "k and n must be positive");
  }
  const double log_k = std::log(static_cast<double>(k));
  ChebyshevConfig config;
  config.nu = nu;
  config.ell = nu;
  config.r = std::min(1.0, c1 * log_k / static_cast<double>(n));
  config.degree_L = static_cast<std::size_t>(std::max(1.0, std::ceil(c0 * log_k)));
  config.n = n;
  config.c0 = c0;
  config.c1 = c1;
  return config;
}

void ChebyshevConfig::validate() const {
  if (!(ell < r)) {
    throw OpeError(ErrorCode::kDegenerateInterval,
                   "need ell < r, got ell = " + std::to_string(ell) + ", r = " + std::to_string(r));
  }
  if (!(ell > 0.0) || !(r <= 1.0)) {
    throw OpeError(ErrorCode::kInvalidArgument, "need 0 < ell < r <= 1");
  }
  if (degree_L < 1) throw OpeError(ErrorCode::kInvalidArgument, "degree must be >= 1");
  if (n < 1) throw OpeError(ErrorCode::kInvalidArgument, "n must be >= 1");
}

ChebyshevWeights::ChebyshevWeights(std::vector<ExtendedFloat> coeffs, ExtendedFloat normalizer,
                                   std::size_t n, bool fallback)
    : coeffs_(std::move(coeffs)),
      normalizer_(std::move(normalizer)),
      g_table_(coeffs_.size()),
      n_(n),
      plug_in_fallback_(fallback) {
  // a_j j!/n^j spans hundreds of orders of magnitude across j; accumulate it
  // as a log and exponentiate once.
  const ExtendedFloat log_n = log(ExtendedFloat(n));
  ExtendedFloat log_factorial = 0;
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    if (j > 0) log_factorial += log(ExtendedFloat(j));
    const int sign = coeff_sign(j);
    if (sign == 0) {
      g_table_[j] = 1.0;
      continue;
    }
    const ExtendedFloat log_term = coeff_log_magnitude(j) + log_factorial - log_n * j;
    const ExtendedFloat term = exp(log_term) * sign;
    g_table_[j] = static_cast<double>(term + 1);
  }
}

ChebyshevWeights ChebyshevWeights::plug_in(std::size_t n) {
  return ChebyshevWeights({ExtendedFloat(-1)}, ExtendedFloat(1), n, true);
}

int ChebyshevWeights::coeff_sign(std::size_t j) const {
  const ExtendedFloat& a = coeffs_.at(j);
  return a > 0 ? 1 : (a < 0 ? -1 : 0);
}

ExtendedFloat ChebyshevWeights::coeff_log_magnitude(std::size_t j) const {
  return log(abs(coeffs_.at(j)));
}

ExtendedFloat ChebyshevWeights::evaluate(const ExtendedFloat& x) const {
  ExtendedFloat acc = 0;
  for (std::size_t j = coeffs_.size(); j-- > 0;) acc = acc * x + coeffs_[j];
  return acc;
}

ChebyshevWeights chebyshev_coefficients(const ChebyshevConfig& config) {
  config.validate();
  const ExtendedFloat ell(config.ell);
  const ExtendedFloat r(config.r);
  const ExtendedFloat alpha = ExtendedFloat(2) / (r - ell);
  const ExtendedFloat beta = -(r + ell) / (r - ell);
  const std::size_t degree = config.degree_L;

  // Q_{m+1}(y) = 2 y Q_m(y) - Q_{m-1}(y) with y = alpha x + beta, tracked as
  // monomial coefficients in x.
  std::vector<ExtendedFloat> prev{ExtendedFloat(1)};
  std::vector<ExtendedFloat> cur{beta, alpha};
  for (std::size_t m = 1; m < degree; ++m) {
    std::vector<ExtendedFloat> next(m + 2, ExtendedFloat(0));
    for (std::size_t d = 0; d <= m; ++d) {
      next[d] += 2 * beta * cur[d];
      next[d + 1] += 2 * alpha * cur[d];
    }
    for (std::size_t d = 0; d < prev.size(); ++d) next[d] -= prev[d];
    prev = std::move(cur);
    cur = std::move(next);
  }

  const ExtendedFloat normalizer = cur[0];
  std::vector<ExtendedFloat> coeffs(degree + 1);
  coeffs[0] = ExtendedFloat(-1);
  for (std::size_t d = 1; d <= degree; ++d) coeffs[d] = -cur[d] / normalizer;
  return ChebyshevWeights(std::move(coeffs), normalizer, config.n, false);
}

ChebyshevWeights chebyshev_weights_or_plug_in(const ChebyshevConfig& config) {
  if (config.falls_back_to_plug_in()) return ChebyshevWeights::plug_in(config.n);
  return chebyshev_coefficients(config);
}

double chebyshev_estimate(const ArmStatistics& stats, const Policy& target,
                          const ChebyshevWeights& weights) {
  double v = 0.0;
  for (std::size_t a = 0; a < target.size(); ++a) {
    if (stats.counts[a] == 0) continue;
    v += target[a] * stats.mean(a) * weights.g(stats.counts[a]);
  }
  return v;
}

ChebyshevEstimate chebyshev_estimate(const Dataset& data, const Policy& target,
                                     const ChebyshevWeights& weights) {
  if (target.size() != data.k) {
    throw OpeError(ErrorCode::kDimensionMismatch, "policy and dataset differ in k");
  }
  return {chebyshev_estimate(ArmStatistics::from(data), target, weights),
          data.mode == SamplingMode::kMultinomial};
}

double chebyshev_bias_oracle(const BanditInstance& instance, const ChebyshevWeights& weights,
                             std::size_t n) {
  ExtendedFloat bias = 0;
  const ExtendedFloat rate(n);
  for (std::size_t a = 0; a < instance.k(); ++a) {
    const double weight = instance.target()[a] * instance.mean_reward(a);
    if (weight == 0.0) continue;
    const ExtendedFloat pb(instance.behavior()[a]);
    bias += ExtendedFloat(weight) * exp(-rate * pb) * weights.evaluate(pb);
  }
  return static_cast<double>(bias);
}

DelocalizationReport target_delocalization(const Policy& target, double c0) {
  double sum_sq = 0.0;
  for (double w : target.weights()) sum_sq += w * w;
  DelocalizationReport report;
  if (target.size() > 1) {
    report.gamma = -std::log(sum_sq) / std::log(static_cast<double>(target.size()));
  }
  report.c0_within_bound = c0 <= report.gamma / 7.0;
  return report;
}

}  // namespace ope
