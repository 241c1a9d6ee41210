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

#include "ope/sampler.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ope {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

TrialRng::TrialRng(const SeedSpec& seed)
    : engine_(splitmix64(splitmix64(seed.base_seed) ^ splitmix64(~seed.trial_index))) {}

namespace {

constexpr double kInversionLimit = 30.0;

std::uint64_t poisson_inversion(double rate, TrialRng& rng) {
  const double u = rng.uniform();
  double p = std::exp(-rate);
  double cdf = p;
  std::uint64_t x = 0;
  // The cap only matters if rounding leaves cdf just below u in the far tail.
  while (u > cdf && x < 1000) {
    ++x;
    p *= rate / static_cast<double>(x);
    cdf += p;
  }
  return x;
}

// W. Hormann, "The transformed rejection method for generating Poisson
// random variables", Insurance: Mathematics and Economics 12 (1993).
std::uint64_t poisson_ptrs(double rate, TrialRng& rng) {
  const double slam = std::sqrt(rate);
  const double loglam = std::log(rate);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  while (true) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform();
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2.0 * a / us + b) * u + rate + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b) <=
        -rate + k * loglam - std::lgamma(k + 1.0)) {
      return static_cast<std::uint64_t>(k);
    }
  }
}

inline double bernoulli_reward(double mean, double r_max, TrialRng& rng) {
  return rng.uniform() < mean / r_max ? r_max : 0.0;
}

}  // namespace

std::uint64_t sample_poisson(double rate, TrialRng& rng) {
  if (!(rate > 0.0)) return 0;
  return rate < kInversionLimit ? poisson_inversion(rate, rng) : poisson_ptrs(rate, rng);
}

CategoricalSampler::CategoricalSampler(const Policy& policy) : cdf_(policy.size()) {
  double running = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t a = 0; a < policy.size(); ++a) {
    running += policy[a];
    cdf_[a] = running;
    if (policy[a] > 0.0) last_positive = a;
  }
  // Rounding can leave the total a hair below one; the last supported action
  // absorbs it and trailing zero-probability actions stay unreachable.
  for (std::size_t a = last_positive; a < cdf_.size(); ++a) {
    cdf_[a] = std::numeric_limits<double>::infinity();
  }
}

std::uint32_t CategoricalSampler::operator()(TrialRng& rng) const {
  const double u = rng.uniform();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return static_cast<std::uint32_t>(it - cdf_.begin());
}

Dataset draw_multinomial_dataset(const BanditInstance& instance, std::size_t n,
                                 const SeedSpec& seed) {
  if (n == 0) throw OpeError(ErrorCode::kInvalidArgument, "sample size must be >= 1");
  TrialRng rng(seed);
  const CategoricalSampler sampler(instance.behavior());
  Dataset data;
  data.n = n;
  data.k = instance.k();
  data.mode = SamplingMode::kMultinomial;
  data.pairs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t a = sampler(rng);
    data.pairs.push_back({a, bernoulli_reward(instance.mean_reward(a), instance.r_max(), rng)});
  }
  return data;
}

Dataset draw_poisson_dataset(const BanditInstance& instance, std::size_t n,
                             const SeedSpec& seed) {
  if (n == 0) throw OpeError(ErrorCode::kInvalidArgument, "rate must be >= 1");
  TrialRng rng(seed);
  Dataset data;
  data.n = n;
  data.k = instance.k();
  data.mode = SamplingMode::kPoisson;
  const double rate_scale = static_cast<double>(n);
  for (std::size_t a = 0; a < instance.k(); ++a) {
    const std::uint64_t count = sample_poisson(rate_scale * instance.behavior()[a], rng);
    for (std::uint64_t j = 0; j < count; ++j) {
      data.pairs.push_back({static_cast<std::uint32_t>(a),
                            bernoulli_reward(instance.mean_reward(a), instance.r_max(), rng)});
    }
  }
  return data;
}

std::vector<std::size_t> action_counts(const Dataset& data) {
  std::vector<std::size_t> counts(data.k, 0);
  for (const auto& obs : data.pairs) ++counts[obs.action];
  return counts;
}

}  // namespace ope
