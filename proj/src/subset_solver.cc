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

#include "ope/subset_solver.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>

namespace ope {

ActionSubset ActionSubset::full(std::size_t k) {
  ActionSubset s(k);
  for (std::size_t a = 0; a < k; ++a) s.insert(a);
  return s;
}

ActionSubset ActionSubset::of(std::size_t k, const std::vector<std::size_t>& actions) {
  ActionSubset s(k);
  for (auto a : actions) {
    if (a >= k) throw OpeError(ErrorCode::kInvalidArgument, "subset action outside [k]");
    s.insert(a);
  }
  return s;
}

std::size_t ActionSubset::count() const {
  return static_cast<std::size_t>(std::count(members_.begin(), members_.end(), true));
}

std::vector<std::size_t> ActionSubset::actions() const {
  std::vector<std::size_t> out;
  for (std::size_t a = 0; a < members_.size(); ++a) {
    if (members_[a]) out.push_back(a);
  }
  return out;
}

namespace {

void check_dims(const Policy& target, const Policy& behavior, std::size_t n) {
  if (target.size() != behavior.size()) {
    throw OpeError(ErrorCode::kDimensionMismatch, "policies differ in action count");
  }
  if (n == 0) throw OpeError(ErrorCode::kInvalidArgument, "sample size must be >= 1");
}

void check_subset(const Policy& target, const ActionSubset& s) {
  if (s.k() != target.size()) {
    throw OpeError(ErrorCode::kDimensionMismatch, "subset size differs from action count");
  }
}

}  // namespace

double truncation_objective(const Policy& target, const Policy& behavior, std::size_t n,
                            const std::vector<double>& v) {
  check_dims(target, behavior, n);
  if (v.size() != target.size()) {
    throw OpeError(ErrorCode::kDimensionMismatch, "v has the wrong length");
  }
  double quad = 0.0;
  double l1 = 0.0;
  for (std::size_t a = 0; a < v.size(); ++a) {
    const double gap = target[a] - v[a];
    if (behavior[a] == 0.0) {
      if (gap != 0.0) return std::numeric_limits<double>::infinity();
    } else {
      quad += gap * gap / behavior[a];
    }
    l1 += std::abs(v[a]);
  }
  return std::sqrt(quad / (8.0 * static_cast<double>(n))) + 0.5 * l1;
}

SwitchSolution solve_optimal_subset(const Policy& target, const Policy& behavior,
                                    std::size_t n) {
  check_dims(target, behavior, n);
  const std::size_t k = target.size();
  const double two_n = 2.0 * static_cast<double>(n);
  const std::vector<double> rho = likelihood_ratio(target, behavior);

  // Zero-target actions keep v = 0 and never enter S*. Actions the behavior
  // never plays must carry v = target to keep the objective finite.
  std::vector<std::size_t> sorted;
  ActionSubset forced(k);
  double forced_mass = 0.0;
  for (std::size_t a = 0; a < k; ++a) {
    if (target[a] == 0.0) continue;
    if (is_infinite_ratio(rho[a])) {
      forced.insert(a);
      forced_mass += target[a];
    } else {
      sorted.push_back(a);
    }
  }
  std::stable_sort(sorted.begin(), sorted.end(),
                   [&](std::size_t x, std::size_t y) { return rho[x] < rho[y]; });
  const std::size_t m = sorted.size();

  // Candidate i: complement = sorted[0, i), truncated suffix = sorted[i, m).
  std::vector<double> t2_prefix(m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t a = sorted[i];
    t2_prefix[i + 1] = t2_prefix[i] + behavior[a] * rho[a] * rho[a];
  }
  std::vector<double> pb_suffix(m + 1, 0.0);
  std::vector<double> pt_suffix(m + 1, 0.0);
  for (std::size_t i = m; i-- > 0;) {
    pb_suffix[i] = pb_suffix[i + 1] + behavior[sorted[i]];
    pt_suffix[i] = pt_suffix[i + 1] + target[sorted[i]];
  }

  struct Candidate {
    std::size_t split;
    double c;
    double objective;
  };
  auto threshold = [&](std::size_t i) {
    return std::sqrt(two_n * t2_prefix[i] / (1.0 - two_n * pb_suffix[i]));
  };
  auto explicit_objective = [&](std::size_t i, double c) {
    double l1 = forced_mass;
    for (std::size_t j = i; j < m; ++j) {
      l1 += std::abs(target[sorted[j]] - c * behavior[sorted[j]]);
    }
    return std::sqrt((c * c * pb_suffix[i] + t2_prefix[i]) / (4.0 * two_n)) + 0.5 * l1;
  };

  std::optional<Candidate> best;
  // Walk from the empty suffix upward so objective ties keep S* minimal.
  for (std::size_t i = m + 1; i-- > 0;) {
    if (two_n * pb_suffix[i] >= 1.0) break;  // pb_suffix only grows from here
    const double c = threshold(i);
    const bool above = i == m || rho[sorted[i]] > c;
    const bool below = i == 0 || rho[sorted[i - 1]] <= c;
    if (!above || !below) continue;
    // On a consistent suffix target - c*behavior > 0, so |v| sums in closed form.
    const double objective =
        std::sqrt((c * c * pb_suffix[i] + t2_prefix[i]) / (4.0 * two_n)) +
        0.5 * (forced_mass + pt_suffix[i] - c * pb_suffix[i]);
    if (!best || objective < best->objective) best = Candidate{i, c, objective};
  }
  if (!best) {
    // Rounding left no suffix exactly consistent; every closed-form candidate
    // is still a feasible point, so take the smallest.
    for (std::size_t i = m + 1; i-- > 0;) {
      if (two_n * pb_suffix[i] >= 1.0) break;
      const double c = threshold(i);
      const double objective = explicit_objective(i, c);
      if (!best || objective < best->objective) best = Candidate{i, c, objective};
    }
  }

  SwitchSolution sol;
  sol.v_star.assign(k, 0.0);
  sol.s_star = forced;
  for (std::size_t a = 0; a < k; ++a) {
    if (forced.contains(a)) sol.v_star[a] = target[a];
  }

  const double full_objective = 0.5 * (forced_mass + pt_suffix[0]);
  if (!best || full_objective < best->objective) {
    // v = target: everything the target plays is truncated.
    for (std::size_t a : sorted) {
      sol.s_star.insert(a);
      sol.v_star[a] = target[a];
    }
    sol.c = 0.0;
    sol.dual_value = full_objective;
    sol.t1 = 0.0;
    sol.t2 = 0.0;
    sol.epsilon = std::max(0.0, 1.0 - two_n * behavior.mass(sol.s_star.mask()));
    return sol;
  }

  sol.c = best->c;
  sol.dual_value = best->objective;
  for (std::size_t j = best->split; j < m; ++j) {
    const std::size_t a = sorted[j];
    sol.s_star.insert(a);
    sol.v_star[a] = target[a] - best->c * behavior[a];
    const double gap = target[a] - sol.v_star[a];
    sol.t1 += gap * gap / behavior[a];
  }
  sol.t2 = t2_prefix[best->split];
  sol.epsilon = 1.0 - two_n * pb_suffix[best->split];
  return sol;
}

double switch_subset_objective(const Policy& target, const Policy& behavior,
                               std::size_t n, const ActionSubset& s) {
  check_dims(target, behavior, n);
  check_subset(target, s);
  const std::vector<double> rho = likelihood_ratio(target, behavior);
  double truncated = 0.0;
  double variance = 0.0;
  for (std::size_t a = 0; a < rho.size(); ++a) {
    if (s.contains(a)) {
      truncated += target[a];
    } else if (is_infinite_ratio(rho[a])) {
      return std::numeric_limits<double>::infinity();
    } else {
      variance += behavior[a] * rho[a] * rho[a];
    }
  }
  return truncated * truncated + variance / static_cast<double>(n);
}

SubsetOptimum brute_force_subset(const Policy& target, const Policy& behavior,
                                 std::size_t n, std::size_t k_limit) {
  check_dims(target, behavior, n);
  const std::size_t k = target.size();
  if (k > k_limit) {
    throw OpeError(ErrorCode::kTooLarge,
                   "k = " + std::to_string(k) + " exceeds limit " + std::to_string(k_limit));
  }
  SubsetOptimum best{ActionSubset(k), std::numeric_limits<double>::infinity()};
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << k); ++bits) {
    ActionSubset s(k);
    for (std::size_t a = 0; a < k; ++a) {
      if (bits >> a & 1U) s.insert(a);
    }
    const double value = switch_subset_objective(target, behavior, n, s);
    if (value < best.objective) best = {std::move(s), value};
  }
  return best;
}

RiskSurrogate minimax_risk_surrogate(const Policy& target, const Policy& behavior,
                                     std::size_t n, double r_max) {
  const SwitchSolution sol = solve_optimal_subset(target, behavior, n);
  RiskSurrogate out;
  out.pi_t_sstar = target.mass(sol.s_star.mask());
  out.t2_over_n = sol.t2 / static_cast<double>(n);
  out.value = r_max * r_max * (out.pi_t_sstar * out.pi_t_sstar + out.t2_over_n);
  return out;
}

double switch_mse_upper_bound(const Policy& target, const Policy& behavior, std::size_t n,
                              double r_max, const ActionSubset& s) {
  return 3.0 * r_max * r_max * switch_subset_objective(target, behavior, n, s);
}

}  // namespace ope
