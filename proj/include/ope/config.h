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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ope {

enum class ExperimentKind { kSwitchScaling, kCompetitiveRatio, kChebyshevScaling, kCustom };

std::string_view experiment_kind_name(ExperimentKind kind);
/// Accepts switch-scaling, competitive-ratio, chebyshev-scaling, custom; also
/// `ratings` as a synonym for custom.
ExperimentKind parse_experiment_kind(std::string_view name);

/// Everything an experiment run depends on. Text form is flat `key = value`
/// lines, lists comma-separated, `#` starts a comment.
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::kSwitchScaling;
  std::vector<std::size_t> k_values;  // empty selects the experiment's default grid
  std::size_t trials = 10000;
  std::uint64_t base_seed = 1;
  double r_max = 1.0;
  std::string output_path;

  // chebyshev.c0 / chebyshev.c1
  std::optional<double> chebyshev_c0;
  std::optional<double> chebyshev_c1;

  // competitive-ratio
  std::size_t s_stride = 5;
  std::size_t denominator_trials = 0;  // 0 means 10 x trials

  // custom (ratings)
  std::string ratings_path;
  std::size_t movie_count = 500;
  std::size_t min_ratings = 10;
  double rating_scale_max = 5.0;
  std::uint64_t subsample_seed = 0;
  std::vector<std::size_t> n_values;

  /// k_values increasing and trials >= 100. Throws InvalidArgument.
  void validate() const;

  std::size_t effective_denominator_trials() const {
    return denominator_trials > 0 ? denominator_trials : 10 * trials;
  }
};

/// Throws ConfigParse naming the offending line.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

/// Canonical text form: every key, fixed order. parse_config inverts it.
std::string to_config_text(const ExperimentConfig& config);

/// FNV-1a 64 of the canonical text.
std::uint64_t config_hash(const ExperimentConfig& config);

std::vector<std::size_t> parse_size_list(std::string_view text);

}  // namespace ope
