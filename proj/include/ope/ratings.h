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
#include <iosfwd>
#include <string>
#include <vector>

#include "ope/bandit.h"
#include "ope/monte_carlo.h"

namespace ope {

struct RatingsInstanceSpec {
  std::string ratings_path;
  std::size_t movie_count = 500;
  std::size_t min_ratings = 10;
  double rating_scale_max = 5.0;
  std::uint64_t subsample_seed = 0;
  double r_max = 1.0;
};

/// An instance built from a ratings log: action a is the a-th selected movie
/// (ascending movieId), r_f(a) its mean rating rescaled to [0, r_max], the
/// target uniform and the behavior the empirical rating-count proportions.
/// `pool` holds every rating of the selected movies as (action, reward).
struct RatingsData {
  BanditInstance instance;
  std::vector<Observation> pool;
  std::vector<std::int64_t> movie_ids;
};

/// Reads a comma-separated file whose header names `movieId` and `rating`
/// columns (others ignored). Throws MalformedCsv or InsufficientMovies.
RatingsData ingest_ratings(const RatingsInstanceSpec& spec);

/// Columns action,movie_id,target,behavior,mean_reward,r_max; every float at
/// 17 significant digits, so read_instance_csv reproduces the instance bitwise.
void write_instance_csv(std::ostream& out, const BanditInstance& instance,
                        const std::vector<std::int64_t>& movie_ids);
BanditInstance read_instance_csv(std::istream& in);

/// Each trial draws n records uniformly with replacement from the pool.
DatasetGenerator resampled_data(const RatingsData& data, std::size_t n);

}  // namespace ope
