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

#include "ope/ratings.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <string_view>

#include "ope/results_io.h"
#include "ope/sampler.h"

namespace ope {

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(line.substr(start, comma == line.npos ? line.npos : comma - start));
    if (comma == line.npos) break;
    start = comma + 1;
  }
  return cells;
}

std::string_view strip(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

[[noreturn]] void malformed(std::size_t line_no, const std::string& what) {
  throw OpeError(ErrorCode::kMalformedCsv, "line " + std::to_string(line_no) + ": " + what);
}

double to_double(std::string_view text, std::size_t line_no, const char* what) {
  const std::string owned(strip(text));
  char* end = nullptr;
  const double v = std::strtod(owned.c_str(), &end);
  if (owned.empty() || end != owned.c_str() + owned.size() || !std::isfinite(v)) {
    malformed(line_no, std::string("non-numeric ") + what + " '" + owned + "'");
  }
  return v;
}

std::int64_t to_int(std::string_view text, std::size_t line_no, const char* what) {
  text = strip(text);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    malformed(line_no, std::string("non-integer ") + what + " '" + std::string(text) + "'");
  }
  return v;
}

// Streams (movieId, rating) pairs to `visit`.
void for_each_rating(const std::string& path,
                     const std::function<void(std::int64_t, double)>& visit) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw OpeError(ErrorCode::kIo, "cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw OpeError(ErrorCode::kMalformedCsv, "empty ratings file");
  const auto header = split(line);
  std::size_t movie_col = header.size();
  std::size_t rating_col = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    const std::string_view name = strip(header[i]);
    if (name == "movieId") movie_col = i;
    if (name == "rating") rating_col = i;
  }
  if (movie_col == header.size() || rating_col == header.size()) {
    throw OpeError(ErrorCode::kMalformedCsv, "header lacks movieId and rating columns");
  }
  const std::size_t needed = std::max(movie_col, rating_col) + 1;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (strip(line).empty()) continue;
    const auto cells = split(line);
    if (cells.size() < needed) malformed(line_no, "too few columns");
    visit(to_int(cells[movie_col], line_no, "movieId"),
          to_double(cells[rating_col], line_no, "rating"));
  }
}

}  // namespace

RatingsData ingest_ratings(const RatingsInstanceSpec& spec) {
  if (spec.movie_count == 0 || spec.min_ratings == 0) {
    throw OpeError(ErrorCode::kInvalidArgument, "movie_count and min_ratings must be >= 1");
  }
  if (!(spec.rating_scale_max > 0.0) || !(spec.r_max > 0.0)) {
    throw OpeError(ErrorCode::kInvalidArgument, "rating scale and r_max must be positive");
  }

  std::map<std::int64_t, std::size_t> counts;
  for_each_rating(spec.ratings_path, [&](std::int64_t movie, double rating) {
    if (rating < 0.0 || rating > spec.rating_scale_max) {
      throw OpeError(ErrorCode::kMalformedCsv, "rating outside [0, rating_scale_max]");
    }
    ++counts[movie];
  });

  std::vector<std::int64_t> qualifying;
  for (const auto& [movie, count] : counts) {
    if (count >= spec.min_ratings) qualifying.push_back(movie);
  }
  if (qualifying.size() < spec.movie_count) {
    throw OpeError(ErrorCode::kInsufficientMovies,
                   std::to_string(qualifying.size()) + " movies have at least " +
                       std::to_string(spec.min_ratings) + " ratings, " +
                       std::to_string(spec.movie_count) + " requested");
  }

  // Partial Fisher-Yates over the ascending id list, then restore id order.
  TrialRng rng(SeedSpec{spec.subsample_seed, 0});
  for (std::size_t i = 0; i < spec.movie_count; ++i) {
    const std::size_t remaining = qualifying.size() - i;
    const auto j = i + std::min(remaining - 1,
                                static_cast<std::size_t>(rng.uniform() *
                                                         static_cast<double>(remaining)));
    std::swap(qualifying[i], qualifying[j]);
  }
  qualifying.resize(spec.movie_count);
  std::sort(qualifying.begin(), qualifying.end());

  std::map<std::int64_t, std::uint32_t> action_of;
  for (std::size_t a = 0; a < qualifying.size(); ++a) {
    action_of[qualifying[a]] = static_cast<std::uint32_t>(a);
  }

  const double scale = spec.r_max / spec.rating_scale_max;
  const std::size_t k = qualifying.size();
  std::vector<Observation> pool;
  std::vector<double> sums(k, 0.0);
  std::vector<std::size_t> per_action(k, 0);
  for_each_rating(spec.ratings_path, [&](std::int64_t movie, double rating) {
    const auto it = action_of.find(movie);
    if (it == action_of.end()) return;
    const double reward = rating * scale;
    pool.push_back({it->second, reward});
    sums[it->second] += reward;
    ++per_action[it->second];
  });

  std::vector<double> mean(k);
  std::vector<double> behavior(k);
  const auto total = static_cast<double>(pool.size());
  for (std::size_t a = 0; a < k; ++a) {
    mean[a] = std::min(spec.r_max, sums[a] / static_cast<double>(per_action[a]));
    behavior[a] = static_cast<double>(per_action[a]) / total;
  }
  BanditInstance instance = BanditInstance::create(Policy::uniform(k), Policy::validate(behavior),
                                                   std::move(mean), spec.r_max);
  return RatingsData{std::move(instance), std::move(pool), std::move(qualifying)};
}

void write_instance_csv(std::ostream& out, const BanditInstance& instance,
                        const std::vector<std::int64_t>& movie_ids) {
  out << "action,movie_id,target,behavior,mean_reward,r_max\n";
  for (std::size_t a = 0; a < instance.k(); ++a) {
    out << a << ',';
    if (a < movie_ids.size()) out << movie_ids[a];
    out << ',' << format_double(instance.target()[a]) << ','
        << format_double(instance.behavior()[a]) << ','
        << format_double(instance.mean_reward(a)) << ',' << format_double(instance.r_max())
        << '\n';
  }
}

BanditInstance read_instance_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw OpeError(ErrorCode::kMalformedCsv, "empty instance file");
  std::vector<double> target;
  std::vector<double> behavior;
  std::vector<double> mean;
  double r_max = 0.0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (strip(line).empty()) continue;
    const auto cells = split(line);
    if (cells.size() != 6) malformed(line_no, "expected 6 columns");
    if (to_int(cells[0], line_no, "action") != static_cast<std::int64_t>(target.size())) {
      malformed(line_no, "actions must be listed in order");
    }
    target.push_back(to_double(cells[2], line_no, "target"));
    behavior.push_back(to_double(cells[3], line_no, "behavior"));
    mean.push_back(to_double(cells[4], line_no, "mean_reward"));
    r_max = to_double(cells[5], line_no, "r_max");
  }
  return BanditInstance::create(Policy::validate(std::move(target)),
                                Policy::validate(std::move(behavior)), std::move(mean), r_max);
}

DatasetGenerator resampled_data(const RatingsData& data, std::size_t n) {
  if (n == 0) throw OpeError(ErrorCode::kInvalidArgument, "sample size must be >= 1");
  if (data.pool.empty()) throw OpeError(ErrorCode::kInvalidArgument, "empty rating pool");
  return [&data, n](const SeedSpec& seed) {
    TrialRng rng(seed);
    const std::size_t size = data.pool.size();
    Dataset out;
    out.n = n;
    out.k = data.instance.k();
    out.mode = SamplingMode::kMultinomial;
    out.pairs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto idx = std::min(size - 1, static_cast<std::size_t>(rng.uniform() *
                                                                   static_cast<double>(size)));
      out.pairs.push_back(data.pool[idx]);
    }
    return out;
  };
}

}  // namespace ope
