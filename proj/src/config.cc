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

#include "ope/config.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "ope/error.h"

namespace ope {

std::string_view experiment_kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kSwitchScaling: return "switch-scaling";
    case ExperimentKind::kCompetitiveRatio: return "competitive-ratio";
    case ExperimentKind::kChebyshevScaling: return "chebyshev-scaling";
    case ExperimentKind::kCustom: return "custom";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(std::string_view name) {
  for (ExperimentKind kind : {ExperimentKind::kSwitchScaling, ExperimentKind::kCompetitiveRatio,
                              ExperimentKind::kChebyshevScaling, ExperimentKind::kCustom}) {
    if (experiment_kind_name(kind) == name) return kind;
  }
  if (name == "ratings") return ExperimentKind::kCustom;
  throw OpeError(ErrorCode::kInvalidArgument, "unknown experiment '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  if (trials < 100) throw OpeError(ErrorCode::kInvalidArgument, "trials must be >= 100");
  for (std::size_t i = 1; i < k_values.size(); ++i) {
    if (k_values[i] <= k_values[i - 1]) {
      throw OpeError(ErrorCode::kInvalidArgument, "k_values must be strictly increasing");
    }
  }
  if (!(r_max > 0.0)) throw OpeError(ErrorCode::kInvalidArgument, "r_max must be positive");
  if (s_stride == 0) throw OpeError(ErrorCode::kInvalidArgument, "s_stride must be >= 1");
  if (movie_count == 0 || min_ratings == 0) {
    throw OpeError(ErrorCode::kInvalidArgument, "movie_count and min_ratings must be >= 1");
  }
  if (!(rating_scale_max > 0.0)) {
    throw OpeError(ErrorCode::kInvalidArgument, "rating_scale_max must be positive");
  }
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
  text = trim(text);
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string join(const std::vector<std::size_t>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

using Setter = std::function<void(ExperimentConfig&, std::string_view)>;

void fail_value(std::string_view key, std::string_view value) {
  throw std::invalid_argument("bad value '" + std::string(value) + "' for " + std::string(key));
}

template <typename T>
Setter number_setter(T ExperimentConfig::*field, const char* key) {
  return [field, key](ExperimentConfig& c, std::string_view v) {
    T parsed{};
    if (!parse_number(v, parsed)) fail_value(key, v);
    c.*field = parsed;
  };
}

Setter optional_double_setter(std::optional<double> ExperimentConfig::*field, const char* key) {
  return [field, key](ExperimentConfig& c, std::string_view v) {
    double parsed = 0.0;
    if (!parse_number(v, parsed)) fail_value(key, v);
    c.*field = parsed;
  };
}

const std::map<std::string, Setter, std::less<>>& setters() {
  static const auto* table = new std::map<std::string, Setter, std::less<>>{
      {"experiment",
       [](ExperimentConfig& c, std::string_view v) { c.experiment = parse_experiment_kind(v); }},
      {"k_values",
       [](ExperimentConfig& c, std::string_view v) { c.k_values = parse_size_list(v); }},
      {"trials", number_setter(&ExperimentConfig::trials, "trials")},
      {"base_seed", number_setter(&ExperimentConfig::base_seed, "base_seed")},
      {"r_max", number_setter(&ExperimentConfig::r_max, "r_max")},
      {"output_path",
       [](ExperimentConfig& c, std::string_view v) { c.output_path = std::string(v); }},
      {"chebyshev.c0", optional_double_setter(&ExperimentConfig::chebyshev_c0, "chebyshev.c0")},
      {"chebyshev.c1", optional_double_setter(&ExperimentConfig::chebyshev_c1, "chebyshev.c1")},
      {"s_stride", number_setter(&ExperimentConfig::s_stride, "s_stride")},
      {"denominator_trials",
       number_setter(&ExperimentConfig::denominator_trials, "denominator_trials")},
      {"ratings_path",
       [](ExperimentConfig& c, std::string_view v) { c.ratings_path = std::string(v); }},
      {"movie_count", number_setter(&ExperimentConfig::movie_count, "movie_count")},
      {"min_ratings", number_setter(&ExperimentConfig::min_ratings, "min_ratings")},
      {"rating_scale_max",
       number_setter(&ExperimentConfig::rating_scale_max, "rating_scale_max")},
      {"subsample_seed", number_setter(&ExperimentConfig::subsample_seed, "subsample_seed")},
      {"n_values",
       [](ExperimentConfig& c, std::string_view v) { c.n_values = parse_size_list(v); }},
  };
  return *table;
}

}  // namespace

std::vector<std::size_t> parse_size_list(std::string_view text) {
  std::vector<std::size_t> out;
  text = trim(text);
  if (text.empty()) return out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = text.substr(start, comma == std::string_view::npos ? text.npos
                                                                           : comma - start);
    std::size_t value = 0;
    if (!parse_number(item, value)) {
      throw std::invalid_argument("bad list entry '" + std::string(trim(item)) + "'");
    }
    out.push_back(value);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig config;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    ++line_no;
    const auto end = text.find('\n', pos);
    std::string_view line = text.substr(pos, end == text.npos ? text.npos : end - pos);
    pos = end == text.npos ? text.size() : end + 1;

    if (const auto hash = line.find('#'); hash != line.npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const std::string where = "line " + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == line.npos) {
      throw OpeError(ErrorCode::kConfigParse, where + "expected key = value");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) {
      throw OpeError(ErrorCode::kConfigParse, where + "unknown key '" + std::string(key) + "'");
    }
    if (!seen.insert(std::string(key)).second) {
      throw OpeError(ErrorCode::kConfigParse, where + "duplicate key '" + std::string(key) + "'");
    }
    try {
      it->second(config, value);
    } catch (const std::exception& e) {
      throw OpeError(ErrorCode::kConfigParse, where + e.what());
    }
  }
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw OpeError(ErrorCode::kIo, "cannot open config " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string to_config_text(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "experiment = " << experiment_kind_name(c.experiment) << '\n';
  out << "k_values = " << join(c.k_values) << '\n';
  out << "trials = " << c.trials << '\n';
  out << "base_seed = " << c.base_seed << '\n';
  out << "r_max = " << format_double(c.r_max) << '\n';
  out << "output_path = " << c.output_path << '\n';
  if (c.chebyshev_c0) out << "chebyshev.c0 = " << format_double(*c.chebyshev_c0) << '\n';
  if (c.chebyshev_c1) out << "chebyshev.c1 = " << format_double(*c.chebyshev_c1) << '\n';
  out << "s_stride = " << c.s_stride << '\n';
  out << "denominator_trials = " << c.denominator_trials << '\n';
  out << "ratings_path = " << c.ratings_path << '\n';
  out << "movie_count = " << c.movie_count << '\n';
  out << "min_ratings = " << c.min_ratings << '\n';
  out << "rating_scale_max = " << format_double(c.rating_scale_max) << '\n';
  out << "subsample_seed = " << c.subsample_seed << '\n';
  out << "n_values = " << join(c.n_values) << '\n';
  return out.str();
}

std::uint64_t config_hash(const ExperimentConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : to_config_text(config)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace ope
