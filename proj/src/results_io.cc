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

#include "ope/results_io.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"

#include "ope/error.h"

#ifndef OPE_VERSION
#define OPE_VERSION "0.0.0"
#endif

namespace ope {

const char* library_version() { return OPE_VERSION; }

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

ResultRow ResultRow::from_report(const MseReport& report, std::optional<std::size_t> s) {
  ResultRow row;
  row.k = report.k;
  row.n = report.n;
  row.s = s;
  row.estimator = report.estimator_name;
  row.mse = report.mean_squared_error;
  row.std_error = report.std_error;
  row.trials = report.trials;
  row.seed = report.seed;
  return row;
}

ResultRow ResultRow::from_slope(const std::string& estimator, const SlopeFit& fit) {
  ResultRow row;
  row.estimator = "slope:" + estimator;
  row.mse = fit.slope;
  if (!std::isnan(fit.std_error)) row.std_error = fit.std_error;
  return row;
}

MseReport ResultRow::to_report() const {
  if (!k || !n || !std_error || !trials || !seed) {
    throw OpeError(ErrorCode::kInvalidArgument, "row '" + estimator + "' is not an MSE record");
  }
  MseReport report;
  report.mean_squared_error = mse;
  report.std_error = *std_error;
  report.trials = *trials;
  report.estimator_name = estimator;
  report.n = *n;
  report.k = *k;
  report.seed = *seed;
  return report;
}

namespace {

template <typename T>
std::string cell(const std::optional<T>& v) {
  if (!v) return {};
  if constexpr (std::is_floating_point_v<T>) {
    return format_double(*v);
  } else {
    return std::to_string(*v);
  }
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(line.substr(start, comma == std::string::npos ? std::string::npos
                                                                  : comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

double parse_double_cell(const std::string& text, std::size_t line_no) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (text.empty() || end != begin + text.size()) {
    throw OpeError(ErrorCode::kMalformedCsv,
                   "line " + std::to_string(line_no) + ": bad number '" + text + "'");
  }
  return v;
}

template <typename T>
std::optional<T> parse_int_cell(const std::string& text, std::size_t line_no) {
  if (text.empty()) return std::nullopt;
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw OpeError(ErrorCode::kMalformedCsv,
                   "line " + std::to_string(line_no) + ": bad integer '" + text + "'");
  }
  return v;
}

}  // namespace

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kResultsHeader << '\n';
  for (const auto& r : rows) {
    out << cell(r.k) << ',' << cell(r.n) << ',' << cell(r.s) << ',' << r.estimator << ','
        << format_double(r.mse) << ',' << cell(r.std_error) << ',' << cell(r.trials) << ','
        << cell(r.seed) << '\n';
  }
}

void write_results_csv(const std::string& path, const std::vector<ResultRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw OpeError(ErrorCode::kIo, "cannot write " + path);
  write_results_csv(out, rows);
}

std::vector<ResultRow> read_results_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw OpeError(ErrorCode::kMalformedCsv, "empty results file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kResultsHeader) {
    throw OpeError(ErrorCode::kMalformedCsv, "unexpected header '" + line + "'");
  }
  std::vector<ResultRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 8) {
      throw OpeError(ErrorCode::kMalformedCsv,
                     "line " + std::to_string(line_no) + ": expected 8 cells");
    }
    ResultRow row;
    row.k = parse_int_cell<std::size_t>(cells[0], line_no);
    row.n = parse_int_cell<std::size_t>(cells[1], line_no);
    row.s = parse_int_cell<std::size_t>(cells[2], line_no);
    row.estimator = cells[3];
    row.mse = parse_double_cell(cells[4], line_no);
    if (!cells[5].empty()) row.std_error = parse_double_cell(cells[5], line_no);
    row.trials = parse_int_cell<std::size_t>(cells[6], line_no);
    row.seed = parse_int_cell<std::uint64_t>(cells[7], line_no);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ResultRow> read_results_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw OpeError(ErrorCode::kIo, "cannot open " + path);
  return read_results_csv(in);
}

std::string metadata_path_for(const std::string& csv_path) { return csv_path + ".meta.json"; }

void write_metadata(const std::string& path, const ExperimentConfig& config,
                    std::size_t row_count) {
  char hash[17];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(config_hash(config)));
  nlohmann::ordered_json meta;
  meta["library"] = "ope";
  meta["version"] = library_version();
  meta["experiment"] = std::string(experiment_kind_name(config.experiment));
  meta["config_hash"] = hash;
  meta["base_seed"] = config.base_seed;
  meta["trials"] = config.trials;
  meta["rows"] = row_count;
  meta["config"] = to_config_text(config);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw OpeError(ErrorCode::kIo, "cannot write " + path);
  out << meta.dump(2) << '\n';
}

}  // namespace ope
