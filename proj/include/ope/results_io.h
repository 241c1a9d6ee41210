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
#include <optional>
#include <string>
#include <vector>

#include "ope/analysis.h"
#include "ope/config.h"
#include "ope/monte_carlo.h"

namespace ope {

inline constexpr const char* kResultsHeader = "k,n,s,estimator,mse,std_error,trials,seed";

/// One output line. Absent optionals print as empty cells. Slope fits are
/// stored as estimator "slope:<name>" with mse = slope and std_error = its
/// standard error.
struct ResultRow {
  std::optional<std::size_t> k;
  std::optional<std::size_t> n;
  std::optional<std::size_t> s;
  std::string estimator;
  double mse = 0.0;
  std::optional<double> std_error;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;

  static ResultRow from_report(const MseReport& report, std::optional<std::size_t> s = {});
  static ResultRow from_slope(const std::string& estimator, const SlopeFit& fit);

  /// Inverse of from_report. Throws InvalidArgument when a required cell is empty.
  MseReport to_report() const;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

/// %.17g, which round-trips every finite double.
std::string format_double(double x);

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows);
void write_results_csv(const std::string& path, const std::vector<ResultRow>& rows);

/// Throws MalformedCsv on a bad header or cell.
std::vector<ResultRow> read_results_csv(std::istream& in);
std::vector<ResultRow> read_results_csv(const std::string& path);

/// JSON sidecar with the config hash, canonical config text and library
/// version. Written next to the CSV as <csv>.meta.json.
std::string metadata_path_for(const std::string& csv_path);
void write_metadata(const std::string& path, const ExperimentConfig& config,
                    std::size_t row_count);

const char* library_version();

}  // namespace ope
