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

// Command-line entry point: simulation, estimation, subset solving,
// experiment drivers and ratings ingestion.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ope/analysis.h"
#include "ope/bandit.h"
#include "ope/chebyshev.h"
#include "ope/config.h"
#include "ope/estimators.h"
#include "ope/experiments.h"
#include "ope/monte_carlo.h"
#include "ope/ratings.h"
#include "ope/results_io.h"
#include "ope/sampler.h"
#include "ope/subset_solver.h"

namespace {

using ope::ErrorCode;
using ope::OpeError;

std::vector<double> parse_weights(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0) throw OpeError(ErrorCode::kInvalidArgument, "bad weight '" + item + "'");
    out.push_back(v);
  }
  return out;
}

ope::BanditInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw OpeError(ErrorCode::kIo, "cannot open " + path);
  return ope::read_instance_csv(in);
}

void write_dataset(std::ostream& out, const ope::Dataset& data) {
  out << "action,reward\n";
  for (const auto& obs : data.pairs) out << obs.action << ',' << ope::format_double(obs.reward) << '\n';
}

ope::Dataset read_dataset(const std::string& path, std::size_t k, ope::SamplingMode mode,
                          std::size_t n) {
  std::ifstream in(path);
  if (!in) throw OpeError(ErrorCode::kIo, "cannot open " + path);
  std::string line;
  std::getline(in, line);
  ope::Dataset data;
  data.k = k;
  data.mode = mode;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto comma = line.find(',');
    try {
      if (comma == std::string::npos) throw std::invalid_argument("missing comma");
      const unsigned long action = std::stoul(line.substr(0, comma));
      const double reward = std::stod(line.substr(comma + 1));
      data.pairs.push_back({static_cast<std::uint32_t>(action), reward});
    } catch (const std::exception&) {
      throw OpeError(ErrorCode::kMalformedCsv, "line " + std::to_string(line_no) + " of " + path);
    }
  }
  data.n = n > 0 ? n : data.pairs.size();
  return data;
}

ope::SamplingMode parse_mode(const std::string& mode) {
  if (mode == "multinomial") return ope::SamplingMode::kMultinomial;
  if (mode == "poisson") return ope::SamplingMode::kPoisson;
  throw OpeError(ErrorCode::kInvalidArgument, "mode must be multinomial or poisson");
}

std::string describe_subset(const ope::ActionSubset& s) {
  std::string out = "{";
  const auto actions = s.actions();
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (i > 0) out += ",";
    out += std::to_string(actions[i]);
  }
  return out + "}";
}

}  // namespace

int main(int argc, char** argv) {
  static const std::vector<std::string> kSubcommands{"simulate", "estimate", "solve-subset",
                                                      "experiment", "ingest-ratings"};
  if (argc > 1 && argv[1][0] != '-') {
    const std::string name = argv[1];
    if (std::find(kSubcommands.begin(), kSubcommands.end(), name) == kSubcommands.end()) {
      const OpeError err(ErrorCode::kUnknownSubcommand, "'" + name + "'");
      std::fprintf(stderr, "error: %s\n", err.what());
      return 2;
    }
  }

  CLI::App app{"Off-policy evaluation estimators and experiment drivers"};
  app.set_version_flag("--version", ope::library_version());
  app.require_subcommand(1);

  // simulate
  std::string instance_path;
  std::size_t n = 0;
  std::uint64_t seed = 1;
  std::string mode = "multinomial";
  std::string out_path;
  auto* simulate = app.add_subcommand("simulate", "Draw one logged dataset from an instance");
  simulate->add_option("--instance", instance_path, "Instance CSV")->required();
  simulate->add_option("--n", n, "Sample size (Poisson rate in poisson mode)")->required();
  simulate->add_option("--seed", seed, "Base seed");
  simulate->add_option("--mode", mode, "multinomial or poisson");
  simulate->add_option("--out", out_path, "Output CSV (stdout if omitted)");

  // estimate
  std::string data_path;
  std::string estimator = "plugin";
  std::string subset_text;
  auto* estimate = app.add_subcommand("estimate", "Evaluate an estimator on a logged dataset");
  estimate->add_option("--instance", instance_path, "Instance CSV with both policies")->required();
  estimate->add_option("--data", data_path, "Dataset CSV (action,reward)")->required();
  estimate->add_option("--estimator", estimator, "plugin|is|switch|truncated-is|chebyshev");
  estimate->add_option("--subset", subset_text, "Actions in S (default: the optimal subset)");
  estimate->add_option("--mode", mode, "multinomial or poisson");
  estimate->add_option("--n", n, "Sample size / rate (default: number of rows)");

  // solve-subset
  std::string target_text;
  std::string behavior_text;
  auto* solve = app.add_subcommand("solve-subset", "Solve for the optimal switch subset");
  solve->add_option("--target", target_text, "Comma-separated target policy")->required();
  solve->add_option("--behavior", behavior_text, "Comma-separated behavior policy")->required();
  solve->add_option("--n", n, "Sample size")->required();

  // experiment
  std::string experiment_name;
  std::string config_path;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::size_t> trials_override;
  std::string k_text;
  auto* experiment = app.add_subcommand("experiment", "Run an experiment driver");
  experiment->add_option("name", experiment_name,
                         "switch-scaling|competitive-ratio|chebyshev-scaling|custom")
      ->required();
  experiment->add_option("--config", config_path, "key = value config file");
  experiment->add_option("--seed", seed_override, "Base seed");
  experiment->add_option("--trials", trials_override, "Trials per grid point");
  experiment->add_option("--k", k_text, "Comma-separated k values");
  experiment->add_option("--out", out_path, "Output CSV (stdout if omitted)");

  // ingest-ratings
  ope::RatingsInstanceSpec ratings;
  auto* ingest = app.add_subcommand("ingest-ratings", "Build an instance from a ratings CSV");
  ingest->add_option("--ratings", ratings.ratings_path, "Ratings CSV")->required();
  ingest->add_option("--movie-count", ratings.movie_count, "Movies to sample");
  ingest->add_option("--min-ratings", ratings.min_ratings, "Minimum ratings per movie");
  ingest->add_option("--scale", ratings.rating_scale_max, "Maximum rating");
  ingest->add_option("--seed", ratings.subsample_seed, "Movie subsampling seed");
  ingest->add_option("--out", out_path, "Instance CSV (stdout if omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    std::ofstream file;
    auto output = [&]() -> std::ostream& {
      if (out_path.empty()) return std::cout;
      file.open(out_path, std::ios::binary);
      if (!file) throw OpeError(ErrorCode::kIo, "cannot write " + out_path);
      return file;
    };

    if (simulate->parsed()) {
      const ope::BanditInstance instance = load_instance(instance_path);
      const ope::SeedSpec spec{seed, 0};
      const ope::Dataset data = parse_mode(mode) == ope::SamplingMode::kPoisson
                                    ? ope::draw_poisson_dataset(instance, n, spec)
                                    : ope::draw_multinomial_dataset(instance, n, spec);
      write_dataset(output(), data);
    } else if (estimate->parsed()) {
      const ope::BanditInstance instance = load_instance(instance_path);
      const ope::Dataset data = read_dataset(data_path, instance.k(), parse_mode(mode), n);
      ope::validate_dataset(data, instance.r_max());
      const ope::Policy& target = instance.target();
      const ope::Policy& behavior = instance.behavior();
      ope::EstimatorSpec spec;
      switch (ope::parse_estimator_kind(estimator)) {
        case ope::EstimatorKind::kPlugIn: spec = ope::EstimatorSpec::plug_in(); break;
        case ope::EstimatorKind::kImportanceSampling:
          spec = ope::EstimatorSpec::importance_sampling();
          break;
        case ope::EstimatorKind::kSwitch:
        case ope::EstimatorKind::kTruncatedIs: {
          ope::ActionSubset s;
          if (subset_text.empty()) {
            s = ope::solve_optimal_subset(target, behavior, data.n).s_star;
          } else {
            std::vector<std::size_t> actions;
            for (double a : parse_weights(subset_text)) actions.push_back(static_cast<std::size_t>(a));
            s = ope::ActionSubset::of(instance.k(), actions);
          }
          spec = estimator == "switch" ? ope::EstimatorSpec::switch_at(s)
                                       : ope::EstimatorSpec::truncated_is(s);
          break;
        }
        case ope::EstimatorKind::kChebyshev: {
          double nu = 1.0;
          for (double p : behavior.weights()) nu = std::min(nu, p);
          const auto config = ope::ChebyshevConfig::from_constants(nu, instance.k(), data.n);
          spec = ope::EstimatorSpec::chebyshev(ope::chebyshev_weights_or_plug_in(config));
          if (data.mode == ope::SamplingMode::kMultinomial) {
            std::fprintf(stderr, "warning: chebyshev weights assume Poisson counts\n");
          }
          break;
        }
        case ope::EstimatorKind::kZero: spec = ope::EstimatorSpec::zero(); break;
      }
      std::printf("%s\n", ope::format_double(spec.evaluate(data, target, behavior)).c_str());
    } else if (solve->parsed()) {
      const ope::Policy target = ope::Policy::validate(parse_weights(target_text));
      const ope::Policy behavior = ope::Policy::validate(parse_weights(behavior_text));
      const ope::SwitchSolution sol = ope::solve_optimal_subset(target, behavior, n);
      std::printf("S* = %s\n", describe_subset(sol.s_star).c_str());
      std::printf("c = %s\n", ope::format_double(sol.c).c_str());
      std::printf("dual_value = %s\n", ope::format_double(sol.dual_value).c_str());
      std::printf("epsilon = %s\n", ope::format_double(sol.epsilon).c_str());
      std::printf("T1 = %s\nT2 = %s\n", ope::format_double(sol.t1).c_str(),
                  ope::format_double(sol.t2).c_str());
    } else if (experiment->parsed()) {
      ope::ExperimentConfig config =
          config_path.empty() ? ope::ExperimentConfig{} : ope::load_config(config_path);
      config.experiment = ope::parse_experiment_kind(experiment_name);
      if (seed_override) config.base_seed = *seed_override;
      if (trials_override) config.trials = *trials_override;
      if (!k_text.empty()) config.k_values = ope::parse_size_list(k_text);
      if (!out_path.empty()) config.output_path = out_path;
      const auto rows = ope::run_experiment(config);
      if (config.output_path.empty()) {
        ope::write_results_csv(std::cout, rows);
      } else {
        ope::write_results_csv(config.output_path, rows);
        ope::write_metadata(ope::metadata_path_for(config.output_path), config, rows.size());
      }
    } else if (ingest->parsed()) {
      const ope::RatingsData data = ope::ingest_ratings(ratings);
      ope::write_instance_csv(output(), data.instance, data.movie_ids);
    }
  } catch (const OpeError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
