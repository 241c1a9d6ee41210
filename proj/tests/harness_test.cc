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

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <unistd.h>

#include <gtest/gtest.h>

#include "ope/config.h"
#include "ope/experiments.h"
#include "ope/ratings.h"
#include "ope/results_io.h"
#include "test_util.h"

namespace ope {
namespace {

namespace fs = std::filesystem;
using ::ope::testing::error_code_of;

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("ope_harness_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(ConfigTest, ParsesAllKeys) {
  const ExperimentConfig c = parse_config(
      "# comment line\n"
      "experiment = competitive-ratio\n"
      "k_values = 100, 400\n"
      "trials = 500   # trailing comment\n"
      "base_seed = 42\n"
      "r_max = 2.0\n"
      "chebyshev.c0 = 0.5\n"
      "s_stride = 10\n"
      "denominator_trials = 1000\n"
      "\n");
  EXPECT_EQ(c.experiment, ExperimentKind::kCompetitiveRatio);
  EXPECT_EQ(c.k_values, (std::vector<std::size_t>{100, 400}));
  EXPECT_EQ(c.trials, 500u);
  EXPECT_EQ(c.base_seed, 42u);
  EXPECT_EQ(c.r_max, 2.0);
  EXPECT_EQ(c.chebyshev_c0, 0.5);
  EXPECT_FALSE(c.chebyshev_c1.has_value());
  EXPECT_EQ(c.s_stride, 10u);
  EXPECT_EQ(c.effective_denominator_trials(), 1000u);
}

TEST(ConfigTest, DefaultDenominatorTrials) {
  ExperimentConfig c;
  c.trials = 300;
  EXPECT_EQ(c.effective_denominator_trials(), 3000u);
}

TEST(ConfigTest, ErrorsNameTheLine) {
  const auto message_of = [](const std::string& text) -> std::string {
    try {
      parse_config(text);
    } catch (const OpeError& e) {
      EXPECT_EQ(e.code(), ErrorCode::kConfigParse);
      return e.what();
    }
    ADD_FAILURE() << "no error for: " << text;
    return "";
  };
  EXPECT_NE(message_of("trials = 100\nbogus = 1\n").find("line 2"), std::string::npos);
  EXPECT_NE(message_of("trials = abc\n").find("line 1"), std::string::npos);
  EXPECT_NE(message_of("trials = 100\n\ntrials = 200\n").find("line 3"), std::string::npos);
  EXPECT_NE(message_of("no equals sign\n").find("line 1"), std::string::npos);
  EXPECT_NE(message_of("experiment = nope\n").find("line 1"), std::string::npos);
}

TEST(ConfigTest, Validation) {
  ExperimentConfig c;
  c.trials = 50;
  EXPECT_EQ(error_code_of([&] { c.validate(); }), ErrorCode::kInvalidArgument);
  c.trials = 100;
  c.k_values = {400, 100};
  EXPECT_EQ(error_code_of([&] { c.validate(); }), ErrorCode::kInvalidArgument);
  c.k_values = {100, 400};
  EXPECT_NO_THROW(c.validate());
}

TEST(ConfigTest, CanonicalTextRoundTrip) {
  ExperimentConfig c;
  c.experiment = ExperimentKind::kCustom;
  c.k_values = {9, 25};
  c.trials = 1234;
  c.base_seed = 77;
  c.r_max = 0.1;
  c.chebyshev_c1 = 3.5;
  c.ratings_path = "/data/ratings.csv";
  c.n_values = {100, 200};
  const std::string text = to_config_text(c);
  const ExperimentConfig back = parse_config(text);
  EXPECT_EQ(to_config_text(back), text);
  EXPECT_EQ(config_hash(back), config_hash(c));
  c.base_seed = 78;
  EXPECT_NE(config_hash(back), config_hash(c));
}

TEST(ConfigTest, ExperimentNames) {
  for (ExperimentKind kind : {ExperimentKind::kSwitchScaling, ExperimentKind::kCompetitiveRatio,
                              ExperimentKind::kChebyshevScaling, ExperimentKind::kCustom}) {
    EXPECT_EQ(parse_experiment_kind(experiment_kind_name(kind)), kind);
  }
  EXPECT_EQ(parse_experiment_kind("ratings"), ExperimentKind::kCustom);
}

TEST(ResultsIoTest, CsvRoundTripPreservesReports) {
  MseReport report;
  report.mean_squared_error = 0.1 + 0.2;
  report.std_error = 1.0 / 3.0;
  report.trials = 10000;
  report.estimator_name = "switch";
  report.n = 150;
  report.k = 100;
  report.seed = 18446744073709551615ULL;
  std::vector<ResultRow> rows{ResultRow::from_report(report),
                              ResultRow::from_report(report, std::size_t{5})};
  SlopeFit fit;
  fit.slope = -0.75;
  fit.std_error = 0.01;
  rows.push_back(ResultRow::from_slope("plugin", fit));

  std::stringstream ss;
  write_results_csv(ss, rows);
  EXPECT_EQ(ss.str().substr(0, ss.str().find('\n')), kResultsHeader);
  const auto back = read_results_csv(ss);
  ASSERT_EQ(back.size(), rows.size());
  EXPECT_EQ(back, rows);
  const MseReport r = back[0].to_report();
  EXPECT_EQ(r.mean_squared_error, report.mean_squared_error);
  EXPECT_EQ(r.std_error, report.std_error);
  EXPECT_EQ(r.seed, report.seed);
  EXPECT_EQ(back[2].estimator, "slope:plugin");
  EXPECT_FALSE(back[2].k.has_value());
}

TEST(ResultsIoTest, MalformedCsv) {
  std::stringstream bad_header("k,n,estimator\n1,2,x\n");
  EXPECT_EQ(error_code_of([&] { read_results_csv(bad_header); }), ErrorCode::kMalformedCsv);
  std::stringstream bad_cell(std::string(kResultsHeader) + "\n1,2,,plugin,notanumber,,,\n");
  EXPECT_EQ(error_code_of([&] { read_results_csv(bad_cell); }), ErrorCode::kMalformedCsv);
}

TEST(ResultsIoTest, MetadataSidecar) {
  TempDir dir;
  ExperimentConfig c;
  c.trials = 200;
  const std::string csv = dir.file("out.csv");
  EXPECT_EQ(metadata_path_for(csv), csv + ".meta.json");
  write_metadata(metadata_path_for(csv), c, 3);
  const std::string meta = read_file(metadata_path_for(csv));
  EXPECT_NE(meta.find("\"config_hash\""), std::string::npos);
  EXPECT_NE(meta.find(library_version()), std::string::npos);
  EXPECT_NE(meta.find("\"rows\": 3"), std::string::npos);
}

constexpr const char* kTinyRatings =
    "userId,movieId,rating,timestamp\n"
    "1,10,5.0,0\n"
    "2,10,5.0,0\n"
    "1,20,1.0,0\n"
    "2,20,1.0,0\n"
    "3,20,1.0,0\n"
    "4,30,3.0,0\n";

TEST(RatingsTest, HandExample) {
  TempDir dir;
  const std::string path = dir.file("ratings.csv");
  write_file(path, kTinyRatings);
  RatingsInstanceSpec spec;
  spec.ratings_path = path;
  spec.movie_count = 2;
  spec.min_ratings = 2;
  const RatingsData data = ingest_ratings(spec);
  EXPECT_EQ(data.movie_ids, (std::vector<std::int64_t>{10, 20}));
  EXPECT_DOUBLE_EQ(data.instance.mean_reward(0), 1.0);
  EXPECT_DOUBLE_EQ(data.instance.mean_reward(1), 0.2);
  EXPECT_DOUBLE_EQ(data.instance.behavior()[0], 0.4);
  EXPECT_DOUBLE_EQ(data.instance.behavior()[1], 0.6);
  EXPECT_DOUBLE_EQ(data.instance.target()[0], 0.5);
  EXPECT_EQ(data.pool.size(), 5u);
}

TEST(RatingsTest, HeaderColumnsFoundByName) {
  TempDir dir;
  const std::string path = dir.file("ratings.csv");
  write_file(path, "rating,movieId\n4.0,1\n2.0,1\n");
  RatingsInstanceSpec spec;
  spec.ratings_path = path;
  spec.movie_count = 1;
  spec.min_ratings = 1;
  EXPECT_DOUBLE_EQ(ingest_ratings(spec).instance.mean_reward(0), 0.6);
}

TEST(RatingsTest, Errors) {
  TempDir dir;
  const std::string path = dir.file("ratings.csv");
  write_file(path, kTinyRatings);
  RatingsInstanceSpec spec;
  spec.ratings_path = path;
  spec.movie_count = 3;
  spec.min_ratings = 2;
  EXPECT_EQ(error_code_of([&] { ingest_ratings(spec); }), ErrorCode::kInsufficientMovies);

  write_file(path, "userId,movieId,rating\n1,10,five\n");
  spec.movie_count = 1;
  spec.min_ratings = 1;
  EXPECT_EQ(error_code_of([&] { ingest_ratings(spec); }), ErrorCode::kMalformedCsv);
  write_file(path, "userId,item,score\n1,10,5\n");
  EXPECT_EQ(error_code_of([&] { ingest_ratings(spec); }), ErrorCode::kMalformedCsv);
}

TEST(RatingsTest, InstanceCsvRoundTrip) {
  const auto inst = BanditInstance::create(Policy::validate({0.1, 0.2, 0.7}),
                                           Policy::validate({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}),
                                           {0.123456789, 0.5, 1.0 / 7.0}, 1.0);
  std::stringstream ss;
  write_instance_csv(ss, inst, {5, 9, 11});
  const BanditInstance back = read_instance_csv(ss);
  ASSERT_EQ(back.k(), 3u);
  for (std::size_t a = 0; a < 3; ++a) {
    EXPECT_EQ(back.target()[a], inst.target()[a]);
    EXPECT_EQ(back.behavior()[a], inst.behavior()[a]);
    EXPECT_EQ(back.mean_reward(a), inst.mean_reward(a));
  }
}

TEST(RatingsTest, ResampledDataIsDeterministic) {
  TempDir dir;
  const std::string path = dir.file("ratings.csv");
  write_file(path, kTinyRatings);
  RatingsInstanceSpec spec;
  spec.ratings_path = path;
  spec.movie_count = 2;
  spec.min_ratings = 2;
  const RatingsData data = ingest_ratings(spec);
  const DatasetGenerator gen = resampled_data(data, 8);
  const Dataset a = gen({3, 4});
  const Dataset b = gen({3, 4});
  ASSERT_EQ(a.pairs.size(), 8u);
  for (std::size_t i = 0; i < 8; ++i) {
    EXPECT_EQ(a.pairs[i].action, b.pairs[i].action);
    EXPECT_EQ(a.pairs[i].reward, b.pairs[i].reward);
  }
}

TEST(ExperimentsTest, InstancesMatchTheirDefinitions) {
  const BanditInstance sw = switch_scaling_instance(16, 1.0);
  EXPECT_EQ(sw.k(), 16u);
  EXPECT_EQ(error_code_of([] { switch_scaling_instance(15, 1.0); }), ErrorCode::kNonSquareK);

  const BanditInstance cr = competitive_ratio_instance(100, 200, 5, 1.0);
  EXPECT_NEAR(cr.behavior()[0], 1.0 / (200.0 * std::log(100.0)), 1e-15);
  EXPECT_DOUBLE_EQ(cr.target()[4], 0.2);
  EXPECT_EQ(cr.target()[5], 0.0);

  const BanditInstance ch = chebyshev_scaling_instance(100, 1.0);
  EXPECT_NEAR(ch.behavior()[1], 1e-3, 1e-15);
  EXPECT_EQ(ch.mean_reward(3), 0.5);

  EXPECT_EQ(support_sizes(12, 5), (std::vector<std::size_t>{1, 5, 10, 12}));
  EXPECT_EQ(support_sizes(10, 5), (std::vector<std::size_t>{1, 5, 10}));
}

TEST(ExperimentsTest, SwitchScalingShapeAndDeterminism) {
  ExperimentConfig c;
  c.experiment = ExperimentKind::kSwitchScaling;
  c.k_values = {16, 64};
  c.trials = 100;
  const auto rows = run_experiment(c);
  std::size_t slopes = 0;
  for (const auto& row : rows) {
    if (row.estimator.rfind("slope:", 0) == 0) {
      ++slopes;
    } else {
      ASSERT_TRUE(row.n.has_value());
      EXPECT_EQ(*row.n, static_cast<std::size_t>(std::llround(1.5 * static_cast<double>(*row.k))));
      EXPECT_EQ(row.trials, 100u);
    }
  }
  EXPECT_EQ(slopes, 3u);
  EXPECT_EQ(rows.size(), 9u);
  EXPECT_EQ(run_experiment(c), rows);
}

TEST(ExperimentsTest, CompetitiveRatioRows) {
  ExperimentConfig c;
  c.experiment = ExperimentKind::kCompetitiveRatio;
  c.k_values = {20};
  c.trials = 100;
  c.denominator_trials = 200;
  c.s_stride = 10;
  const auto rows = run_experiment(c);
  ASSERT_EQ(rows.size(), 9u);  // s in {1, 10, 20}, three rows each
  for (std::size_t i = 0; i < rows.size(); i += 3) {
    EXPECT_EQ(rows[i].estimator, "plugin");
    EXPECT_EQ(rows[i + 1].estimator, "switch_surrogate");
    EXPECT_EQ(rows[i + 2].estimator, "competitive_ratio");
    EXPECT_DOUBLE_EQ(rows[i + 2].mse, rows[i].mse / rows[i + 1].mse);
    EXPECT_EQ(rows[i + 1].trials, 200u);
  }
}

TEST(ExperimentsTest, ChebyshevScalingRows) {
  ExperimentConfig c;
  c.experiment = ExperimentKind::kChebyshevScaling;
  c.k_values = {16, 36};
  c.trials = 100;
  const auto rows = run_experiment(c);
  ASSERT_FALSE(rows.empty());
  EXPECT_EQ(rows.front().n, 64u);
}

TEST(ExperimentsTest, RatingsRequiresPath) {
  ExperimentConfig c;
  c.experiment = ExperimentKind::kCustom;
  c.trials = 100;
  EXPECT_THROW(run_experiment(c), OpeError);
}

// CLI smoke tests; the binary path comes from the test environment.
std::string cli_path() {
  const char* p = std::getenv("OPE_CLI");
  return p == nullptr ? "" : p;
}

int run_cli(const std::string& args, std::string* stdout_text) {
  static int calls = 0;
  const std::string name =
      "ope_cli_output_" + std::to_string(::getpid()) + "_" + std::to_string(++calls) + ".txt";
  const std::string out = (fs::temp_directory_path() / name).string();
  const std::string cmd = cli_path() + " " + args + " > " + out + " 2>&1";
  const int status = std::system(cmd.c_str());
  if (stdout_text != nullptr) *stdout_text = read_file(out);
  fs::remove(out);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(CliTest, SolveSubset) {
  if (cli_path().empty()) GTEST_SKIP() << "OPE_CLI not set";
  std::string out;
  EXPECT_EQ(run_cli("solve-subset --target 0.5,0.5 --behavior 1,0 --n 100", &out), 0);
  EXPECT_NE(out.find("S* = {1}"), std::string::npos) << out;
}

TEST(CliTest, UnknownSubcommand) {
  if (cli_path().empty()) GTEST_SKIP() << "OPE_CLI not set";
  std::string out;
  EXPECT_EQ(run_cli("frobnicate", &out), 2);
  EXPECT_NE(out.find("UnknownSubcommand"), std::string::npos) << out;
}

TEST(CliTest, SimulateThenEstimate) {
  if (cli_path().empty()) GTEST_SKIP() << "OPE_CLI not set";
  TempDir dir;
  const std::string instance = dir.file("instance.csv");
  const auto inst = BanditInstance::create(Policy::validate({0.5, 0.5}),
                                           Policy::validate({0.8, 0.2}), {0.3, 0.9}, 1.0);
  {
    std::ofstream f(instance);
    write_instance_csv(f, inst, {1, 2});
  }
  const std::string data = dir.file("data.csv");
  EXPECT_EQ(run_cli("simulate --instance " + instance + " --n 50 --seed 3 --out " + data, nullptr),
            0);
  for (const char* est : {"plugin", "is", "switch", "truncated-is", "zero"}) {
    std::string out;
    EXPECT_EQ(run_cli(std::string("estimate --instance ") + instance + " --data " + data +
                          " --estimator " + est,
                      &out),
              0)
        << est << ": " << out;
    EXPECT_NO_THROW(std::stod(out)) << out;
  }
}

TEST(CliTest, ExperimentWritesCsvAndSidecar) {
  if (cli_path().empty()) GTEST_SKIP() << "OPE_CLI not set";
  TempDir dir;
  const std::string csv = dir.file("results.csv");
  EXPECT_EQ(run_cli("experiment switch-scaling --k 16,64 --trials 100 --out " + csv, nullptr), 0);
  EXPECT_EQ(read_results_csv(csv).size(), 9u);
  EXPECT_TRUE(fs::exists(metadata_path_for(csv)));
}

TEST(CliTest, BadConfigExitsNonZero) {
  if (cli_path().empty()) GTEST_SKIP() << "OPE_CLI not set";
  TempDir dir;
  const std::string cfg = dir.file("bad.conf");
  write_file(cfg, "trials = many\n");
  std::string out;
  EXPECT_EQ(run_cli("experiment switch-scaling --config " + cfg, &out), 1);
  EXPECT_NE(out.find("line 1"), std::string::npos) << out;
}

}  // namespace
}  // namespace ope
