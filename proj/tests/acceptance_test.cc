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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. Tolerances are fixed below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ope/analysis.h"
#include "ope/chebyshev.h"
#include "ope/config.h"
#include "ope/experiments.h"
#include "ope/monte_carlo.h"
#include "ope/ratings.h"
#include "ope/results_io.h"
#include "ope/subset_solver.h"
#include "oracles.h"

namespace {

using namespace ope;

// Criterion 1.
constexpr double kPlugInSlopeLo = -0.15, kPlugInSlopeHi = 0.15;
constexpr double kIsSlopeLo = -0.70, kIsSlopeHi = -0.30;
constexpr double kSwitchSlopeLo = -1.20, kSwitchSlopeHi = -0.80;
// Criterion 2.
constexpr double kChebyshevSlopeMax = -0.3;
constexpr double kChebyshevPlugInSlopeMin = -0.15;
// Criterion 3.
constexpr double kSpearmanMin = 0.9;
constexpr double kRatioPerSupportMax = 20.0;
constexpr double kRatioAtOneLo = 0.5, kRatioAtOneHi = 20.0;
// Criterion 4.
constexpr double kEnumerationTol = 1e-10;
constexpr double kMcSigmas = 4.0;
// Criterion 5.
constexpr double kKktTol = 1e-9;
constexpr double kDualTol = 1e-9;
constexpr double kBruteForceFactor = 10.0;
// Criterion 7.
constexpr double kBiasOracleTol = 1e-8;

constexpr std::size_t kTrials = 10000;

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("FAILED ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(const char* format, double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, x);
  return buf;
}

Policy random_policy(std::mt19937_64& rng, std::size_t k, double zero_prob = 0.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> w(k, 0.0);
  double total = 0.0;
  for (auto& x : w) {
    if (u(rng) >= zero_prob) x = u(rng) + 1e-3;
    total += x;
  }
  if (total == 0.0) {
    w[0] = 1.0;
    total = 1.0;
  }
  for (auto& x : w) x /= total;
  std::size_t last = k;
  for (std::size_t a = 0; a < k; ++a) {
    if (w[a] > 0.0) last = a;
  }
  double rest = 1.0;
  for (std::size_t a = 0; a < k; ++a) {
    if (a != last) rest -= w[a];
  }
  w[last] = rest;
  return Policy::validate(std::move(w));
}

std::vector<double> random_rewards(std::mt19937_64& rng, std::size_t k, double r_max) {
  std::uniform_real_distribution<double> u(0.0, r_max);
  std::vector<double> r(k);
  for (auto& x : r) x = u(rng);
  return r;
}

const ResultRow* find_row(const std::vector<ResultRow>& rows, const std::string& estimator,
                          std::optional<std::size_t> key_k = {},
                          std::optional<std::size_t> key_n = {},
                          std::optional<std::size_t> key_s = {}) {
  for (const auto& row : rows) {
    if (row.estimator != estimator) continue;
    if (key_k && row.k != key_k) continue;
    if (key_n && row.n != key_n) continue;
    if (key_s && row.s != key_s) continue;
    return &row;
  }
  return nullptr;
}

double slope_of(const std::vector<ResultRow>& rows, const std::string& name) {
  const ResultRow* row = find_row(rows, "slope:" + name);
  return row == nullptr ? std::nan("") : row->mse;
}

Outcome switch_scaling() {
  Outcome out;
  ExperimentConfig config;
  config.experiment = ExperimentKind::kSwitchScaling;
  config.k_values = {100, 400, 1600};
  config.trials = kTrials;
  const auto rows = run_experiment(config);
  const double plug = slope_of(rows, "plugin");
  const double is = slope_of(rows, "is");
  const double sw = slope_of(rows, "switch");
  out.note("slopes plugin " + fmt("%.3f", plug) + " is " + fmt("%.3f", is) + " switch " +
           fmt("%.3f", sw));
  out.check(plug >= kPlugInSlopeLo && plug <= kPlugInSlopeHi, "plugin slope range");
  out.check(is >= kIsSlopeLo && is <= kIsSlopeHi, "is slope range");
  out.check(sw >= kSwitchSlopeLo && sw <= kSwitchSlopeHi, "switch slope range");
  for (std::size_t k : config.k_values) {
    const ResultRow* p = find_row(rows, "plugin", k);
    const ResultRow* i = find_row(rows, "is", k);
    const ResultRow* s = find_row(rows, "switch", k);
    if (p == nullptr || i == nullptr || s == nullptr) {
      out.check(false, "missing rows at k=" + std::to_string(k));
      continue;
    }
    out.note("k=" + std::to_string(k) + " mse plugin " + fmt("%.5g", p->mse) + " is " +
             fmt("%.5g", i->mse) + " switch " + fmt("%.5g", s->mse));
    out.check(s->mse <= i->mse, "switch<=is at k=" + std::to_string(k));
    out.check(i->mse <= p->mse, "is<=plugin at k=" + std::to_string(k));
  }
  return out;
}

Outcome chebyshev_scaling() {
  Outcome out;
  ExperimentConfig config;
  config.experiment = ExperimentKind::kChebyshevScaling;
  config.k_values = {100, 250, 630};
  config.trials = kTrials;
  const auto rows = run_experiment(config);
  const double cheb = slope_of(rows, "chebyshev");
  const double plug = slope_of(rows, "plugin");
  out.note("slopes chebyshev " + fmt("%.3f", cheb) + " plugin " + fmt("%.3f", plug));
  out.check(cheb <= kChebyshevSlopeMax, "chebyshev slope");
  out.check(plug >= kChebyshevPlugInSlopeMin, "plugin slope");
  for (std::size_t k : config.k_values) {
    const ResultRow* c = find_row(rows, "chebyshev", k);
    const ResultRow* p = find_row(rows, "plugin", k);
    if (c == nullptr || p == nullptr) {
      out.check(false, "missing rows at k=" + std::to_string(k));
      continue;
    }
    out.check(c->mse < p->mse, "chebyshev<plugin at k=" + std::to_string(k));
  }
  return out;
}

Outcome competitive_ratio_trend() {
  Outcome out;
  ExperimentConfig config;
  config.experiment = ExperimentKind::kCompetitiveRatio;
  config.k_values = {100};
  config.trials = kTrials;
  const auto rows = run_experiment(config);
  std::vector<double> support;
  std::vector<double> ratio;
  double max_per_s = 0.0;
  for (const auto& row : rows) {
    if (row.estimator != "competitive_ratio" || !row.s) continue;
    if (row.n != std::size_t{200}) out.check(false, "unexpected n");
    support.push_back(static_cast<double>(*row.s));
    ratio.push_back(row.mse);
    max_per_s = std::max(max_per_s, row.mse / static_cast<double>(*row.s));
  }
  if (support.size() < 2) {
    out.check(false, "fewer than two support sizes");
    return out;
  }
  const double rho = spearman_correlation(support, ratio);
  const ResultRow* at_one = find_row(rows, "competitive_ratio", std::size_t{100}, {}, std::size_t{1});
  const double r1 = at_one == nullptr ? std::nan("") : at_one->mse;
  out.note("spearman " + fmt("%.3f", rho) + " max ratio/s " + fmt("%.3f", max_per_s) +
           " ratio(s=1) " + fmt("%.3f", r1) + " ratio(s=k) " + fmt("%.3f", ratio.back()));
  out.check(rho >= kSpearmanMin, "spearman");
  out.check(max_per_s <= kRatioPerSupportMax, "ratio/s bound");
  out.check(r1 >= kRatioAtOneLo && r1 <= kRatioAtOneHi, "ratio at s=1");
  return out;
}

Outcome exact_oracle() {
  Outcome out;
  std::mt19937_64 rng(20240401);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t k = 1 + i % 3;
    const std::size_t n = 1 + (i / 3) % 8;
    const double r_max = 0.5 + 2.0 * u(rng);
    const auto inst = BanditInstance::create(random_policy(rng, k), random_policy(rng, k, 0.2),
                                             random_rewards(rng, k, r_max), r_max);
    worst = std::max(worst, std::abs(plugin_mse_exact(inst, n) -
                                     ::ope::testing::enumerated_plugin_mse(inst, n)));
  }
  out.note("max enumeration error " + fmt("%.2e", worst));
  out.check(worst < kEnumerationTol, "enumeration");

  double worst_z = 0.0;
  int outside = 0;
  for (int i = 0; i < 20; ++i) {
    const std::size_t k = 2 + i % 8;
    const std::size_t n = 3 + (i * 7) % 40;
    const auto inst = BanditInstance::create(random_policy(rng, k, 0.1), random_policy(rng, k, 0.1),
                                             random_rewards(rng, k, 1.0), 1.0);
    const MseReport mc = monte_carlo_mse(EstimatorSpec::plug_in(), inst, n, 100000,
                                         static_cast<std::uint64_t>(1000 + i));
    const double z = std::abs(mc.mean_squared_error - plugin_mse_exact(inst, n)) / mc.std_error;
    worst_z = std::max(worst_z, z);
    if (!(z <= kMcSigmas)) ++outside;
  }
  out.note("max |z| " + fmt("%.2f", worst_z));
  out.check(outside == 0, std::to_string(outside) + " Monte Carlo estimates outside 4 SE");
  return out;
}

Outcome solver_correctness() {
  Outcome out;
  std::mt19937_64 rng(5150);
  double max_kkt = 0.0;
  double max_factor = 1.0;
  int dual_eps_failures = 0;
  int dual_sqrt_failures = 0;
  int interior = 0;
  int on_policy_failures = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t k = 1 + i % 12;
    const Policy target = random_policy(rng, k, 0.15);
    const Policy behavior = random_policy(rng, k, 0.1);
    const std::size_t n = 1 + (static_cast<std::size_t>(i) * 37) % 300;
    const SwitchSolution sol = solve_optimal_subset(target, behavior, n);
    const auto rho = likelihood_ratio(target, behavior);

    // Stationarity recomputed from v*: with Q = sum (target - v)^2 / behavior,
    // every kept action has (target - v) / behavior = sqrt(2nQ) and every
    // truncated one has rho <= sqrt(2nQ).
    double q = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
      if (behavior[a] > 0.0) q += std::pow(target[a] - sol.v_star[a], 2) / behavior[a];
    }
    const double c_kkt = std::sqrt(2.0 * static_cast<double>(n) * q);
    for (std::size_t a = 0; a < k; ++a) {
      if (sol.v_star[a] < 0.0 || sol.v_star[a] > target[a] * (1.0 + 1e-15)) {
        max_kkt = std::max(max_kkt, 1.0);
      }
      if (behavior[a] == 0.0 || c_kkt == 0.0) continue;
      const double resid = sol.v_star[a] > 0.0
                               ? std::abs((target[a] - sol.v_star[a]) / behavior[a] - c_kkt)
                               : std::max(0.0, rho[a] - c_kkt);
      max_kkt = std::max(max_kkt, resid / c_kkt);
    }

    const double two_n = 2.0 * static_cast<double>(n);
    const double half_mass = 0.5 * target.mass(sol.s_star.mask());
    const double root = std::sqrt(sol.t2 / (4.0 * two_n));
    const double scale = std::max(1e-300, std::abs(sol.dual_value));
    if (std::abs(sol.dual_value - (half_mass + root * sol.epsilon)) > kDualTol * scale) {
      ++dual_eps_failures;
    }
    if (std::abs(sol.dual_value - (half_mass + root * std::sqrt(sol.epsilon))) > kDualTol * scale) {
      ++dual_sqrt_failures;
    }
    if (sol.epsilon > 0.0 && sol.epsilon < 1.0) ++interior;

    const SubsetOptimum best = brute_force_subset(target, behavior, n);
    const double at_star = switch_subset_objective(target, behavior, n, sol.s_star);
    max_factor = std::max(max_factor, at_star / best.objective);

    if (!solve_optimal_subset(target, target, n).s_star.is_empty()) ++on_policy_failures;
  }
  out.note("max KKT residual " + fmt("%.2e", max_kkt));
  out.note("max objective factor vs brute force " + fmt("%.4f", max_factor));
  out.note("dual identity misses: linear-epsilon form " + std::to_string(dual_eps_failures) +
           "/1000, sqrt-epsilon form " + std::to_string(dual_sqrt_failures) + "/1000 (" +
           std::to_string(interior) + " with 0<eps<1)");
  out.check(max_kkt < kKktTol, "KKT residual");
  out.check(dual_eps_failures == 0, "dual-value identity");
  out.check(max_factor <= kBruteForceFactor, "brute-force factor");
  out.check(on_policy_failures == 0, "on-policy empty subset");
  return out;
}

Outcome upper_bound_containment() {
  Outcome out;
  std::mt19937_64 rng(777);
  std::bernoulli_distribution coin(0.5);
  int violations = 0;
  double worst_margin = -1e300;
  for (int i = 0; i < 100; ++i) {
    const std::size_t k = 2 + i % 8;
    const std::size_t n = 5 + (i * 3) % 40;
    const double r_max = i % 2 == 0 ? 1.0 : 2.0;
    const auto inst = BanditInstance::create(random_policy(rng, k), random_policy(rng, k),
                                             random_rewards(rng, k, r_max), r_max);
    ActionSubset s(k);
    for (std::size_t a = 0; a < k; ++a) {
      if (coin(rng)) s.insert(a);
    }
    const MseReport mc = monte_carlo_mse(EstimatorSpec::switch_at(s), inst, n, kTrials,
                                         static_cast<std::uint64_t>(9000 + i));
    const double bound = switch_mse_upper_bound(inst.target(), inst.behavior(), n, r_max, s);
    const double margin = mc.mean_squared_error - bound - kMcSigmas * mc.std_error;
    worst_margin = std::max(worst_margin, margin);
    if (margin > 0.0) ++violations;
  }
  out.note("max (mse - bound - 4se) " + fmt("%.4g", worst_margin));
  out.check(violations == 0, std::to_string(violations) + " pairs above the bound");
  return out;
}

Outcome chebyshev_machinery() {
  Outcome out;
  int g0_failures = 0;
  int configs = 0;
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  double worst_oracle = 0.0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t k = 1 + i % 3;
    const std::size_t n = 2 + i % 30;
    const Policy behavior = random_policy(rng, k);
    double nu = 1.0;
    for (double p : behavior.weights()) nu = std::min(nu, p);
    ChebyshevConfig c;
    c.nu = c.ell = 0.5 * nu;
    c.r = std::min(1.0, nu + 0.05 + 0.5 * u(rng));
    c.degree_L = 1 + i % 6;
    c.n = n;
    const ChebyshevWeights w = chebyshev_coefficients(c);
    ++configs;
    if (w.g(0) != 0.0) ++g0_failures;
    const auto inst = BanditInstance::create(random_policy(rng, k), behavior,
                                             random_rewards(rng, k, 1.0), 1.0);
    worst_oracle = std::max(worst_oracle, std::abs(chebyshev_bias_oracle(inst, w, n) -
                                                   ::ope::testing::enumerated_bias(inst, w, n)));
  }
  out.note("max oracle error " + fmt("%.2e", worst_oracle));
  out.check(worst_oracle <= kBiasOracleTol, "bias oracle vs enumeration");

  // Bias of a single arm with full target weight and r_f = r_max, over a
  // log-spaced grid of behavior probabilities from nu to 1.
  struct Setting {
    std::size_t k;
    double nu;
    double c0;
  };
  int bound_failures = 0;
  double worst_ratio = 0.0;
  for (const Setting& st : {Setting{100, 1e-3, 1.0}, Setting{630, 6.3e-5, 1.0},
                            Setting{1000, 1e-5, 0.2}, Setting{10000, 1e-6, 0.5}}) {
    const auto n = static_cast<std::size_t>(std::llround(std::pow(st.k, 1.5)));
    const ChebyshevConfig c = ChebyshevConfig::from_constants(st.nu, st.k, n, st.c0, kDefaultC1);
    if (c.falls_back_to_plug_in()) continue;
    const ChebyshevWeights w = chebyshev_coefficients(c);
    ++configs;
    if (w.g(0) != 0.0) ++g0_failures;
    const double r_max = 1.0;
    const double bound =
        4.0 * r_max * std::exp(-static_cast<double>(c.degree_L) * std::sqrt(c.ell / c.r));
    for (int i = 0; i < 50; ++i) {
      const double pb = st.nu * std::pow(1.0 / st.nu, i / 49.0);
      const double rest = std::max(0.0, 1.0 - pb);
      const auto inst = BanditInstance::create(Policy::validate({1.0, 0.0}),
                                               Policy::validate({1.0 - rest, rest}),
                                               {r_max, 0.0}, r_max);
      const double bias = std::abs(chebyshev_bias_oracle(inst, w, n));
      worst_ratio = std::max(worst_ratio, bias / bound);
      if (bias > bound) ++bound_failures;
    }
  }
  out.note("max |bias|/bound " + fmt("%.3g", worst_ratio));
  out.note("g(0)=0 on " + std::to_string(configs - g0_failures) + "/" + std::to_string(configs) +
           " configs");
  out.check(g0_failures == 0, "g(0) != 0");
  out.check(bound_failures == 0, std::to_string(bound_failures) + " grid points above the bound");
  return out;
}

// Synthetic ratings log: 500 qualifying movies with Zipf-like rating counts,
// plus a few sparse movies that the ingest threshold drops.
std::string write_synthetic_ratings(const std::filesystem::path& dir) {
  const std::string path = (dir / "ratings.csv").string();
  std::mt19937_64 rng(1995);
  std::uniform_real_distribution<double> mean_dist(1.5, 4.5);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<std::pair<int, double>> records;
  for (int m = 0; m < 520; ++m) {
    const int movie = 1 + m * 3;
    const std::size_t count =
        m < 500 ? 10 + static_cast<std::size_t>(3000.0 / std::pow(m + 1.0, 1.1)) : 3;
    const double mu = mean_dist(rng);
    for (std::size_t j = 0; j < count; ++j) {
      const double raw = std::round(2.0 * (mu + noise(rng))) / 2.0;
      records.emplace_back(movie, std::clamp(raw, 0.5, 5.0));
    }
  }
  std::shuffle(records.begin(), records.end(), rng);
  std::ofstream out(path);
  out << "userId,movieId,rating,timestamp\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    out << (i % 611) + 1 << ',' << records[i].first << ',' << records[i].second << ','
        << 964982703 + i << '\n';
  }
  return path;
}

Outcome ratings_substitute() {
  Outcome out;
  const auto dir = std::filesystem::temp_directory_path() / "ope_acceptance_ratings";
  std::filesystem::create_directories(dir);
  const std::string path = write_synthetic_ratings(dir);

  RatingsInstanceSpec spec;
  spec.ratings_path = path;
  spec.movie_count = 500;
  spec.min_ratings = 10;
  const RatingsData data = ingest_ratings(spec);
  out.check(data.instance.k() == 500, "500 movies selected");
  out.check(std::is_sorted(data.movie_ids.begin(), data.movie_ids.end()), "ascending movie ids");
  std::stringstream ss;
  write_instance_csv(ss, data.instance, data.movie_ids);
  const BanditInstance back = read_instance_csv(ss);
  bool same = back.k() == data.instance.k();
  for (std::size_t a = 0; same && a < back.k(); ++a) {
    same = back.target()[a] == data.instance.target()[a] &&
           back.behavior()[a] == data.instance.behavior()[a] &&
           back.mean_reward(a) == data.instance.mean_reward(a);
  }
  out.check(same, "instance CSV round-trip");

  ExperimentConfig config;
  config.experiment = ExperimentKind::kCustom;
  config.ratings_path = path;
  config.trials = kTrials;
  config.n_values = {250, 500};
  const auto rows = run_experiment(config);
  for (std::size_t n : config.n_values) {
    const ResultRow* p = find_row(rows, "plugin", {}, n);
    const ResultRow* i = find_row(rows, "is", {}, n);
    const ResultRow* s = find_row(rows, "switch", {}, n);
    const ResultRow* c = find_row(rows, "chebyshev", {}, n);
    if (!p || !i || !s || !c) {
      out.check(false, "missing rows at n=" + std::to_string(n));
      continue;
    }
    out.note("n=" + std::to_string(n) + " mse plugin " + fmt("%.4g", p->mse) + " is " +
             fmt("%.4g", i->mse) + " switch " + fmt("%.4g", s->mse) + " chebyshev " +
             fmt("%.4g", c->mse));
    out.check(s->mse <= i->mse, "switch<=is at n=" + std::to_string(n));
    out.check(c->mse <= p->mse, "chebyshev<=plugin at n=" + std::to_string(n));
  }
  std::filesystem::remove_all(dir);
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"switch-scaling slopes and ordering", switch_scaling},
      {"chebyshev-scaling slopes", chebyshev_scaling},
      {"competitive-ratio trend", competitive_ratio_trend},
      {"exact plug-in MSE oracle", exact_oracle},
      {"subset solver correctness", solver_correctness},
      {"switch MSE upper bound containment", upper_bound_containment},
      {"chebyshev weights and bias oracle", chebyshev_machinery},
      {"ratings ingest and estimator ordering", ratings_substitute},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criteria[i].run();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!outcome.pass) ++failures;
    std::printf("%s [%zu] %s (%.1fs): %s\n", outcome.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].name, secs, outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
