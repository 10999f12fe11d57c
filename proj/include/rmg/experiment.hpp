// Copyright 2026 The rmg Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RMG_EXPERIMENT_HPP_
#define RMG_EXPERIMENT_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rmg/game.hpp"
#include "rmg/matgame.hpp"

namespace rmg {

enum class GameSource { kRandom, kFile };

// Data-collection policy. kNashMixture mixes the true game's robust Nash
// pair (from rtz_vi) with the uniform policy: (1 - eps) nash + eps uniform.
enum class Behavior { kUniform, kNashMixture };

struct ExperimentConfig {
  GameSource source = GameSource::kRandom;
  // kRandom: a fresh game per seed unless game_seed is set.
  int S = 20;
  int A = 2;
  int B = 2;
  int H = 30;
  std::optional<std::uint64_t> game_seed;
  std::string game_path;  // kFile

  std::vector<std::int64_t> k_grid;
  std::vector<std::uint64_t> seeds;
  double delta = 0.05;
  double c_n = 1.0;
  double sigma_plus = 0.2;
  double sigma_minus = 0.2;
  double nash_tol = kDefaultNashTol;
  Behavior behavior = Behavior::kUniform;
  double behavior_eps = 0.1;
  // Run the two-stage subsampling before estimation; otherwise every
  // sampled transition is used.
  bool subsample = true;
  // Record wall-clock solve times; zero-filled when off so reruns are
  // byte-identical.
  bool timing = true;
  std::string out_dir;  // empty: nothing is written
  int threads = 1;      // RMG_THREADS overrides
};

// Errors: BadParams for an empty or nonpositive K grid or no seeds, BadDelta.
void validate_config(const ExperimentConfig& config);

struct ExperimentRow {
  std::uint64_t seed = 0;
  std::int64_t K = 0;
  double gap_lcb = 0.0;
  double gap_vi = 0.0;
  double runtime_ms_lcb = 0.0;
  double runtime_ms_vi = 0.0;
};

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// Least squares of log(gap) on log(K). Errors: TooFewPoints (< 2 points or
// a single distinct K), NonPositiveValue.
LogLogFit fit_loglog_slope(const std::vector<std::pair<double, double>>& points);

// Rank correlation with average ranks for ties. Errors: TooFewPoints.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

struct KSummary {
  std::int64_t K = 0;
  int runs = 0;
  double mean_gap_lcb = 0.0;
  double std_gap_lcb = 0.0;
  double mean_gap_vi = 0.0;
  double std_gap_vi = 0.0;
  double mean_runtime_ms_lcb = 0.0;
  double mean_runtime_ms_vi = 0.0;
};

struct ExperimentSummary {
  std::vector<ExperimentRow> rows;  // sorted by (seed, K)
  std::vector<KSummary> per_k;      // sorted by K
  std::optional<LogLogFit> fit_lcb;
  std::optional<LogLogFit> fit_vi;
  std::optional<double> spearman_lcb;
};

ExperimentSummary summarize(std::vector<ExperimentRow> rows);

PolicyPair behavior_policy(const MarkovGame& game, Behavior behavior,
                           double eps);

// One run: sample K episodes under the behavior policy, optionally
// subsample, estimate, solve with and without penalties, and score both
// policies by their Nash gap on the true game.
ExperimentRow run_cell(const MarkovGame& game, std::uint64_t seed,
                       std::int64_t K, const ExperimentConfig& config);

// Runs every (seed, K) cell on a worker pool. With out_dir set, writes
// results.csv and summary.json there; finished rows are flushed before an
// error is rethrown.
ExperimentSummary run_experiment(const ExperimentConfig& config);

inline constexpr const char* kResultsHeader =
    "seed,K,gap_lcb,gap_vi,runtime_ms_lcb,runtime_ms_vi";

void write_results_csv(const std::string& path,
                       const std::vector<ExperimentRow>& rows);
std::vector<ExperimentRow> read_results_csv(const std::string& path);
void write_summary_json(const std::string& path, const ExperimentSummary& s,
                        const ExperimentConfig& config);

// Worker count after the RMG_THREADS override, at least 1.
int resolve_threads(int requested);

}  // namespace rmg

#endif  // RMG_EXPERIMENT_HPP_
