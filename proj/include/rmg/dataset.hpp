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

#ifndef RMG_DATASET_HPP_
#define RMG_DATASET_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "rmg/game.hpp"

namespace rmg {

// One sample transition. episode is -1 for tuples that lost their episode
// structure in subsampling. h is 0-based.
struct Transition {
  std::int64_t episode = 0;
  int h = 0;
  int s = 0;
  int a = 0;
  int b = 0;
  int s_next = 0;

  bool operator==(const Transition&) const = default;
};

struct DatasetMeta {
  std::uint64_t seed = 0;
  std::int64_t K = 0;  // episodes the tuples were drawn from
  std::string stage = "episodes";  // "episodes" or "subsampled"
};

// Episode-major tuple list. For stage "episodes" tuple k*H + h is step h of
// episode k.
struct Dataset {
  GameDims dims;
  DatasetMeta meta;
  std::vector<Transition> tuples;

  bool flattened() const { return meta.stage != "episodes"; }
};

// IndexOutOfBounds for any tuple outside dims; ShapeMismatch if an episode
// dataset has the wrong length or breaks the s_next -> s chain.
void validate_dataset(const Dataset& data);

// K episodes from initial ~ rho, a ~ mu_h(s), b ~ nu_h(s), s' ~ P_h(s,a,b).
// Episode k uses its own substream of seed, so the output does not depend on
// threads. Errors: ShapeMismatch, BadParams (K < 1), BadInitialDist.
Dataset sample_dataset(const MarkovGame& game, const PolicyPair& behavior,
                       const std::vector<double>& initial, std::int64_t K,
                       std::uint64_t seed, int threads = 1);

// max{n - 10 sqrt(n log(H S / delta)), 0}
double trimmed_count(double n_aux, int H, int S, double delta);

struct SubsampleResult {
  Dataset data;                  // flattened tuples
  std::vector<std::int64_t> n_main;  // [h][s] counts in the first half
  std::vector<std::int64_t> n_aux;   // [h][s] counts in the second half
  std::vector<std::int64_t> kept;    // [h][s] tuples kept
  std::vector<std::string> warnings;
};

// Two-stage subsampling: the first K/2 episodes are the main half, the rest
// the auxiliary half. For every (h, s) keep min(floor(trimmed(N^aux)), N^main)
// main-half tuples drawn without replacement. An odd K drops the last
// episode (reported in warnings). Errors: BadDelta, ShapeMismatch for
// flattened input.
SubsampleResult two_stage_subsample(const Dataset& data, double delta,
                                    std::uint64_t seed);

// Same-order flattening of every tuple with episode ids kept.
Dataset flatten(const Dataset& data);

struct TransitionCounts {
  GameDims dims;
  std::vector<std::int64_t> n;       // [h][s][a][b]
  std::vector<std::int64_t> n_next;  // [h][s][a][b][s']
};

// Errors: IndexOutOfBounds.
TransitionCounts count_transitions(const std::vector<Transition>& tuples,
                                   GameDims dims);

struct EmpiricalModel {
  GameDims dims;
  std::vector<double> p_hat;  // same layout as MarkovGame::transitions
  std::vector<double> r_hat;  // same layout as MarkovGame::rewards
  TransitionCounts counts;
  double delta = 0.05;
  std::int64_t K = 1;  // episode count entering log(K H / delta)
};

// Empirical frequencies; rows with no data become uniform and their reward
// zero. Errors: ShapeMismatch, BadDelta, BadParams (K < 1).
EmpiricalModel estimate_model(const TransitionCounts& counts,
                              const std::vector<double>& true_rewards,
                              double delta, std::int64_t K);

// The empirical model as a game (for rtz_vi on estimates and evaluation).
MarkovGame as_game(const EmpiricalModel& model, double sigma_plus,
                   double sigma_minus, std::vector<double> initial);

struct OccupancyTable {
  GameDims dims;
  std::vector<double> d_s;    // [h][s]
  std::vector<double> d_sab;  // [h][s][a][b]
};

// Forward propagation of the state law under (mu, nu) and P.
// Errors: ShapeMismatch.
OccupancyTable occupancy(const MarkovGame& game, const PolicyPair& policy,
                         const std::vector<double>& initial);

// K d / 8 - 5 sqrt(K d log(K H / delta)): the high-probability lower bound on
// subsampled counts at a cell of occupancy d.
double count_lower_bound(std::int64_t K, double d, int H, double delta);

// CSV with header episode,h,s,a,b,s_next plus a JSON sidecar <path>.meta.json
// holding seed, K, H, S, A, B and stage. Errors: Io, Parse.
void write_dataset(const std::string& path, const Dataset& data);
Dataset read_dataset(const std::string& path);

}  // namespace rmg

#endif  // RMG_DATASET_HPP_
