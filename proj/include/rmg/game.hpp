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

#ifndef RMG_GAME_HPP_
#define RMG_GAME_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace rmg {

// Probability rows must sum to one within this tolerance to validate.
inline constexpr double kProbTolerance = 1e-12;
// make_game() renormalizes rows within this distance of one and rejects the
// rest.
inline constexpr double kNormalizeTolerance = 1e-9;

// Sizes of a finite-horizon two-player game. Steps are 0-based (h = 0 is the
// first decision step, h = H is the terminal slice of value tables).
struct GameDims {
  int H = 0;
  int S = 0;
  int A = 0;
  int B = 0;

  std::size_t num_cells() const {
    return static_cast<std::size_t>(H) * S * A * B;
  }
  std::size_t cell(int h, int s, int a, int b) const {
    return ((static_cast<std::size_t>(h) * S + s) * A + a) * B + b;
  }
  // Offset of the first (a, b) entry of stage matrix (h, s).
  std::size_t stage(int h, int s) const {
    return (static_cast<std::size_t>(h) * S + s) * A * B;
  }
  bool operator==(const GameDims&) const = default;
};

// Tabular robust zero-sum Markov game with TV uncertainty radii for the max
// player (sigma_plus) and the min player (sigma_minus).
//
// transitions is laid out [h][s][a][b][s'] with s' contiguous; rewards is
// [h][s][a][b].
struct MarkovGame {
  GameDims dims;
  std::vector<double> transitions;
  std::vector<double> rewards;
  double sigma_plus = 0.2;
  double sigma_minus = 0.2;
  std::vector<double> initial_dist;

  std::span<const double> row(int h, int s, int a, int b) const {
    return {transitions.data() + dims.cell(h, s, a, b) * dims.S,
            static_cast<std::size_t>(dims.S)};
  }
  std::span<double> row(int h, int s, int a, int b) {
    return {transitions.data() + dims.cell(h, s, a, b) * dims.S,
            static_cast<std::size_t>(dims.S)};
  }
  double reward(int h, int s, int a, int b) const {
    return rewards[dims.cell(h, s, a, b)];
  }
};

// Throws rmg::Error naming the first violated invariant:
// NonStochasticRow / RewardOutOfRange (with h,s,a,b), BadInitialDist,
// BadSigma, ShapeMismatch for wrongly sized tensors.
void validate_game(const MarkovGame& game);

// Builds a game, renormalizing rows and the initial distribution whose sums
// are within kNormalizeTolerance of one, then validates. Rows already within
// kProbTolerance are left untouched so that a saved game reloads exactly.
MarkovGame make_game(GameDims dims, std::vector<double> transitions,
                     std::vector<double> rewards, double sigma_plus,
                     double sigma_minus, std::vector<double> initial_dist);

// Product policy: mu is [h][s][a], nu is [h][s][b].
struct PolicyPair {
  GameDims dims;
  std::vector<double> mu;
  std::vector<double> nu;

  std::span<const double> mu_row(int h, int s) const {
    return {mu.data() + (static_cast<std::size_t>(h) * dims.S + s) * dims.A,
            static_cast<std::size_t>(dims.A)};
  }
  std::span<double> mu_row(int h, int s) {
    return {mu.data() + (static_cast<std::size_t>(h) * dims.S + s) * dims.A,
            static_cast<std::size_t>(dims.A)};
  }
  std::span<const double> nu_row(int h, int s) const {
    return {nu.data() + (static_cast<std::size_t>(h) * dims.S + s) * dims.B,
            static_cast<std::size_t>(dims.B)};
  }
  std::span<double> nu_row(int h, int s) {
    return {nu.data() + (static_cast<std::size_t>(h) * dims.S + s) * dims.B,
            static_cast<std::size_t>(dims.B)};
  }
};

PolicyPair make_policy_pair(GameDims dims);
PolicyPair uniform_policy_pair(int S, int A, int B, int H);
void validate_policy(const PolicyPair& policy);

enum class Sense { kWorstCase, kBestCase };

// TV ball radius and which side of it the caller optimizes over; the center
// row is supplied per call.
struct UncertaintySpec {
  double radius = 0.0;
  Sense sense = Sense::kWorstCase;
};

bool is_distribution(std::span<const double> p, double tol);

}  // namespace rmg

#endif  // RMG_GAME_HPP_
