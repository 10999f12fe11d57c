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

#ifndef RMG_MULTIAGENT_HPP_
#define RMG_MULTIAGENT_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "rmg/dataset.hpp"
#include "rmg/matgame.hpp"
#include "rmg/solver.hpp"

namespace rmg {

// m-player robust general-sum game. Joint actions are flattened row-major
// in player order (the last player's action varies fastest).
struct MultiGame {
  int H = 0;
  int S = 0;
  std::vector<int> action_sizes;
  std::vector<double> transitions;           // [h][s][joint][s']
  std::vector<std::vector<double>> rewards;  // per player [h][s][joint]
  std::vector<double> sigmas;                // per player
  std::vector<double> initial_dist;

  int num_players() const { return static_cast<int>(action_sizes.size()); }
  std::size_t num_joint() const;
  std::size_t cell(int h, int s, std::size_t joint) const {
    return (static_cast<std::size_t>(h) * S + s) * num_joint() + joint;
  }
};

// Errors: ShapeMismatch, NonStochasticRow, RewardOutOfRange, BadSigma,
// BadInitialDist.
void validate_multi_game(const MultiGame& game);

// Per-player action of a flattened joint index.
std::vector<int> unflatten_joint(std::size_t joint,
                                 const std::vector<int>& action_sizes);

struct MultiEmpiricalModel {
  MultiGame model;             // p_hat and r_hat in game form
  std::vector<std::int64_t> n;  // [h][s][joint]
  double delta = 0.05;
  std::int64_t K = 1;
};

// Frequencies from joint counts, uniform rows and zero rewards where a cell
// has no data. Errors: ShapeMismatch, BadDelta.
MultiEmpiricalModel estimate_multi_model(const MultiGame& truth,
                                         const std::vector<std::int64_t>& n,
                                         const std::vector<std::int64_t>& n_next,
                                         double delta, std::int64_t K);

// Two-player empirical model as a two-player multi model with r2 = 1 - r1
// on observed cells. Both players use radius sigma.
MultiEmpiricalModel embed_two_player(const EmpiricalModel& model, double sigma);

struct StageProfile {
  std::vector<std::vector<double>> strategies;  // per player
  double residual = 0.0;
};

// payoffs[i] is player i's payoff over joint actions.
using StageSolver = std::function<StageProfile(
    const std::vector<std::vector<double>>& payoffs,
    const std::vector<int>& action_sizes)>;

// Largest unilateral improvement over all players; >= 0.
double nash_residual(const std::vector<std::vector<double>>& payoffs,
                     const std::vector<int>& action_sizes,
                     const std::vector<std::vector<double>>& strategies);

// General stage solver. One player: argmax. Two players with constant sum:
// the matrix-game solver on player 0's payoff. Otherwise the pure equilibrium
// with the largest total payoff (lowest joint index on ties), and failing
// that max_iters rounds of regret matching whose average profile is returned
// with its residual, which is not guaranteed to be below tol.
// Errors: ShapeMismatch.
StageProfile stage_equilibrium(const std::vector<std::vector<double>>& payoffs,
                               const std::vector<int>& action_sizes,
                               double tol = kDefaultNashTol,
                               int max_iters = 20000);

// Treats the game as zero-sum in player 0's payoff (two players only).
StageSolver zero_sum_stage_solver(double nash_tol = kDefaultNashTol);
StageSolver general_stage_solver(double tol = kDefaultNashTol,
                                 int max_iters = 20000);

struct MultiSolveResult {
  int H = 0;
  int S = 0;
  std::vector<int> action_sizes;
  std::vector<std::vector<double>> values;    // per player [h][s], h = 0..H
  std::vector<std::vector<double>> q;         // per player [h][s][joint]
  std::vector<std::vector<double>> policies;  // per player [h][s][action]
  std::vector<double> residuals;              // [h][s]

  double value(int player, int h, int s) const {
    return values[player][static_cast<std::size_t>(h) * S + s];
  }
};

// Q_i = min{r_i + inf_{P in U(P_hat, sigma_i)} P V_i + beta_i, H} per player,
// a stage profile from `solver` at each (h, s), and V_i the profile's
// expectation of Q_i. Throws StageSolverError when the solver returns
// something other than distributions or, if max_residual is set, a residual
// above it.
MultiSolveResult multi_rtz_vi_lcb(const MultiEmpiricalModel& model,
                                  const PenaltyParams& params,
                                  const StageSolver& solver,
                                  std::optional<double> max_residual = std::nullopt);

}  // namespace rmg

#endif  // RMG_MULTIAGENT_HPP_
