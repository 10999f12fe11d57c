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

#ifndef RMG_SOLVER_HPP_
#define RMG_SOLVER_HPP_

#include <cstdint>
#include <vector>

#include "rmg/dataset.hpp"
#include "rmg/game.hpp"
#include "rmg/matgame.hpp"

namespace rmg {

struct PenaltyParams {
  double c_n = 1.0;  // c_n = 0 switches the penalty off (diagnostics only)
  double delta = 0.05;
  std::int64_t k = 1;  // episodes entering log(k H / delta)
};

// Bernstein-style penalty:
//   n = 0:  H
//   n > 0:  min{max{sqrt(c_n L var / n), 2 c_n H L / n}, H},  L = log(k H / delta)
// Errors: BadParams (c_n < 0, k < 1, n < 0, var < 0), BadDelta.
double penalty(std::int64_t n, double var_hat, const PenaltyParams& params,
               int H);

struct SolveDiagnostics {
  std::vector<double> max_penalty_plus;   // [h]
  std::vector<double> max_penalty_minus;  // [h]
  double nash_tol = kDefaultNashTol;
};

// v_plus / v_minus are [h][s] for h = 0..H with the terminal slice h = H
// identically zero; q tables are [h][s][a][b]. policy holds the reported
// pair (mu from the lower branch, nu from the upper branch); plus_policy and
// minus_policy hold both stage equilibria of each branch.
struct SolveResult {
  GameDims dims;
  std::vector<double> v_plus;
  std::vector<double> v_minus;
  std::vector<double> q_plus;
  std::vector<double> q_minus;
  PolicyPair policy;
  PolicyPair plus_policy;
  PolicyPair minus_policy;
  SolveDiagnostics diagnostics;

  double v_plus_at(int h, int s) const {
    return v_plus[static_cast<std::size_t>(h) * dims.S + s];
  }
  double v_minus_at(int h, int s) const {
    return v_minus[static_cast<std::size_t>(h) * dims.S + s];
  }
};

// Pessimistic/optimistic robust value iteration on an empirical model:
//   Q+_h = min{r + inf_{P in U(P_hat, s+)} P V+_{h+1} + beta(V+_{h+1}), H}
//   Q-_h = max{r + sup_{P in U(P_hat, s-)} P V-_{h+1} - beta(V-_{h+1}), 0}
// with a stage Nash solve on both Q tables at every (h, s).
// Errors: BadSigma, plus anything raised by the parts.
SolveResult rtz_vi_lcb(const EmpiricalModel& model, double sigma_plus,
                       double sigma_minus, const PenaltyParams& params,
                       double nash_tol = kDefaultNashTol);

// The same recursion without penalties. On a true game it returns the robust
// Nash values for each player's radius.
SolveResult rtz_vi(const MarkovGame& game, double sigma_plus,
                   double sigma_minus, double nash_tol = kDefaultNashTol);
SolveResult rtz_vi(const EmpiricalModel& model, double sigma_plus,
                   double sigma_minus, double nash_tol = kDefaultNashTol);

// Spread bound on the optimistic values at 0-based step h (k = H - h steps
// remain): min{(H + 1)(1 - (1 - sigma)^k) / sigma, H}.
double range_bound(double sigma, int H, int h);

// When enabled (set_invariant_checks or RMG_CHECK_INVARIANTS=1), every
// rtz_vi_lcb solve asserts the range bound and the [0, H] value box at each
// step and throws InvariantViolation on failure.
void set_invariant_checks(bool enabled);
bool invariant_checks_enabled();

struct InvariantStats {
  std::uint64_t solves_checked = 0;
  std::uint64_t steps_checked = 0;
};
InvariantStats invariant_stats();

}  // namespace rmg

#endif  // RMG_SOLVER_HPP_
