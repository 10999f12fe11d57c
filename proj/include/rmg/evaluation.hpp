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

#ifndef RMG_EVALUATION_HPP_
#define RMG_EVALUATION_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "rmg/game.hpp"
#include "rmg/matgame.hpp"
#include "rmg/solver.hpp"

namespace rmg {

// Values [h][s] for h = 0..H; the terminal slice h = H is zero.
struct ValueTable {
  int H = 0;
  int S = 0;
  std::vector<double> values;

  double at(int h, int s) const {
    return values[static_cast<std::size_t>(h) * S + s];
  }
  // sum_s rho(s) V_h(s)
  double expected(const std::vector<double>& rho, int h = 0) const;
};

// Robust Bellman evaluation of a fixed product policy: V_h(s) is the
// (mu, nu)-average of r + inf (kWorstCase) or sup (kBestCase) of P V_{h+1}
// over the TV ball of radius sigma around the true row. sigma = 0 is plain
// policy evaluation. Errors: ShapeMismatch, BadSigma.
ValueTable robust_policy_value(const MarkovGame& game, const PolicyPair& policy,
                               double sigma, Sense sense);

enum class Player { kMax, kMin };

struct BestResponse {
  ValueTable values;
  // Deterministic best-response policy, one-hot rows [h][s][action];
  // argmax (argmin) ties go to the lowest index.
  std::vector<double> policy;
  // Per-action robust values [h][s][action] the choice was made from.
  std::vector<double> action_values;
  int num_actions = 0;

  // The input pair with the responding side replaced by the best response.
  PolicyPair against(const PolicyPair& fixed, Player player) const;
};

// kMax: responds to fixed.nu with worst-case backups at radius sigma.
// kMin: responds to fixed.mu with best-case backups at radius sigma.
// Errors: ShapeMismatch, BadSigma.
BestResponse robust_best_response(const MarkovGame& game,
                                  const PolicyPair& fixed, Player player,
                                  double sigma);

struct GapReport {
  double gap = 0.0;              // max of the two terms, clamped at zero
  double raw_gap = 0.0;          // before clamping
  double term_max_player = 0.0;  // V*_{nu_hat, s+}(rho) - V*_{s+}(rho)
  double term_min_player = 0.0;  // V*_{s-}(rho) - V_{mu_hat,*, s-}(rho)
  double nash_value_plus = 0.0;
  double nash_value_minus = 0.0;
};

// Nash gap of a policy pair on the true game. The robust Nash values come
// from rtz_vi on the game at its own radii; rho defaults to the game's
// initial distribution.
GapReport nash_gap(const MarkovGame& game, const PolicyPair& policy,
                   double nash_tol = kDefaultNashTol,
                   const std::optional<std::vector<double>>& rho = std::nullopt);
// Same, reusing a precomputed rtz_vi(game) result.
GapReport nash_gap(const MarkovGame& game, const PolicyPair& policy,
                   const SolveResult& exact,
                   const std::optional<std::vector<double>>& rho = std::nullopt);

// min{g(s+), g(s-), H} with g(s) = (H s - 1 + (1 - s)^H) / s^2.
// Errors: BadSigma, BadParams (H < 1).
double horizon_factor(double sigma_plus, double sigma_minus, int H);

// c1 sqrt(C H^3 S (A + B) log(K H / delta) / K * f(s+, s-, H)).
// Errors: BadParams, BadDelta, BadSigma.
double theory_bound(double c1, double c_r_star, int H, int S, int A, int B,
                    std::int64_t K, double delta, double sigma_plus,
                    double sigma_minus);
// The bound without the horizon factor.
double theory_bound_prefactor(double c1, double c_r_star, int H, int S, int A,
                              int B, std::int64_t K, double delta);

}  // namespace rmg

#endif  // RMG_EVALUATION_HPP_
