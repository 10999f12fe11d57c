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

#include "rmg/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rmg/error.hpp"
#include "rmg/uncertainty.hpp"

namespace rmg {
namespace {

void check_radius(double sigma) {
  if (!(sigma >= 0.0 && sigma <= 1.0)) {
    throw Error(ErrorKind::kBadSigma, "sigma must lie in [0, 1]");
  }
}

void check_policy_shape(const MarkovGame& game, const PolicyPair& policy) {
  if (!(policy.dims == game.dims) ||
      policy.mu.size() !=
          static_cast<std::size_t>(game.dims.H) * game.dims.S * game.dims.A ||
      policy.nu.size() !=
          static_cast<std::size_t>(game.dims.H) * game.dims.S * game.dims.B) {
    throw Error(ErrorKind::kShapeMismatch, "policy does not match the game");
  }
}

ValueTable empty_table(const GameDims& d) {
  ValueTable t;
  t.H = d.H;
  t.S = d.S;
  t.values.assign(static_cast<std::size_t>(d.H + 1) * d.S, 0.0);
  return t;
}

double backup(const TvBackup& next, std::span<const double> row, double sigma,
              Sense sense) {
  return sense == Sense::kWorstCase ? next.worst(row, sigma)
                                    : next.best(row, sigma);
}

const std::vector<double>& pick_rho(
    const MarkovGame& game, const std::optional<std::vector<double>>& rho) {
  const std::vector<double>& r = rho ? *rho : game.initial_dist;
  if (r.size() != static_cast<std::size_t>(game.dims.S) ||
      !is_distribution(r, kNormalizeTolerance)) {
    throw Error(ErrorKind::kBadInitialDist, "evaluation distribution is invalid");
  }
  return r;
}

double sigma_term(double sigma, int H) {
  // (H s - 1 + (1 - s)^H) / s^2 equals sum_{k=2}^{H} C(H, k) (-s)^(k-2); the
  // closed form cancels badly for small H s, so sum the series there.
  if (H * sigma < 0.5) {
    double sum = 0.0;
    double coef = 0.5 * H * (H - 1.0);  // C(H, k) (-s)^(k-2) at k = 2
    for (int k = 2; k <= H; ++k) {
      sum += coef;
      if (std::abs(coef) <= 1e-18 * std::abs(sum)) break;
      coef *= -sigma * (H - k) / (k + 1.0);
    }
    return sum;
  }
  const double power = std::exp(H * std::log1p(-sigma));
  return (H * sigma - 1.0 + (sigma == 1.0 ? 0.0 : power)) / (sigma * sigma);
}

}  // namespace

double ValueTable::expected(const std::vector<double>& rho, int h) const {
  double v = 0.0;
  for (int s = 0; s < S; ++s) v += rho[s] * at(h, s);
  return v;
}

ValueTable robust_policy_value(const MarkovGame& game, const PolicyPair& policy,
                               double sigma, Sense sense) {
  check_policy_shape(game, policy);
  check_radius(sigma);
  const GameDims& d = game.dims;
  ValueTable out = empty_table(d);
  for (int h = d.H - 1; h >= 0; --h) {
    const TvBackup next(std::span<const double>(
        out.values.data() + static_cast<std::size_t>(h + 1) * d.S, d.S));
    for (int s = 0; s < d.S; ++s) {
      const auto mu = policy.mu_row(h, s);
      const auto nu = policy.nu_row(h, s);
      double v = 0.0;
      for (int a = 0; a < d.A; ++a) {
        if (mu[a] == 0.0) continue;
        double inner = 0.0;
        for (int b = 0; b < d.B; ++b) {
          if (nu[b] == 0.0) continue;
          inner += nu[b] * (game.reward(h, s, a, b) +
                            backup(next, game.row(h, s, a, b), sigma, sense));
        }
        v += mu[a] * inner;
      }
      out.values[static_cast<std::size_t>(h) * d.S + s] = v;
    }
  }
  return out;
}

BestResponse robust_best_response(const MarkovGame& game,
                                  const PolicyPair& fixed, Player player,
                                  double sigma) {
  check_policy_shape(game, fixed);
  check_radius(sigma);
  const GameDims& d = game.dims;
  const bool max_side = player == Player::kMax;
  const Sense sense = max_side ? Sense::kWorstCase : Sense::kBestCase;
  const int n_own = max_side ? d.A : d.B;
  const int n_other = max_side ? d.B : d.A;

  BestResponse out;
  out.values = empty_table(d);
  out.num_actions = n_own;
  out.policy.assign(static_cast<std::size_t>(d.H) * d.S * n_own, 0.0);
  out.action_values.assign(out.policy.size(), 0.0);

  for (int h = d.H - 1; h >= 0; --h) {
    const TvBackup next(std::span<const double>(
        out.values.values.data() + static_cast<std::size_t>(h + 1) * d.S, d.S));
    for (int s = 0; s < d.S; ++s) {
      const auto other = max_side ? fixed.nu_row(h, s) : fixed.mu_row(h, s);
      const std::size_t off = (static_cast<std::size_t>(h) * d.S + s) * n_own;
      int best = 0;
      for (int x = 0; x < n_own; ++x) {
        double q = 0.0;
        for (int y = 0; y < n_other; ++y) {
          if (other[y] == 0.0) continue;
          const int a = max_side ? x : y;
          const int b = max_side ? y : x;
          q += other[y] * (game.reward(h, s, a, b) +
                           backup(next, game.row(h, s, a, b), sigma, sense));
        }
        out.action_values[off + x] = q;
        const double incumbent = out.action_values[off + best];
        if (max_side ? q > incumbent : q < incumbent) best = x;
      }
      out.policy[off + best] = 1.0;
      out.values.values[static_cast<std::size_t>(h) * d.S + s] =
          out.action_values[off + best];
    }
  }
  return out;
}

PolicyPair BestResponse::against(const PolicyPair& fixed, Player player) const {
  PolicyPair out = fixed;
  if (player == Player::kMax) {
    out.mu = policy;
  } else {
    out.nu = policy;
  }
  return out;
}

GapReport nash_gap(const MarkovGame& game, const PolicyPair& policy,
                   double nash_tol,
                   const std::optional<std::vector<double>>& rho) {
  const SolveResult exact =
      rtz_vi(game, game.sigma_plus, game.sigma_minus, nash_tol);
  return nash_gap(game, policy, exact, rho);
}

GapReport nash_gap(const MarkovGame& game, const PolicyPair& policy,
                   const SolveResult& exact,
                   const std::optional<std::vector<double>>& rho) {
  check_policy_shape(game, policy);
  validate_policy(policy);
  if (!(exact.dims == game.dims)) {
    throw Error(ErrorKind::kShapeMismatch, "exact solution does not match the game");
  }
  const std::vector<double>& r = pick_rho(game, rho);
  const GameDims& d = game.dims;

  GapReport rep;
  for (int s = 0; s < d.S; ++s) {
    rep.nash_value_plus += r[s] * exact.v_plus_at(0, s);
    rep.nash_value_minus += r[s] * exact.v_minus_at(0, s);
  }
  const BestResponse br_max =
      robust_best_response(game, policy, Player::kMax, game.sigma_plus);
  const BestResponse br_min =
      robust_best_response(game, policy, Player::kMin, game.sigma_minus);
  rep.term_max_player = br_max.values.expected(r) - rep.nash_value_plus;
  rep.term_min_player = rep.nash_value_minus - br_min.values.expected(r);
  rep.raw_gap = std::max(rep.term_max_player, rep.term_min_player);
  rep.gap = std::max(rep.raw_gap, 0.0);
  return rep;
}

double horizon_factor(double sigma_plus, double sigma_minus, int H) {
  for (double s : {sigma_plus, sigma_minus}) {
    if (!(s > 0.0 && s <= 1.0)) {
      throw Error(ErrorKind::kBadSigma, "sigma must lie in (0, 1]");
    }
  }
  if (H < 1) throw Error(ErrorKind::kBadParams, "H must be at least 1");
  return std::min({sigma_term(sigma_plus, H), sigma_term(sigma_minus, H),
                   static_cast<double>(H)});
}

double theory_bound_prefactor(double c1, double c_r_star, int H, int S, int A,
                              int B, std::int64_t K, double delta) {
  if (!(c1 > 0.0) || !(c_r_star > 0.0) || H < 1 || S < 1 || A < 1 || B < 1 ||
      K < 1) {
    throw Error(ErrorKind::kBadParams, "theory bound arguments must be positive");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorKind::kBadDelta, "delta must lie in (0, 1)");
  }
  const double h = H;
  const double log_term = std::log(static_cast<double>(K) * h / delta);
  return c1 * std::sqrt(c_r_star * h * h * h * S * (A + B) * log_term /
                        static_cast<double>(K));
}

double theory_bound(double c1, double c_r_star, int H, int S, int A, int B,
                    std::int64_t K, double delta, double sigma_plus,
                    double sigma_minus) {
  const double pre = theory_bound_prefactor(c1, c_r_star, H, S, A, B, K, delta);
  return pre * std::sqrt(horizon_factor(sigma_plus, sigma_minus, H));
}

}  // namespace rmg
