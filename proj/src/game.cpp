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

#include "rmg/game.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rmg/error.hpp"

namespace rmg {
namespace {

std::string cell_name(int h, int s, int a, int b) {
  return "(h=" + std::to_string(h) + ", s=" + std::to_string(s) +
         ", a=" + std::to_string(a) + ", b=" + std::to_string(b) + ")";
}

double row_sum(std::span<const double> p) {
  double sum = 0.0;
  for (double x : p) sum += x;
  return sum;
}

bool valid_sigma(double sigma) { return sigma > 0.0 && sigma <= 1.0; }

void check_shapes(const MarkovGame& game) {
  const GameDims& d = game.dims;
  if (d.H <= 0 || d.S <= 0 || d.A <= 0 || d.B <= 0) {
    throw Error(ErrorKind::kShapeMismatch, "game sizes must be positive");
  }
  if (game.transitions.size() != d.num_cells() * d.S ||
      game.rewards.size() != d.num_cells()) {
    throw Error(ErrorKind::kShapeMismatch,
                "transition or reward tensor does not match H,S,A,B");
  }
  if (game.initial_dist.size() != static_cast<std::size_t>(d.S)) {
    throw Error(ErrorKind::kBadInitialDist, "initial_dist must have length S");
  }
}

}  // namespace

bool is_distribution(std::span<const double> p, double tol) {
  double sum = 0.0;
  for (double x : p) {
    if (!std::isfinite(x) || x < 0.0) return false;
    sum += x;
  }
  return std::abs(sum - 1.0) <= tol;
}

void validate_game(const MarkovGame& game) {
  check_shapes(game);
  const GameDims& d = game.dims;
  for (int h = 0; h < d.H; ++h) {
    for (int s = 0; s < d.S; ++s) {
      for (int a = 0; a < d.A; ++a) {
        for (int b = 0; b < d.B; ++b) {
          if (!is_distribution(game.row(h, s, a, b), kProbTolerance)) {
            throw Error(ErrorKind::kNonStochasticRow,
                        "transition row is not a distribution at " +
                            cell_name(h, s, a, b));
          }
          const double r = game.reward(h, s, a, b);
          if (!(r >= 0.0 && r <= 1.0)) {
            throw Error(ErrorKind::kRewardOutOfRange,
                        "reward outside [0,1] at " + cell_name(h, s, a, b));
          }
        }
      }
    }
  }
  if (!is_distribution(game.initial_dist, kProbTolerance)) {
    throw Error(ErrorKind::kBadInitialDist,
                "initial_dist is not a distribution");
  }
  if (!valid_sigma(game.sigma_plus) || !valid_sigma(game.sigma_minus)) {
    throw Error(ErrorKind::kBadSigma, "sigma_plus and sigma_minus must lie in (0,1]");
  }
}

MarkovGame make_game(GameDims dims, std::vector<double> transitions,
                     std::vector<double> rewards, double sigma_plus,
                     double sigma_minus, std::vector<double> initial_dist) {
  MarkovGame game{dims,         std::move(transitions), std::move(rewards),
                  sigma_plus,   sigma_minus,            std::move(initial_dist)};
  check_shapes(game);
  for (int h = 0; h < dims.H; ++h) {
    for (int s = 0; s < dims.S; ++s) {
      for (int a = 0; a < dims.A; ++a) {
        for (int b = 0; b < dims.B; ++b) {
          auto row = game.row(h, s, a, b);
          const double sum = row_sum(row);
          if (std::abs(sum - 1.0) > kNormalizeTolerance) {
            throw Error(ErrorKind::kNonStochasticRow,
                        "transition row sum " + std::to_string(sum) + " at " +
                            cell_name(h, s, a, b));
          }
          // Rows that already validate are kept bit for bit.
          if (std::abs(sum - 1.0) > kProbTolerance) {
            for (double& x : row) x /= sum;
          }
        }
      }
    }
  }
  const double init_sum = row_sum(game.initial_dist);
  if (std::abs(init_sum - 1.0) > kNormalizeTolerance) {
    throw Error(ErrorKind::kBadInitialDist, "initial_dist does not sum to 1");
  }
  if (std::abs(init_sum - 1.0) > kProbTolerance) {
    for (double& x : game.initial_dist) x /= init_sum;
  }
  validate_game(game);
  return game;
}

PolicyPair make_policy_pair(GameDims dims) {
  PolicyPair p;
  p.dims = dims;
  p.mu.assign(static_cast<std::size_t>(dims.H) * dims.S * dims.A, 0.0);
  p.nu.assign(static_cast<std::size_t>(dims.H) * dims.S * dims.B, 0.0);
  return p;
}

PolicyPair uniform_policy_pair(int S, int A, int B, int H) {
  if (S <= 0 || A <= 0 || B <= 0 || H <= 0) {
    throw Error(ErrorKind::kShapeMismatch, "policy sizes must be positive");
  }
  PolicyPair p = make_policy_pair(GameDims{H, S, A, B});
  std::fill(p.mu.begin(), p.mu.end(), 1.0 / A);
  std::fill(p.nu.begin(), p.nu.end(), 1.0 / B);
  return p;
}

void validate_policy(const PolicyPair& policy) {
  const GameDims& d = policy.dims;
  if (policy.mu.size() != static_cast<std::size_t>(d.H) * d.S * d.A ||
      policy.nu.size() != static_cast<std::size_t>(d.H) * d.S * d.B) {
    throw Error(ErrorKind::kShapeMismatch, "policy tensor sizes do not match");
  }
  for (int h = 0; h < d.H; ++h) {
    for (int s = 0; s < d.S; ++s) {
      if (!is_distribution(policy.mu_row(h, s), kProbTolerance) ||
          !is_distribution(policy.nu_row(h, s), kProbTolerance)) {
        throw Error(ErrorKind::kBadDistribution,
                    "policy row is not a distribution at (h=" +
                        std::to_string(h) + ", s=" + std::to_string(s) + ")");
      }
    }
  }
}

}  // namespace rmg
