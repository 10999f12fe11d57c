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

#ifndef RMG_MATGAME_HPP_
#define RMG_MATGAME_HPP_

#include <initializer_list>
#include <span>
#include <vector>

namespace rmg {

inline constexpr double kDefaultNashTol = 1e-9;

// Dense payoff matrix, row-major; the row player maximizes.
struct MatrixGame {
  int rows = 0;
  int cols = 0;
  std::vector<double> payoff;

  static MatrixGame from_rows(
      std::initializer_list<std::initializer_list<double>> rows);

  double at(int i, int j) const {
    return payoff[static_cast<std::size_t>(i) * cols + j];
  }
};

struct MatrixNash {
  std::vector<double> w;  // row player's mixed strategy
  std::vector<double> z;  // column player's mixed strategy
  double value = 0.0;     // w^T N z
};

// Solves max_w min_z w^T N z by a dense tableau simplex (Bland's rule) on
// the game shifted to entries >= 1. One pivot sequence yields both players:
// z from the primal, w from the slack reduced costs. Output is a
// deterministic function of the matrix.
//
// Errors: Degenerate (empty matrix), NonFiniteEntry, BadParams (tol <= 0).
MatrixNash solve_zero_sum(const MatrixGame& game,
                          double nash_tol = kDefaultNashTol);
MatrixNash solve_zero_sum(std::span<const double> payoff, int rows, int cols,
                          double nash_tol = kDefaultNashTol);

// max(max_a (N z)_a - w^T N z, w^T N z - min_b (w^T N)_b). Zero iff (w, z)
// is an exact equilibrium. Errors: SizeMismatch.
double exploitability(const MatrixGame& game, std::span<const double> w,
                      std::span<const double> z);
double exploitability(std::span<const double> payoff, int rows, int cols,
                      std::span<const double> w, std::span<const double> z);

// w^T N z
double bilinear_value(std::span<const double> payoff, int rows, int cols,
                      std::span<const double> w, std::span<const double> z);

}  // namespace rmg

#endif  // RMG_MATGAME_HPP_
