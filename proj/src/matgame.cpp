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

#include "rmg/matgame.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rmg/error.hpp"

namespace rmg {
namespace {

constexpr double kPivotEps = 1e-12;

void normalize(std::vector<double>& x) {
  double sum = 0.0;
  for (double& v : x) {
    if (v < 0.0) v = 0.0;
    sum += v;
  }
  if (sum <= 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    x.front() = 1.0;
    return;
  }
  for (double& v : x) v /= sum;
}

// Dense simplex tableau for  max 1^T y  s.t.  M y <= 1, y >= 0, with M >= 1
// elementwise (so the slack basis is feasible and the optimum is bounded).
class Tableau {
 public:
  Tableau(std::span<const double> shifted, int rows, int cols)
      : rows_(rows), cols_(cols), width_(cols + rows + 1),
        t_(static_cast<std::size_t>(rows + 1) * width_, 0.0), basis_(rows) {
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) {
        at(i, j) = shifted[static_cast<std::size_t>(i) * cols + j];
      }
      at(i, cols + i) = 1.0;
      at(i, width_ - 1) = 1.0;
      basis_[i] = cols + i;
    }
    for (int j = 0; j < cols; ++j) at(rows, j) = -1.0;
  }

  void solve() {
    // Bland's rule: smallest improving column, smallest basic index on ratio
    // ties. Terminates without cycling.
    const int max_pivots = 50 * (rows_ + cols_) + 100;
    for (int iter = 0; iter < max_pivots; ++iter) {
      int enter = -1;
      for (int j = 0; j < width_ - 1; ++j) {
        if (at(rows_, j) < -kPivotEps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < rows_; ++i) {
        const double coef = at(i, enter);
        if (coef > kPivotEps) {
          best_ratio = std::min(best_ratio, at(i, width_ - 1) / coef);
        }
      }
      int leave = -1;
      for (int i = 0; i < rows_; ++i) {
        const double coef = at(i, enter);
        if (coef <= kPivotEps) continue;
        if (at(i, width_ - 1) / coef > best_ratio + kPivotEps) continue;
        if (leave < 0 || basis_[i] < basis_[leave]) leave = i;
      }
      if (leave < 0) {
        throw Error(ErrorKind::kDegenerate, "matrix game LP is unbounded");
      }
      pivot(leave, enter);
    }
    throw Error(ErrorKind::kDegenerate, "simplex pivot limit reached");
  }

  std::vector<double> primal() const {
    std::vector<double> y(cols_, 0.0);
    for (int i = 0; i < rows_; ++i) {
      if (basis_[i] < cols_) y[basis_[i]] = at(i, width_ - 1);
    }
    return y;
  }

  std::vector<double> dual() const {
    std::vector<double> x(rows_);
    for (int i = 0; i < rows_; ++i) x[i] = at(rows_, cols_ + i);
    return x;
  }

 private:
  double& at(int i, int j) {
    return t_[static_cast<std::size_t>(i) * width_ + j];
  }
  double at(int i, int j) const {
    return t_[static_cast<std::size_t>(i) * width_ + j];
  }

  void pivot(int row, int col) {
    const double inv = 1.0 / at(row, col);
    for (int j = 0; j < width_; ++j) at(row, j) *= inv;
    at(row, col) = 1.0;
    for (int i = 0; i <= rows_; ++i) {
      if (i == row) continue;
      const double f = at(i, col);
      if (f == 0.0) continue;
      for (int j = 0; j < width_; ++j) at(i, j) -= f * at(row, j);
      at(i, col) = 0.0;
    }
    basis_[row] = col;
  }

  int rows_;
  int cols_;
  int width_;
  std::vector<double> t_;
  std::vector<int> basis_;
};

void check_matrix(std::span<const double> payoff, int rows, int cols) {
  if (rows <= 0 || cols <= 0 ||
      payoff.size() != static_cast<std::size_t>(rows) * cols) {
    throw Error(ErrorKind::kDegenerate, "matrix game needs at least one row and column");
  }
  for (double x : payoff) {
    if (!std::isfinite(x)) {
      throw Error(ErrorKind::kNonFiniteEntry, "payoff matrix has a non-finite entry");
    }
  }
}

}  // namespace

MatrixGame MatrixGame::from_rows(
    std::initializer_list<std::initializer_list<double>> rows) {
  MatrixGame g;
  g.rows = static_cast<int>(rows.size());
  g.cols = g.rows > 0 ? static_cast<int>(rows.begin()->size()) : 0;
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != g.cols) {
      throw Error(ErrorKind::kSizeMismatch, "ragged payoff matrix");
    }
    g.payoff.insert(g.payoff.end(), r.begin(), r.end());
  }
  return g;
}

double bilinear_value(std::span<const double> payoff, int rows, int cols,
                      std::span<const double> w, std::span<const double> z) {
  double value = 0.0;
  for (int i = 0; i < rows; ++i) {
    if (w[i] == 0.0) continue;
    double row = 0.0;
    for (int j = 0; j < cols; ++j) {
      row += payoff[static_cast<std::size_t>(i) * cols + j] * z[j];
    }
    value += w[i] * row;
  }
  return value;
}

MatrixNash solve_zero_sum(std::span<const double> payoff, int rows, int cols,
                          double nash_tol) {
  check_matrix(payoff, rows, cols);
  if (!(nash_tol > 0.0)) {
    throw Error(ErrorKind::kBadParams, "nash_tol must be positive");
  }
  MatrixNash out;
  out.w.assign(rows, 0.0);
  out.z.assign(cols, 0.0);

  if (rows == 1) {
    const auto it = std::min_element(payoff.begin(), payoff.begin() + cols);
    out.w[0] = 1.0;
    out.z[static_cast<std::size_t>(it - payoff.begin())] = 1.0;
    out.value = *it;
    return out;
  }
  if (cols == 1) {
    int best = 0;
    for (int i = 1; i < rows; ++i) {
      if (payoff[i] > payoff[best]) best = i;
    }
    out.w[best] = 1.0;
    out.z[0] = 1.0;
    out.value = payoff[best];
    return out;
  }

  const double lo = *std::min_element(payoff.begin(), payoff.end());
  const double shift = 1.0 - lo;
  std::vector<double> shifted(payoff.begin(), payoff.end());
  for (double& x : shifted) x += shift;

  Tableau tableau(shifted, rows, cols);
  tableau.solve();
  out.z = tableau.primal();
  out.w = tableau.dual();
  normalize(out.z);
  normalize(out.w);
  out.value = bilinear_value(payoff, rows, cols, out.w, out.z);
  return out;
}

MatrixNash solve_zero_sum(const MatrixGame& game, double nash_tol) {
  return solve_zero_sum(game.payoff, game.rows, game.cols, nash_tol);
}

double exploitability(std::span<const double> payoff, int rows, int cols,
                      std::span<const double> w, std::span<const double> z) {
  if (w.size() != static_cast<std::size_t>(rows) ||
      z.size() != static_cast<std::size_t>(cols) ||
      payoff.size() != static_cast<std::size_t>(rows) * cols) {
    throw Error(ErrorKind::kSizeMismatch, "strategy sizes do not match the matrix");
  }
  double best_row = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < rows; ++i) {
    double r = 0.0;
    for (int j = 0; j < cols; ++j) {
      r += payoff[static_cast<std::size_t>(i) * cols + j] * z[j];
    }
    best_row = std::max(best_row, r);
  }
  double best_col = std::numeric_limits<double>::infinity();
  for (int j = 0; j < cols; ++j) {
    double c = 0.0;
    for (int i = 0; i < rows; ++i) {
      c += w[i] * payoff[static_cast<std::size_t>(i) * cols + j];
    }
    best_col = std::min(best_col, c);
  }
  const double value = bilinear_value(payoff, rows, cols, w, z);
  return std::max({best_row - value, value - best_col, 0.0});
}

double exploitability(const MatrixGame& game, std::span<const double> w,
                      std::span<const double> z) {
  return exploitability(game.payoff, game.rows, game.cols, w, z);
}

}  // namespace rmg
