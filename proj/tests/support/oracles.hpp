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

#ifndef RMG_TESTS_SUPPORT_ORACLES_HPP_
#define RMG_TESTS_SUPPORT_ORACLES_HPP_

// Reference computations used as test oracles. They avoid the library's
// sorted dual evaluation and its solver recursion on purpose.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "rmg/game.hpp"
#include "rmg/matgame.hpp"
#include "rmg/rng.hpp"

namespace rmg::testing {

// Adversarial kernel in the TV ball by greedy mass transfer: move
// t = min(sigma, 1 - p0[target]) onto the target state (lowest value for the
// worst case, highest for the best case), taking it from the states that
// help the adversary least first.
inline std::vector<double> greedy_kernel(const std::vector<double>& p0,
                                         const std::vector<double>& v,
                                         double sigma, bool worst) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  // Donors sorted from most to least harmful to the adversary.
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return worst ? v[a] > v[b] : v[a] < v[b];
  });
  const std::size_t target = order.back();
  std::vector<double> q = p0;
  double budget = std::min(sigma, 1.0 - p0[target]);
  for (std::size_t idx : order) {
    if (budget <= 0.0) break;
    if (idx == target) continue;
    const double take = std::min(q[idx], budget);
    q[idx] -= take;
    q[target] += take;
    budget -= take;
  }
  return q;
}

inline double greedy_value(const std::vector<double>& p0,
                           const std::vector<double>& v, double sigma,
                           bool worst) {
  const auto q = greedy_kernel(p0, v, sigma, worst);
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += q[i] * v[i];
  return s;
}

inline std::vector<double> random_simplex(Rng& rng, int n) {
  std::vector<double> p(n);
  double sum = 0.0;
  for (double& x : p) {
    x = -std::log1p(-rng.uniform());
    sum += x;
  }
  for (double& x : p) x /= sum;
  return p;
}

// Random row with some exact zeros, to exercise empty support.
inline std::vector<double> random_sparse_simplex(Rng& rng, int n) {
  std::vector<double> p = random_simplex(rng, n);
  if (n > 1) {
    for (double& x : p) {
      if (rng.uniform() < 0.3) x = 0.0;
    }
    const double sum = std::accumulate(p.begin(), p.end(), 0.0);
    if (sum == 0.0) {
      p[0] = 1.0;
    } else {
      for (double& x : p) x /= sum;
    }
  }
  return p;
}

// Standard (non-robust) Nash value iteration: expectations under the
// nominal kernel and a stage matrix solve per state. Returns V [h][s].
inline std::vector<double> nash_vi_oracle(const MarkovGame& g) {
  const GameDims& d = g.dims;
  std::vector<double> V(static_cast<std::size_t>(d.H + 1) * d.S, 0.0);
  for (int h = d.H - 1; h >= 0; --h) {
    for (int s = 0; s < d.S; ++s) {
      MatrixGame m;
      m.rows = d.A;
      m.cols = d.B;
      for (int a = 0; a < d.A; ++a) {
        for (int b = 0; b < d.B; ++b) {
          const auto row = g.row(h, s, a, b);
          double ev = 0.0;
          for (int sp = 0; sp < d.S; ++sp) {
            ev += row[sp] * V[static_cast<std::size_t>(h + 1) * d.S + sp];
          }
          m.payoff.push_back(g.reward(h, s, a, b) + ev);
        }
      }
      V[static_cast<std::size_t>(h) * d.S + s] = solve_zero_sum(m).value;
    }
  }
  return V;
}

// Value of a 2x2 zero-sum game by enumeration of saddle points, falling
// back to the indifference formula.
inline double value_2x2(double a, double b, double c, double d) {
  const double lower = std::max(std::min(a, b), std::min(c, d));
  const double upper = std::min(std::max(a, c), std::max(b, d));
  if (lower == upper) return lower;
  return (a * d - b * c) / (a + d - b - c);
}

}  // namespace rmg::testing

#endif  // RMG_TESTS_SUPPORT_ORACLES_HPP_
