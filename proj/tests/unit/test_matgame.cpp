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

#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "rmg/error.hpp"
#include "rmg/matgame.hpp"
#include "rmg/rng.hpp"
#include "support/oracles.hpp"

namespace {

rmg::MatrixGame random_matrix(rmg::Rng& rng) {
  rmg::MatrixGame g;
  g.rows = 1 + static_cast<int>(rng.below(8));
  g.cols = 1 + static_cast<int>(rng.below(8));
  for (int i = 0; i < g.rows * g.cols; ++i) {
    g.payoff.push_back(20.0 * rng.uniform() - 10.0);
  }
  return g;
}

bool is_dist(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) {
    if (v < 0.0) return false;
    s += v;
  }
  return std::abs(s - 1.0) <= 1e-12;
}

}  // namespace

TEST_CASE("matching pennies") {
  const auto g = rmg::MatrixGame::from_rows({{1, -1}, {-1, 1}});
  const auto n = rmg::solve_zero_sum(g);
  CHECK(n.value == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(n.w[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(n.z[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(rmg::exploitability(g, std::vector<double>{0.5, 0.5},
                            std::vector<double>{0.5, 0.5}) == 0.0);
  CHECK(rmg::exploitability(g, std::vector<double>{1, 0},
                            std::vector<double>{0.5, 0.5}) ==
        doctest::Approx(1.0));
}

TEST_CASE("mixed 2x2 game agrees with the indifference formula") {
  const auto g = rmg::MatrixGame::from_rows({{3, 0}, {1, 2}});
  const auto n = rmg::solve_zero_sum(g);
  CHECK(std::abs(n.value - rmg::testing::value_2x2(3, 0, 1, 2)) <= 1e-9);
  CHECK(std::abs(n.value - 1.5) <= 1e-9);
  CHECK(std::abs(n.w[0] - 0.25) <= 1e-9);
  CHECK(std::abs(n.w[1] - 0.75) <= 1e-9);
  CHECK(std::abs(n.z[0] - 0.5) <= 1e-9);
}

TEST_CASE("dominant pure strategies") {
  const auto g = rmg::MatrixGame::from_rows({{2, 3}, {0, 1}});
  const auto n = rmg::solve_zero_sum(g);
  CHECK(n.value == doctest::Approx(2.0));
  CHECK(n.w == std::vector<double>{1.0, 0.0});
  CHECK(n.z == std::vector<double>{1.0, 0.0});
}

TEST_CASE("constant matrix") {
  const auto g = rmg::MatrixGame::from_rows({{4, 4, 4}, {4, 4, 4}});
  const auto n = rmg::solve_zero_sum(g);
  CHECK(n.value == doctest::Approx(4.0));
  CHECK(is_dist(n.w));
  CHECK(is_dist(n.z));
  CHECK(rmg::exploitability(g, std::vector<double>{0.3, 0.7},
                            std::vector<double>{0.2, 0.2, 0.6}) ==
        doctest::Approx(0.0));
}

TEST_CASE("single row and single column short-circuit to best responses") {
  const auto row = rmg::MatrixGame::from_rows({{3, -1, -1, 5}});
  const auto a = rmg::solve_zero_sum(row);
  CHECK(a.value == -1.0);
  CHECK(a.z == std::vector<double>{0, 1, 0, 0});
  const auto col = rmg::MatrixGame::from_rows({{1}, {7}, {7}});
  const auto b = rmg::solve_zero_sum(col);
  CHECK(b.value == 7.0);
  CHECK(b.w == std::vector<double>{0, 1, 0});
}

TEST_CASE("errors") {
  rmg::MatrixGame empty;
  CHECK_THROWS_AS(rmg::solve_zero_sum(empty), rmg::Error);
  auto g = rmg::MatrixGame::from_rows({{1, 2}, {3, INFINITY}});
  try {
    rmg::solve_zero_sum(g);
    FAIL("expected NonFiniteEntry");
  } catch (const rmg::Error& e) {
    CHECK(e.kind() == rmg::ErrorKind::kNonFiniteEntry);
  }
  try {
    rmg::exploitability(g, std::vector<double>{1.0}, std::vector<double>{0.5, 0.5});
    FAIL("expected SizeMismatch");
  } catch (const rmg::Error& e) {
    CHECK(e.kind() == rmg::ErrorKind::kSizeMismatch);
  }
}

TEST_CASE("random matrices: exploitability, range, antisymmetry, equivariance") {
  rmg::Rng rng(77, 0);
  for (int trial = 0; trial < 500; ++trial) {
    const auto g = random_matrix(rng);
    const auto n = rmg::solve_zero_sum(g);
    CHECK(is_dist(n.w));
    CHECK(is_dist(n.z));
    CHECK(rmg::exploitability(g, n.w, n.z) <= 1e-8);
    const auto [lo, hi] = std::minmax_element(g.payoff.begin(), g.payoff.end());
    CHECK(n.value >= *lo - 1e-9);
    CHECK(n.value <= *hi + 1e-9);

    // Player swap: -N^T.
    rmg::MatrixGame swapped;
    swapped.rows = g.cols;
    swapped.cols = g.rows;
    for (int j = 0; j < g.cols; ++j) {
      for (int i = 0; i < g.rows; ++i) swapped.payoff.push_back(-g.at(i, j));
    }
    CHECK(std::abs(rmg::solve_zero_sum(swapped).value + n.value) <= 1e-9);

    const double c = 0.5 + 3.0 * rng.uniform();
    const double d = 10.0 * rng.uniform() - 5.0;
    rmg::MatrixGame scaled = g;
    for (double& x : scaled.payoff) x = c * x + d;
    CHECK(std::abs(rmg::solve_zero_sum(scaled).value - (c * n.value + d)) <= 1e-8);
    CHECK(rmg::exploitability(scaled, n.w, n.z) <= c * 1e-8);
  }
}

TEST_CASE("solver output is bit-identical across calls") {
  rmg::Rng rng(5, 5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = random_matrix(rng);
    const auto a = rmg::solve_zero_sum(g);
    const auto b = rmg::solve_zero_sum(g);
    CHECK(a.w == b.w);
    CHECK(a.z == b.z);
    CHECK(a.value == b.value);
  }
}

TEST_CASE("degenerate games with many ties") {
  // Integer-valued payoffs produce ratio ties in the simplex.
  rmg::Rng rng(11, 2);
  for (int trial = 0; trial < 300; ++trial) {
    rmg::MatrixGame g;
    g.rows = 2 + static_cast<int>(rng.below(6));
    g.cols = 2 + static_cast<int>(rng.below(6));
    for (int i = 0; i < g.rows * g.cols; ++i) {
      g.payoff.push_back(static_cast<double>(rng.below(3)));
    }
    const auto n = rmg::solve_zero_sum(g);
    CHECK(rmg::exploitability(g, n.w, n.z) <= 1e-9);
  }
}
