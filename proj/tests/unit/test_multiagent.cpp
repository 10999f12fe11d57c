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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "rmg/dataset.hpp"
#include "rmg/error.hpp"
#include "rmg/instances.hpp"
#include "rmg/multiagent.hpp"
#include "rmg/serialize.hpp"
#include "rmg/solver.hpp"

namespace {

// A game whose only randomness is the reward tensors; every player gets
// the same payoff unless `payoffs` says otherwise.
rmg::MultiGame stay_game(int H, int S, std::vector<int> sizes,
                         std::vector<std::vector<double>> stage_payoffs) {
  rmg::MultiGame g;
  g.H = H;
  g.S = S;
  g.action_sizes = std::move(sizes);
  const std::size_t J = g.num_joint();
  g.transitions.assign(static_cast<std::size_t>(H) * S * J * S, 0.0);
  for (std::size_t c = 0; c < static_cast<std::size_t>(H) * S * J; ++c) {
    g.transitions[c * S + (c / J) % S] = 1.0;
  }
  g.rewards.assign(g.action_sizes.size(), {});
  for (std::size_t i = 0; i < g.rewards.size(); ++i) {
    for (int h = 0; h < H; ++h)
      for (int s = 0; s < S; ++s)
        for (std::size_t j = 0; j < J; ++j) g.rewards[i].push_back(stage_payoffs[i][j]);
  }
  g.sigmas.assign(g.action_sizes.size(), 0.2);
  g.initial_dist.assign(S, 1.0 / S);
  return g;
}

// Counts consistent with the game's own (deterministic) rows.
rmg::MultiEmpiricalModel fully_observed(const rmg::MultiGame& g, std::int64_t n) {
  const std::size_t cells = static_cast<std::size_t>(g.H) * g.S * g.num_joint();
  std::vector<std::int64_t> counts(cells, n), next(cells * g.S, 0);
  for (std::size_t c = 0; c < cells; ++c)
    for (int s = 0; s < g.S; ++s)
      next[c * g.S + s] = static_cast<std::int64_t>(std::llround(g.transitions[c * g.S + s] * n));
  return rmg::estimate_multi_model(g, counts, next, 0.05, 100);
}

}  // namespace

TEST_CASE("joint indices are row-major in player order") {
  CHECK(rmg::unflatten_joint(0, {2, 3, 2}) == std::vector<int>{0, 0, 0});
  CHECK(rmg::unflatten_joint(1, {2, 3, 2}) == std::vector<int>{0, 0, 1});
  CHECK(rmg::unflatten_joint(2, {2, 3, 2}) == std::vector<int>{0, 1, 0});
  CHECK(rmg::unflatten_joint(11, {2, 3, 2}) == std::vector<int>{1, 2, 1});
}

TEST_CASE("one player reduces to robust MDP value iteration") {
  const auto g = stay_game(3, 1, {2}, {{1.0, 1.0}});
  const auto r = rmg::multi_rtz_vi_lcb(fully_observed(g, 1'000'000'000), {},
                                       rmg::general_stage_solver());
  CHECK(r.value(0, 0, 0) == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(r.value(0, 3, 0) == 0.0);
}

TEST_CASE("zero-sum embedding matches the two-player solver") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = rmg::random_game(5, 2, 3, 6, seed);
    const auto data = rmg::sample_dataset(g, rmg::uniform_policy_pair(5, 2, 3, 6),
                                          g.initial_dist, 60, seed);
    const auto m = rmg::estimate_model(rmg::count_transitions(data.tuples, g.dims),
                                       g.rewards, 0.05, 60);
    rmg::PenaltyParams params;
    params.k = 60;
    const auto two = rmg::rtz_vi_lcb(m, 0.2, 0.2, params);
    const auto multi = rmg::multi_rtz_vi_lcb(rmg::embed_two_player(m, 0.2), params,
                                             rmg::zero_sum_stage_solver());
    for (int h = 0; h <= 6; ++h)
      for (int s = 0; s < 5; ++s)
        CHECK(std::abs(multi.value(0, h, s) - two.v_plus_at(h, s)) <= 1e-8);
  }
}

TEST_CASE("three players with a common dominant joint action") {
  std::vector<double> shared(8, 0.2);
  shared[5] = 0.9;  // joint (1, 0, 1)
  const auto g = stay_game(4, 2, {2, 2, 2}, {shared, shared, shared});
  const auto r = rmg::multi_rtz_vi_lcb(fully_observed(g, 1'000'000), {},
                                       rmg::general_stage_solver());
  for (int h = 0; h < 4; ++h)
    for (int s = 0; s < 2; ++s) {
      const std::size_t base = (static_cast<std::size_t>(h) * 2 + s) * 2;
      CHECK(r.policies[0][base + 1] == 1.0);
      CHECK(r.policies[1][base + 0] == 1.0);
      CHECK(r.policies[2][base + 1] == 1.0);
      CHECK(r.residuals[h * 2 + s] == 0.0);
      CHECK(r.value(0, h, s) == r.value(1, h, s));
      CHECK(r.value(1, h, s) == r.value(2, h, s));
    }
}

TEST_CASE("stage equilibria") {
  SUBCASE("matching pennies") {
    const auto p = rmg::stage_equilibrium({{1, 0, 0, 1}, {0, 1, 1, 0}}, {2, 2});
    CHECK(p.strategies[0][0] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(p.strategies[1][0] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(p.residual <= 1e-8);
  }
  SUBCASE("common payoff with a strict optimum") {
    const std::vector<double> u = {0.1, 0.3, 0.8, 0.2, 0.0, 0.4};
    const auto p = rmg::stage_equilibrium({u, u}, {3, 2});
    CHECK(p.strategies[0] == std::vector<double>{0, 1, 0});
    CHECK(p.strategies[1] == std::vector<double>{1, 0});
    CHECK(p.residual == 0.0);
  }
  SUBCASE("prisoners' dilemma") {
    // Action 0 cooperates, 1 defects.
    const auto p = rmg::stage_equilibrium({{0.6, 0.0, 1.0, 0.2}, {0.6, 1.0, 0.0, 0.2}},
                                          {2, 2});
    CHECK(p.strategies[0] == std::vector<double>{0, 1});
    CHECK(p.strategies[1] == std::vector<double>{0, 1});
    CHECK(p.residual == 0.0);
  }
  SUBCASE("one player") {
    const auto p = rmg::stage_equilibrium({{0.2, 0.9, 0.9}}, {3});
    CHECK(p.strategies[0] == std::vector<double>{0, 1, 0});
  }
  SUBCASE("three players without a pure equilibrium report a residual") {
    // Player i wants to match player i+1; no profile of pure actions is
    // stable.
    std::vector<std::vector<double>> u(3, std::vector<double>(8));
    for (std::size_t j = 0; j < 8; ++j) {
      const auto a = rmg::unflatten_joint(j, {2, 2, 2});
      u[0][j] = a[0] == a[1] ? 1.0 : 0.0;
      u[1][j] = a[1] != a[2] ? 1.0 : 0.0;
      u[2][j] = a[2] == a[0] ? 1.0 : 0.0;
    }
    const auto p = rmg::stage_equilibrium(u, {2, 2, 2}, 1e-9, 2000);
    CHECK(p.residual >= 0.0);
    CHECK(p.residual ==
          doctest::Approx(rmg::nash_residual(u, {2, 2, 2}, p.strategies)));
    for (const auto& x : p.strategies) CHECK(rmg::is_distribution(x, 1e-9));
  }
  CHECK_THROWS_AS(rmg::stage_equilibrium({{1, 2, 3}}, {2}), rmg::Error);
}

TEST_CASE("solver failures carry the residual") {
  const auto g = stay_game(2, 1, {2, 2}, {{0, 1, 1, 0}, {1, 0, 0, 1}});
  const auto model = fully_observed(g, 10);
  rmg::StageSolver sloppy = [](const auto&, const std::vector<int>& sizes) {
    rmg::StageProfile p;
    for (int n : sizes) p.strategies.emplace_back(n, 1.0 / n);
    p.residual = 0.25;
    return p;
  };
  try {
    rmg::multi_rtz_vi_lcb(model, {}, sloppy, 0.1);
    FAIL("expected StageSolverError");
  } catch (const rmg::StageSolverError& e) {
    CHECK(e.residual() == 0.25);
    CHECK(e.kind() == rmg::ErrorKind::kStageSolverFailure);
  }
  CHECK_NOTHROW(rmg::multi_rtz_vi_lcb(model, {}, sloppy, 0.5));

  rmg::StageSolver broken = [](const auto&, const std::vector<int>&) {
    rmg::StageProfile p;
    p.strategies = {{0.7, 0.7}, {0.5, 0.5}};
    return p;
  };
  CHECK_THROWS_AS(rmg::multi_rtz_vi_lcb(model, {}, broken), rmg::StageSolverError);
}

TEST_CASE("multi-player validation and JSON round trip") {
  auto g = stay_game(2, 2, {2, 3}, {std::vector<double>(6, 0.5), std::vector<double>(6, 0.25)});
  CHECK_NOTHROW(rmg::validate_multi_game(g));
  const auto back = rmg::multi_game_from_json(rmg::multi_game_to_json(g));
  CHECK(back.transitions == g.transitions);
  CHECK(back.rewards == g.rewards);
  CHECK(back.action_sizes == g.action_sizes);
  CHECK(back.sigmas == g.sigmas);

  g.sigmas[1] = 0.0;
  CHECK_THROWS_AS(rmg::validate_multi_game(g), rmg::Error);
  g.sigmas[1] = 0.2;
  g.rewards[0][3] = 2.0;
  CHECK_THROWS_AS(rmg::validate_multi_game(g), rmg::Error);
}
