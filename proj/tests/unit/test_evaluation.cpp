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
#include <numeric>
#include <vector>

#include "doctest.h"
#include "rmg/error.hpp"
#include "rmg/evaluation.hpp"
#include "rmg/instances.hpp"
#include "rmg/rng.hpp"
#include "rmg/solver.hpp"
#include "support/oracles.hpp"

namespace {

rmg::PolicyPair random_policy(rmg::GameDims d, rmg::Rng& rng) {
  auto p = rmg::make_policy_pair(d);
  for (int h = 0; h < d.H; ++h)
    for (int s = 0; s < d.S; ++s) {
      const auto mu = rmg::testing::random_simplex(rng, d.A);
      const auto nu = rmg::testing::random_simplex(rng, d.B);
      std::copy(mu.begin(), mu.end(), p.mu_row(h, s).begin());
      std::copy(nu.begin(), nu.end(), p.nu_row(h, s).begin());
    }
  return p;
}

rmg::PolicyPair random_deterministic_policy(rmg::GameDims d, rmg::Rng& rng) {
  auto p = rmg::make_policy_pair(d);
  for (int h = 0; h < d.H; ++h)
    for (int s = 0; s < d.S; ++s) {
      p.mu_row(h, s)[rng.below(d.A)] = 1.0;
      p.nu_row(h, s)[rng.below(d.B)] = 1.0;
    }
  return p;
}

// Matching pennies at every stage, transitions independent of actions.
rmg::MarkovGame pennies_game(int S, int H, std::uint64_t seed) {
  rmg::Rng rng(seed, 1);
  rmg::GameDims d{H, S, 2, 2};
  std::vector<double> p(d.num_cells() * S), r(d.num_cells());
  for (int h = 0; h < H; ++h)
    for (int s = 0; s < S; ++s) {
      const auto row = rmg::testing::random_simplex(rng, S);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          std::copy(row.begin(), row.end(), p.begin() + d.cell(h, s, a, b) * S);
          r[d.cell(h, s, a, b)] = a == b ? 1.0 : 0.0;
        }
    }
  return rmg::make_game(d, p, r, 0.3, 0.1, std::vector<double>(S, 1.0 / S));
}

}  // namespace

TEST_CASE("plain evaluation of a constant-reward chain") {
  rmg::GameDims d{4, 1, 1, 1};
  const auto g = rmg::make_game(d, {1, 1, 1, 1}, {1, 1, 1, 1}, 0.2, 0.2, {1.0});
  const auto v = rmg::robust_policy_value(g, rmg::uniform_policy_pair(1, 1, 1, 4), 0.0,
                                          rmg::Sense::kWorstCase);
  CHECK(v.at(0, 0) == 4.0);
  CHECK(v.at(4, 0) == 0.0);
}

TEST_CASE("full radius collapses each backup to the extreme next value") {
  // State 1 pays 1, state 0 pays 0, both stay put.
  const int H = 5;
  rmg::GameDims d{H, 2, 1, 1};
  std::vector<double> p, r;
  for (int h = 0; h < H; ++h) {
    p.insert(p.end(), {1, 0, 0, 1});
    r.insert(r.end(), {0, 1});
  }
  const auto g = rmg::make_game(d, p, r, 1.0, 1.0, {0.5, 0.5});
  const auto pol = rmg::uniform_policy_pair(2, 1, 1, H);
  const auto worst = rmg::robust_policy_value(g, pol, 1.0, rmg::Sense::kWorstCase);
  const auto best = rmg::robust_policy_value(g, pol, 1.0, rmg::Sense::kBestCase);
  for (int h = H - 1; h >= 0; --h)
    for (int s = 0; s < 2; ++s) {
      const double lo = std::min(worst.at(h + 1, 0), worst.at(h + 1, 1));
      const double hi = std::max(best.at(h + 1, 0), best.at(h + 1, 1));
      CHECK(worst.at(h, s) == doctest::Approx(s + lo));
      CHECK(best.at(h, s) == doctest::Approx(s + hi));
    }
  CHECK(worst.at(0, 0) == 0.0);
  CHECK(best.at(0, 0) == doctest::Approx(4.0));
}

TEST_CASE("robust value matches Monte Carlo under the explicit worst kernel") {
  const int S = 3, H = 4;
  const double sigma = 0.3;
  const auto g = rmg::random_game(S, 2, 2, H, 41);
  rmg::Rng prng(8, 8);
  const auto pol = random_policy(g.dims, prng);
  const auto v = rmg::robust_policy_value(g, pol, sigma, rmg::Sense::kWorstCase);

  // The adversarial kernel for every cell, from the greedy oracle.
  std::vector<double> worst(g.transitions.size());
  for (int h = 0; h < H; ++h) {
    const std::vector<double> next(v.values.begin() + (h + 1) * S,
                                   v.values.begin() + (h + 2) * S);
    for (int s = 0; s < S; ++s)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const auto row = g.row(h, s, a, b);
          const auto q = rmg::testing::greedy_kernel({row.begin(), row.end()}, next,
                                                     sigma, true);
          std::copy(q.begin(), q.end(), worst.begin() + g.dims.cell(h, s, a, b) * S);
        }
  }

  const int N = 40000;
  rmg::Rng rng(2024, 0);
  double sum = 0.0, sum_sq = 0.0;
  for (int k = 0; k < N; ++k) {
    int s = rng.categorical(g.initial_dist);
    double ret = 0.0;
    for (int h = 0; h < H; ++h) {
      const int a = rng.categorical(pol.mu_row(h, s));
      const int b = rng.categorical(pol.nu_row(h, s));
      ret += g.reward(h, s, a, b);
      s = rng.categorical(std::span<const double>(
          worst.data() + g.dims.cell(h, s, a, b) * S, S));
    }
    sum += ret;
    sum_sq += ret * ret;
  }
  const double mean = sum / N;
  const double se = std::sqrt((sum_sq / N - mean * mean) / N);
  CHECK(std::abs(mean - v.expected(g.initial_dist)) <= 3.0 * se);
}

TEST_CASE("best response with a trivial opponent is robust MDP value iteration") {
  rmg::HardInstanceParams params;
  params.H = 16;
  params.sigma = 0.1;
  params.phi = rmg::gv_codebook(16)[5];
  const auto inst = rmg::hard_rmdp(params);
  const auto& g = inst.game;
  const auto br = rmg::robust_best_response(
      g, rmg::uniform_policy_pair(g.dims.S, g.dims.A, 1, g.dims.H), rmg::Player::kMax,
      params.sigma);
  for (int h = 0; h + 1 < params.H; ++h) {
    const auto base = (static_cast<std::size_t>(h) * g.dims.S + rmg::HardInstance::kStateM) * 2;
    CHECK(br.policy[base + params.phi[h]] == 1.0);
  }
  const auto vi = rmg::rtz_vi(g, params.sigma, params.sigma);
  for (int s = 0; s < g.dims.S; ++s)
    CHECK(std::abs(br.values.at(0, s) - vi.v_plus_at(0, s)) <= 1e-12);
}

TEST_CASE("best response to a Nash component attains the Nash value") {
  const double tol = rmg::kDefaultNashTol;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto g = rmg::random_game(5, 3, 2, 6, seed);
    const auto sol = rmg::rtz_vi(g, g.sigma_plus, g.sigma_minus);
    const auto br = rmg::robust_best_response(g, sol.plus_policy, rmg::Player::kMax,
                                              g.sigma_plus);
    for (int s = 0; s < 5; ++s)
      CHECK(std::abs(br.values.at(0, s) - sol.v_plus_at(0, s)) <= 2 * tol * 6);
    const auto br_min = rmg::robust_best_response(g, sol.minus_policy, rmg::Player::kMin,
                                                  g.sigma_minus);
    for (int s = 0; s < 5; ++s)
      CHECK(std::abs(br_min.values.at(0, s) - sol.v_minus_at(0, s)) <= 2 * tol * 6);
  }
}

TEST_CASE("best response with one action is the policy value") {
  const auto g = rmg::random_game(4, 1, 3, 5, 6);
  rmg::Rng rng(1, 1);
  const auto pol = random_policy(g.dims, rng);
  const auto br = rmg::robust_best_response(g, pol, rmg::Player::kMax, 0.25);
  const auto v = rmg::robust_policy_value(g, pol, 0.25, rmg::Sense::kWorstCase);
  for (std::size_t i = 0; i < v.values.size(); ++i)
    CHECK(std::abs(br.values.values[i] - v.values[i]) <= 1e-12);
}

TEST_CASE("best response dominates every policy of the responding side") {
  const auto g = rmg::random_game(5, 3, 3, 6, 13);
  rmg::Rng rng(4, 4);
  const auto fixed = random_policy(g.dims, rng);
  const auto br = rmg::robust_best_response(g, fixed, rmg::Player::kMax, g.sigma_plus);
  const auto br_min = rmg::robust_best_response(g, fixed, rmg::Player::kMin, g.sigma_minus);
  const double top = br.values.expected(g.initial_dist);
  const double bottom = br_min.values.expected(g.initial_dist);
  // The responses themselves evaluate to the response values.
  CHECK(std::abs(rmg::robust_policy_value(g, br.against(fixed, rmg::Player::kMax),
                                          g.sigma_plus, rmg::Sense::kWorstCase)
                     .expected(g.initial_dist) -
                 top) <= 1e-12);
  for (int trial = 0; trial < 50; ++trial) {
    auto pol = random_policy(g.dims, rng);
    pol.nu = fixed.nu;
    CHECK(top >= rmg::robust_policy_value(g, pol, g.sigma_plus, rmg::Sense::kWorstCase)
                         .expected(g.initial_dist) -
                     1e-9);
    auto pol_min = random_policy(g.dims, rng);
    pol_min.mu = fixed.mu;
    CHECK(bottom <= rmg::robust_policy_value(g, pol_min, g.sigma_minus, rmg::Sense::kBestCase)
                            .expected(g.initial_dist) +
                        1e-9);
  }
}

TEST_CASE("best-response ties go to the lowest index") {
  rmg::GameDims d{1, 1, 3, 1};
  const auto g = rmg::make_game(d, {1, 1, 1}, {0.2, 0.7, 0.7}, 0.1, 0.1, {1.0});
  const auto br = rmg::robust_best_response(g, rmg::uniform_policy_pair(1, 3, 1, 1),
                                            rmg::Player::kMax, 0.1);
  CHECK(br.policy == std::vector<double>{0, 1, 0});
}

TEST_CASE("Nash gap of the exact robust Nash pair is tiny") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto g = rmg::random_game(6, 2, 3, 8, seed);
    const auto sol = rmg::rtz_vi(g, g.sigma_plus, g.sigma_minus);
    const auto rep = rmg::nash_gap(g, sol.policy);
    CHECK(rep.gap <= 1e-6);
    CHECK(rep.gap == std::max(0.0, std::max(rep.term_max_player, rep.term_min_player)));
  }
}

TEST_CASE("uniform play in repeated matching pennies has zero gap") {
  const auto g = pennies_game(4, 5, 3);
  const auto rep = rmg::nash_gap(g, rmg::uniform_policy_pair(4, 2, 2, 5));
  CHECK(rep.gap <= 1e-9);
  CHECK(rep.nash_value_plus == doctest::Approx(2.5));
  CHECK(rep.nash_value_minus == doctest::Approx(2.5));
}

TEST_CASE("Nash gap is invariant to relabeling states") {
  const int S = 5, H = 4;
  const auto g = rmg::random_game(S, 2, 2, H, 19);
  rmg::Rng rng(3, 3);
  const auto pol = random_policy(g.dims, rng);
  const std::vector<int> perm = {3, 0, 4, 1, 2};  // old state -> new state
  auto pg = g;
  auto pp = pol;
  for (int h = 0; h < H; ++h)
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < 2; ++a) {
        pp.mu_row(h, perm[s])[a] = pol.mu_row(h, s)[a];
        pp.nu_row(h, perm[s])[a] = pol.nu_row(h, s)[a];
        for (int b = 0; b < 2; ++b) {
          pg.rewards[g.dims.cell(h, perm[s], a, b)] = g.reward(h, s, a, b);
          for (int t = 0; t < S; ++t)
            pg.row(h, perm[s], a, b)[perm[t]] = g.row(h, s, a, b)[t];
        }
      }
    }
  for (int s = 0; s < S; ++s) pg.initial_dist[perm[s]] = g.initial_dist[s];
  const auto a = rmg::nash_gap(g, pol);
  const auto b = rmg::nash_gap(pg, pp);
  CHECK(std::abs(a.gap - b.gap) <= 1e-9);
  CHECK(std::abs(a.term_max_player - b.term_max_player) <= 1e-9);
}

TEST_CASE("Nash gap with a precomputed solution matches") {
  const auto g = rmg::random_game(4, 2, 2, 5, 2);
  rmg::Rng rng(5, 5);
  const auto pol = random_policy(g.dims, rng);
  const auto exact = rmg::rtz_vi(g, g.sigma_plus, g.sigma_minus);
  const auto a = rmg::nash_gap(g, pol);
  const auto b = rmg::nash_gap(g, pol, exact);
  CHECK(a.gap == b.gap);
  const std::vector<double> point = {0, 1, 0, 0};
  const auto c = rmg::nash_gap(g, pol, exact, point);
  CHECK(c.nash_value_plus == exact.v_plus_at(0, 1));
}

TEST_CASE("Nash gap stays above the solver slack on random pairs") {
  const double tol = rmg::kDefaultNashTol;
  rmg::Rng rng(99, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = rmg::random_game(3, 2, 2, 4, 1000 + trial);
    const auto exact = rmg::rtz_vi(g, g.sigma_plus, g.sigma_minus);
    const auto pol = trial % 2 ? random_policy(g.dims, rng)
                               : random_deterministic_policy(g.dims, rng);
    const auto rep = rmg::nash_gap(g, pol, exact);
    CHECK(rep.raw_gap >= -2 * tol * 4);
    CHECK(rep.gap >= 0.0);
  }
}

TEST_CASE("policy value is nonincreasing in the radius") {
  const auto g = rmg::random_game(5, 2, 2, 6, 7);
  rmg::Rng rng(6, 6);
  const auto pol = random_policy(g.dims, rng);
  double last = 1e300;
  for (int i = 0; i <= 20; ++i) {
    const double v = rmg::robust_policy_value(g, pol, 0.05 * i, rmg::Sense::kWorstCase)
                         .expected(g.initial_dist);
    CHECK(v <= last + 1e-12);
    last = v;
  }
}

TEST_CASE("horizon factor") {
  CHECK(rmg::horizon_factor(1.0, 1.0, 4) == doctest::Approx(3.0));
  CHECK(rmg::horizon_factor(0.5, 1.0, 4) == doctest::Approx(3.0));
  CHECK(rmg::horizon_factor(1e-6, 1e-6, 5) == doctest::Approx(5.0));
  CHECK(rmg::horizon_factor(1e-6, 1e-6, 3) == doctest::Approx(3.0));
  // For H = 2 the sigma term is exactly 1 for every sigma.
  CHECK(rmg::horizon_factor(1e-6, 0.7, 2) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(rmg::horizon_factor(0.0, 0.5, 4), rmg::Error);
  CHECK_THROWS_AS(rmg::horizon_factor(0.5, 0.5, 0), rmg::Error);
}

TEST_CASE("theory bound") {
  // log(K H / delta) = 1 at K = 2, H = 1, delta = 2 / e.
  const double delta = 2.0 / std::exp(1.0);
  CHECK(rmg::theory_bound_prefactor(1, 1, 1, 1, 1, 1, 2, delta) ==
        doctest::Approx(1.0));
  // With H = 1 the horizon factor is zero.
  CHECK(rmg::theory_bound(1, 1, 1, 1, 1, 1, 2, delta, 0.5, 0.5) == doctest::Approx(0.0));

  const double b1 = rmg::theory_bound(1, 2, 10, 5, 2, 2, 1000, 0.05, 0.2, 0.2);
  const double b2 = rmg::theory_bound(1, 2, 10, 5, 2, 2, 2000, 0.05, 0.2, 0.2);
  const double l1 = std::log(1000 * 10 / 0.05), l2 = std::log(2000 * 10 / 0.05);
  CHECK(b2 == doctest::Approx(b1 / std::sqrt(2.0) * std::sqrt(l2 / l1)));
  const double p1 = rmg::theory_bound_prefactor(1, 2, 10, 5, 2, 2, 1000, 0.05);
  CHECK(rmg::theory_bound_prefactor(1, 2, 10, 5, 2, 2, 1000, 0.05 * 2) ==
        doctest::Approx(p1 * std::sqrt(std::log(1000 * 10 / 0.1) / l1)));

  double last = 1e300;
  for (std::int64_t K = 100; K <= 100000; K *= 10) {
    const double b = rmg::theory_bound(1, 1, 10, 5, 2, 2, K, 0.05, 0.2, 0.2);
    CHECK(b <= last);
    last = b;
  }
  last = 0.0;
  for (int H = 1; H <= 40; ++H) {
    const double b = rmg::theory_bound(1, 1, H, 5, 2, 2, 5000, 0.05, 0.2, 0.2);
    CHECK(b >= last);
    last = b;
  }
  CHECK_THROWS_AS(rmg::theory_bound(1, 1, 10, 5, 2, 2, 1000, 1.0, 0.2, 0.2), rmg::Error);
  CHECK_THROWS_AS(rmg::theory_bound(-1, 1, 10, 5, 2, 2, 1000, 0.1, 0.2, 0.2), rmg::Error);
}

TEST_CASE("evaluation shape errors") {
  const auto g = rmg::random_game(3, 2, 2, 4, 1);
  const auto bad = rmg::uniform_policy_pair(3, 2, 2, 5);
  CHECK_THROWS_AS(rmg::robust_policy_value(g, bad, 0.1, rmg::Sense::kWorstCase), rmg::Error);
  CHECK_THROWS_AS(rmg::robust_best_response(g, bad, rmg::Player::kMax, 0.1), rmg::Error);
  CHECK_THROWS_AS(rmg::nash_gap(g, bad), rmg::Error);
}
