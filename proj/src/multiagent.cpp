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

#include "rmg/multiagent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "rmg/error.hpp"
#include "rmg/game.hpp"
#include "rmg/uncertainty.hpp"

namespace rmg {
namespace {

// Distribution check on solver output.
constexpr double kProfileTol = 1e-9;

void check_payoffs(const std::vector<std::vector<double>>& payoffs,
                   const std::vector<int>& sizes) {
  if (sizes.empty() || payoffs.size() != sizes.size()) {
    throw Error(ErrorKind::kShapeMismatch, "one payoff tensor per player is required");
  }
  std::size_t joint = 1;
  for (int n : sizes) {
    if (n < 1) throw Error(ErrorKind::kShapeMismatch, "action sets must be nonempty");
    joint *= static_cast<std::size_t>(n);
  }
  for (const auto& p : payoffs) {
    if (p.size() != joint) {
      throw Error(ErrorKind::kShapeMismatch, "payoff tensor has the wrong size");
    }
  }
}

std::size_t joint_count(const std::vector<int>& sizes) {
  std::size_t j = 1;
  for (int n : sizes) j *= static_cast<std::size_t>(n);
  return j;
}

// Per-player payoff of each own action against the others' mixed profile.
std::vector<std::vector<double>> deviation_values(
    const std::vector<std::vector<double>>& payoffs,
    const std::vector<int>& sizes,
    const std::vector<std::vector<double>>& strategies) {
  const int m = static_cast<int>(sizes.size());
  const std::size_t J = joint_count(sizes);
  std::vector<std::vector<double>> dev(m);
  for (int i = 0; i < m; ++i) dev[i].assign(sizes[i], 0.0);
  std::vector<int> act(m, 0);
  for (std::size_t j = 0; j < J; ++j) {
    for (int i = 0; i < m; ++i) {
      double w = 1.0;
      for (int k = 0; k < m && w != 0.0; ++k) {
        if (k != i) w *= strategies[k][act[k]];
      }
      if (w != 0.0) dev[i][act[i]] += w * payoffs[i][j];
    }
    for (int k = m - 1; k >= 0; --k) {
      if (++act[k] < sizes[k]) break;
      act[k] = 0;
    }
  }
  return dev;
}

StageProfile pure_profile(const std::vector<int>& sizes, std::size_t joint) {
  StageProfile out;
  const std::vector<int> act = unflatten_joint(joint, sizes);
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    std::vector<double> s(sizes[i], 0.0);
    s[act[i]] = 1.0;
    out.strategies.push_back(std::move(s));
  }
  return out;
}

bool is_constant_sum(const std::vector<std::vector<double>>& payoffs) {
  const double c = payoffs[0][0] + payoffs[1][0];
  for (std::size_t j = 0; j < payoffs[0].size(); ++j) {
    if (std::abs(payoffs[0][j] + payoffs[1][j] - c) > 1e-12) return false;
  }
  return true;
}

std::optional<std::size_t> best_pure_equilibrium(
    const std::vector<std::vector<double>>& payoffs,
    const std::vector<int>& sizes, double tol) {
  const int m = static_cast<int>(sizes.size());
  const std::size_t J = joint_count(sizes);
  // Strides of each player's action in the flattened index.
  std::vector<std::size_t> stride(m, 1);
  for (int i = m - 2; i >= 0; --i) stride[i] = stride[i + 1] * sizes[i + 1];

  std::optional<std::size_t> best;
  double best_total = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < J; ++j) {
    bool stable = true;
    for (int i = 0; i < m && stable; ++i) {
      const int own = static_cast<int>((j / stride[i]) % sizes[i]);
      const std::size_t base = j - own * stride[i];
      for (int a = 0; a < sizes[i]; ++a) {
        if (payoffs[i][base + a * stride[i]] > payoffs[i][j] + tol) {
          stable = false;
          break;
        }
      }
    }
    if (!stable) continue;
    double total = 0.0;
    for (int i = 0; i < m; ++i) total += payoffs[i][j];
    if (total > best_total) {
      best_total = total;
      best = j;
    }
  }
  return best;
}

StageProfile regret_matching(const std::vector<std::vector<double>>& payoffs,
                             const std::vector<int>& sizes, int max_iters) {
  const int m = static_cast<int>(sizes.size());
  std::vector<std::vector<double>> regret(m), current(m), average(m);
  for (int i = 0; i < m; ++i) {
    regret[i].assign(sizes[i], 0.0);
    current[i].assign(sizes[i], 1.0 / sizes[i]);
    average[i].assign(sizes[i], 0.0);
  }
  for (int it = 0; it < max_iters; ++it) {
    const auto dev = deviation_values(payoffs, sizes, current);
    for (int i = 0; i < m; ++i) {
      double u = 0.0;
      for (int a = 0; a < sizes[i]; ++a) u += current[i][a] * dev[i][a];
      for (int a = 0; a < sizes[i]; ++a) {
        average[i][a] += current[i][a];
        regret[i][a] += dev[i][a] - u;
      }
    }
    for (int i = 0; i < m; ++i) {
      double pos = 0.0;
      for (double r : regret[i]) pos += std::max(r, 0.0);
      for (int a = 0; a < sizes[i]; ++a) {
        current[i][a] =
            pos > 0.0 ? std::max(regret[i][a], 0.0) / pos : 1.0 / sizes[i];
      }
    }
  }
  StageProfile out;
  for (int i = 0; i < m; ++i) {
    const double total = std::accumulate(average[i].begin(), average[i].end(), 0.0);
    for (double& x : average[i]) x /= total;
    out.strategies.push_back(std::move(average[i]));
  }
  out.residual = nash_residual(payoffs, sizes, out.strategies);
  return out;
}

void check_profile(const StageProfile& p, const std::vector<int>& sizes, int h,
                   int s, std::optional<double> max_residual) {
  const std::string where =
      " at h=" + std::to_string(h) + ", s=" + std::to_string(s);
  bool ok = p.strategies.size() == sizes.size() && std::isfinite(p.residual) &&
            p.residual >= 0.0;
  for (std::size_t i = 0; ok && i < sizes.size(); ++i) {
    ok = p.strategies[i].size() == static_cast<std::size_t>(sizes[i]) &&
         is_distribution(p.strategies[i], kProfileTol);
  }
  if (!ok) {
    throw StageSolverError("stage solver returned an invalid profile" + where,
                           p.residual);
  }
  if (max_residual && p.residual > *max_residual) {
    throw StageSolverError("stage residual " + std::to_string(p.residual) +
                               " exceeds the limit" + where,
                           p.residual);
  }
}

}  // namespace

std::size_t MultiGame::num_joint() const { return joint_count(action_sizes); }

std::vector<int> unflatten_joint(std::size_t joint,
                                 const std::vector<int>& action_sizes) {
  std::vector<int> act(action_sizes.size());
  for (int i = static_cast<int>(action_sizes.size()) - 1; i >= 0; --i) {
    act[i] = static_cast<int>(joint % action_sizes[i]);
    joint /= action_sizes[i];
  }
  return act;
}

void validate_multi_game(const MultiGame& g) {
  const int m = g.num_players();
  if (g.H < 1 || g.S < 1 || m < 1 ||
      std::any_of(g.action_sizes.begin(), g.action_sizes.end(),
                  [](int n) { return n < 1; })) {
    throw Error(ErrorKind::kShapeMismatch, "game sizes must be positive");
  }
  const std::size_t cells = static_cast<std::size_t>(g.H) * g.S * g.num_joint();
  if (g.transitions.size() != cells * g.S ||
      g.rewards.size() != static_cast<std::size_t>(m) ||
      g.sigmas.size() != static_cast<std::size_t>(m) ||
      g.initial_dist.size() != static_cast<std::size_t>(g.S)) {
    throw Error(ErrorKind::kShapeMismatch, "multi-player game tensors have the wrong size");
  }
  for (std::size_t c = 0; c < cells; ++c) {
    const std::span<const double> row(g.transitions.data() + c * g.S, g.S);
    if (!is_distribution(row, kProbTolerance)) {
      throw Error(ErrorKind::kNonStochasticRow,
                  "transition row " + std::to_string(c) + " is not a distribution");
    }
  }
  for (int i = 0; i < m; ++i) {
    if (g.rewards[i].size() != cells) {
      throw Error(ErrorKind::kShapeMismatch, "reward tensor has the wrong size");
    }
    for (double r : g.rewards[i]) {
      if (!(r >= 0.0 && r <= 1.0)) {
        throw Error(ErrorKind::kRewardOutOfRange,
                    "reward of player " + std::to_string(i) + " outside [0, 1]");
      }
    }
    if (!(g.sigmas[i] > 0.0 && g.sigmas[i] <= 1.0)) {
      throw Error(ErrorKind::kBadSigma, "sigma must lie in (0, 1]");
    }
  }
  if (!is_distribution(g.initial_dist, kProbTolerance)) {
    throw Error(ErrorKind::kBadInitialDist, "initial distribution is invalid");
  }
}

MultiEmpiricalModel estimate_multi_model(const MultiGame& truth,
                                         const std::vector<std::int64_t>& n,
                                         const std::vector<std::int64_t>& n_next,
                                         double delta, std::int64_t K) {
  validate_multi_game(truth);
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorKind::kBadDelta, "delta must lie in (0, 1)");
  }
  const std::size_t cells = static_cast<std::size_t>(truth.H) * truth.S * truth.num_joint();
  if (n.size() != cells || n_next.size() != cells * truth.S || K < 1) {
    throw Error(ErrorKind::kShapeMismatch, "count tensors have the wrong size");
  }
  MultiEmpiricalModel out;
  out.model = truth;
  out.n = n;
  out.delta = delta;
  out.K = K;
  const int S = truth.S;
  for (std::size_t c = 0; c < cells; ++c) {
    double* row = out.model.transitions.data() + c * S;
    if (n[c] == 0) {
      std::fill(row, row + S, 1.0 / S);
      for (auto& r : out.model.rewards) r[c] = 0.0;
      continue;
    }
    for (int sp = 0; sp < S; ++sp) {
      row[sp] = static_cast<double>(n_next[c * S + sp]) / static_cast<double>(n[c]);
    }
  }
  return out;
}

MultiEmpiricalModel embed_two_player(const EmpiricalModel& model, double sigma) {
  const GameDims& d = model.dims;
  MultiEmpiricalModel out;
  MultiGame& g = out.model;
  g.H = d.H;
  g.S = d.S;
  g.action_sizes = {d.A, d.B};
  g.transitions = model.p_hat;
  g.rewards = {model.r_hat, model.r_hat};
  for (std::size_t c = 0; c < d.num_cells(); ++c) {
    g.rewards[1][c] = model.counts.n[c] > 0 ? 1.0 - model.r_hat[c] : 0.0;
  }
  g.sigmas = {sigma, sigma};
  g.initial_dist.assign(d.S, 1.0 / d.S);
  out.n = model.counts.n;
  out.delta = model.delta;
  out.K = model.K;
  return out;
}

double nash_residual(const std::vector<std::vector<double>>& payoffs,
                     const std::vector<int>& action_sizes,
                     const std::vector<std::vector<double>>& strategies) {
  check_payoffs(payoffs, action_sizes);
  if (strategies.size() != action_sizes.size()) {
    throw Error(ErrorKind::kShapeMismatch, "one strategy per player is required");
  }
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    if (strategies[i].size() != static_cast<std::size_t>(action_sizes[i])) {
      throw Error(ErrorKind::kShapeMismatch, "strategy has the wrong size");
    }
  }
  const auto dev = deviation_values(payoffs, action_sizes, strategies);
  double residual = 0.0;
  for (std::size_t i = 0; i < dev.size(); ++i) {
    double u = 0.0;
    for (std::size_t a = 0; a < dev[i].size(); ++a) u += strategies[i][a] * dev[i][a];
    const double best = *std::max_element(dev[i].begin(), dev[i].end());
    residual = std::max(residual, best - u);
  }
  return residual;
}

StageProfile stage_equilibrium(const std::vector<std::vector<double>>& payoffs,
                               const std::vector<int>& action_sizes, double tol,
                               int max_iters) {
  check_payoffs(payoffs, action_sizes);
  const std::size_t m = action_sizes.size();
  if (m == 1) {
    const auto& u = payoffs[0];
    const auto best = std::max_element(u.begin(), u.end()) - u.begin();
    return pure_profile(action_sizes, static_cast<std::size_t>(best));
  }
  if (m == 2 && is_constant_sum(payoffs)) {
    const MatrixNash nash =
        solve_zero_sum(payoffs[0], action_sizes[0], action_sizes[1], tol);
    StageProfile out;
    out.strategies = {nash.w, nash.z};
    out.residual = nash_residual(payoffs, action_sizes, out.strategies);
    return out;
  }
  if (const auto pure = best_pure_equilibrium(payoffs, action_sizes, 0.0)) {
    StageProfile out = pure_profile(action_sizes, *pure);
    out.residual = nash_residual(payoffs, action_sizes, out.strategies);
    return out;
  }
  return regret_matching(payoffs, action_sizes, std::max(1, max_iters));
}

StageSolver zero_sum_stage_solver(double nash_tol) {
  return [nash_tol](const std::vector<std::vector<double>>& payoffs,
                    const std::vector<int>& sizes) {
    check_payoffs(payoffs, sizes);
    if (sizes.size() != 2) {
      throw Error(ErrorKind::kShapeMismatch, "zero-sum stage solver needs two players");
    }
    const MatrixNash nash = solve_zero_sum(payoffs[0], sizes[0], sizes[1], nash_tol);
    StageProfile out;
    out.strategies = {nash.w, nash.z};
    out.residual = exploitability(payoffs[0], sizes[0], sizes[1], nash.w, nash.z);
    return out;
  };
}

StageSolver general_stage_solver(double tol, int max_iters) {
  return [tol, max_iters](const std::vector<std::vector<double>>& payoffs,
                          const std::vector<int>& sizes) {
    return stage_equilibrium(payoffs, sizes, tol, max_iters);
  };
}

MultiSolveResult multi_rtz_vi_lcb(const MultiEmpiricalModel& model,
                                  const PenaltyParams& params,
                                  const StageSolver& solver,
                                  std::optional<double> max_residual) {
  const MultiGame& g = model.model;
  validate_multi_game(g);
  if (!solver) throw Error(ErrorKind::kBadParams, "a stage solver is required");
  const int m = g.num_players();
  const std::size_t J = g.num_joint();
  const std::size_t cells = static_cast<std::size_t>(g.H) * g.S * J;
  if (model.n.size() != cells) {
    throw Error(ErrorKind::kShapeMismatch, "count tensor has the wrong size");
  }
  penalty(1, 0.0, params, g.H);  // validates params
  const double H = g.H;

  MultiSolveResult out;
  out.H = g.H;
  out.S = g.S;
  out.action_sizes = g.action_sizes;
  out.values.assign(m, std::vector<double>(static_cast<std::size_t>(g.H + 1) * g.S, 0.0));
  out.q.assign(m, std::vector<double>(cells, 0.0));
  out.policies.resize(m);
  for (int i = 0; i < m; ++i) {
    out.policies[i].assign(static_cast<std::size_t>(g.H) * g.S * g.action_sizes[i], 0.0);
  }
  out.residuals.assign(static_cast<std::size_t>(g.H) * g.S, 0.0);

  std::vector<std::vector<double>> stage(m, std::vector<double>(J));
  for (int h = g.H - 1; h >= 0; --h) {
    std::vector<TvBackup> next;
    next.reserve(m);
    for (int i = 0; i < m; ++i) {
      next.emplace_back(std::span<const double>(
          out.values[i].data() + static_cast<std::size_t>(h + 1) * g.S, g.S));
    }
    for (int s = 0; s < g.S; ++s) {
      for (std::size_t j = 0; j < J; ++j) {
        const std::size_t c = g.cell(h, s, j);
        const std::span<const double> row(g.transitions.data() + c * g.S, g.S);
        const std::int64_t n = model.n[c];
        for (int i = 0; i < m; ++i) {
          const double beta =
              n == 0 ? H : penalty(n, next[i].variance(row), params, g.H);
          const double q = std::min(
              g.rewards[i][c] + next[i].worst(row, g.sigmas[i]) + beta, H);
          out.q[i][c] = q;
          stage[i][j] = q;
        }
      }
      const StageProfile prof = solver(stage, g.action_sizes);
      check_profile(prof, g.action_sizes, h, s, max_residual);
      out.residuals[static_cast<std::size_t>(h) * g.S + s] = prof.residual;
      for (int i = 0; i < m; ++i) {
        std::copy(prof.strategies[i].begin(), prof.strategies[i].end(),
                  out.policies[i].begin() +
                      (static_cast<std::size_t>(h) * g.S + s) * g.action_sizes[i]);
      }
      // V_i = E_{joint ~ profile} Q_i
      std::vector<int> act(m, 0);
      std::vector<double> v(m, 0.0);
      for (std::size_t j = 0; j < J; ++j) {
        double w = 1.0;
        for (int i = 0; i < m; ++i) w *= prof.strategies[i][act[i]];
        if (w != 0.0) {
          for (int i = 0; i < m; ++i) v[i] += w * stage[i][j];
        }
        for (int k = m - 1; k >= 0; --k) {
          if (++act[k] < g.action_sizes[k]) break;
          act[k] = 0;
        }
      }
      for (int i = 0; i < m; ++i) {
        out.values[i][static_cast<std::size_t>(h) * g.S + s] = v[i];
      }
    }
  }
  return out;
}

}  // namespace rmg
