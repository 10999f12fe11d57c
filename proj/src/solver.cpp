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

#include "rmg/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>

#include "rmg/error.hpp"
#include "rmg/uncertainty.hpp"

namespace rmg {
namespace {

// Rounding slack for the invariant checks: stage values are mixtures of
// entries already clipped to [0, H].
constexpr double kCheckSlack = 1e-9;

std::atomic<int> g_checks{-1};
std::atomic<std::uint64_t> g_solves_checked{0};
std::atomic<std::uint64_t> g_steps_checked{0};

void check_sigma(double sigma, const char* name) {
  if (!(sigma > 0.0 && sigma <= 1.0)) {
    throw Error(ErrorKind::kBadSigma, std::string(name) + " must lie in (0, 1]");
  }
}

struct ModelView {
  GameDims dims;
  const std::vector<double>* p;
  const std::vector<double>* r;
  const std::vector<std::int64_t>* n;  // null: no penalty
};

void check_step(const SolveResult& out, int h, double sigma_plus) {
  const GameDims& d = out.dims;
  const double H = d.H;
  double lo = H;
  double hi = 0.0;
  for (int s = 0; s < d.S; ++s) {
    const double vp = out.v_plus_at(h, s);
    const double vm = out.v_minus_at(h, s);
    if (vp < -kCheckSlack || vp > H + kCheckSlack || vm < -kCheckSlack ||
        vm > H + kCheckSlack) {
      throw Error(ErrorKind::kInvariantViolation,
                  "value outside [0, H] at h=" + std::to_string(h) +
                      ", s=" + std::to_string(s));
    }
    lo = std::min(lo, vp);
    hi = std::max(hi, vp);
  }
  const double bound = range_bound(sigma_plus, d.H, h);
  if (hi - lo > bound + kCheckSlack) {
    throw Error(ErrorKind::kInvariantViolation,
                "optimistic value spread " + std::to_string(hi - lo) +
                    " exceeds range bound " + std::to_string(bound) +
                    " at h=" + std::to_string(h));
  }
  g_steps_checked.fetch_add(1, std::memory_order_relaxed);
}

SolveResult backward_induction(const ModelView& m, double sigma_plus,
                               double sigma_minus, const PenaltyParams* params,
                               double nash_tol) {
  check_sigma(sigma_plus, "sigma_plus");
  check_sigma(sigma_minus, "sigma_minus");
  if (!(nash_tol > 0.0)) {
    throw Error(ErrorKind::kBadParams, "nash_tol must be positive");
  }
  const GameDims& d = m.dims;
  const double H = d.H;
  const bool checks = params != nullptr && invariant_checks_enabled();

  SolveResult out;
  out.dims = d;
  out.v_plus.assign(static_cast<std::size_t>(d.H + 1) * d.S, 0.0);
  out.v_minus.assign(static_cast<std::size_t>(d.H + 1) * d.S, 0.0);
  out.q_plus.assign(d.num_cells(), 0.0);
  out.q_minus.assign(d.num_cells(), 0.0);
  out.plus_policy = make_policy_pair(d);
  out.minus_policy = make_policy_pair(d);
  out.diagnostics.max_penalty_plus.assign(d.H, 0.0);
  out.diagnostics.max_penalty_minus.assign(d.H, 0.0);
  out.diagnostics.nash_tol = nash_tol;

  const std::size_t stage_size = static_cast<std::size_t>(d.A) * d.B;
  for (int h = d.H - 1; h >= 0; --h) {
    const std::span<const double> next_plus(
        out.v_plus.data() + static_cast<std::size_t>(h + 1) * d.S, d.S);
    const std::span<const double> next_minus(
        out.v_minus.data() + static_cast<std::size_t>(h + 1) * d.S, d.S);
    const TvBackup plus(next_plus);
    const TvBackup minus(next_minus);
    double& max_beta_plus = out.diagnostics.max_penalty_plus[h];
    double& max_beta_minus = out.diagnostics.max_penalty_minus[h];

    for (int s = 0; s < d.S; ++s) {
      const std::size_t base = d.stage(h, s);
      for (std::size_t ab = 0; ab < stage_size; ++ab) {
        const std::size_t cell = base + ab;
        const std::span<const double> row(m.p->data() + cell * d.S, d.S);
        const double r = (*m.r)[cell];
        double qp = r + plus.worst(row, sigma_plus);
        double qm = r + minus.best(row, sigma_minus);
        if (params != nullptr) {
          const std::int64_t n = (*m.n)[cell];
          const double bp =
              n == 0 ? H : penalty(n, plus.variance(row), *params, d.H);
          const double bm =
              n == 0 ? H : penalty(n, minus.variance(row), *params, d.H);
          max_beta_plus = std::max(max_beta_plus, bp);
          max_beta_minus = std::max(max_beta_minus, bm);
          qp = std::min(qp + bp, H);
          qm = std::max(qm - bm, 0.0);
        }
        out.q_plus[cell] = qp;
        out.q_minus[cell] = qm;
      }
      const std::span<const double> q_plus(out.q_plus.data() + base, stage_size);
      const std::span<const double> q_minus(out.q_minus.data() + base, stage_size);
      const MatrixNash np = solve_zero_sum(q_plus, d.A, d.B, nash_tol);
      const MatrixNash nm = solve_zero_sum(q_minus, d.A, d.B, nash_tol);
      out.v_plus[static_cast<std::size_t>(h) * d.S + s] = np.value;
      out.v_minus[static_cast<std::size_t>(h) * d.S + s] = nm.value;
      std::copy(np.w.begin(), np.w.end(), out.plus_policy.mu_row(h, s).begin());
      std::copy(np.z.begin(), np.z.end(), out.plus_policy.nu_row(h, s).begin());
      std::copy(nm.w.begin(), nm.w.end(), out.minus_policy.mu_row(h, s).begin());
      std::copy(nm.z.begin(), nm.z.end(), out.minus_policy.nu_row(h, s).begin());
    }
    if (checks) check_step(out, h, sigma_plus);
  }
  if (checks) g_solves_checked.fetch_add(1, std::memory_order_relaxed);

  out.policy = make_policy_pair(d);
  out.policy.mu = out.minus_policy.mu;
  out.policy.nu = out.plus_policy.nu;
  return out;
}

void check_model(const EmpiricalModel& model) {
  const GameDims& d = model.dims;
  if (model.p_hat.size() != d.num_cells() * d.S ||
      model.r_hat.size() != d.num_cells() ||
      model.counts.n.size() != d.num_cells()) {
    throw Error(ErrorKind::kShapeMismatch, "empirical model tensors have the wrong size");
  }
}

}  // namespace

double penalty(std::int64_t n, double var_hat, const PenaltyParams& params,
               int H) {
  if (!(params.c_n >= 0.0) || params.k < 1 || n < 0 || !(var_hat >= 0.0) ||
      H < 1) {
    throw Error(ErrorKind::kBadParams, "invalid penalty arguments");
  }
  if (!(params.delta > 0.0 && params.delta < 1.0)) {
    throw Error(ErrorKind::kBadDelta, "delta must lie in (0, 1)");
  }
  if (n == 0) return H;
  const double log_term =
      std::log(static_cast<double>(params.k) * H / params.delta);
  const double nn = static_cast<double>(n);
  const double bernstein = std::sqrt(params.c_n * log_term * var_hat / nn);
  const double range = 2.0 * params.c_n * H * log_term / nn;
  return std::min(std::max(bernstein, range), static_cast<double>(H));
}

SolveResult rtz_vi_lcb(const EmpiricalModel& model, double sigma_plus,
                       double sigma_minus, const PenaltyParams& params,
                       double nash_tol) {
  check_model(model);
  penalty(1, 0.0, params, std::max(1, model.dims.H));  // validates params
  const ModelView view{model.dims, &model.p_hat, &model.r_hat, &model.counts.n};
  return backward_induction(view, sigma_plus, sigma_minus, &params, nash_tol);
}

SolveResult rtz_vi(const MarkovGame& game, double sigma_plus,
                   double sigma_minus, double nash_tol) {
  validate_game(game);
  const ModelView view{game.dims, &game.transitions, &game.rewards, nullptr};
  return backward_induction(view, sigma_plus, sigma_minus, nullptr, nash_tol);
}

SolveResult rtz_vi(const EmpiricalModel& model, double sigma_plus,
                   double sigma_minus, double nash_tol) {
  check_model(model);
  const ModelView view{model.dims, &model.p_hat, &model.r_hat, nullptr};
  return backward_induction(view, sigma_plus, sigma_minus, nullptr, nash_tol);
}

double range_bound(double sigma, int H, int h) {
  check_sigma(sigma, "sigma");
  const int remaining = H - h;
  if (remaining <= 0) return 0.0;
  // 1 - (1 - sigma)^k without cancellation for small sigma.
  const double mass = -std::expm1(remaining * std::log1p(-sigma));
  const double bound = (H + 1.0) * mass / sigma;
  return std::min(bound, static_cast<double>(H));
}

void set_invariant_checks(bool enabled) { g_checks.store(enabled ? 1 : 0); }

bool invariant_checks_enabled() {
  int v = g_checks.load(std::memory_order_relaxed);
  if (v < 0) {
    const char* env = std::getenv("RMG_CHECK_INVARIANTS");
    v = (env != nullptr && std::strcmp(env, "0") != 0 && *env != '\0') ? 1 : 0;
    int expected = -1;
    g_checks.compare_exchange_strong(expected, v);
    v = g_checks.load();
  }
  return v == 1;
}

InvariantStats invariant_stats() {
  return {g_solves_checked.load(), g_steps_checked.load()};
}

}  // namespace rmg
