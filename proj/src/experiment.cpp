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

#include "rmg/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include "rmg/dataset.hpp"
#include "rmg/error.hpp"
#include "rmg/evaluation.hpp"
#include "rmg/instances.hpp"
#include "rmg/rng.hpp"
#include "rmg/serialize.hpp"
#include "rmg/solver.hpp"

namespace rmg {
namespace {

constexpr std::uint64_t kDataTag = 0x44415441;  // "DATA"
constexpr std::uint64_t kSubTag = 0x53554231;   // "SUB1"

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

MarkovGame load_game(const ExperimentConfig& c, std::uint64_t seed) {
  MarkovGame game;
  if (c.source == GameSource::kFile) {
    game = game_from_json(load_json(c.game_path));
  } else {
    game = random_game(c.S, c.A, c.B, c.H, c.game_seed.value_or(seed));
  }
  game.sigma_plus = c.sigma_plus;
  game.sigma_minus = c.sigma_minus;
  validate_game(game);
  return game;
}

double mean(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double stddev(const std::vector<double>& x) {
  if (x.size() < 2) return 0.0;
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return std::sqrt(s / static_cast<double>(x.size() - 1));
}

std::vector<double> ranks(const std::vector<double>& x) {
  std::vector<std::size_t> idx(x.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> r(x.size());
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}

Json fit_json(const std::optional<LogLogFit>& f) {
  if (!f) return nullptr;
  Json j;
  j["slope"] = f->slope;
  j["intercept"] = f->intercept;
  j["r_squared"] = f->r_squared;
  return j;
}

}  // namespace

void validate_config(const ExperimentConfig& c) {
  if (c.k_grid.empty() || c.seeds.empty()) {
    throw Error(ErrorKind::kBadParams, "K grid and seed list must be nonempty");
  }
  for (std::int64_t k : c.k_grid) {
    if (k < 1) throw Error(ErrorKind::kBadParams, "K values must be positive");
  }
  if (!(c.delta > 0.0 && c.delta < 1.0)) {
    throw Error(ErrorKind::kBadDelta, "delta must lie in (0, 1)");
  }
  if (!(c.c_n >= 0.0)) throw Error(ErrorKind::kBadParams, "c_n must be nonnegative");
  if (c.source == GameSource::kRandom &&
      (c.S < 1 || c.A < 1 || c.B < 1 || c.H < 1)) {
    throw Error(ErrorKind::kBadParams, "game sizes must be positive");
  }
}

LogLogFit fit_loglog_slope(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) {
    throw Error(ErrorKind::kTooFewPoints, "a slope fit needs at least two points");
  }
  std::vector<double> x, y;
  for (const auto& [k, g] : points) {
    if (!(k > 0.0) || !(g > 0.0)) {
      throw Error(ErrorKind::kNonPositiveValue, "log-log fit needs positive values");
    }
    x.push_back(std::log(k));
    y.push_back(std::log(g));
  }
  const double mx = mean(x);
  const double my = mean(y);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) {
    throw Error(ErrorKind::kTooFewPoints, "a slope fit needs two distinct K values");
  }
  LogLogFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw Error(ErrorKind::kTooFewPoints, "rank correlation needs two paired points");
  }
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double mx = mean(rx);
  const double my = mean(ry);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

ExperimentSummary summarize(std::vector<ExperimentRow> rows) {
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.seed != b.seed ? a.seed < b.seed : a.K < b.K;
  });
  ExperimentSummary out;
  std::map<std::int64_t, std::vector<const ExperimentRow*>> by_k;
  for (const auto& r : rows) by_k[r.K].push_back(&r);
  std::vector<std::pair<double, double>> pts_lcb, pts_vi;
  bool lcb_positive = true, vi_positive = true;
  for (const auto& [k, group] : by_k) {
    std::vector<double> lcb, vi, t_lcb, t_vi;
    for (const auto* r : group) {
      lcb.push_back(r->gap_lcb);
      vi.push_back(r->gap_vi);
      t_lcb.push_back(r->runtime_ms_lcb);
      t_vi.push_back(r->runtime_ms_vi);
    }
    KSummary s;
    s.K = k;
    s.runs = static_cast<int>(group.size());
    s.mean_gap_lcb = mean(lcb);
    s.std_gap_lcb = stddev(lcb);
    s.mean_gap_vi = mean(vi);
    s.std_gap_vi = stddev(vi);
    s.mean_runtime_ms_lcb = mean(t_lcb);
    s.mean_runtime_ms_vi = mean(t_vi);
    out.per_k.push_back(s);
    pts_lcb.emplace_back(static_cast<double>(k), s.mean_gap_lcb);
    pts_vi.emplace_back(static_cast<double>(k), s.mean_gap_vi);
    lcb_positive = lcb_positive && s.mean_gap_lcb > 0.0;
    vi_positive = vi_positive && s.mean_gap_vi > 0.0;
  }
  if (out.per_k.size() >= 2) {
    if (lcb_positive) out.fit_lcb = fit_loglog_slope(pts_lcb);
    if (vi_positive) out.fit_vi = fit_loglog_slope(pts_vi);
    std::vector<double> ks, gaps;
    for (const auto& s : out.per_k) {
      ks.push_back(static_cast<double>(s.K));
      gaps.push_back(s.mean_gap_lcb);
    }
    out.spearman_lcb = spearman(ks, gaps);
  }
  out.rows = std::move(rows);
  return out;
}

PolicyPair behavior_policy(const MarkovGame& game, Behavior behavior,
                           double eps) {
  const GameDims& d = game.dims;
  PolicyPair uniform = uniform_policy_pair(d.S, d.A, d.B, d.H);
  if (behavior == Behavior::kUniform) return uniform;
  if (!(eps >= 0.0 && eps <= 1.0)) {
    throw Error(ErrorKind::kBadParams, "behavior eps must lie in [0, 1]");
  }
  PolicyPair mix = rtz_vi(game, game.sigma_plus, game.sigma_minus).policy;
  for (std::size_t i = 0; i < mix.mu.size(); ++i) {
    mix.mu[i] = (1.0 - eps) * mix.mu[i] + eps * uniform.mu[i];
  }
  for (std::size_t i = 0; i < mix.nu.size(); ++i) {
    mix.nu[i] = (1.0 - eps) * mix.nu[i] + eps * uniform.nu[i];
  }
  return mix;
}

ExperimentRow run_cell(const MarkovGame& game, std::uint64_t seed,
                       std::int64_t K, const ExperimentConfig& c) {
  const GameDims& d = game.dims;
  const PolicyPair behavior = behavior_policy(game, c.behavior, c.behavior_eps);
  const std::uint64_t data_seed =
      Rng::stream_id(kDataTag, seed, static_cast<std::uint64_t>(K));
  const Dataset data =
      sample_dataset(game, behavior, game.initial_dist, K, data_seed);

  TransitionCounts counts;
  if (c.subsample) {
    const std::uint64_t sub_seed =
        Rng::stream_id(kSubTag, seed, static_cast<std::uint64_t>(K));
    counts = count_transitions(two_stage_subsample(data, c.delta, sub_seed).data.tuples, d);
  } else {
    counts = count_transitions(data.tuples, d);
  }
  const EmpiricalModel model = estimate_model(counts, game.rewards, c.delta, K);

  ExperimentRow row;
  row.seed = seed;
  row.K = K;
  auto start = std::chrono::steady_clock::now();
  const SolveResult lcb = rtz_vi_lcb(model, c.sigma_plus, c.sigma_minus,
                                     PenaltyParams{c.c_n, c.delta, K}, c.nash_tol);
  row.runtime_ms_lcb = c.timing ? elapsed_ms(start) : 0.0;
  start = std::chrono::steady_clock::now();
  const SolveResult vi = rtz_vi(model, c.sigma_plus, c.sigma_minus, c.nash_tol);
  row.runtime_ms_vi = c.timing ? elapsed_ms(start) : 0.0;

  const SolveResult exact =
      rtz_vi(game, game.sigma_plus, game.sigma_minus, c.nash_tol);
  row.gap_lcb = nash_gap(game, lcb.policy, exact).gap;
  row.gap_vi = nash_gap(game, vi.policy, exact).gap;
  return row;
}

int resolve_threads(int requested) {
  if (const char* env = std::getenv("RMG_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  return std::max(1, requested);
}

ExperimentSummary run_experiment(const ExperimentConfig& c) {
  validate_config(c);
  struct Cell {
    std::uint64_t seed;
    std::int64_t K;
  };
  std::vector<Cell> cells;
  for (std::uint64_t seed : c.seeds) {
    for (std::int64_t k : c.k_grid) cells.push_back({seed, k});
  }

  std::vector<std::optional<ExperimentRow>> results(cells.size());
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::exception_ptr first_error;
  std::size_t first_error_cell = cells.size();

  auto worker = [&] {
    // Games are cached per seed within a worker; a worker takes cells in
    // order, so each seed's game is built at most once per stretch.
    std::optional<std::uint64_t> cached_seed;
    MarkovGame game;
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        if (!cached_seed || *cached_seed != cells[i].seed) {
          game = load_game(c, cells[i].seed);
          cached_seed = cells[i].seed;
        }
        results[i] = run_cell(game, cells[i].seed, cells[i].K, c);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (i < first_error_cell) {
          first_error_cell = i;
          first_error = std::current_exception();
        }
      }
    }
  };
  const int threads =
      std::min<int>(resolve_threads(c.threads), static_cast<int>(cells.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::vector<ExperimentRow> rows;
  for (const auto& r : results) {
    if (r) rows.push_back(*r);
  }
  ExperimentSummary summary = summarize(std::move(rows));
  if (!c.out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(c.out_dir, ec);
    if (ec) throw Error(ErrorKind::kIo, "cannot create " + c.out_dir);
    write_results_csv(c.out_dir + "/results.csv", summary.rows);
    if (!first_error) {
      write_summary_json(c.out_dir + "/summary.json", summary, c);
    }
  }
  if (first_error) std::rethrow_exception(first_error);
  return summary;
}

void write_results_csv(const std::string& path,
                       const std::vector<ExperimentRow>& rows) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (f == nullptr) throw Error(ErrorKind::kIo, "cannot write " + path);
  std::fprintf(f, "%s\n", kResultsHeader);
  for (const auto& r : rows) {
    std::fprintf(f, "%llu,%lld,%.17g,%.17g,%.17g,%.17g\n",
                 static_cast<unsigned long long>(r.seed),
                 static_cast<long long>(r.K), r.gap_lcb, r.gap_vi,
                 r.runtime_ms_lcb, r.runtime_ms_vi);
  }
  if (std::fclose(f) != 0) throw Error(ErrorKind::kIo, "cannot write " + path);
}

std::vector<ExperimentRow> read_results_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot read " + path);
  std::string line;
  if (!std::getline(in, line) || line != kResultsHeader) {
    throw Error(ErrorKind::kParse, path + ": unexpected header");
  }
  std::vector<ExperimentRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    ExperimentRow r;
    unsigned long long seed = 0;
    long long k = 0;
    if (std::sscanf(line.c_str(), "%llu,%lld,%lf,%lf,%lf,%lf", &seed, &k,
                    &r.gap_lcb, &r.gap_vi, &r.runtime_ms_lcb,
                    &r.runtime_ms_vi) != 6) {
      throw Error(ErrorKind::kParse,
                  path + ": bad row at line " + std::to_string(line_no));
    }
    r.seed = seed;
    r.K = k;
    rows.push_back(r);
  }
  return rows;
}

void write_summary_json(const std::string& path, const ExperimentSummary& s,
                        const ExperimentConfig& c) {
  Json j;
  Json cfg;
  cfg["source"] = c.source == GameSource::kRandom ? "random" : "file";
  if (c.source == GameSource::kRandom) {
    cfg["S"] = c.S;
    cfg["A"] = c.A;
    cfg["B"] = c.B;
    cfg["H"] = c.H;
    if (c.game_seed) cfg["game_seed"] = *c.game_seed;
  } else {
    cfg["game_path"] = c.game_path;
  }
  cfg["k_grid"] = c.k_grid;
  cfg["seeds"] = c.seeds;
  cfg["delta"] = c.delta;
  cfg["c_n"] = c.c_n;
  cfg["sigma_plus"] = c.sigma_plus;
  cfg["sigma_minus"] = c.sigma_minus;
  cfg["behavior"] = c.behavior == Behavior::kUniform ? "uniform" : "nash-mixture";
  if (c.behavior == Behavior::kNashMixture) cfg["behavior_eps"] = c.behavior_eps;
  cfg["subsample"] = c.subsample;
  j["config"] = cfg;
  Json per_k = Json::array();
  for (const auto& k : s.per_k) {
    Json e;
    e["K"] = k.K;
    e["runs"] = k.runs;
    e["mean_gap_lcb"] = k.mean_gap_lcb;
    e["std_gap_lcb"] = k.std_gap_lcb;
    e["mean_gap_vi"] = k.mean_gap_vi;
    e["std_gap_vi"] = k.std_gap_vi;
    e["mean_runtime_ms_lcb"] = k.mean_runtime_ms_lcb;
    e["mean_runtime_ms_vi"] = k.mean_runtime_ms_vi;
    per_k.push_back(e);
  }
  j["per_k"] = per_k;
  j["fit_lcb"] = fit_json(s.fit_lcb);
  j["fit_vi"] = fit_json(s.fit_vi);
  j["spearman_lcb"] = s.spearman_lcb ? Json(*s.spearman_lcb) : Json(nullptr);
  save_json(path, j);
}

}  // namespace rmg
