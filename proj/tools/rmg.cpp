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

// Command-line harness: instance generation, data sampling, solving,
// evaluation and K sweeps. Errors go to stderr as one JSON object.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rmg/dataset.hpp"
#include "rmg/error.hpp"
#include "rmg/evaluation.hpp"
#include "rmg/experiment.hpp"
#include "rmg/instances.hpp"
#include "rmg/rng.hpp"
#include "rmg/serialize.hpp"
#include "rmg/solver.hpp"

namespace {

using rmg::Json;

void emit(const Json& j, const std::string& out) {
  if (out.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    rmg::save_json(out, j);
  }
}

int report_error(std::string_view kind, const std::string& message) {
  Json err;
  err["error"] = std::string(kind);
  err["message"] = message;
  std::cerr << err.dump() << "\n";
  return 2;
}

struct Common {
  std::uint64_t seed = 0;
  double delta = 0.05;
  double c_n = 1.0;
  double sigma_plus = 0.2;
  double sigma_minus = 0.2;
  std::string out;
  int threads = 1;
};

void add_sigmas(CLI::App* cmd, Common& c) {
  cmd->add_option("--sigma-plus", c.sigma_plus, "TV radius of the max player")
      ->capture_default_str();
  cmd->add_option("--sigma-minus", c.sigma_minus, "TV radius of the min player")
      ->capture_default_str();
}

rmg::BitString parse_bits(const std::string& text) {
  rmg::BitString bits;
  for (char ch : text) {
    if (ch != '0' && ch != '1') {
      throw rmg::Error(rmg::ErrorKind::kBadParams, "phi must contain only 0 and 1");
    }
    bits.push_back(static_cast<std::uint8_t>(ch - '0'));
  }
  return bits;
}

std::string bits_to_string(const rmg::BitString& bits) {
  std::string s;
  for (auto b : bits) s.push_back(static_cast<char>('0' + b));
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust two-player zero-sum Markov games: offline solvers and experiments"};
  app.require_subcommand(1);
  Common c;

  // generate
  int S = 20, A = 2, B = 2, H = 30;
  auto* generate = app.add_subcommand("generate", "Random game as JSON");
  generate->add_option("--S", S)->capture_default_str();
  generate->add_option("--A", A)->capture_default_str();
  generate->add_option("--B", B)->capture_default_str();
  generate->add_option("--H", H)->capture_default_str();
  generate->add_option("--seed", c.seed)->capture_default_str();
  generate->add_option("--out", c.out, "Output file (stdout if empty)");
  add_sigmas(generate, c);

  // hard-instance
  int hard_H = 16, hard_S = 2;
  double hard_sigma = 0.1, eps = 0.1, C = 1.0, c5 = 0.1;
  std::string phi_text;
  std::optional<std::uint64_t> phi_seed;
  bool list_codebook = false;
  auto* hard = app.add_subcommand("hard-instance", "Lower-bound instance as JSON");
  hard->add_option("--H", hard_H)->capture_default_str();
  hard->add_option("--S", hard_S, "States including padding")->capture_default_str();
  hard->add_option("--sigma", hard_sigma, "Radius of the max player")
      ->capture_default_str();
  hard->add_option("--epsilon", eps)->capture_default_str();
  hard->add_option("--C", C)->capture_default_str();
  hard->add_option("--c5", c5)->capture_default_str();
  hard->add_option("--phi", phi_text, "Bit string of length H");
  hard->add_option("--phi-seed", phi_seed, "Draw phi from this seed");
  hard->add_flag("--codebook", list_codebook,
                 "Print the greedy codebook for H instead of an instance");
  hard->add_option("--out", c.out);

  // sample
  std::string game_path, data_path;
  std::int64_t K = 100;
  bool subsample = false;
  auto* sample = app.add_subcommand("sample", "Sample an offline dataset (CSV)");
  sample->add_option("--game", game_path)->required();
  sample->add_option("--k", K, "Episodes")->capture_default_str();
  sample->add_option("--seed", c.seed)->capture_default_str();
  sample->add_flag("--subsample", subsample, "Apply two-stage subsampling");
  sample->add_option("--delta", c.delta)->capture_default_str();
  sample->add_option("--threads", c.threads)->capture_default_str();
  sample->add_option("--out", c.out)->required();

  // solve
  std::string method = "lcb";
  std::optional<std::int64_t> k_override;
  auto* solve = app.add_subcommand("solve", "Solve on the empirical model of a dataset");
  solve->add_option("--game", game_path, "Game supplying rewards and sizes")->required();
  solve->add_option("--data", data_path)->required();
  solve->add_option("--method", method)
      ->check(CLI::IsMember({"lcb", "vi"}))
      ->capture_default_str();
  solve->add_option("--delta", c.delta)->capture_default_str();
  solve->add_option("--cn", c.c_n)->capture_default_str();
  solve->add_option("--k", k_override, "Episode count in the penalty (default: dataset K)");
  add_sigmas(solve, c);
  solve->add_option("--out", c.out);

  // evaluate
  std::string policy_path;
  auto* evaluate = app.add_subcommand("evaluate", "Nash gap of a policy on a game");
  evaluate->add_option("--game", game_path)->required();
  evaluate->add_option("--policy", policy_path, "Solve result or policy JSON")->required();
  evaluate->add_option("--out", c.out);

  // experiment
  rmg::ExperimentConfig cfg;
  std::vector<std::int64_t> k_grid{128, 256, 512, 1024};
  int num_seeds = 10;
  bool no_subsample = false, no_timing = false;
  std::string behavior = "uniform";
  auto* experiment = app.add_subcommand("experiment", "Sweep K over seeds");
  experiment->add_option("--S", cfg.S)->capture_default_str();
  experiment->add_option("--A", cfg.A)->capture_default_str();
  experiment->add_option("--B", cfg.B)->capture_default_str();
  experiment->add_option("--H", cfg.H)->capture_default_str();
  experiment->add_option("--game", game_path, "Use this game for every run");
  experiment->add_option("--game-seed", cfg.game_seed, "One random game for every run");
  experiment->add_option("--k", k_grid, "K grid")->delimiter(',')->capture_default_str();
  experiment->add_option("--seeds", num_seeds, "Runs per K")->capture_default_str();
  experiment->add_option("--seed", c.seed, "First seed")->capture_default_str();
  experiment->add_option("--delta", c.delta)->capture_default_str();
  experiment->add_option("--cn", c.c_n)->capture_default_str();
  add_sigmas(experiment, c);
  experiment->add_option("--behavior", behavior)
      ->check(CLI::IsMember({"uniform", "nash-mixture"}))
      ->capture_default_str();
  experiment->add_option("--behavior-eps", cfg.behavior_eps)->capture_default_str();
  experiment->add_flag("--no-subsample", no_subsample, "Use every sampled transition");
  experiment->add_flag("--no-timing", no_timing, "Zero the runtime columns");
  experiment->add_option("--threads", c.threads)->capture_default_str();
  experiment->add_option("--out", c.out, "Output directory")->required();

  // slope
  std::string results_path, column = "gap_lcb";
  std::vector<std::string> points;
  auto* slope = app.add_subcommand("slope", "Log-log slope of gap against K");
  slope->add_option("--in", results_path, "results.csv from experiment");
  slope->add_option("--column", column)
      ->check(CLI::IsMember({"gap_lcb", "gap_vi"}))
      ->capture_default_str();
  slope->add_option("--points", points, "K:gap pairs")->delimiter(',');
  slope->add_option("--out", c.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    return report_error("Usage", e.what());
  }

  try {
    if (*generate) {
      const auto game = rmg::random_game(S, A, B, H, c.seed, c.sigma_plus, c.sigma_minus);
      emit(rmg::game_to_json(game), c.out);
    } else if (*hard) {
      if (list_codebook) {
        Json j = Json::array();
        for (const auto& w : rmg::gv_codebook(hard_H)) j.push_back(bits_to_string(w));
        emit(j, c.out);
        return 0;
      }
      rmg::HardInstanceParams p;
      p.H = hard_H;
      p.S = hard_S;
      p.sigma = hard_sigma;
      p.epsilon = eps;
      p.C = C;
      p.c5 = c5;
      if (!phi_text.empty()) {
        p.phi = parse_bits(phi_text);
      } else if (phi_seed) {
        rmg::Rng rng(*phi_seed, 0);
        for (int h = 0; h < hard_H; ++h) p.phi.push_back(static_cast<std::uint8_t>(rng.below(2)));
      }
      const auto inst = rmg::hard_rmdp(p);
      Json j = rmg::game_to_json(inst.game);
      j["hard_instance"] = {{"p", inst.p},
                            {"q", inst.q},
                            {"Delta", inst.delta},
                            {"regime", inst.regime == rmg::HardRegime::kSmallSigma
                                           ? "small-sigma"
                                           : "large-sigma"},
                            {"phi", bits_to_string(inst.phi)}};
      emit(j, c.out);
    } else if (*sample) {
      const auto game = rmg::game_from_json(rmg::load_json(game_path));
      const auto behavior_policy =
          rmg::uniform_policy_pair(game.dims.S, game.dims.A, game.dims.B, game.dims.H);
      auto data = rmg::sample_dataset(game, behavior_policy, game.initial_dist, K,
                                      c.seed, rmg::resolve_threads(c.threads));
      if (subsample) {
        auto sub = rmg::two_stage_subsample(data, c.delta, c.seed);
        for (const auto& w : sub.warnings) {
          std::cerr << Json{{"warning", w}}.dump() << "\n";
        }
        data = std::move(sub.data);
      }
      rmg::write_dataset(c.out, data);
    } else if (*solve) {
      const auto game = rmg::game_from_json(rmg::load_json(game_path));
      const auto data = rmg::read_dataset(data_path);
      if (!(data.dims == game.dims)) {
        throw rmg::Error(rmg::ErrorKind::kShapeMismatch, "dataset does not match the game");
      }
      const std::int64_t k = k_override.value_or(data.meta.K);
      const auto counts = rmg::count_transitions(data.tuples, game.dims);
      const auto model = rmg::estimate_model(counts, game.rewards, c.delta, k);
      const auto result =
          method == "lcb"
              ? rmg::rtz_vi_lcb(model, c.sigma_plus, c.sigma_minus,
                                rmg::PenaltyParams{c.c_n, c.delta, k})
              : rmg::rtz_vi(model, c.sigma_plus, c.sigma_minus);
      emit(rmg::solve_result_to_json(result), c.out);
    } else if (*evaluate) {
      const auto game = rmg::game_from_json(rmg::load_json(game_path));
      const auto policy = rmg::policy_from_json(rmg::load_json(policy_path), game.dims);
      emit(rmg::gap_report_to_json(rmg::nash_gap(game, policy)), c.out);
    } else if (*experiment) {
      if (!game_path.empty()) {
        cfg.source = rmg::GameSource::kFile;
        cfg.game_path = game_path;
      }
      cfg.k_grid = k_grid;
      cfg.seeds.clear();
      for (int i = 0; i < num_seeds; ++i) cfg.seeds.push_back(c.seed + i);
      cfg.delta = c.delta;
      cfg.c_n = c.c_n;
      cfg.sigma_plus = c.sigma_plus;
      cfg.sigma_minus = c.sigma_minus;
      cfg.behavior = behavior == "uniform" ? rmg::Behavior::kUniform
                                           : rmg::Behavior::kNashMixture;
      cfg.subsample = !no_subsample;
      cfg.timing = !no_timing;
      cfg.threads = c.threads;
      cfg.out_dir = c.out;
      const auto summary = rmg::run_experiment(cfg);
      std::cout << rmg::load_json(c.out + "/summary.json").dump(2) << "\n";
      (void)summary;
    } else if (*slope) {
      std::vector<std::pair<double, double>> pts;
      if (!results_path.empty()) {
        const auto s = rmg::summarize(rmg::read_results_csv(results_path));
        for (const auto& k : s.per_k) {
          pts.emplace_back(static_cast<double>(k.K),
                           column == "gap_lcb" ? k.mean_gap_lcb : k.mean_gap_vi);
        }
      }
      for (const auto& p : points) {
        const auto colon = p.find(':');
        if (colon == std::string::npos) {
          throw rmg::Error(rmg::ErrorKind::kParse, "points must look like K:gap");
        }
        try {
          pts.emplace_back(std::stod(p.substr(0, colon)), std::stod(p.substr(colon + 1)));
        } catch (const std::exception&) {
          throw rmg::Error(rmg::ErrorKind::kParse, "bad point '" + p + "'");
        }
      }
      const auto fit = rmg::fit_loglog_slope(pts);
      emit(Json{{"slope", fit.slope}, {"intercept", fit.intercept},
                {"r_squared", fit.r_squared}, {"points", pts.size()}},
           c.out);
    }
  } catch (const rmg::Error& e) {
    return report_error(rmg::error_kind_name(e.kind()), e.what());
  } catch (const std::exception& e) {
    return report_error("Internal", e.what());
  }
  return 0;
}
