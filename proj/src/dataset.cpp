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

#include "rmg/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "rmg/error.hpp"
#include "rmg/rng.hpp"

namespace rmg {
namespace {

constexpr std::uint64_t kEpisodeTag = 0x45505344;    // "EPSD"
constexpr std::uint64_t kSubsampleTag = 0x53554253;  // "SUBS"

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorKind::kBadDelta, "delta must lie in (0, 1)");
  }
}

std::string tuple_name(std::size_t i, const Transition& t) {
  std::ostringstream out;
  out << "tuple " << i << " (h=" << t.h << ", s=" << t.s << ", a=" << t.a
      << ", b=" << t.b << ", s_next=" << t.s_next << ")";
  return out.str();
}

bool in_bounds(const Transition& t, const GameDims& d) {
  return t.h >= 0 && t.h < d.H && t.s >= 0 && t.s < d.S && t.a >= 0 &&
         t.a < d.A && t.b >= 0 && t.b < d.B && t.s_next >= 0 &&
         t.s_next < d.S;
}

void sample_episodes(const MarkovGame& game, const PolicyPair& behavior,
                     const std::vector<double>& initial, std::uint64_t seed,
                     std::int64_t first, std::int64_t last,
                     std::vector<Transition>& out) {
  const GameDims& d = game.dims;
  for (std::int64_t k = first; k < last; ++k) {
    Rng rng(seed, Rng::stream_id(kEpisodeTag, static_cast<std::uint64_t>(k)));
    int s = rng.categorical(initial);
    Transition* dst = out.data() + k * d.H;
    for (int h = 0; h < d.H; ++h) {
      const int a = rng.categorical(behavior.mu_row(h, s));
      const int b = rng.categorical(behavior.nu_row(h, s));
      const int s_next = rng.categorical(game.row(h, s, a, b));
      dst[h] = Transition{k, h, s, a, b, s_next};
      s = s_next;
    }
  }
}

}  // namespace

void validate_dataset(const Dataset& data) {
  const GameDims& d = data.dims;
  for (std::size_t i = 0; i < data.tuples.size(); ++i) {
    if (!in_bounds(data.tuples[i], d)) {
      throw Error(ErrorKind::kIndexOutOfBounds,
                  tuple_name(i, data.tuples[i]) + " is out of bounds");
    }
  }
  if (data.flattened()) return;
  if (data.tuples.size() != static_cast<std::size_t>(data.meta.K) * d.H) {
    throw Error(ErrorKind::kShapeMismatch,
                "episode dataset must hold exactly K * H tuples");
  }
  for (std::size_t i = 0; i < data.tuples.size(); ++i) {
    const Transition& t = data.tuples[i];
    const auto k = static_cast<std::int64_t>(i / d.H);
    if (t.episode != k || t.h != static_cast<int>(i % d.H)) {
      throw Error(ErrorKind::kShapeMismatch,
                  tuple_name(i, t) + " is out of episode order");
    }
    if (t.h > 0 && data.tuples[i - 1].s_next != t.s) {
      throw Error(ErrorKind::kShapeMismatch,
                  tuple_name(i, t) + " does not continue its episode");
    }
  }
}

Dataset sample_dataset(const MarkovGame& game, const PolicyPair& behavior,
                       const std::vector<double>& initial, std::int64_t K,
                       std::uint64_t seed, int threads) {
  const GameDims& d = game.dims;
  if (K < 1) throw Error(ErrorKind::kBadParams, "K must be at least 1");
  if (!(behavior.dims == d)) {
    throw Error(ErrorKind::kShapeMismatch, "behavior policy does not match the game");
  }
  validate_policy(behavior);
  if (initial.size() != static_cast<std::size_t>(d.S) ||
      !is_distribution(initial, kNormalizeTolerance)) {
    throw Error(ErrorKind::kBadInitialDist, "initial distribution is invalid");
  }

  Dataset data;
  data.dims = d;
  data.meta.seed = seed;
  data.meta.K = K;
  data.meta.stage = "episodes";
  data.tuples.resize(static_cast<std::size_t>(K) * d.H);

  threads = std::max(1, std::min<int>(threads, static_cast<int>(K)));
  if (threads == 1) {
    sample_episodes(game, behavior, initial, seed, 0, K, data.tuples);
    return data;
  }
  std::vector<std::thread> pool;
  const std::int64_t chunk = (K + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const std::int64_t first = t * chunk;
    const std::int64_t last = std::min(K, first + chunk);
    if (first >= last) break;
    pool.emplace_back([&, first, last] {
      sample_episodes(game, behavior, initial, seed, first, last, data.tuples);
    });
  }
  for (auto& th : pool) th.join();
  return data;
}

double trimmed_count(double n_aux, int H, int S, double delta) {
  check_delta(delta);
  if (n_aux <= 0.0) return 0.0;
  const double log_term = std::log(static_cast<double>(H) * S / delta);
  return std::max(n_aux - 10.0 * std::sqrt(n_aux * log_term), 0.0);
}

SubsampleResult two_stage_subsample(const Dataset& data, double delta,
                                    std::uint64_t seed) {
  check_delta(delta);
  if (data.flattened()) {
    throw Error(ErrorKind::kShapeMismatch,
                "subsampling needs episode structure");
  }
  validate_dataset(data);
  const GameDims& d = data.dims;
  SubsampleResult out;
  std::int64_t K = data.meta.K;
  if (K % 2 == 1) {
    out.warnings.push_back("odd K = " + std::to_string(K) +
                           ": dropping the last episode");
    K -= 1;
  }
  const std::int64_t half = K / 2;
  const std::size_t slots = static_cast<std::size_t>(d.H) * d.S;
  out.n_main.assign(slots, 0);
  out.n_aux.assign(slots, 0);
  out.kept.assign(slots, 0);

  // Positions of main-half tuples per (h, s), in dataset order.
  std::vector<std::vector<std::size_t>> main_pos(slots);
  for (std::size_t i = 0; i < static_cast<std::size_t>(K) * d.H; ++i) {
    const Transition& t = data.tuples[i];
    const std::size_t slot = static_cast<std::size_t>(t.h) * d.S + t.s;
    if (t.episode < half) {
      ++out.n_main[slot];
      main_pos[slot].push_back(i);
    } else {
      ++out.n_aux[slot];
    }
  }

  out.data.dims = d;
  out.data.meta.seed = seed;
  out.data.meta.K = data.meta.K;
  out.data.meta.stage = "subsampled";
  for (int h = 0; h < d.H; ++h) {
    for (int s = 0; s < d.S; ++s) {
      const std::size_t slot = static_cast<std::size_t>(h) * d.S + s;
      const double target = std::floor(
          trimmed_count(static_cast<double>(out.n_aux[slot]), d.H, d.S, delta));
      const auto keep = std::min<std::int64_t>(
          static_cast<std::int64_t>(target), out.n_main[slot]);
      out.kept[slot] = keep;
      if (keep == 0) continue;
      // Partial Fisher-Yates: the first `keep` positions become a uniform
      // draw without replacement.
      std::vector<std::size_t>& pos = main_pos[slot];
      Rng rng(seed, Rng::stream_id(kSubsampleTag, h, s));
      for (std::int64_t i = 0; i < keep; ++i) {
        const auto j = i + static_cast<std::int64_t>(
                               rng.below(pos.size() - static_cast<std::size_t>(i)));
        std::swap(pos[i], pos[j]);
      }
      std::sort(pos.begin(), pos.begin() + keep);
      for (std::int64_t i = 0; i < keep; ++i) {
        Transition t = data.tuples[pos[i]];
        t.episode = -1;
        out.data.tuples.push_back(t);
      }
    }
  }
  return out;
}

Dataset flatten(const Dataset& data) {
  Dataset out = data;
  out.meta.stage = "flattened";
  return out;
}

TransitionCounts count_transitions(const std::vector<Transition>& tuples,
                                   GameDims dims) {
  TransitionCounts c;
  c.dims = dims;
  c.n.assign(dims.num_cells(), 0);
  c.n_next.assign(dims.num_cells() * dims.S, 0);
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    const Transition& t = tuples[i];
    if (!in_bounds(t, dims)) {
      throw Error(ErrorKind::kIndexOutOfBounds,
                  tuple_name(i, t) + " is out of bounds");
    }
    const std::size_t cell = dims.cell(t.h, t.s, t.a, t.b);
    ++c.n[cell];
    ++c.n_next[cell * dims.S + t.s_next];
  }
  return c;
}

EmpiricalModel estimate_model(const TransitionCounts& counts,
                              const std::vector<double>& true_rewards,
                              double delta, std::int64_t K) {
  const GameDims& d = counts.dims;
  check_delta(delta);
  if (K < 1) throw Error(ErrorKind::kBadParams, "K must be at least 1");
  if (true_rewards.size() != d.num_cells() || counts.n.size() != d.num_cells() ||
      counts.n_next.size() != d.num_cells() * d.S) {
    throw Error(ErrorKind::kShapeMismatch, "reward or count tensor has the wrong size");
  }
  EmpiricalModel m;
  m.dims = d;
  m.counts = counts;
  m.delta = delta;
  m.K = K;
  m.p_hat.assign(d.num_cells() * d.S, 1.0 / d.S);
  m.r_hat.assign(d.num_cells(), 0.0);
  for (std::size_t cell = 0; cell < d.num_cells(); ++cell) {
    const std::int64_t n = counts.n[cell];
    if (n == 0) continue;
    m.r_hat[cell] = true_rewards[cell];
    const double inv = 1.0 / static_cast<double>(n);
    for (int sp = 0; sp < d.S; ++sp) {
      m.p_hat[cell * d.S + sp] =
          static_cast<double>(counts.n_next[cell * d.S + sp]) * inv;
    }
  }
  return m;
}

MarkovGame as_game(const EmpiricalModel& model, double sigma_plus,
                   double sigma_minus, std::vector<double> initial) {
  return make_game(model.dims, model.p_hat, model.r_hat, sigma_plus,
                   sigma_minus, std::move(initial));
}

OccupancyTable occupancy(const MarkovGame& game, const PolicyPair& policy,
                         const std::vector<double>& initial) {
  const GameDims& d = game.dims;
  if (!(policy.dims == d) || initial.size() != static_cast<std::size_t>(d.S)) {
    throw Error(ErrorKind::kShapeMismatch, "policy or initial distribution does not match the game");
  }
  OccupancyTable occ;
  occ.dims = d;
  occ.d_s.assign(static_cast<std::size_t>(d.H) * d.S, 0.0);
  occ.d_sab.assign(d.num_cells(), 0.0);
  std::copy(initial.begin(), initial.end(), occ.d_s.begin());
  for (int h = 0; h < d.H; ++h) {
    double* next = h + 1 < d.H ? occ.d_s.data() + (h + 1) * d.S : nullptr;
    for (int s = 0; s < d.S; ++s) {
      const double ds = occ.d_s[static_cast<std::size_t>(h) * d.S + s];
      const auto mu = policy.mu_row(h, s);
      const auto nu = policy.nu_row(h, s);
      for (int a = 0; a < d.A; ++a) {
        for (int b = 0; b < d.B; ++b) {
          const double w = ds * mu[a] * nu[b];
          occ.d_sab[d.cell(h, s, a, b)] = w;
          if (next == nullptr || w == 0.0) continue;
          const auto row = game.row(h, s, a, b);
          for (int sp = 0; sp < d.S; ++sp) next[sp] += w * row[sp];
        }
      }
    }
  }
  return occ;
}

double count_lower_bound(std::int64_t K, double d, int H, double delta) {
  check_delta(delta);
  const double kd = static_cast<double>(K) * d;
  const double log_term = std::log(static_cast<double>(K) * H / delta);
  return kd / 8.0 - 5.0 * std::sqrt(kd * log_term);
}

void write_dataset(const std::string& path, const Dataset& data) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (f == nullptr) throw Error(ErrorKind::kIo, "cannot write " + path);
  std::fputs("episode,h,s,a,b,s_next\n", f);
  for (const Transition& t : data.tuples) {
    std::fprintf(f, "%lld,%d,%d,%d,%d,%d\n", static_cast<long long>(t.episode),
                 t.h, t.s, t.a, t.b, t.s_next);
  }
  const bool ok = std::fclose(f) == 0;
  if (!ok) throw Error(ErrorKind::kIo, "cannot write " + path);

  nlohmann::ordered_json meta;
  meta["seed"] = data.meta.seed;
  meta["K"] = data.meta.K;
  meta["H"] = data.dims.H;
  meta["S"] = data.dims.S;
  meta["A"] = data.dims.A;
  meta["B"] = data.dims.B;
  meta["stage"] = data.meta.stage;
  std::ofstream out(path + ".meta.json");
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path + ".meta.json");
  out << meta.dump(2) << "\n";
}

Dataset read_dataset(const std::string& path) {
  Dataset data;
  std::ifstream meta_in(path + ".meta.json");
  if (!meta_in) throw Error(ErrorKind::kIo, "cannot read " + path + ".meta.json");
  try {
    const auto meta = nlohmann::json::parse(meta_in);
    data.meta.seed = meta.at("seed").get<std::uint64_t>();
    data.meta.K = meta.at("K").get<std::int64_t>();
    data.meta.stage = meta.at("stage").get<std::string>();
    data.dims.H = meta.at("H").get<int>();
    data.dims.S = meta.at("S").get<int>();
    data.dims.A = meta.at("A").get<int>();
    data.dims.B = meta.at("B").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, path + ".meta.json: " + e.what());
  }

  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot read " + path);
  std::string line;
  if (!std::getline(in, line) || line != "episode,h,s,a,b,s_next") {
    throw Error(ErrorKind::kParse, path + ": unexpected header");
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    Transition t;
    long long episode = 0;
    char tail = 0;
    if (std::sscanf(line.c_str(), "%lld,%d,%d,%d,%d,%d%c", &episode, &t.h,
                    &t.s, &t.a, &t.b, &t.s_next, &tail) != 6) {
      throw Error(ErrorKind::kParse,
                  path + ": bad row at line " + std::to_string(line_no));
    }
    t.episode = episode;
    data.tuples.push_back(t);
  }
  validate_dataset(data);
  return data;
}

}  // namespace rmg
