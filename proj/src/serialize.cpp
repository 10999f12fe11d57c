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

#include "rmg/serialize.hpp"

#include <fstream>
#include <vector>

#include "rmg/error.hpp"

namespace rmg {
namespace {

// Nests a flat tensor by the given shape.
Json nest(const double* data, const std::vector<int>& shape, std::size_t dim) {
  Json arr = Json::array();
  if (dim + 1 == shape.size()) {
    for (int i = 0; i < shape[dim]; ++i) arr.push_back(data[i]);
    return arr;
  }
  std::size_t stride = 1;
  for (std::size_t k = dim + 1; k < shape.size(); ++k) stride *= shape[k];
  for (int i = 0; i < shape[dim]; ++i) {
    arr.push_back(nest(data + i * stride, shape, dim + 1));
  }
  return arr;
}

Json nest(const std::vector<double>& v, const std::vector<int>& shape) {
  return nest(v.data(), shape, 0);
}

void flatten_into(const Json& j, const std::vector<int>& shape, std::size_t dim,
                  std::vector<double>& out, const std::string& name) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(shape[dim])) {
    throw Error(ErrorKind::kParse, name + ": wrong nesting or length");
  }
  for (const Json& x : j) {
    if (dim + 1 == shape.size()) {
      if (!x.is_number()) throw Error(ErrorKind::kParse, name + ": expected a number");
      out.push_back(x.get<double>());
    } else {
      flatten_into(x, shape, dim + 1, out, name);
    }
  }
}

std::vector<double> unnest(const Json& j, const std::vector<int>& shape,
                           const std::string& name) {
  std::vector<double> out;
  flatten_into(j, shape, 0, out, name);
  return out;
}

template <typename T>
T field(const Json& j, const char* name) {
  try {
    return j.at(name).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("field '") + name + "': " + e.what());
  }
}

const Json& member(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) {
    throw Error(ErrorKind::kParse, std::string("missing field '") + name + "'");
  }
  return j.at(name);
}

}  // namespace

Json game_to_json(const MarkovGame& game) {
  const GameDims& d = game.dims;
  Json j;
  j["H"] = d.H;
  j["S"] = d.S;
  j["A"] = d.A;
  j["B"] = d.B;
  j["sigma_plus"] = game.sigma_plus;
  j["sigma_minus"] = game.sigma_minus;
  j["initial_dist"] = game.initial_dist;
  j["transitions"] = nest(game.transitions, {d.H, d.S, d.A, d.B, d.S});
  j["rewards"] = nest(game.rewards, {d.H, d.S, d.A, d.B});
  return j;
}

MarkovGame game_from_json(const Json& j) {
  GameDims d{field<int>(j, "H"), field<int>(j, "S"), field<int>(j, "A"),
             field<int>(j, "B")};
  if (d.H < 1 || d.S < 1 || d.A < 1 || d.B < 1) {
    throw Error(ErrorKind::kParse, "game sizes must be positive");
  }
  auto p = unnest(member(j, "transitions"), {d.H, d.S, d.A, d.B, d.S}, "transitions");
  auto r = unnest(member(j, "rewards"), {d.H, d.S, d.A, d.B}, "rewards");
  auto init = field<std::vector<double>>(j, "initial_dist");
  return make_game(d, std::move(p), std::move(r), field<double>(j, "sigma_plus"),
                   field<double>(j, "sigma_minus"), std::move(init));
}

Json policy_to_json(const PolicyPair& policy) {
  const GameDims& d = policy.dims;
  Json j;
  j["mu"] = nest(policy.mu, {d.H, d.S, d.A});
  j["nu"] = nest(policy.nu, {d.H, d.S, d.B});
  return j;
}

PolicyPair policy_from_json(const Json& j, const GameDims& dims) {
  const Json& src = j.contains("policy") ? j.at("policy") : j;
  PolicyPair p = make_policy_pair(dims);
  p.mu = unnest(member(src, "mu"), {dims.H, dims.S, dims.A}, "mu");
  p.nu = unnest(member(src, "nu"), {dims.H, dims.S, dims.B}, "nu");
  validate_policy(p);
  return p;
}

Json solve_result_to_json(const SolveResult& r) {
  const GameDims& d = r.dims;
  Json j;
  j["H"] = d.H;
  j["S"] = d.S;
  j["A"] = d.A;
  j["B"] = d.B;
  j["v_plus"] = nest(r.v_plus, {d.H + 1, d.S});
  j["v_minus"] = nest(r.v_minus, {d.H + 1, d.S});
  j["q_plus"] = nest(r.q_plus, {d.H, d.S, d.A, d.B});
  j["q_minus"] = nest(r.q_minus, {d.H, d.S, d.A, d.B});
  j["policy"] = policy_to_json(r.policy);
  Json diag;
  diag["max_penalty_plus"] = r.diagnostics.max_penalty_plus;
  diag["max_penalty_minus"] = r.diagnostics.max_penalty_minus;
  diag["nash_tol"] = r.diagnostics.nash_tol;
  j["diagnostics"] = diag;
  return j;
}

Json gap_report_to_json(const GapReport& r) {
  Json j;
  j["gap"] = r.gap;
  j["raw_gap"] = r.raw_gap;
  j["term_max_player"] = r.term_max_player;
  j["term_min_player"] = r.term_min_player;
  j["nash_values"] = {r.nash_value_plus, r.nash_value_minus};
  return j;
}

Json multi_game_to_json(const MultiGame& g) {
  const int J = static_cast<int>(g.num_joint());
  Json j;
  j["H"] = g.H;
  j["S"] = g.S;
  j["action_sizes"] = g.action_sizes;
  j["sigmas"] = g.sigmas;
  j["initial_dist"] = g.initial_dist;
  j["transitions"] = nest(g.transitions, {g.H, g.S, J, g.S});
  Json rewards = Json::array();
  for (const auto& r : g.rewards) rewards.push_back(nest(r, {g.H, g.S, J}));
  j["rewards"] = rewards;
  return j;
}

MultiGame multi_game_from_json(const Json& j) {
  MultiGame g;
  g.H = field<int>(j, "H");
  g.S = field<int>(j, "S");
  g.action_sizes = field<std::vector<int>>(j, "action_sizes");
  g.sigmas = field<std::vector<double>>(j, "sigmas");
  g.initial_dist = field<std::vector<double>>(j, "initial_dist");
  if (g.H < 1 || g.S < 1 || g.action_sizes.empty()) {
    throw Error(ErrorKind::kParse, "multi-player game sizes must be positive");
  }
  for (int n : g.action_sizes) {
    if (n < 1) throw Error(ErrorKind::kParse, "action sizes must be positive");
  }
  const int J = static_cast<int>(g.num_joint());
  g.transitions = unnest(member(j, "transitions"), {g.H, g.S, J, g.S}, "transitions");
  const Json& rewards = member(j, "rewards");
  if (!rewards.is_array()) throw Error(ErrorKind::kParse, "rewards must be an array");
  for (const Json& r : rewards) g.rewards.push_back(unnest(r, {g.H, g.S, J}, "rewards"));
  validate_multi_game(g);
  return g;
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot read " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, path + ": " + e.what());
  }
}

void save_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path);
  out << j.dump(2) << "\n";
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path);
}

}  // namespace rmg
