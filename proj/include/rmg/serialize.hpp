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

#ifndef RMG_SERIALIZE_HPP_
#define RMG_SERIALIZE_HPP_

#include <string>

#include "json.hpp"
#include "rmg/evaluation.hpp"
#include "rmg/game.hpp"
#include "rmg/multiagent.hpp"
#include "rmg/solver.hpp"

namespace rmg {

using Json = nlohmann::ordered_json;

// Tensors are written as nested arrays in their index order, e.g.
// transitions as [h][s][a][b][s']. Doubles are printed in shortest
// round-trip form.
Json game_to_json(const MarkovGame& game);
// Errors: Parse for missing or mistyped fields, then validate_game errors.
MarkovGame game_from_json(const Json& j);

Json policy_to_json(const PolicyPair& policy);
// Accepts either {"mu": ..., "nu": ...} or an object with a "policy" member.
PolicyPair policy_from_json(const Json& j, const GameDims& dims);

Json solve_result_to_json(const SolveResult& result);
Json gap_report_to_json(const GapReport& report);

Json multi_game_to_json(const MultiGame& game);
MultiGame multi_game_from_json(const Json& j);

// Errors: Io, Parse.
Json load_json(const std::string& path);
void save_json(const std::string& path, const Json& j);

}  // namespace rmg

#endif  // RMG_SERIALIZE_HPP_
