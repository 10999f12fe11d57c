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

#ifndef RMG_INSTANCES_HPP_
#define RMG_INSTANCES_HPP_

#include <cstdint>
#include <vector>

#include "rmg/game.hpp"

namespace rmg {

// Transition rows uniform on the simplex (normalized unit exponentials),
// rewards i.i.d. uniform on [0, 1], uniform initial distribution.
MarkovGame random_game(int S, int A, int B, int H, std::uint64_t seed,
                       double sigma_plus = 0.2, double sigma_minus = 0.2);

using BitString = std::vector<std::uint8_t>;

// Greedy code over {0,1}^H with pairwise Hamming distance >= ceil(H / 8).
// Candidates are scanned in lexicographic order (the last bit varies
// fastest) and kept when far from every kept word. The scan stops after
// `requested` words (0 means ceil(e^{H/8})) or `scan_budget` candidates; the
// all-ones word is appended afterwards if it is still admissible.
// Errors: HTooSmall (H < 16), BadParams.
std::vector<BitString> gv_codebook(int H, std::uint64_t requested = 0,
                                   std::uint64_t scan_budget = 1ULL << 20);

int hamming_distance(const BitString& x, const BitString& y);

struct HardInstanceParams {
  int H = 16;
  double sigma = 0.1;
  double epsilon = 0.1;
  double c0 = 0.25;
  double c1 = 0.125;
  double c2 = 0.25;
  double c5 = 0.1;
  double C = 1.0;
  BitString phi;  // length H; empty means all zeros
  int S = 2;      // states 2.. are absorbing padding with reward 0
};

enum class HardRegime { kSmallSigma, kLargeSigma };

struct HardInstance {
  MarkovGame game;  // A = 2, B = 1
  double p = 0.0;   // exit probability of action phi_h at m
  double q = 0.0;   // exit probability of the other action
  double delta = 0.0;
  HardRegime regime = HardRegime::kLargeSigma;
  BitString phi;

  static constexpr int kStateM = 0;
  static constexpr int kStateN = 1;
};

// Two-state lower-bound instance. At m, action phi_h moves to n with
// probability p and the other action with q = p - Delta; n is absorbing and
// pays reward 1. With sigma <= c2 / (2H): p = c2 / H, Delta = c5 eps / H^2;
// otherwise p = (1 + c1 / H) sigma, Delta = c5 sigma eps / H. The initial
// law puts 1 / (C S A) on m and the rest on n. Errors: BadParams.
HardInstance hard_rmdp(const HardInstanceParams& params);

}  // namespace rmg

#endif  // RMG_INSTANCES_HPP_
