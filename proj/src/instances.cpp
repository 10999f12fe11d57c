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

#include "rmg/instances.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "rmg/error.hpp"
#include "rmg/rng.hpp"

namespace rmg {
namespace {

constexpr std::uint64_t kGameTag = 0x47414d45;  // "GAME"

using Words = std::vector<std::uint64_t>;

// Word 0 holds the last 64 positions of the string (position H - 1 is bit 0).
Words candidate_words(std::uint64_t index, int H) {
  Words w((H + 63) / 64, 0);
  w[0] = H >= 64 ? index : index & ((1ULL << H) - 1);
  return w;
}

Words all_ones(int H) {
  Words w((H + 63) / 64, ~0ULL);
  if (H % 64 != 0) w.back() = (1ULL << (H % 64)) - 1;
  return w;
}

int distance(const Words& x, const Words& y) {
  int d = 0;
  for (std::size_t i = 0; i < x.size(); ++i) d += std::popcount(x[i] ^ y[i]);
  return d;
}

BitString to_bits(const Words& w, int H) {
  BitString bits(H);
  for (int pos = 0; pos < H; ++pos) {
    const int shift = H - 1 - pos;
    bits[pos] = static_cast<std::uint8_t>((w[shift / 64] >> (shift % 64)) & 1);
  }
  return bits;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::kBadParams, what);
}

}  // namespace

MarkovGame random_game(int S, int A, int B, int H, std::uint64_t seed,
                       double sigma_plus, double sigma_minus) {
  require(S >= 1 && A >= 1 && B >= 1 && H >= 1, "game sizes must be positive");
  GameDims d{H, S, A, B};
  Rng rng(seed, Rng::stream_id(kGameTag, 0));
  std::vector<double> p(d.num_cells() * S);
  for (std::size_t cell = 0; cell < d.num_cells(); ++cell) {
    double* row = p.data() + cell * S;
    double sum = 0.0;
    for (int sp = 0; sp < S; ++sp) {
      row[sp] = -std::log1p(-rng.uniform());
      sum += row[sp];
    }
    if (sum <= 0.0) {
      // Every draw was exactly zero; fall back to the uniform row.
      for (int sp = 0; sp < S; ++sp) row[sp] = 1.0 / S;
      continue;
    }
    for (int sp = 0; sp < S; ++sp) row[sp] /= sum;
  }
  std::vector<double> r(d.num_cells());
  for (double& x : r) x = rng.uniform();
  std::vector<double> init(S, 1.0 / S);
  return make_game(d, std::move(p), std::move(r), sigma_plus, sigma_minus,
                   std::move(init));
}

int hamming_distance(const BitString& x, const BitString& y) {
  if (x.size() != y.size()) {
    throw Error(ErrorKind::kSizeMismatch, "bit strings differ in length");
  }
  int d = 0;
  for (std::size_t i = 0; i < x.size(); ++i) d += x[i] != y[i];
  return d;
}

std::vector<BitString> gv_codebook(int H, std::uint64_t requested,
                                   std::uint64_t scan_budget) {
  if (H < 16) {
    throw Error(ErrorKind::kHTooSmall, "codebook needs H >= 16");
  }
  require(scan_budget >= 1, "scan budget must be positive");
  const int min_dist = (H + 7) / 8;
  if (requested == 0) {
    const double target = std::ceil(std::exp(H / 8.0));
    requested = target >= 0x1p63 ? (1ULL << 63)
                                 : static_cast<std::uint64_t>(target);
  }
  if (H < 64) scan_budget = std::min<std::uint64_t>(scan_budget, 1ULL << H);

  std::vector<Words> kept;
  for (std::uint64_t i = 0; i < scan_budget && kept.size() < requested; ++i) {
    Words c = candidate_words(i, H);
    bool far = true;
    for (const Words& w : kept) {
      if (distance(c, w) < min_dist) {
        far = false;
        break;
      }
    }
    if (far) kept.push_back(std::move(c));
  }
  if (kept.size() < requested) {
    Words ones = all_ones(H);
    bool far = true;
    for (const Words& w : kept) {
      if (distance(ones, w) < min_dist) {
        far = false;
        break;
      }
    }
    if (far) kept.push_back(std::move(ones));
  }

  std::vector<BitString> out;
  out.reserve(kept.size());
  for (const Words& w : kept) out.push_back(to_bits(w, H));
  return out;
}

HardInstance hard_rmdp(const HardInstanceParams& pr) {
  const int H = pr.H;
  const int A = 2;
  require(H >= 2, "hard instance needs H >= 2");
  require(pr.S >= 2, "hard instance needs at least two states");
  require(pr.c0 > 0.0 && pr.c0 < 1.0, "c0 must lie in (0, 1)");
  require(pr.sigma > 0.0 && pr.sigma <= 1.0 - pr.c0,
          "sigma must lie in (0, 1 - c0]");
  require(pr.c2 > 0.0 && pr.c2 <= 0.25, "c2 must lie in (0, 1/4]");
  require(std::abs(pr.c1 - pr.c0 / 2.0) <= 1e-12 && pr.c1 <= 0.25,
          "c1 must equal c0 / 2 and be at most 1/4");
  require(pr.c5 > 0.0, "c5 must be positive");
  require(pr.C > 0.0 && 1.0 / (pr.C * pr.S * A) <= 0.25,
          "C must satisfy 1 / (C S A) <= 1/4");
  require(pr.phi.empty() || static_cast<int>(pr.phi.size()) == H,
          "phi must have length H");
  for (std::uint8_t bit : pr.phi) require(bit <= 1, "phi must be a bit string");

  HardInstance out;
  out.phi = pr.phi.empty() ? BitString(H, 0) : pr.phi;
  const bool small = pr.sigma <= pr.c2 / (2.0 * H);
  out.regime = small ? HardRegime::kSmallSigma : HardRegime::kLargeSigma;
  require(pr.epsilon > 0.0 && pr.epsilon <= (small ? pr.c2 / H : 1.0),
          small ? "epsilon must lie in (0, c2 / H]" : "epsilon must lie in (0, 1]");
  out.p = small ? pr.c2 / H : (1.0 + pr.c1 / H) * pr.sigma;
  out.delta = small ? pr.c5 * pr.epsilon / (static_cast<double>(H) * H)
                    : pr.c5 * pr.sigma * pr.epsilon / H;
  out.q = out.p - out.delta;
  const double delta_cap = small ? pr.c2 / (2.0 * H) : pr.c1 * pr.sigma / H;
  require(out.delta <= delta_cap, "Delta exceeds its admissible range");
  require(out.q >= 0.0 && out.p + out.delta <= 1.0,
          "derived probabilities leave [0, 1]");

  const int S = pr.S;
  const GameDims d{H, S, A, 1};
  std::vector<double> p(d.num_cells() * S, 0.0);
  std::vector<double> r(d.num_cells(), 0.0);
  for (int h = 0; h < H; ++h) {
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a) {
        double* row = p.data() + d.cell(h, s, a, 0) * S;
        if (s == HardInstance::kStateM) {
          const double exit = a == out.phi[h] ? out.p : out.q;
          row[HardInstance::kStateN] = exit;
          row[HardInstance::kStateM] = 1.0 - exit;
        } else {
          row[s] = 1.0;
        }
        if (s == HardInstance::kStateN) r[d.cell(h, s, a, 0)] = 1.0;
      }
    }
  }
  std::vector<double> init(S, 0.0);
  init[HardInstance::kStateM] = 1.0 / (pr.C * S * A);
  init[HardInstance::kStateN] = 1.0 - init[HardInstance::kStateM];
  out.game = make_game(d, std::move(p), std::move(r), pr.sigma, pr.sigma,
                       std::move(init));
  return out;
}

}  // namespace rmg
