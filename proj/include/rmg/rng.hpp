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

#ifndef RMG_RNG_HPP_
#define RMG_RNG_HPP_

#include <cstdint>
#include <span>

namespace rmg {

// Counter-based generator: output k of stream (seed, stream) is
// mix(key + k * gamma), a SplitMix64 sequence keyed by a hash of the pair.
// Only integer arithmetic is involved, so draws are bit-identical on every
// platform, and substreams make per-episode sampling independent of the
// order (or thread) in which episodes are generated.
class Rng {
 public:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  Rng(std::uint64_t seed, std::uint64_t stream)
      : state_(mix(seed ^ mix(stream + kGamma))) {}

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Derives a stream id from up to three indices (e.g. purpose tag, h, s).
  static constexpr std::uint64_t stream_id(std::uint64_t tag, std::uint64_t i,
                                           std::uint64_t j = 0) {
    return mix(mix(tag + kGamma) ^ (i + 0x632be59bd9b4e019ULL)) ^
           mix(j * kGamma + 0x2545f4914f6cdd1dULL);
  }

  std::uint64_t next() {
    state_ += kGamma;
    return mix(state_);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n), unbiased (Lemire's method with rejection).
  std::uint64_t below(std::uint64_t n) {
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(next()) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Inverse-CDF draw from a probability row. Falls back to the last index
  // with positive mass when rounding leaves u above the cumulative sum.
  int categorical(std::span<const double> probs) {
    const double u = uniform();
    double cum = 0.0;
    int last_positive = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      if (probs[i] <= 0.0) continue;
      last_positive = static_cast<int>(i);
      cum += probs[i];
      if (u < cum) return static_cast<int>(i);
    }
    return last_positive;
  }

 private:
  std::uint64_t state_;
};

}  // namespace rmg

#endif  // RMG_RNG_HPP_
