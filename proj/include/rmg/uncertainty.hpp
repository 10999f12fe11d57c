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

#ifndef RMG_UNCERTAINTY_HPP_
#define RMG_UNCERTAINTY_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "rmg/game.hpp"

namespace rmg {

// [v]_alpha: entries above alpha are replaced by alpha.
std::vector<double> clip_values(std::span<const double> v, double alpha);

// inf of P.v over the TV ball {P : 0.5 * |P - p0|_1 <= sigma} on the simplex,
// evaluated through the dual max over alpha of
//   p0.[v]_alpha - sigma * (alpha - min [v]_alpha).
// Errors: BadDistribution, BadSigma (sigma outside [0,1]), NonFiniteEntry.
double worst_case_expectation(std::span<const double> p0,
                              std::span<const double> v, double sigma);

// sup of P.v over the same ball, by reflecting v through (min v + max v).
double best_case_expectation(std::span<const double> p0,
                             std::span<const double> v, double sigma);

double robust_expectation(std::span<const double> p0, std::span<const double> v,
                          UncertaintySpec spec);

// p.(v*v) - (p.v)^2, clamped at zero.
double empirical_variance(std::span<const double> p, std::span<const double> v);

// Backups at one step share the next-step value vector across every
// (s, a, b) row. TvBackup sorts it once; each row then costs one scan of the
// cumulative mass in value order plus one contiguous SIMD pass.
//
// The dual objective is concave and piecewise linear in alpha with
// breakpoints at the entries of v and slope (1 - F(alpha)) - sigma, where F
// is the mass of {s' : v(s') <= alpha}. The maximizer is therefore the
// smallest entry of v whose cumulative mass reaches 1 - sigma.
//
// No input validation happens here; the free functions above validate.
class TvBackup {
 public:
  explicit TvBackup(std::span<const double> v);

  double worst(std::span<const double> p0, double sigma) const;
  double best(std::span<const double> p0, double sigma) const;
  double variance(std::span<const double> p) const;
  double expectation(std::span<const double> p) const;

  // Dual maximizer alpha* for the worst case (exposed for tests).
  double worst_alpha(std::span<const double> p0, double sigma) const;
  // Reflected maximizer beta* for the best case.
  double best_beta(std::span<const double> p0, double sigma) const;

  double min_value() const { return min_; }
  double max_value() const { return max_; }
  std::span<const double> values() const { return values_; }

 private:
  std::vector<double> values_;
  std::vector<std::uint32_t> ascending_;
  double min_ = 0.0;
  double max_ = 0.0;
};

}  // namespace rmg

#endif  // RMG_UNCERTAINTY_HPP_
