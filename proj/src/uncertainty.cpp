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

#include "rmg/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rmg/error.hpp"
#include "rmg/kernels.hpp"

namespace rmg {
namespace {

constexpr double kOperatorProbTolerance = 1e-9;

void check_inputs(std::span<const double> p0, std::span<const double> v,
                  double sigma) {
  if (p0.empty() || p0.size() != v.size() ||
      !is_distribution(p0, kOperatorProbTolerance)) {
    throw Error(ErrorKind::kBadDistribution,
                "center row is not a distribution over the value support");
  }
  if (!(sigma >= 0.0 && sigma <= 1.0)) {
    throw Error(ErrorKind::kBadSigma, "radius must lie in [0,1]");
  }
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw Error(ErrorKind::kNonFiniteEntry, "value vector has a non-finite entry");
    }
  }
}

}  // namespace

std::vector<double> clip_values(std::span<const double> v, double alpha) {
  std::vector<double> out(v.begin(), v.end());
  for (double& x : out) {
    if (x > alpha) x = alpha;
  }
  return out;
}

TvBackup::TvBackup(std::span<const double> v)
    : values_(v.begin(), v.end()), ascending_(v.size()) {
  std::iota(ascending_.begin(), ascending_.end(), 0u);
  std::stable_sort(ascending_.begin(), ascending_.end(),
                   [&](std::uint32_t i, std::uint32_t j) {
                     return values_[i] < values_[j];
                   });
  if (!values_.empty()) {
    min_ = values_[ascending_.front()];
    max_ = values_[ascending_.back()];
  }
}

double TvBackup::worst_alpha(std::span<const double> p0, double sigma) const {
  const double target = 1.0 - sigma;
  const std::size_t n = ascending_.size();
  double mass = 0.0;
  std::size_t i = 0;
  while (i < n) {
    const double level = values_[ascending_[i]];
    // Ties share one breakpoint.
    while (i < n && values_[ascending_[i]] == level) {
      mass += p0[ascending_[i]];
      ++i;
    }
    if (mass >= target) return level;
  }
  return max_;
}

double TvBackup::best_beta(std::span<const double> p0, double sigma) const {
  const double target = 1.0 - sigma;
  double mass = 0.0;
  std::size_t i = ascending_.size();
  while (i > 0) {
    const double level = values_[ascending_[i - 1]];
    while (i > 0 && values_[ascending_[i - 1]] == level) {
      mass += p0[ascending_[i - 1]];
      --i;
    }
    if (mass >= target) return level;
  }
  return min_;
}

double TvBackup::worst(std::span<const double> p0, double sigma) const {
  if (sigma <= 0.0) return kernels::dot(p0, values_);
  const double alpha = worst_alpha(p0, sigma);
  return kernels::clipped_dot(p0, values_, alpha) - sigma * (alpha - min_);
}

double TvBackup::best(std::span<const double> p0, double sigma) const {
  if (sigma <= 0.0) return kernels::dot(p0, values_);
  const double beta = best_beta(p0, sigma);
  return kernels::floored_dot(p0, values_, beta) + sigma * (max_ - beta);
}

double TvBackup::variance(std::span<const double> p) const {
  const kernels::Moments m = kernels::moments(p, values_);
  return std::max(0.0, m.second - m.first * m.first);
}

double TvBackup::expectation(std::span<const double> p) const {
  return kernels::dot(p, values_);
}

double worst_case_expectation(std::span<const double> p0,
                              std::span<const double> v, double sigma) {
  check_inputs(p0, v, sigma);
  return TvBackup(v).worst(p0, sigma);
}

double best_case_expectation(std::span<const double> p0,
                             std::span<const double> v, double sigma) {
  check_inputs(p0, v, sigma);
  return TvBackup(v).best(p0, sigma);
}

double robust_expectation(std::span<const double> p0, std::span<const double> v,
                          UncertaintySpec spec) {
  return spec.sense == Sense::kWorstCase
             ? worst_case_expectation(p0, v, spec.radius)
             : best_case_expectation(p0, v, spec.radius);
}

double empirical_variance(std::span<const double> p, std::span<const double> v) {
  if (p.empty() || p.size() != v.size() ||
      !is_distribution(p, kOperatorProbTolerance)) {
    throw Error(ErrorKind::kBadDistribution,
                "variance weights are not a distribution over the value support");
  }
  const kernels::Moments m = kernels::moments(p, v);
  return std::max(0.0, m.second - m.first * m.first);
}

}  // namespace rmg
