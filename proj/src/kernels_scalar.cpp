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

#include <algorithm>
#include <cstddef>

#include "rmg/kernels.hpp"

namespace rmg::kernels::scalar {

double dot(std::span<const double> p, std::span<const double> v) {
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += p[i] * v[i];
  return acc;
}

double clipped_dot(std::span<const double> p, std::span<const double> v,
                   double alpha) {
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i] * std::min(v[i], alpha);
  }
  return acc;
}

double floored_dot(std::span<const double> p, std::span<const double> v,
                   double beta) {
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i] * std::max(v[i], beta);
  }
  return acc;
}

Moments moments(std::span<const double> p, std::span<const double> v) {
  Moments m;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pv = p[i] * v[i];
    m.first += pv;
    m.second += pv * v[i];
  }
  return m;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

}  // namespace rmg::kernels::scalar
