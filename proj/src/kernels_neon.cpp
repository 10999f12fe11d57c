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

// NEON is baseline on AArch64, so no special flags or CPUID check.

#include <arm_neon.h>

#include <algorithm>
#include <cstddef>

#include "rmg/kernels.hpp"

namespace rmg::kernels::neon {

double dot(std::span<const double> p, std::span<const double> v) {
  const std::size_t n = p.size();
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(p.data() + i), vld1q_f64(v.data() + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(p.data() + i + 2),
                     vld1q_f64(v.data() + i + 2));
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) acc += p[i] * v[i];
  return acc;
}

double clipped_dot(std::span<const double> p, std::span<const double> v,
                   double alpha) {
  const std::size_t n = p.size();
  const float64x2_t a = vdupq_n_f64(alpha);
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    acc = vfmaq_f64(acc, vld1q_f64(p.data() + i),
                    vminq_f64(vld1q_f64(v.data() + i), a));
  }
  double out = vaddvq_f64(acc);
  for (; i < n; ++i) out += p[i] * std::min(v[i], alpha);
  return out;
}

double floored_dot(std::span<const double> p, std::span<const double> v,
                   double beta) {
  const std::size_t n = p.size();
  const float64x2_t b = vdupq_n_f64(beta);
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    acc = vfmaq_f64(acc, vld1q_f64(p.data() + i),
                    vmaxq_f64(vld1q_f64(v.data() + i), b));
  }
  double out = vaddvq_f64(acc);
  for (; i < n; ++i) out += p[i] * std::max(v[i], beta);
  return out;
}

Moments moments(std::span<const double> p, std::span<const double> v) {
  const std::size_t n = p.size();
  float64x2_t first = vdupq_n_f64(0.0);
  float64x2_t second = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t vv = vld1q_f64(v.data() + i);
    const float64x2_t pv = vmulq_f64(vld1q_f64(p.data() + i), vv);
    first = vaddq_f64(first, pv);
    second = vfmaq_f64(second, pv, vv);
  }
  Moments m{vaddvq_f64(first), vaddvq_f64(second)};
  for (; i < n; ++i) {
    const double pv = p[i] * v[i];
    m.first += pv;
    m.second += pv * v[i];
  }
  return m;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  const std::size_t n = x.size();
  const float64x2_t av = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y.data() + i,
              vfmaq_f64(vld1q_f64(y.data() + i), av, vld1q_f64(x.data() + i)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

}  // namespace rmg::kernels::neon
