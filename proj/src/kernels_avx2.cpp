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

// Compiled with -mavx2 -mfma; only reached after a CPUID check.

#include <immintrin.h>

#include <algorithm>
#include <cstddef>

#include "rmg/kernels.hpp"

namespace rmg::kernels::avx2 {
namespace {

inline double hsum(__m256d x) {
  const __m128d lo = _mm256_castpd256_pd128(x);
  const __m128d hi = _mm256_extractf128_pd(x, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

double dot(std::span<const double> p, std::span<const double> v) {
  const std::size_t n = p.size();
  const double* pp = p.data();
  const double* vp = v.data();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(pp + i), _mm256_loadu_pd(vp + i),
                           acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(pp + i + 4),
                           _mm256_loadu_pd(vp + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(pp + i), _mm256_loadu_pd(vp + i),
                           acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += pp[i] * vp[i];
  return acc;
}

double clipped_dot(std::span<const double> p, std::span<const double> v,
                   double alpha) {
  const std::size_t n = p.size();
  const double* pp = p.data();
  const double* vp = v.data();
  const __m256d a = _mm256_set1_pd(alpha);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(pp + i),
                           _mm256_min_pd(_mm256_loadu_pd(vp + i), a), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(pp + i + 4),
                           _mm256_min_pd(_mm256_loadu_pd(vp + i + 4), a), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(pp + i),
                           _mm256_min_pd(_mm256_loadu_pd(vp + i), a), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += pp[i] * std::min(vp[i], alpha);
  return acc;
}

double floored_dot(std::span<const double> p, std::span<const double> v,
                   double beta) {
  const std::size_t n = p.size();
  const double* pp = p.data();
  const double* vp = v.data();
  const __m256d b = _mm256_set1_pd(beta);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(pp + i),
                           _mm256_max_pd(_mm256_loadu_pd(vp + i), b), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(pp + i + 4),
                           _mm256_max_pd(_mm256_loadu_pd(vp + i + 4), b), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(pp + i),
                           _mm256_max_pd(_mm256_loadu_pd(vp + i), b), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += pp[i] * std::max(vp[i], beta);
  return acc;
}

Moments moments(std::span<const double> p, std::span<const double> v) {
  const std::size_t n = p.size();
  const double* pp = p.data();
  const double* vp = v.data();
  __m256d first = _mm256_setzero_pd();
  __m256d second = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vv = _mm256_loadu_pd(vp + i);
    const __m256d pv = _mm256_mul_pd(_mm256_loadu_pd(pp + i), vv);
    first = _mm256_add_pd(first, pv);
    second = _mm256_fmadd_pd(pv, vv, second);
  }
  Moments m{hsum(first), hsum(second)};
  for (; i < n; ++i) {
    const double pv = pp[i] * vp[i];
    m.first += pv;
    m.second += pv * vp[i];
  }
  return m;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  const std::size_t n = x.size();
  const double* xp = x.data();
  double* yp = y.data();
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(yp + i, _mm256_fmadd_pd(av, _mm256_loadu_pd(xp + i),
                                             _mm256_loadu_pd(yp + i)));
  }
  for (; i < n; ++i) yp[i] += a * xp[i];
}

}  // namespace rmg::kernels::avx2
