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

#ifndef RMG_KERNELS_HPP_
#define RMG_KERNELS_HPP_

// Row kernels for the backup hot path. Every kernel streams over one
// contiguous distribution row (s' innermost) and has a scalar reference
// implementation plus SIMD variants picked at runtime. The variants reorder
// the summation, so results agree with the reference to rounding, not bits.

#include <span>
#include <string_view>

namespace rmg::kernels {

enum class Isa { kScalar, kAvx2, kNeon };

struct Moments {
  double first = 0.0;   // sum_i p_i v_i
  double second = 0.0;  // sum_i p_i v_i^2
};

double dot(std::span<const double> p, std::span<const double> v);
// sum_i p_i * min(v_i, alpha)
double clipped_dot(std::span<const double> p, std::span<const double> v,
                   double alpha);
// sum_i p_i * max(v_i, beta)
double floored_dot(std::span<const double> p, std::span<const double> v,
                   double beta);
Moments moments(std::span<const double> p, std::span<const double> v);
// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);

Isa active_isa();
bool isa_available(Isa isa);
// Overrides the runtime choice; throws BadParams if the ISA is unavailable.
// RMG_SIMD=scalar|avx2|neon in the environment has the same effect.
void set_isa(Isa isa);
std::string_view isa_name(Isa isa);

namespace scalar {
double dot(std::span<const double> p, std::span<const double> v);
double clipped_dot(std::span<const double> p, std::span<const double> v,
                   double alpha);
double floored_dot(std::span<const double> p, std::span<const double> v,
                   double beta);
Moments moments(std::span<const double> p, std::span<const double> v);
void axpy(double a, std::span<const double> x, std::span<double> y);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define RMG_HAVE_AVX2_KERNELS 1
namespace avx2 {
double dot(std::span<const double> p, std::span<const double> v);
double clipped_dot(std::span<const double> p, std::span<const double> v,
                   double alpha);
double floored_dot(std::span<const double> p, std::span<const double> v,
                   double beta);
Moments moments(std::span<const double> p, std::span<const double> v);
void axpy(double a, std::span<const double> x, std::span<double> y);
}  // namespace avx2
#endif

#if defined(__aarch64__) || defined(_M_ARM64)
#define RMG_HAVE_NEON_KERNELS 1
namespace neon {
double dot(std::span<const double> p, std::span<const double> v);
double clipped_dot(std::span<const double> p, std::span<const double> v,
                   double alpha);
double floored_dot(std::span<const double> p, std::span<const double> v,
                   double beta);
Moments moments(std::span<const double> p, std::span<const double> v);
void axpy(double a, std::span<const double> x, std::span<double> y);
}  // namespace neon
#endif

}  // namespace rmg::kernels

#endif  // RMG_KERNELS_HPP_
