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

#include <atomic>
#include <cstdlib>
#include <string>

#include "rmg/error.hpp"
#include "rmg/kernels.hpp"

namespace rmg::kernels {
namespace {

struct Table {
  Isa isa;
  double (*dot)(std::span<const double>, std::span<const double>);
  double (*clipped_dot)(std::span<const double>, std::span<const double>,
                        double);
  double (*floored_dot)(std::span<const double>, std::span<const double>,
                        double);
  Moments (*moments)(std::span<const double>, std::span<const double>);
  void (*axpy)(double, std::span<const double>, std::span<double>);
};

constexpr Table kScalarTable{Isa::kScalar,        scalar::dot,
                             scalar::clipped_dot, scalar::floored_dot,
                             scalar::moments,     scalar::axpy};
#ifdef RMG_HAVE_AVX2_KERNELS
constexpr Table kAvx2Table{Isa::kAvx2,         avx2::dot,
                           avx2::clipped_dot,  avx2::floored_dot,
                           avx2::moments,      avx2::axpy};
#endif
#ifdef RMG_HAVE_NEON_KERNELS
constexpr Table kNeonTable{Isa::kNeon,         neon::dot,
                           neon::clipped_dot,  neon::floored_dot,
                           neon::moments,      neon::axpy};
#endif

const Table* table_for(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return &kScalarTable;
    case Isa::kAvx2:
#ifdef RMG_HAVE_AVX2_KERNELS
      return &kAvx2Table;
#else
      return nullptr;
#endif
    case Isa::kNeon:
#ifdef RMG_HAVE_NEON_KERNELS
      return &kNeonTable;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

const Table* pick_default() {
  if (const char* env = std::getenv("RMG_SIMD")) {
    const std::string want(env);
    for (Isa isa : {Isa::kScalar, Isa::kAvx2, Isa::kNeon}) {
      if (want == isa_name(isa) && isa_available(isa)) return table_for(isa);
    }
  }
  if (isa_available(Isa::kAvx2)) return table_for(Isa::kAvx2);
  if (isa_available(Isa::kNeon)) return table_for(Isa::kNeon);
  return &kScalarTable;
}

std::atomic<const Table*> g_table{nullptr};

const Table& table() {
  const Table* t = g_table.load(std::memory_order_acquire);
  if (t == nullptr) {
    t = pick_default();
    g_table.store(t, std::memory_order_release);
  }
  return *t;
}

}  // namespace

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#ifdef RMG_HAVE_AVX2_KERNELS
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::kNeon:
#ifdef RMG_HAVE_NEON_KERNELS
      return true;
#else
      return false;
#endif
  }
  return false;
}

void set_isa(Isa isa) {
  if (!isa_available(isa)) {
    throw Error(ErrorKind::kBadParams,
                "instruction set not available: " + std::string(isa_name(isa)));
  }
  g_table.store(table_for(isa), std::memory_order_release);
}

Isa active_isa() { return table().isa; }

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
    case Isa::kNeon: return "neon";
  }
  return "unknown";
}

double dot(std::span<const double> p, std::span<const double> v) {
  return table().dot(p, v);
}

double clipped_dot(std::span<const double> p, std::span<const double> v,
                   double alpha) {
  return table().clipped_dot(p, v, alpha);
}

double floored_dot(std::span<const double> p, std::span<const double> v,
                   double beta) {
  return table().floored_dot(p, v, beta);
}

Moments moments(std::span<const double> p, std::span<const double> v) {
  return table().moments(p, v);
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  table().axpy(a, x, y);
}

}  // namespace rmg::kernels
