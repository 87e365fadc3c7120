/*
* Copyright 2026 The ope-kit Authors.
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     https://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
* ============================================================================
*/
#include <atomic>
#include <cassert>
#include <cstdlib>
#include <span>
#include <string>
#include <string_view>

#include "opekit/error.h"
#include "opekit/kernels.h"

namespace opekit::kernels {

namespace {

struct KernelTable {
  Isa isa;
  double (*sum)(std::span<const double>);
  double (*dot)(std::span<const double>, std::span<const double>);
  double (*triple_dot)(std::span<const double>, std::span<const double>,
                       std::span<const double>);
  double (*squared_distance)(std::span<const double>, std::span<const double>);
  void (*axpy)(double, std::span<const double>, std::span<double>);
};

constexpr KernelTable kScalarTable = {
    Isa::kScalar,          scalar::Sum,  scalar::Dot, scalar::TripleDot,
    scalar::SquaredDistance, scalar::Axpy};

#ifdef OPEKIT_HAVE_AVX2_KERNELS
constexpr KernelTable kAvx2Table = {
    Isa::kAvx2,          avx2::Sum,  avx2::Dot, avx2::TripleDot,
    avx2::SquaredDistance, avx2::Axpy};
#endif

const KernelTable* TableFor(Isa isa) {
#ifdef OPEKIT_HAVE_AVX2_KERNELS
  if (isa == Isa::kAvx2) return &kAvx2Table;
#endif
  return &kScalarTable;
}

const KernelTable* ResolveFromEnvironment() {
  Isa isa = IsaAvailable(Isa::kAvx2) ? Isa::kAvx2 : Isa::kScalar;
  if (const char* env = std::getenv("OPE_KIT_SIMD")) {
    const std::string_view v(env);
    if (v == "scalar") isa = Isa::kScalar;
  }
  return TableFor(isa);
}

std::atomic<const KernelTable*>& ActiveTable() {
  static std::atomic<const KernelTable*> table{ResolveFromEnvironment()};
  return table;
}

inline const KernelTable& Table() {
  return *ActiveTable().load(std::memory_order_relaxed);
}

}  // namespace

std::string_view IsaName(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
  }
  return "unknown";
}

bool IsaAvailable(Isa isa) {
  if (isa == Isa::kScalar) return true;
#ifdef OPEKIT_HAVE_AVX2_KERNELS
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa ActiveIsa() { return Table().isa; }

void SetActiveIsa(Isa isa) {
  if (!IsaAvailable(isa)) {
    throw Error(ErrorCode::kInvalidArgument,
                "instruction set " + std::string(IsaName(isa)) +
                    " is not available on this CPU");
  }
  ActiveTable().store(TableFor(isa), std::memory_order_relaxed);
}

double Sum(std::span<const double> x) { return Table().sum(x); }

double Dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return Table().dot(a, b);
}

double TripleDot(std::span<const double> a, std::span<const double> b,
                 std::span<const double> c) {
  assert(a.size() == b.size() && a.size() == c.size());
  return Table().triple_dot(a, b, c);
}

double SquaredDistance(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return Table().squared_distance(a, b);
}

void Axpy(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  Table().axpy(alpha, x, y);
}

}  // namespace opekit::kernels
