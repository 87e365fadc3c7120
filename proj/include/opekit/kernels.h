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
// Dense reduction and update kernels used by the estimators and learners.
//
// Every kernel has a scalar reference implementation (strict left-to-right
// accumulation) and, on x86-64, an AVX2+FMA variant. The variant is chosen
// once per process from CPU support and the OPE_KIT_SIMD environment variable
// ("scalar", "avx2" or "auto"). Vector variants reassociate the sums, so they
// agree with the scalar reference to rounding, not bitwise; within a process
// the choice is fixed, which keeps seeded runs reproducible.
#ifndef OPEKIT_KERNELS_H_
#define OPEKIT_KERNELS_H_

#include <span>
#include <string_view>

namespace opekit::kernels {

enum class Isa { kScalar, kAvx2 };

std::string_view IsaName(Isa isa);
bool IsaAvailable(Isa isa);

// The instruction set the dispatching entry points below currently use.
Isa ActiveIsa();

// Overrides dispatch for the rest of the process. Throws if `isa` is not
// supported on this machine. Intended for tests and benchmarks.
void SetActiveIsa(Isa isa);

double Sum(std::span<const double> x);
double Dot(std::span<const double> a, std::span<const double> b);
// sum_i a_i * b_i * c_i
double TripleDot(std::span<const double> a, std::span<const double> b,
                 std::span<const double> c);
// sum_i (a_i - b_i)^2
double SquaredDistance(std::span<const double> a, std::span<const double> b);
// y += alpha * x
void Axpy(double alpha, std::span<const double> x, std::span<double> y);

namespace scalar {
double Sum(std::span<const double> x);
double Dot(std::span<const double> a, std::span<const double> b);
double TripleDot(std::span<const double> a, std::span<const double> b,
                 std::span<const double> c);
double SquaredDistance(std::span<const double> a, std::span<const double> b);
void Axpy(double alpha, std::span<const double> x, std::span<double> y);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define OPEKIT_HAVE_AVX2_KERNELS 1
namespace avx2 {
double Sum(std::span<const double> x);
double Dot(std::span<const double> a, std::span<const double> b);
double TripleDot(std::span<const double> a, std::span<const double> b,
                 std::span<const double> c);
double SquaredDistance(std::span<const double> a, std::span<const double> b);
void Axpy(double alpha, std::span<const double> x, std::span<double> y);
}  // namespace avx2
#endif

}  // namespace opekit::kernels

#endif  // OPEKIT_KERNELS_H_
