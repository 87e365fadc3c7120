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
// Compiled with -mavx2 -mfma. Nothing here may run before the dispatcher has
// confirmed CPU support.
#include "opekit/kernels.h"

#ifdef OPEKIT_HAVE_AVX2_KERNELS

#include <immintrin.h>

#include <cstddef>
#include <span>

namespace opekit::kernels::avx2 {

namespace {

// Four independent accumulators of four lanes hide the FMA latency.
constexpr std::size_t kLanes = 4;
constexpr std::size_t kBlock = 4 * kLanes;

inline double HorizontalSum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  const __m128d swapped = _mm_unpackhi_pd(pair, pair);
  return _mm_cvtsd_f64(_mm_add_sd(pair, swapped));
}

inline double Combine(__m256d a0, __m256d a1, __m256d a2, __m256d a3) {
  return HorizontalSum(_mm256_add_pd(_mm256_add_pd(a0, a1),
                                     _mm256_add_pd(a2, a3)));
}

}  // namespace

double Sum(std::span<const double> x) {
  const double* p = x.data();
  const std::size_t n = x.size();
  __m256d s0 = _mm256_setzero_pd(), s1 = s0, s2 = s0, s3 = s0;
  std::size_t i = 0;
  for (; i + kBlock <= n; i += kBlock) {
    s0 = _mm256_add_pd(s0, _mm256_loadu_pd(p + i));
    s1 = _mm256_add_pd(s1, _mm256_loadu_pd(p + i + 4));
    s2 = _mm256_add_pd(s2, _mm256_loadu_pd(p + i + 8));
    s3 = _mm256_add_pd(s3, _mm256_loadu_pd(p + i + 12));
  }
  for (; i + kLanes <= n; i += kLanes) {
    s0 = _mm256_add_pd(s0, _mm256_loadu_pd(p + i));
  }
  double s = Combine(s0, s1, s2, s3);
  for (; i < n; ++i) s += p[i];
  return s;
}

double Dot(std::span<const double> a, std::span<const double> b) {
  const double* pa = a.data();
  const double* pb = b.data();
  const std::size_t n = a.size();
  __m256d s0 = _mm256_setzero_pd(), s1 = s0, s2 = s0, s3 = s0;
  std::size_t i = 0;
  for (; i + kBlock <= n; i += kBlock) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i), _mm256_loadu_pd(pb + i), s0);
    s1 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i + 4),
                         _mm256_loadu_pd(pb + i + 4), s1);
    s2 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i + 8),
                         _mm256_loadu_pd(pb + i + 8), s2);
    s3 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i + 12),
                         _mm256_loadu_pd(pb + i + 12), s3);
  }
  for (; i + kLanes <= n; i += kLanes) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i), _mm256_loadu_pd(pb + i), s0);
  }
  double s = Combine(s0, s1, s2, s3);
  for (; i < n; ++i) s += pa[i] * pb[i];
  return s;
}

double TripleDot(std::span<const double> a, std::span<const double> b,
                 std::span<const double> c) {
  const double* pa = a.data();
  const double* pb = b.data();
  const double* pc = c.data();
  const std::size_t n = a.size();
  __m256d s0 = _mm256_setzero_pd(), s1 = s0;
  std::size_t i = 0;
  for (; i + 2 * kLanes <= n; i += 2 * kLanes) {
    const __m256d ab0 =
        _mm256_mul_pd(_mm256_loadu_pd(pa + i), _mm256_loadu_pd(pb + i));
    const __m256d ab1 =
        _mm256_mul_pd(_mm256_loadu_pd(pa + i + 4), _mm256_loadu_pd(pb + i + 4));
    s0 = _mm256_fmadd_pd(ab0, _mm256_loadu_pd(pc + i), s0);
    s1 = _mm256_fmadd_pd(ab1, _mm256_loadu_pd(pc + i + 4), s1);
  }
  double s = HorizontalSum(_mm256_add_pd(s0, s1));
  for (; i < n; ++i) s += pa[i] * pb[i] * pc[i];
  return s;
}

double SquaredDistance(std::span<const double> a, std::span<const double> b) {
  const double* pa = a.data();
  const double* pb = b.data();
  const std::size_t n = a.size();
  __m256d s0 = _mm256_setzero_pd(), s1 = s0;
  std::size_t i = 0;
  for (; i + 2 * kLanes <= n; i += 2 * kLanes) {
    const __m256d d0 =
        _mm256_sub_pd(_mm256_loadu_pd(pa + i), _mm256_loadu_pd(pb + i));
    const __m256d d1 =
        _mm256_sub_pd(_mm256_loadu_pd(pa + i + 4), _mm256_loadu_pd(pb + i + 4));
    s0 = _mm256_fmadd_pd(d0, d0, s0);
    s1 = _mm256_fmadd_pd(d1, d1, s1);
  }
  double s = HorizontalSum(_mm256_add_pd(s0, s1));
  for (; i < n; ++i) {
    const double d = pa[i] - pb[i];
    s += d * d;
  }
  return s;
}

void Axpy(double alpha, std::span<const double> x, std::span<double> y) {
  const double* px = x.data();
  double* py = y.data();
  const std::size_t n = x.size();
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(
        py + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(px + i),
                                _mm256_loadu_pd(py + i)));
  }
  for (; i < n; ++i) py[i] += alpha * px[i];
}

}  // namespace opekit::kernels::avx2

#endif  // OPEKIT_HAVE_AVX2_KERNELS
