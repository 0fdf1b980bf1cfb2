#include <immintrin.h>

#include "basis_common.hpp"

namespace pgpr::kernels::avx2 {

using namespace detail;

namespace {

constexpr std::size_t kLanes = 4;

inline __m256d mul(__m256d a, __m256d b) { return _mm256_mul_pd(a, b); }

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline void rows_at(const HalfAngleBatch& b, std::size_t p, __m256d* r1, __m256d* r2) {
  const __m256d one = _mm256_set1_pd(1.0);
  power_row(_mm256_loadu_pd(b.c1 + p), _mm256_loadu_pd(b.s1 + p), one, r1, mul);
  power_row(_mm256_loadu_pd(b.c2 + p), _mm256_loadu_pd(b.s2 + p), one, r2, mul);
}

inline void basis_at(const HalfAngleBatch& b, std::size_t p, __m256d* t) {
  __m256d r1[kRow], r2[kRow];
  rows_at(b, p, r1, r2);
  for (int i = 0; i < kRow; ++i)
    for (int j = 0; j < kRow; ++j) t[kRow * i + j] = _mm256_mul_pd(r1[i], r2[j]);
}

HalfAngleBatch tail(const HalfAngleBatch& b, std::size_t from) {
  return {b.c1 + from, b.s1 + from, b.c2 + from, b.s2 + from, b.count - from};
}

}  // namespace

void mean(const HalfAngleBatch& b, const double* xi, double* out) {
  const std::size_t full = b.count - b.count % kLanes;
  for (std::size_t p = 0; p < full; p += kLanes) {
    __m256d r1[kRow], r2[kRow];
    rows_at(b, p, r1, r2);
    __m256d acc = _mm256_setzero_pd();
    for (int i = 0; i < kRow; ++i) {
      __m256d inner = _mm256_setzero_pd();
      for (int j = 0; j < kRow; ++j) inner = _mm256_fmadd_pd(r2[j], _mm256_set1_pd(xi[kRow * i + j]), inner);
      acc = _mm256_fmadd_pd(r1[i], inner, acc);
    }
    _mm256_storeu_pd(out + p, acc);
  }
  if (full < b.count) scalar::mean(tail(b, full), xi, out + full);
}

void quad_form(const HalfAngleBatch& b, const double* cov, double* out) {
  const std::size_t full = b.count - b.count % kLanes;
  __m256d t[kSize];
  for (std::size_t p = 0; p < full; p += kLanes) {
    basis_at(b, p, t);
    __m256d acc = _mm256_setzero_pd();
    for (int s = 0; s < kSize; ++s) {
      __m256d row = _mm256_setzero_pd();
      for (int u = 0; u < kSize; ++u) row = _mm256_fmadd_pd(_mm256_set1_pd(cov[kSize * s + u]), t[u], row);
      acc = _mm256_fmadd_pd(t[s], row, acc);
    }
    _mm256_storeu_pd(out + p, acc);
  }
  if (full < b.count) scalar::quad_form(tail(b, full), cov, out + full);
}

void accumulate_normal(const HalfAngleBatch& b, const double* w, const double* y, double* a, double* j) {
  const std::size_t full = b.count - b.count % kLanes;
  if (full > 0) {
    // Per-lane partial sums of the upper triangle, reduced once at the end.
    alignas(32) double acc[kSize * kSize * kLanes] = {};
    __m256d jacc[kSize];
    for (auto& v : jacc) v = _mm256_setzero_pd();
    __m256d t[kSize];
    for (std::size_t p = 0; p < full; p += kLanes) {
      basis_at(b, p, t);
      const __m256d wv = _mm256_loadu_pd(w + p);
      const __m256d wy = _mm256_mul_pd(wv, _mm256_loadu_pd(y + p));
      for (int s = 0; s < kSize; ++s) {
        const __m256d wt = _mm256_mul_pd(wv, t[s]);
        jacc[s] = _mm256_fmadd_pd(wy, t[s], jacc[s]);
        for (int u = s; u < kSize; ++u) {
          double* slot = acc + kLanes * (kSize * s + u);
          _mm256_store_pd(slot, _mm256_fmadd_pd(wt, t[u], _mm256_load_pd(slot)));
        }
      }
    }
    for (int s = 0; s < kSize; ++s) {
      j[s] += hsum(jacc[s]);
      for (int u = s; u < kSize; ++u) a[kSize * s + u] += hsum(_mm256_load_pd(acc + kLanes * (kSize * s + u)));
    }
  }
  // The scalar tail also mirrors the upper triangle into the lower one.
  scalar::accumulate_normal(tail(b, full), w + full, y + full, a, j);
}

}  // namespace pgpr::kernels::avx2
