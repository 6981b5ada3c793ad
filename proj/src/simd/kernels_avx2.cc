#include "erbench/simd/kernels.h"

#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
#define ERBENCH_HAVE_AVX2_KERNELS 1
#include <immintrin.h>
#endif

namespace erbench::simd {

#ifdef ERBENCH_HAVE_AVX2_KERNELS

namespace {

#define ERBENCH_AVX2 __attribute__((target("avx2")))

ERBENCH_AVX2 inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

// No FMA here: the weights have to match the scalar kernel bit for bit.
ERBENCH_AVX2 void bm25_accumulate_avx2(std::span<const uint32_t> docs,
                                       std::span<const uint32_t> tfs,
                                       std::span<const double> norm, double idf,
                                       double k1p1, std::span<double> acc) {
  const size_t n = docs.size();
  const __m256d vidf = _mm256_set1_pd(idf);
  const __m256d vk1p1 = _mm256_set1_pd(k1p1);
  alignas(32) double w[4];
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(docs.data() + i));
    __m128i tfi = _mm_loadu_si128(reinterpret_cast<const __m128i*>(tfs.data() + i));
    __m256d tf = _mm256_cvtepi32_pd(tfi);
    __m256d nrm = _mm256_i32gather_pd(norm.data(), idx, 8);
    __m256d num = _mm256_mul_pd(tf, vk1p1);
    __m256d den = _mm256_add_pd(tf, nrm);
    _mm256_store_pd(w, _mm256_mul_pd(vidf, _mm256_div_pd(num, den)));
    acc[docs[i]] += w[0];
    acc[docs[i + 1]] += w[1];
    acc[docs[i + 2]] += w[2];
    acc[docs[i + 3]] += w[3];
  }
  for (; i < n; ++i) {
    const double tf = static_cast<double>(tfs[i]);
    acc[docs[i]] += idf * ((tf * k1p1) / (tf + norm[docs[i]]));
  }
}

ERBENCH_AVX2 double dot_avx2(std::span<const float> a, std::span<const float> b) {
  const size_t n = a.size();
  __m256d s0 = _mm256_setzero_pd();
  __m256d s1 = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 va = _mm256_loadu_ps(a.data() + i);
    __m256 vb = _mm256_loadu_ps(b.data() + i);
    __m256d alo = _mm256_cvtps_pd(_mm256_castps256_ps128(va));
    __m256d ahi = _mm256_cvtps_pd(_mm256_extractf128_ps(va, 1));
    __m256d blo = _mm256_cvtps_pd(_mm256_castps256_ps128(vb));
    __m256d bhi = _mm256_cvtps_pd(_mm256_extractf128_ps(vb, 1));
    s0 = _mm256_add_pd(s0, _mm256_mul_pd(alo, blo));
    s1 = _mm256_add_pd(s1, _mm256_mul_pd(ahi, bhi));
  }
  double sum = hsum(_mm256_add_pd(s0, s1));
  for (; i < n; ++i) {
    sum += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  }
  return sum;
}

ERBENCH_AVX2 void dot_rows_avx2(std::span<const float> query,
                                std::span<const float> rows, size_t dim,
                                std::span<double> out) {
  for (size_t r = 0; r < out.size(); ++r) {
    out[r] = dot_avx2(query, rows.subspan(r * dim, dim));
  }
}

#undef ERBENCH_AVX2

}  // namespace

const Kernels* avx2_kernels() {
  static const bool supported = __builtin_cpu_supports("avx2");
  static const Kernels k{Isa::kAvx2, &bm25_accumulate_avx2, &dot_avx2,
                         &dot_rows_avx2};
  return supported ? &k : nullptr;
}

#else

const Kernels* avx2_kernels() { return nullptr; }

#endif

}  // namespace erbench::simd
