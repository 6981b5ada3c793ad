#include "erbench/simd/kernels.h"

#if defined(__aarch64__) && defined(__ARM_NEON)
#define ERBENCH_HAVE_NEON_KERNELS 1
#include <arm_neon.h>
#endif

namespace erbench::simd {

#ifdef ERBENCH_HAVE_NEON_KERNELS

namespace {

// Plain mul/add/div, no fused ops, so the weights match the scalar kernel.
void bm25_accumulate_neon(std::span<const uint32_t> docs,
                          std::span<const uint32_t> tfs,
                          std::span<const double> norm, double idf,
                          double k1p1, std::span<double> acc) {
  const size_t n = docs.size();
  const float64x2_t vidf = vdupq_n_f64(idf);
  const float64x2_t vk1p1 = vdupq_n_f64(k1p1);
  double w[2];
  size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t tf = vcvtq_f64_u64(vmovl_u32(vld1_u32(tfs.data() + i)));
    float64x2_t nrm = vsetq_lane_f64(norm[docs[i + 1]],
                                     vdupq_n_f64(norm[docs[i]]), 1);
    float64x2_t num = vmulq_f64(tf, vk1p1);
    float64x2_t den = vaddq_f64(tf, nrm);
    vst1q_f64(w, vmulq_f64(vidf, vdivq_f64(num, den)));
    acc[docs[i]] += w[0];
    acc[docs[i + 1]] += w[1];
  }
  for (; i < n; ++i) {
    const double tf = static_cast<double>(tfs[i]);
    acc[docs[i]] += idf * ((tf * k1p1) / (tf + norm[docs[i]]));
  }
}

double dot_neon(std::span<const float> a, std::span<const float> b) {
  const size_t n = a.size();
  float64x2_t s0 = vdupq_n_f64(0.0);
  float64x2_t s1 = vdupq_n_f64(0.0);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    float32x4_t va = vld1q_f32(a.data() + i);
    float32x4_t vb = vld1q_f32(b.data() + i);
    s0 = vaddq_f64(s0, vmulq_f64(vcvt_f64_f32(vget_low_f32(va)),
                                 vcvt_f64_f32(vget_low_f32(vb))));
    s1 = vaddq_f64(s1, vmulq_f64(vcvt_high_f64_f32(va), vcvt_high_f64_f32(vb)));
  }
  double sum = vaddvq_f64(vaddq_f64(s0, s1));
  for (; i < n; ++i) {
    sum += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  }
  return sum;
}

void dot_rows_neon(std::span<const float> query, std::span<const float> rows,
                   size_t dim, std::span<double> out) {
  for (size_t r = 0; r < out.size(); ++r) {
    out[r] = dot_neon(query, rows.subspan(r * dim, dim));
  }
}

}  // namespace

const Kernels* neon_kernels() {
  static const Kernels k{Isa::kNeon, &bm25_accumulate_neon, &dot_neon,
                         &dot_rows_neon};
  return &k;
}

#else

const Kernels* neon_kernels() { return nullptr; }

#endif

}  // namespace erbench::simd
