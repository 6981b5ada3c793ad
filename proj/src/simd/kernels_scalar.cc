#include "erbench/simd/kernels.h"

namespace erbench::simd {

namespace {

void bm25_accumulate_scalar(std::span<const uint32_t> docs,
                            std::span<const uint32_t> tfs,
                            std::span<const double> norm, double idf,
                            double k1p1, std::span<double> acc) {
  for (size_t i = 0; i < docs.size(); ++i) {
    const double tf = static_cast<double>(tfs[i]);
    acc[docs[i]] += idf * ((tf * k1p1) / (tf + norm[docs[i]]));
  }
}

double dot_scalar(std::span<const float> a, std::span<const float> b) {
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    sum += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  }
  return sum;
}

void dot_rows_scalar(std::span<const float> query, std::span<const float> rows,
                     size_t dim, std::span<double> out) {
  for (size_t r = 0; r < out.size(); ++r) {
    out[r] = dot_scalar(query, rows.subspan(r * dim, dim));
  }
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k{Isa::kScalar, &bm25_accumulate_scalar, &dot_scalar,
                         &dot_rows_scalar};
  return k;
}

}  // namespace erbench::simd
