#pragma once

// Data-parallel inner loops with a scalar reference implementation and
// vectorized variants picked at runtime. Every variant must agree with the
// scalar kernel: bm25_accumulate bit-for-bit, the dot products to within
// double rounding of a reordered sum.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace erbench::simd {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view to_string(Isa isa);

struct Kernels {
  Isa isa;

  // For each posting i: acc[docs[i]] += idf * ((tfs[i] * k1p1) / (tfs[i] + norm[docs[i]])).
  // `docs` holds distinct indices into `norm` and `acc`.
  void (*bm25_accumulate)(std::span<const uint32_t> docs,
                          std::span<const uint32_t> tfs,
                          std::span<const double> norm, double idf,
                          double k1p1, std::span<double> acc);

  // Sum of a[i] * b[i], accumulated in double.
  double (*dot)(std::span<const float> a, std::span<const float> b);

  // out[r] = dot(query, rows[r * dim .. (r + 1) * dim)).
  void (*dot_rows)(std::span<const float> query, std::span<const float> rows,
                   size_t dim, std::span<double> out);
};

const Kernels& scalar_kernels();

// Null when the variant is not compiled in or the CPU lacks the extension.
const Kernels* avx2_kernels();
const Kernels* neon_kernels();

// Every variant usable on this machine, scalar first.
std::vector<const Kernels*> available_kernels();

// Best available variant, chosen on first use. ERBENCH_SIMD=scalar|avx2|neon
// forces a variant; an unavailable request falls back to scalar.
const Kernels& active_kernels();

}  // namespace erbench::simd
