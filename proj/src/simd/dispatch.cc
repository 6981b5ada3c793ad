#include <cstdlib>
#include <string>

#include "erbench/simd/kernels.h"

namespace erbench::simd {

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
    case Isa::kNeon: return "neon";
  }
  return "scalar";
}

std::vector<const Kernels*> available_kernels() {
  std::vector<const Kernels*> out{&scalar_kernels()};
  if (const Kernels* k = avx2_kernels()) out.push_back(k);
  if (const Kernels* k = neon_kernels()) out.push_back(k);
  return out;
}

namespace {

const Kernels& select_kernels() {
  const auto all = available_kernels();
  if (const char* env = std::getenv("ERBENCH_SIMD")) {
    std::string_view want(env);
    for (const Kernels* k : all) {
      if (to_string(k->isa) == want) return *k;
    }
    return scalar_kernels();
  }
  return *all.back();
}

}  // namespace

const Kernels& active_kernels() {
  static const Kernels& k = select_kernels();
  return k;
}

}  // namespace erbench::simd
