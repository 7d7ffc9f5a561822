#include <cstdlib>
#include <string_view>

#include "kernels_impl.hpp"

namespace fnlayout::kernels {

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
  }
  return "?";
}

const KernelSet& scalar_kernels() {
  static const KernelSet set{Isa::Scalar, &detail::move_deltas_scalar, &detail::gather_sum_scalar};
  return set;
}

const KernelSet* avx2_kernels() {
#if defined(FNLAYOUT_HAVE_AVX2)
  static const KernelSet set{Isa::Avx2, &detail::move_deltas_avx2, &detail::gather_sum_avx2};
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &set : nullptr;
#else
  return nullptr;
#endif
}

const KernelSet& active_kernels() {
  static const KernelSet* chosen = [] {
    const char* forced = std::getenv("FNLAYOUT_ISA");
    if (forced != nullptr && std::string_view(forced) == "scalar") return &scalar_kernels();
    if (const KernelSet* avx2 = avx2_kernels()) return avx2;
    return &scalar_kernels();
  }();
  return *chosen;
}

}  // namespace fnlayout::kernels
