#pragma once

// Data-parallel inner loops of the bisection refinement. Each kernel has a
// scalar reference and, where the CPU allows, an AVX2 variant chosen at
// runtime. Variants are required to produce bit-identical results, so
// layouts do not depend on the machine the tool runs on.

#include <cstdint>
#include <span>
#include <string_view>

namespace fnlayout::kernels {

enum class Isa : std::uint8_t { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

struct KernelSet {
  Isa isa;

  // For every utility u with counts (L, R):
  //   to_right[u] = cost(L, R) - cost(L - 1, R + 1)   (0 when L == 0)
  //   to_left[u]  = cost(L, R) - cost(L + 1, R - 1)   (0 when R == 0)
  // Separable objectives pass terms[x] with cost(L, R) = c + terms[L] + terms[R]
  // and terms.size() > max(L, R) + 1. Empty terms selects the
  // absolute-difference objective, cost(L, R) = 2 min(L, R).
  void (*move_deltas)(std::span<const std::uint32_t> left, std::span<const std::uint32_t> right,
                      std::span<const double> terms, std::span<double> to_right,
                      std::span<double> to_left);

  // Sum of values[indices[i]]. Summation uses four interleaved partial sums
  // (lane i % 4 for the leading multiple of four), combined as
  // (s0 + s1) + (s2 + s3), then the tail added in order.
  double (*gather_sum)(std::span<const std::uint32_t> indices, const double* values);
};

const KernelSet& scalar_kernels();

// nullptr when the variant was not compiled in or the CPU lacks it.
const KernelSet* avx2_kernels();

/// The widest supported variant. FNLAYOUT_ISA=scalar in the environment
/// forces the reference kernels.
const KernelSet& active_kernels();

}  // namespace fnlayout::kernels
