#pragma once

#include "fnlayout/kernels.hpp"

namespace fnlayout::kernels::detail {

void move_deltas_scalar(std::span<const std::uint32_t> left, std::span<const std::uint32_t> right,
                        std::span<const double> terms, std::span<double> to_right,
                        std::span<double> to_left);
double gather_sum_scalar(std::span<const std::uint32_t> indices, const double* values);

#if defined(FNLAYOUT_HAVE_AVX2)
void move_deltas_avx2(std::span<const std::uint32_t> left, std::span<const std::uint32_t> right,
                      std::span<const double> terms, std::span<double> to_right,
                      std::span<double> to_left);
double gather_sum_avx2(std::span<const std::uint32_t> indices, const double* values);
#endif

// Shared by both variants for the elements outside full vectors, so the
// tails agree bit for bit.
inline void move_delta_one(std::uint32_t l, std::uint32_t r, std::span<const double> terms,
                           double& to_right, double& to_left) {
  if (terms.empty()) {
    const std::int64_t m = l < r ? l : r;
    const std::int64_t m_right = l > 0 ? (l - 1 < r + 1 ? l - 1 : r + 1) : m;
    const std::int64_t m_left = r > 0 ? (l + 1 < r - 1 ? l + 1 : r - 1) : m;
    to_right = l > 0 ? static_cast<double>(2 * (m - m_right)) : 0.0;
    to_left = r > 0 ? static_cast<double>(2 * (m - m_left)) : 0.0;
    return;
  }
  const double base = terms[l] + terms[r];
  to_right = l > 0 ? base - (terms[l - 1] + terms[r + 1]) : 0.0;
  to_left = r > 0 ? base - (terms[l + 1] + terms[r - 1]) : 0.0;
}

}  // namespace fnlayout::kernels::detail
