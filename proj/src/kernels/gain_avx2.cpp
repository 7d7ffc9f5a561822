#include <immintrin.h>

#include "kernels_impl.hpp"

namespace fnlayout::kernels::detail {

namespace {

// Widens a 4 x i32 comparison mask to 4 x f64 lanes.
inline __m256d widen_mask(__m128i mask) {
  return _mm256_castsi256_pd(_mm256_cvtepi32_epi64(mask));
}

}  // namespace

void move_deltas_avx2(std::span<const std::uint32_t> left, std::span<const std::uint32_t> right,
                      std::span<const double> terms, std::span<double> to_right,
                      std::span<double> to_left) {
  const std::size_t n = left.size();
  const __m128i zero = _mm_setzero_si128();
  const __m128i one = _mm_set1_epi32(1);
  std::size_t i = 0;

  if (terms.empty()) {
    const __m256d two = _mm256_set1_pd(2.0);
    for (; i + 4 <= n; i += 4) {
      const __m128i l = _mm_loadu_si128(reinterpret_cast<const __m128i*>(left.data() + i));
      const __m128i r = _mm_loadu_si128(reinterpret_cast<const __m128i*>(right.data() + i));
      const __m128i lm = _mm_sub_epi32(l, one);
      const __m128i lp = _mm_add_epi32(l, one);
      const __m128i rm = _mm_sub_epi32(r, one);
      const __m128i rp = _mm_add_epi32(r, one);
      const __m128i m = _mm_min_epi32(l, r);
      const __m128i d_right = _mm_sub_epi32(m, _mm_min_epi32(lm, rp));
      const __m128i d_left = _mm_sub_epi32(m, _mm_min_epi32(lp, rm));
      const __m256d has_left = widen_mask(_mm_cmpgt_epi32(l, zero));
      const __m256d has_right = widen_mask(_mm_cmpgt_epi32(r, zero));
      _mm256_storeu_pd(to_right.data() + i,
                       _mm256_and_pd(has_left, _mm256_mul_pd(two, _mm256_cvtepi32_pd(d_right))));
      _mm256_storeu_pd(to_left.data() + i,
                       _mm256_and_pd(has_right, _mm256_mul_pd(two, _mm256_cvtepi32_pd(d_left))));
    }
  } else {
    const double* t = terms.data();
    for (; i + 4 <= n; i += 4) {
      const __m128i l = _mm_loadu_si128(reinterpret_cast<const __m128i*>(left.data() + i));
      const __m128i r = _mm_loadu_si128(reinterpret_cast<const __m128i*>(right.data() + i));
      // Clamp at zero so masked-off lanes still gather in bounds.
      const __m128i lm = _mm_max_epi32(_mm_sub_epi32(l, one), zero);
      const __m128i rm = _mm_max_epi32(_mm_sub_epi32(r, one), zero);
      const __m128i lp = _mm_add_epi32(l, one);
      const __m128i rp = _mm_add_epi32(r, one);
      const __m256d base = _mm256_add_pd(_mm256_i32gather_pd(t, l, 8), _mm256_i32gather_pd(t, r, 8));
      const __m256d moved_right =
          _mm256_add_pd(_mm256_i32gather_pd(t, lm, 8), _mm256_i32gather_pd(t, rp, 8));
      const __m256d moved_left =
          _mm256_add_pd(_mm256_i32gather_pd(t, lp, 8), _mm256_i32gather_pd(t, rm, 8));
      const __m256d has_left = widen_mask(_mm_cmpgt_epi32(l, zero));
      const __m256d has_right = widen_mask(_mm_cmpgt_epi32(r, zero));
      _mm256_storeu_pd(to_right.data() + i, _mm256_and_pd(has_left, _mm256_sub_pd(base, moved_right)));
      _mm256_storeu_pd(to_left.data() + i, _mm256_and_pd(has_right, _mm256_sub_pd(base, moved_left)));
    }
  }
  for (; i < n; ++i) move_delta_one(left[i], right[i], terms, to_right[i], to_left[i]);
}

double gather_sum_avx2(std::span<const std::uint32_t> indices, const double* values) {
  const std::size_t n = indices.size();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(indices.data() + i));
    acc = _mm256_add_pd(acc, _mm256_i32gather_pd(values, idx, 8));
  }
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  double total = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (; i < n; ++i) total += values[indices[i]];
  return total;
}

}  // namespace fnlayout::kernels::detail
