#include "kernels_impl.hpp"

namespace fnlayout::kernels::detail {

void move_deltas_scalar(std::span<const std::uint32_t> left, std::span<const std::uint32_t> right,
                        std::span<const double> terms, std::span<double> to_right,
                        std::span<double> to_left) {
  for (std::size_t i = 0; i < left.size(); ++i) {
    move_delta_one(left[i], right[i], terms, to_right[i], to_left[i]);
  }
}

double gather_sum_scalar(std::span<const std::uint32_t> indices, const double* values) {
  const std::size_t n = indices.size();
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    lane[0] += values[indices[i]];
    lane[1] += values[indices[i + 1]];
    lane[2] += values[indices[i + 2]];
    lane[3] += values[indices[i + 3]];
  }
  double total = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (; i < n; ++i) total += values[indices[i]];
  return total;
}

}  // namespace fnlayout::kernels::detail
