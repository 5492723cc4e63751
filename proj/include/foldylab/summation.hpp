#pragma once

#include <cstddef>
#include <span>

namespace foldylab {

/// Pairwise (binary tree) summation. The reduction tree depends only on the
/// length of the input, so results are reproducible regardless of how the
/// callers are scheduled.
template <typename T>
T pairwise_sum(std::span<const T> values) {
  const std::size_t n = values.size();
  if (n == 0) return T{};
  if (n <= 8) {
    T acc = values[0];
    for (std::size_t i = 1; i < n; ++i) acc += values[i];
    return acc;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(values.subspan(0, half)) + pairwise_sum(values.subspan(half));
}

}  // namespace foldylab
