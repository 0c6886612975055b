#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace chaoskit {

/// m^p as an entry count; saturates at SIZE_MAX instead of wrapping.
std::size_t grid_size(int resolution, int order);

/// Row-major digit decomposition: the first index is the most significant.
inline void decode_index(std::size_t linear, int resolution, std::span<int> digits) {
  for (std::size_t j = digits.size(); j-- > 0;) {
    digits[j] = static_cast<int>(linear % static_cast<std::size_t>(resolution));
    linear /= static_cast<std::size_t>(resolution);
  }
}

inline std::size_t encode_index(std::span<const int> digits, int resolution) {
  std::size_t linear = 0;
  for (int d : digits) linear = linear * static_cast<std::size_t>(resolution) + static_cast<std::size_t>(d);
  return linear;
}

/// Table mapping each linear index over `order` digits to the index of its
/// digit-reversed tuple.
std::vector<std::size_t> reversal_table(int resolution, int order);

}  // namespace chaoskit
