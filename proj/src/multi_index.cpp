#include "chaoskit/multi_index.hpp"

#include <limits>

namespace chaoskit {

std::size_t grid_size(int resolution, int order) {
  std::size_t n = 1;
  const auto m = static_cast<std::size_t>(resolution);
  for (int j = 0; j < order; ++j) {
    if (n > std::numeric_limits<std::size_t>::max() / m) return std::numeric_limits<std::size_t>::max();
    n *= m;
  }
  return n;
}

std::vector<std::size_t> reversal_table(int resolution, int order) {
  const std::size_t n = grid_size(resolution, order);
  std::vector<std::size_t> table(n);
  std::vector<int> digits(static_cast<std::size_t>(order));
  for (std::size_t i = 0; i < n; ++i) {
    decode_index(i, resolution, digits);
    std::size_t rev = 0;
    for (int j = order; j-- > 0;) rev = rev * static_cast<std::size_t>(resolution) + static_cast<std::size_t>(digits[static_cast<std::size_t>(j)]);
    table[i] = rev;
  }
  return table;
}

}  // namespace chaoskit
