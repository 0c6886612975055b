#pragma once

#include <random>

#include "chaoskit/grid_kernel.hpp"

namespace chaoskit {

enum class KernelShape { plain, symmetric, mirror_symmetric };

/// Nonzero kernel with coefficients n/d, n in [-range, range], d in 1..max_den,
/// projected onto the requested shape. A symmetric or mirror projection is
/// an average, so denominators may grow by p! or 2.
template <ChaosScalar T>
GridKernel<T> random_kernel(int p, int m, KernelShape shape, std::mt19937_64& rng, int range = 3, int max_den = 3);

}  // namespace chaoskit
