#include "chaoskit/random_kernel.hpp"

#include "chaoskit/multi_index.hpp"

namespace chaoskit {

template <ChaosScalar T>
GridKernel<T> random_kernel(int p, int m, KernelShape shape, std::mt19937_64& rng, int range, int max_den) {
  if (range < 1 || max_den < 1) throw InputError("random_kernel needs range >= 1 and max_den >= 1");
  std::uniform_int_distribution<int> num(-range, range);
  std::uniform_int_distribution<int> den(1, max_den);
  const std::size_t n = grid_size(m, p);
  for (;;) {
    std::vector<T> coeffs;
    coeffs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) coeffs.push_back(ScalarTraits<T>::ratio(num(rng), den(rng)));
    GridKernel<T> f(p, m, std::move(coeffs));
    switch (shape) {
      case KernelShape::plain:
        break;
      case KernelShape::symmetric:
        f = symmetrize(f);
        break;
      case KernelShape::mirror_symmetric:
        f = add(f, adjoint(f)).scaled(ScalarTraits<T>::ratio(1, 2));
        break;
    }
    if (!ScalarTraits<T>::is_zero(l2_norm_sq(f))) return f;
  }
}

template GridKernel<Rational> random_kernel(int, int, KernelShape, std::mt19937_64&, int, int);
template GridKernel<double> random_kernel(int, int, KernelShape, std::mt19937_64&, int, int);

}  // namespace chaoskit
