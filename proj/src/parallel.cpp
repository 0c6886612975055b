#include "chaoskit/parallel.hpp"

#include <omp.h>

#include "chaoskit/errors.hpp"

namespace chaoskit {

void set_thread_limit(int threads) {
  if (threads < 1) throw InputError("thread count must be >= 1");
  omp_set_num_threads(threads);
}

int thread_limit() { return omp_get_max_threads(); }

}  // namespace chaoskit
