#include "funstack/threads.hpp"

#include <cstdlib>
#include <thread>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace funstack {

int worker_count() {
#ifdef _OPENMP
  int n = omp_get_max_threads();
#else
  int n = static_cast<int>(std::thread::hardware_concurrency());
#endif
  if (n < 1) n = 1;
  if (const char* env = std::getenv("FUNSTACK_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1 && cap < n) n = cap;
  }
  return n;
}

}  // namespace funstack
