#include "dirac_front/parallel.hpp"

#include <cstdlib>
#include <string>

namespace dirac_front {

int configured_threads() {
  const char* raw = std::getenv("DIRAC_FRONT_THREADS");
  if (raw == nullptr) return 0;
  try {
    const int n = std::stoi(raw);
    return n > 0 ? n : 0;
  } catch (const std::exception&) {
    return 0;
  }
}

void apply_thread_limit() {
#ifdef _OPENMP
  if (const int n = configured_threads(); n > 0) omp_set_num_threads(n);
#endif
}

}  // namespace dirac_front
