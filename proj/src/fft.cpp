#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

#include "dirac_front/errors.hpp"
#include "dirac_front/parallel.hpp"
#include "dirac_front/spinor_field.hpp"

namespace dirac_front {

namespace {

// One plan per (dim, n, components, sign); each component is transformed by a
// single-threaded plan so results are independent of the thread count.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int dim, int n, int sign) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_tuple(dim, n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::size_t voxels = 1;
    for (int a = 0; a < dim; ++a) voxels *= static_cast<std::size_t>(n);
    ComplexBuffer scratch(voxels);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    const int dims[3] = {n, n, n};
    fftw_plan plan = fftw_plan_dft(dim, dims, buf, buf, sign, FFTW_ESTIMATE);
    if (plan == nullptr) throw ConfigError("FFTW failed to create a plan");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

}  // namespace

void fft_components(std::span<cdouble> data, const GridSpec& grid, int components, int sign) {
  const std::size_t voxels = grid.voxel_count();
  fftw_plan plan = plan_cache().get(grid.dim, grid.n, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD);
  parallel_for(static_cast<std::size_t>(components), [&](std::size_t c) {
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data() + c * voxels);
    fftw_execute_dft(plan, ptr, ptr);
  });
}

}  // namespace dirac_front
