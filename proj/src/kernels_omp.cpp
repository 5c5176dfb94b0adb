#include <atomic>

#include "csh/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace csh::kernels {

void run_lines_serial(int count, detail::LineFn fn, void* ctx);

namespace {

std::atomic<Backend> g_backend{
#ifdef _OPENMP
    Backend::openmp
#else
    Backend::serial
#endif
};

void run_lines_openmp(int count, detail::LineFn fn, void* ctx) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
  for (int i = 0; i < count; ++i) fn(i, ctx);
#else
  run_lines_serial(count, fn, ctx);
#endif
}

}  // namespace

Backend active_backend() { return g_backend.load(std::memory_order_relaxed); }

void set_backend(Backend b) { g_backend.store(b, std::memory_order_relaxed); }

bool openmp_available() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace detail {

void run_indexed(int count, LineFn fn, void* ctx) {
  if (active_backend() == Backend::openmp)
    run_lines_openmp(count, fn, ctx);
  else
    run_lines_serial(count, fn, ctx);
}

}  // namespace detail
}  // namespace csh::kernels
