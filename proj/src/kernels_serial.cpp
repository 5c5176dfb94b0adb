#include "csh/kernels.hpp"

namespace csh::kernels {

void run_lines_serial(int count, detail::LineFn fn, void* ctx) {
  for (int i = 0; i < count; ++i) fn(i, ctx);
}

}  // namespace csh::kernels
