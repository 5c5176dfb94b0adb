#pragma once

// Execution lanes for grid kernels. All field loops go through
// for_each_line / sum_over_lines, which run either as plain serial loops
// (the reference lane) or under OpenMP with static scheduling.
//
// Determinism contract: a line's work is a pure function of its index, and
// reductions accumulate per-line partials in fixed index order. Results are
// therefore bit-identical across lanes and across thread counts; the unit
// tests assert exact equality between the two lanes.

#include <complex>
#include <vector>

namespace csh::kernels {

enum class Backend { serial, openmp };

Backend active_backend();
void set_backend(Backend b);
bool openmp_available();
int max_threads();

namespace detail {
using LineFn = void (*)(int, void*);
void run_indexed(int count, LineFn fn, void* ctx);
}  // namespace detail

// fn(i) for i in [0, count). Iterations must not share mutable state.
template <class F>
void for_each_line(int count, F&& fn) {
  detail::LineFn thunk = [](int i, void* ctx) { (*static_cast<F*>(ctx))(i); };
  detail::run_indexed(count, thunk, const_cast<void*>(static_cast<const void*>(&fn)));
}

// Deterministic blocked reduction: partial[i] = line_value(i), then a serial
// accumulation over i. The accumulation order never depends on the lane.
template <class F>
double sum_over_lines(int count, F&& line_value) {
  std::vector<double> partial(static_cast<size_t>(count));
  for_each_line(count, [&](int i) { partial[static_cast<size_t>(i)] = line_value(i); });
  double s = 0.0;
  for (double v : partial) s += v;
  return s;
}

template <class F>
std::complex<double> csum_over_lines(int count, F&& line_value) {
  std::vector<std::complex<double>> partial(static_cast<size_t>(count));
  for_each_line(count, [&](int i) { partial[static_cast<size_t>(i)] = line_value(i); });
  std::complex<double> s{0.0, 0.0};
  for (const auto& v : partial) s += v;
  return s;
}

template <class F>
double max_over_lines(int count, F&& line_value) {
  std::vector<double> partial(static_cast<size_t>(count));
  for_each_line(count, [&](int i) { partial[static_cast<size_t>(i)] = line_value(i); });
  double m = 0.0;
  for (double v : partial) m = v > m ? v : m;
  return m;
}

}  // namespace csh::kernels
