#include "csh/grid.hpp"

#include <fftw3.h>

#include <mutex>
#include <vector>

#include "csh/errors.hpp"
#include "csh/kernels.hpp"

namespace csh {

namespace {
// FFTW's planner is not reentrant; executing plans on new arrays is.
std::mutex g_planner_mutex;
}  // namespace

struct TorusGrid::Impl {
  int n = 0;
  double length = 0.0;
  std::vector<double> k;  // wavenumber per storage index
  fftw_plan row_fwd = nullptr, row_bwd = nullptr;
  fftw_plan col_fwd = nullptr, col_bwd = nullptr;

  Impl(int n_points, double period) : n(n_points), length(period) {
    if (n < 4 || n % 2 != 0) throw UsageError("grid n must be even and >= 4");
    if (!(length > 0.0)) throw UsageError("grid period must be positive");
    k.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      const int m = i < n / 2 ? i : i - n;
      k[static_cast<size_t>(i)] = 2.0 * M_PI * m / length;
    }

    std::lock_guard<std::mutex> lock(g_planner_mutex);
    std::vector<std::complex<double>> scratch(static_cast<size_t>(n) * n);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    row_fwd = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, flags);
    row_bwd = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, flags);
    if (!row_fwd || !row_bwd) throw Error("fftw row plan failed");
    // column pass: length-n transform with stride n
    int sz = n;
    col_fwd = fftw_plan_many_dft(1, &sz, 1, buf, nullptr, n, 0, buf, nullptr,
                                 n, 0, FFTW_FORWARD, flags);
    col_bwd = fftw_plan_many_dft(1, &sz, 1, buf, nullptr, n, 0, buf, nullptr,
                                 n, 0, FFTW_BACKWARD, flags);
    if (!col_fwd || !col_bwd) throw Error("fftw column plan failed");
  }

  ~Impl() {
    if (row_fwd) fftw_destroy_plan(row_fwd);
    if (row_bwd) fftw_destroy_plan(row_bwd);
    if (col_fwd) fftw_destroy_plan(col_fwd);
    if (col_bwd) fftw_destroy_plan(col_bwd);
  }

  Impl(const Impl&) = delete;
  Impl& operator=(const Impl&) = delete;

  void transform(std::complex<double>* values, bool forward) const {
    auto* base = reinterpret_cast<fftw_complex*>(values);
    const fftw_plan row = forward ? row_fwd : row_bwd;
    const fftw_plan col = forward ? col_fwd : col_bwd;
    kernels::for_each_line(
        n, [&](int r) { fftw_execute_dft(row, base + static_cast<size_t>(r) * n, base + static_cast<size_t>(r) * n); });
    kernels::for_each_line(n, [&](int c) { fftw_execute_dft(col, base + c, base + c); });
    if (forward) {
      const double scale = 1.0 / (static_cast<double>(n) * n);
      kernels::for_each_line(n, [&](int r) {
        std::complex<double>* p = values + static_cast<size_t>(r) * n;
        for (int c = 0; c < n; ++c) p[c] *= scale;
      });
    }
  }
};

TorusGrid::TorusGrid(int n_points, double length)
    : impl_(std::make_shared<const Impl>(n_points, length)) {}

int TorusGrid::n() const { return impl_->n; }
double TorusGrid::length() const { return impl_->length; }

int TorusGrid::mode(int idx) const {
  return idx < impl_->n / 2 ? idx : idx - impl_->n;
}

double TorusGrid::wavenumber(int idx) const {
  return impl_->k[static_cast<size_t>(idx)];
}

void TorusGrid::fft_forward(std::complex<double>* values) const {
  impl_->transform(values, true);
}

void TorusGrid::fft_backward(std::complex<double>* values) const {
  impl_->transform(values, false);
}

bool TorusGrid::operator==(const TorusGrid& other) const {
  return impl_ == other.impl_ ||
         (impl_->n == other.impl_->n && impl_->length == other.impl_->length);
}

}  // namespace csh
