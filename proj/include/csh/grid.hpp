#pragma once

#include <complex>
#include <memory>

namespace csh {

// Uniform periodic grid on [0,L)^2 with its wavenumber lattice and a shared
// set of FFTW plans. Copies are cheap and share the plans; two grids compare
// equal when they have the same size and period.
//
// Fourier convention: f(x) = sum_m c_m exp(i k_m . x) with k_m = 2 pi m / L
// and m in [-n/2, n/2) per axis, so the forward transform divides by n^2 and
// single-mode amplitudes come out exact.
class TorusGrid {
 public:
  TorusGrid(int n_points, double length);

  int n() const;
  double length() const;
  int size() const { return n() * n(); }
  double dx() const { return length() / n(); }
  double cell_area() const { return dx() * dx(); }

  // signed integer mode for a storage index along one axis (FFT order)
  int mode(int idx) const;
  // 2 pi m / L for a storage index
  double wavenumber(int idx) const;
  // the unpaired mode m = -n/2 on an even grid
  bool is_nyquist(int idx) const { return idx == n() / 2; }

  // In-place transforms of a row-major n x n complex buffer. Forward applies
  // the 1/n^2 normalization. Runs one 1-d pass per row and per column through
  // the kernels layer; each line uses the same serial FFTW plan in both
  // lanes, so results are bit-stable.
  void fft_forward(std::complex<double>* values) const;
  void fft_backward(std::complex<double>* values) const;

  bool operator==(const TorusGrid& other) const;
  bool operator!=(const TorusGrid& other) const { return !(*this == other); }

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

}  // namespace csh
