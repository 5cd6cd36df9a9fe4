#pragma once

// Thin FFTW layer: cached plans per grid size (planner access serialized),
// new-array execution so that concurrent callers only share immutable plans.

#include <cstddef>
#include <memory>
#include <vector>

#include "npe/spectral_field.hpp"

namespace npe::detail {

struct FftwFree {
  void operator()(void* p) const noexcept;
};

template <class T>
using AlignedArray = std::unique_ptr<T[], FftwFree>;

AlignedArray<double> allocate_real(std::size_t n);
AlignedArray<Complex> allocate_complex(std::size_t n);

/// Scratch owned by one thread for one grid size m.
struct GridWorkspace {
  explicit GridWorkspace(int m);

  int m;
  std::size_t points;     // m^3
  std::size_t half_size;  // m*m*(m/2+1)
  AlignedArray<Complex> half;
  std::vector<AlignedArray<double>> grids;

  /// The i-th real grid buffer, allocated on first use.
  double* grid(std::size_t i);
};

GridWorkspace& thread_workspace(int m);

/// Real samples on the m^3 grid of sum_{|k_i|<=cutoff} cube[k] exp(i k.x).
/// `cube` holds (2*cutoff+1)^3 scalar coefficients in lexicographic order and
/// must be Hermitian. Requires m >= 2*cutoff+1.
void band_to_grid(GridWorkspace& ws, int cutoff, const Complex* cube, double* out);

/// Discrete Fourier coefficients (scaled by 1/m^3) of real grid samples,
/// restricted to |k_i| <= cutoff.
void grid_to_band(GridWorkspace& ws, int cutoff, const double* in, Complex* cube);

/// In-place complex backward transform (exp(+i k.x) sign), size m^3.
void complex_backward(int m, Complex* data);

}  // namespace npe::detail
