#include "spectral/fft_backend.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>

#include "npe/error.hpp"

namespace npe::detail {

static_assert(sizeof(Complex) == sizeof(fftw_complex));

void FftwFree::operator()(void* p) const noexcept { fftw_free(p); }

AlignedArray<double> allocate_real(std::size_t n) {
  auto* p = fftw_alloc_real(n);
  if (p == nullptr) throw std::bad_alloc();
  return AlignedArray<double>(p);
}

AlignedArray<Complex> allocate_complex(std::size_t n) {
  auto* p = reinterpret_cast<Complex*>(fftw_alloc_complex(n));
  if (p == nullptr) throw std::bad_alloc();
  return AlignedArray<Complex>(p);
}

namespace {

struct Plans {
  fftw_plan c2r = nullptr;
  fftw_plan r2c = nullptr;
  fftw_plan c2c_backward = nullptr;
};

std::mutex planner_mutex;
std::map<int, Plans> plan_cache;

// FFTW_ESTIMATE keeps plan selection independent of timing noise, so repeated
// runs produce bit-identical output.
Plans& plans_for(int m, bool need_c2c) {
  std::lock_guard lock(planner_mutex);
  auto& plans = plan_cache[m];
  const std::size_t points = static_cast<std::size_t>(m) * m * m;
  if (plans.c2r == nullptr) {
    const std::size_t half = static_cast<std::size_t>(m) * m * (m / 2 + 1);
    auto real = allocate_real(points);
    auto cplx = allocate_complex(half);
    auto* c = reinterpret_cast<fftw_complex*>(cplx.get());
    plans.c2r = fftw_plan_dft_c2r_3d(m, m, m, c, real.get(), FFTW_ESTIMATE);
    plans.r2c = fftw_plan_dft_r2c_3d(m, m, m, real.get(), c, FFTW_ESTIMATE);
  }
  if (need_c2c && plans.c2c_backward == nullptr) {
    auto buf = allocate_complex(points);
    auto* c = reinterpret_cast<fftw_complex*>(buf.get());
    plans.c2c_backward = fftw_plan_dft_3d(m, m, m, c, c, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  return plans;
}

inline int wrap(int k, int m) { return k < 0 ? k + m : k; }

}  // namespace

GridWorkspace::GridWorkspace(int size)
    : m(size),
      points(static_cast<std::size_t>(size) * size * size),
      half_size(static_cast<std::size_t>(size) * size * (size / 2 + 1)),
      half(allocate_complex(half_size)) {}

double* GridWorkspace::grid(std::size_t i) {
  while (grids.size() <= i) grids.push_back(allocate_real(points));
  return grids[i].get();
}

GridWorkspace& thread_workspace(int m) {
  thread_local std::map<int, std::unique_ptr<GridWorkspace>> pool;
  auto& slot = pool[m];
  if (!slot) slot = std::make_unique<GridWorkspace>(m);
  return *slot;
}

void band_to_grid(GridWorkspace& ws, int cutoff, const Complex* cube, double* out) {
  const int m = ws.m;
  if (m < 2 * cutoff + 1) {
    throw Error(ErrorCode::kConfiguration, "grid too small for band-limited synthesis");
  }
  const Plans& plans = plans_for(m, false);
  const int h = m / 2 + 1;
  const int side = 2 * cutoff + 1;
  Complex* half = ws.half.get();
  std::memset(static_cast<void*>(half), 0, ws.half_size * sizeof(Complex));
  for (int k1 = -cutoff; k1 <= cutoff; ++k1) {
    for (int k2 = -cutoff; k2 <= cutoff; ++k2) {
      const std::size_t row =
          (static_cast<std::size_t>(wrap(k1, m)) * m + wrap(k2, m)) * h;
      const std::size_t src =
          (static_cast<std::size_t>(k1 + cutoff) * side + (k2 + cutoff)) * side + cutoff;
      for (int k3 = 0; k3 <= cutoff; ++k3) half[row + k3] = cube[src + k3];
    }
  }
  fftw_execute_dft_c2r(plans.c2r, reinterpret_cast<fftw_complex*>(half), out);
}

void grid_to_band(GridWorkspace& ws, int cutoff, const double* in, Complex* cube) {
  const int m = ws.m;
  const Plans& plans = plans_for(m, false);
  const int h = m / 2 + 1;
  const int side = 2 * cutoff + 1;
  Complex* half = ws.half.get();
  // r2c leaves its input intact; the cast only satisfies FFTW's signature.
  fftw_execute_dft_r2c(plans.r2c, const_cast<double*>(in), reinterpret_cast<fftw_complex*>(half));
  const double scale = 1.0 / static_cast<double>(ws.points);
  for (int k1 = -cutoff; k1 <= cutoff; ++k1) {
    for (int k2 = -cutoff; k2 <= cutoff; ++k2) {
      const std::size_t dst =
          (static_cast<std::size_t>(k1 + cutoff) * side + (k2 + cutoff)) * side + cutoff;
      const std::size_t row =
          (static_cast<std::size_t>(wrap(k1, m)) * m + wrap(k2, m)) * h;
      const std::size_t mirror =
          (static_cast<std::size_t>(wrap(-k1, m)) * m + wrap(-k2, m)) * h;
      cube[dst] = half[row] * scale;
      for (int k3 = 1; k3 <= cutoff; ++k3) {
        cube[dst + k3] = half[row + k3] * scale;
        cube[dst - k3] = std::conj(half[mirror + k3]) * scale;
      }
    }
  }
}

void complex_backward(int m, Complex* data) {
  const Plans& plans = plans_for(m, true);
  auto* c = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plans.c2c_backward, c, c);
}

}  // namespace npe::detail
