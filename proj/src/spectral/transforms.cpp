#include <algorithm>
#include <cmath>
#include <cstring>
#include <vector>

#include "npe/error.hpp"
#include "npe/spectral.hpp"
#include "spectral/fft_backend.hpp"
#include "spectral/grid_ops.hpp"

namespace npe {

namespace detail {

void extract_component(const SpectralField& field, int component, Complex* cube) {
  const auto data = field.data();
  const std::size_t modes = field.lattice().mode_count();
  for (std::size_t m = 0; m < modes; ++m) cube[m] = data[3 * m + component];
}

void insert_component(SpectralField& field, int component, const Complex* cube) {
  auto data = field.data();
  const std::size_t modes = field.lattice().mode_count();
  for (std::size_t m = 0; m < modes; ++m) data[3 * m + component] = cube[m];
}

}  // namespace detail

SpectralField forward_transform(const PhysicalField& f) {
  const Lattice& lat = f.lattice;
  if (f.samples.size() != 3 * lat.grid_points()) {
    throw Error(ErrorCode::kConfiguration, "forward_transform: sample count does not match lattice");
  }
  SpectralField out(lat);
  auto& ws = detail::thread_workspace(lat.n());
  std::vector<Complex> cube(lat.mode_count());
  double* buffer = ws.grid(0);
  for (int c = 0; c < 3; ++c) {
    const auto comp = f.component(c);
    std::copy(comp.begin(), comp.end(), buffer);
    detail::grid_to_band(ws, lat.k(), buffer, cube.data());
    detail::insert_component(out, c, cube.data());
  }
  for (int c = 0; c < 3; ++c) out.at(0, 0, 0, c) = 0.0;
  return out;
}

PhysicalField inverse_transform(const SpectralField& field) {
  field.require_hermitian("inverse_transform");
  const Lattice& lat = field.lattice();
  const int n = lat.n();
  const int kc = lat.k();
  PhysicalField out(lat);
  auto buffer = detail::allocate_complex(lat.grid_points());
  double residue = 0.0;
  for (int c = 0; c < 3; ++c) {
    std::memset(static_cast<void*>(buffer.get()), 0, lat.grid_points() * sizeof(Complex));
    for (int k1 = -kc; k1 <= kc; ++k1)
      for (int k2 = -kc; k2 <= kc; ++k2)
        for (int k3 = -kc; k3 <= kc; ++k3) {
          const std::size_t pos = (static_cast<std::size_t>((k1 + n) % n) * n + (k2 + n) % n) * n +
                                  (k3 + n) % n;
          buffer[pos] = field.at(k1, k2, k3, c);
        }
    detail::complex_backward(n, buffer.get());
    auto comp = out.component(c);
    for (std::size_t i = 0; i < comp.size(); ++i) {
      comp[i] = buffer[i].real();
      residue = std::max(residue, std::abs(buffer[i].imag()));
    }
  }
  const double scale = out.max_abs();
  out.imaginary_residue = scale > 0.0 ? residue / scale : residue;
  return out;
}

double grid_inner(const SpectralField& f, const SpectralField& g) {
  require_same_lattice(f, g, "grid_inner");
  const Lattice& lat = f.lattice();
  auto& ws = detail::thread_workspace(lat.product_grid());
  std::vector<Complex> cube(lat.mode_count());
  double sum = 0.0;
  for (int c = 0; c < 3; ++c) {
    double* a = ws.grid(0);
    double* b = ws.grid(1);
    detail::extract_component(f, c, cube.data());
    detail::band_to_grid(ws, lat.k(), cube.data(), a);
    detail::extract_component(g, c, cube.data());
    detail::band_to_grid(ws, lat.k(), cube.data(), b);
    for (std::size_t i = 0; i < ws.points; ++i) sum += a[i] * b[i];
  }
  return sum * kTorusVolume / static_cast<double>(ws.points);
}

double sup_norm_estimate(const SpectralField& field, int refinement) {
  if (refinement < 1) throw Error(ErrorCode::kDomain, "sup_norm_estimate: refinement must be >= 1");
  const Lattice& lat = field.lattice();
  const int m = refinement * lat.n();
  auto& ws = detail::thread_workspace(m);
  std::vector<Complex> cube(lat.mode_count());
  double* acc = ws.grid(0);
  double* comp = ws.grid(1);
  std::fill(acc, acc + ws.points, 0.0);
  for (int c = 0; c < 3; ++c) {
    detail::extract_component(field, c, cube.data());
    detail::band_to_grid(ws, lat.k(), cube.data(), comp);
    for (std::size_t i = 0; i < ws.points; ++i) acc[i] += comp[i] * comp[i];
  }
  double best = 0.0;
  for (std::size_t i = 0; i < ws.points; ++i) best = std::max(best, acc[i]);
  return std::sqrt(best);
}

}  // namespace npe

namespace npe::detail {

int effective_cutoff(const SpectralField& field) {
  const int kc = field.lattice().k();
  const auto data = field.data();
  int band = 1;
  std::size_t m = 0;
  for (int k1 = -kc; k1 <= kc; ++k1)
    for (int k2 = -kc; k2 <= kc; ++k2) {
      const int outer = std::max(std::abs(k1), std::abs(k2));
      for (int k3 = -kc; k3 <= kc; ++k3, ++m) {
        const int reach = std::max(outer, std::abs(k3));
        if (reach <= band) continue;
        if (data[3 * m] != Complex{} || data[3 * m + 1] != Complex{} || data[3 * m + 2] != Complex{}) {
          band = reach;
        }
      }
    }
  return band;
}

int product_grid_for(const Lattice& lattice, int band) {
  if (lattice.product_rule() == ProductRule::kLatticeGrid) return lattice.n();
  return std::min(smooth_size_at_least(3 * band + 1), lattice.n());
}

void band_component(const SpectralField& field, int component, int band, int axis,
                    Complex* cube) {
  const Lattice& lat = field.lattice();
  const auto data = field.data();
  const int side = lat.side();
  const int kc = lat.k();
  std::size_t pos = 0;
  for (int k1 = -band; k1 <= band; ++k1)
    for (int k2 = -band; k2 <= band; ++k2) {
      const std::size_t row =
          ((static_cast<std::size_t>(k1 + kc) * side + (k2 + kc)) * side + (kc - band)) * 3 + component;
      const Complex* src = data.data() + row;
      if (axis < 0) {
        for (int q = 0; q <= 2 * band; ++q) cube[pos++] = src[3 * q];
        continue;
      }
      // Multiplication by i k.
      const double fixed = axis == 0 ? k1 : k2;
      for (int q = 0; q <= 2 * band; ++q) {
        const double kk = axis == 2 ? double(q - band) : fixed;
        const Complex v = src[3 * q];
        cube[pos++] = Complex{-kk * v.imag(), kk * v.real()};
      }
    }
}

}  // namespace npe::detail
