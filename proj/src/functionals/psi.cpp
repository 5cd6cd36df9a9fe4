#include <algorithm>
#include <cmath>
#include <vector>

#include "npe/functionals.hpp"
#include "npe/spectral.hpp"
#include "spectral/fft_backend.hpp"
#include "spectral/grid_ops.hpp"

namespace npe {

namespace {

int product_band(const Lattice& lat, int band) {
  return lat.product_rule() == ProductRule::kLatticeGrid ? lat.k() : band;
}

}  // namespace

double psi3(const SpectralField& y1, const SpectralField& y2, const SpectralField& y3) {
  require_same_lattice(y1, y2, "psi3");
  require_same_lattice(y1, y3, "psi3");
  y2.require_valid("psi3");
  const Lattice& lat = y1.lattice();
  const int band = product_band(
      lat, std::max({detail::effective_cutoff(y1), detail::effective_cutoff(y2),
                     detail::effective_cutoff(y3)}));
  const SpectralField w = curl_inv(y2);
  auto& ws = detail::thread_workspace(detail::product_grid_for(lat, band));
  const std::size_t side = 2 * band + 1;
  std::vector<Complex> cube(side * side * side);

  double* a[3];
  double* c[3];
  for (int i = 0; i < 3; ++i) {
    a[i] = ws.grid(i);
    detail::band_component(y1, i, band, -1, cube.data());
    detail::band_to_grid(ws, band, cube.data(), a[i]);
    c[i] = ws.grid(3 + i);
    detail::band_component(y3, i, band, -1, cube.data());
    detail::band_to_grid(ws, band, cube.data(), c[i]);
  }
  double* grad = ws.grid(6);
  double sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      detail::band_component(w, i, band, j, cube.data());
      detail::band_to_grid(ws, band, cube.data(), grad);
      for (std::size_t p = 0; p < ws.points; ++p) sum += a[j][p] * grad[p] * c[i][p];
    }
  }
  return sum * kTorusVolume / static_cast<double>(ws.points);
}

// Psi(y) = \int y_i y_j E_ij with E the symmetric part of grad curl^{-1} y.
// E is traceless, so E_33 is folded into the two other diagonal terms.
PsiValue psi_detailed(const SpectralField& y) {
  y.require_valid("psi");
  PsiValue out;
  if (y.is_zero()) return out;
  const Lattice& lat = y.lattice();
  const int band = product_band(lat, detail::effective_cutoff(y));
  const SpectralField w = curl_inv(y);
  auto& ws = detail::thread_workspace(detail::product_grid_for(lat, band));
  const std::size_t side = 2 * band + 1;
  std::vector<Complex> cube(side * side * side);
  std::vector<Complex> other(cube.size());

  double* f[3];
  for (int i = 0; i < 3; ++i) {
    f[i] = ws.grid(i);
    detail::band_component(y, i, band, -1, cube.data());
    detail::band_to_grid(ws, band, cube.data(), f[i]);
  }
  double* strain = ws.grid(3);
  double value = 0.0;
  double magnitude = 0.0;
  constexpr int kPairs[5][2] = {{0, 0}, {1, 1}, {0, 1}, {0, 2}, {1, 2}};
  for (const auto& pair : kPairs) {
    const int i = pair[0];
    const int j = pair[1];
    detail::band_component(w, i, band, j, cube.data());
    if (i != j) {
      // Off-diagonal pairs appear twice in the contraction; the factor 1/2
      // of the symmetric part cancels that.
      detail::band_component(w, j, band, i, other.data());
      for (std::size_t q = 0; q < cube.size(); ++q) cube[q] += other[q];
    }
    detail::band_to_grid(ws, band, cube.data(), strain);
    const double* a = f[i];
    const double* b = f[j];
    const double* c = f[2];
    if (i == j) {
      for (std::size_t p = 0; p < ws.points; ++p) {
        const double term = (a[p] * a[p] - c[p] * c[p]) * strain[p];
        value += term;
        magnitude += std::abs(term);
      }
    } else {
      for (std::size_t p = 0; p < ws.points; ++p) {
        const double term = a[p] * b[p] * strain[p];
        value += term;
        magnitude += std::abs(term);
      }
    }
  }
  const double weight = kTorusVolume / static_cast<double>(ws.points);
  out.value = value * weight;
  out.magnitude = magnitude * weight;
  return out;
}

double phi(const SpectralField& omega) {
  const double norm = l2_norm(omega);
  if (norm == 0.0) return 0.0;
  return psi(omega) / (norm * norm);
}

}  // namespace npe
