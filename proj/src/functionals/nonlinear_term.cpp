#include <algorithm>
#include <vector>

#include "npe/functionals.hpp"
#include "npe/spectral.hpp"
#include "spectral/fft_backend.hpp"
#include "spectral/grid_ops.hpp"

namespace npe {

namespace {

void insert_band(SpectralField& field, int component, int band, const Complex* cube) {
  std::size_t pos = 0;
  for (int k1 = -band; k1 <= band; ++k1)
    for (int k2 = -band; k2 <= band; ++k2)
      for (int k3 = -band; k3 <= band; ++k3, ++pos) field.at(k1, k2, k3, component) = cube[pos];
}

}  // namespace

NonlinearTerm nonlinear_term(const SpectralField& omega) {
  omega.require_valid("nonlinear_term");
  const Lattice& lat = omega.lattice();
  const int band = lat.product_rule() == ProductRule::kLatticeGrid
                       ? lat.k()
                       : detail::effective_cutoff(omega);
  const SpectralField v = curl_inv(omega);
  // Quadratic products have band 2b; a grid larger than 2b + out keeps the
  // aliased images away from the retained modes |k_i| <= out.
  const int out = std::min(2 * band, lat.k());
  const int grid = lat.product_rule() == ProductRule::kLatticeGrid
                       ? lat.n()
                       : std::min(smooth_size_at_least(2 * band + out + 1), lat.n());
  auto& ws = detail::thread_workspace(grid);
  const std::size_t side = 2 * band + 1;
  std::vector<Complex> cube(side * side * side);
  const std::size_t out_side = 2 * out + 1;
  std::vector<Complex> out_cube(out_side * out_side * out_side);

  double* vg[3];
  double* wg[3];
  double* acc[3];
  for (int j = 0; j < 3; ++j) {
    vg[j] = ws.grid(j);
    detail::band_component(v, j, band, -1, cube.data());
    detail::band_to_grid(ws, band, cube.data(), vg[j]);
    wg[j] = ws.grid(3 + j);
    detail::band_component(omega, j, band, -1, cube.data());
    detail::band_to_grid(ws, band, cube.data(), wg[j]);
    acc[j] = ws.grid(6 + j);
    std::fill(acc[j], acc[j] + ws.points, 0.0);
  }
  double* deriv = ws.grid(9);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      detail::band_component(omega, i, band, j, cube.data());
      detail::band_to_grid(ws, band, cube.data(), deriv);
      for (std::size_t p = 0; p < ws.points; ++p) acc[i][p] += vg[j][p] * deriv[p];
      detail::band_component(v, i, band, j, cube.data());
      detail::band_to_grid(ws, band, cube.data(), deriv);
      for (std::size_t p = 0; p < ws.points; ++p) acc[i][p] -= wg[j][p] * deriv[p];
    }
  }
  SpectralField b(lat);
  for (int i = 0; i < 3; ++i) {
    detail::grid_to_band(ws, out, acc[i], out_cube.data());
    insert_band(b, i, out, out_cube.data());
  }
  for (int c = 0; c < 3; ++c) b.at(0, 0, 0, c) = 0.0;
  b = leray_project(b);

  SpectralField normal = omega;
  normal *= -phi(omega);
  SpectralField tangential = b - normal;
  return {std::move(b), std::move(normal), std::move(tangential)};
}

}  // namespace npe
