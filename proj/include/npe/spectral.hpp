#pragma once

// Linear calculus on truncated Fourier fields over the 3-torus. Norms and
// inner products carry the (2pi)^3 volume factor, so the s = 0 norm equals
// the physical L2 norm.

#include <array>
#include <numbers>

#include "npe/spectral_field.hpp"

namespace npe {

inline constexpr double kTorusVolume =
    8.0 * std::numbers::pi * std::numbers::pi * std::numbers::pi;

/// Coefficients (2pi)^-3 \int f exp(-i k.x) dx via the discrete transform;
/// modes above the cutoff and the mean mode are dropped.
SpectralField forward_transform(const PhysicalField& f);

/// Real samples on the lattice grid. Rejects non-Hermitian input.
PhysicalField inverse_transform(const SpectralField& field);

/// i k x F(k).
SpectralField curl(const SpectralField& field);

/// i k x F(k) / |k|^2. Rejects a nonzero mean mode.
SpectralField curl_inv(const SpectralField& field);

/// F(k) - k (k.F(k)) / |k|^2 with the mean mode zeroed.
SpectralField leray_project(const SpectralField& field);

/// ((2pi)^3 sum_{k != 0} |k|^{2s} |F(k)|^2)^{1/2}, s in [-2, 2].
double sobolev_norm(const SpectralField& field, double s);

/// Heat (Stokes) semigroup: F(k) exp(-|k|^2 t), t >= 0.
SpectralField heat_propagate(const SpectralField& field, double t);

/// (2pi)^3 sum_k Re(F(k) . conj G(k)).
double l2_inner(const SpectralField& f, const SpectralField& g);

/// Multiplies F(k) by exp(-i k.c): the field translated by c.
SpectralField translate(const SpectralField& field, const std::array<double, 3>& shift);

/// ||F||_0 without the range check of sobolev_norm.
inline double l2_norm(const SpectralField& field) { return sobolev_norm(field, 0.0); }

/// Grid quadrature (2pi/M)^3 sum f.g on the product grid; used to
/// cross-check Parseval.
double grid_inner(const SpectralField& f, const SpectralField& g);

/// Max |f(x)| over a uniform grid with `refinement` times the lattice
/// resolution.
double sup_norm_estimate(const SpectralField& field, int refinement);

}  // namespace npe
