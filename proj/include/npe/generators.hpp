#pragma once

#include <array>
#include <cstdint>

#include "npe/spectral_field.hpp"

namespace npe {

/// Real field coefficient pair F(k) = coeff, F(-k) = conj(coeff) in one
/// component, Leray-projected. Rejects k = 0, |k_i| > K and modes whose
/// projection vanishes.
SpectralField single_mode(const Lattice& lattice, const std::array<int, 3>& k,
                          int component, Complex coeff);

/// (0, -sin x3, 0): a |k| = 1 shear whose nonlinear self-interaction vanishes.
SpectralField shear_mode(const Lattice& lattice);

/// Gaussian coefficients weighted by (1+|k|^2)^(-decay/2), symmetrized,
/// projected and scaled to ||F||_0 = norm (norm <= 0 keeps the raw scale).
/// The mt19937_64 stream makes the result a pure function of the arguments.
SpectralField random_smooth(const Lattice& lattice, std::uint64_t seed,
                            double decay, double norm);

}  // namespace npe
