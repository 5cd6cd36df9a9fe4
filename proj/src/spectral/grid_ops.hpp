#pragma once

#include "npe/spectral_field.hpp"

namespace npe::detail {

/// Copies component c of every mode into a scalar cube of mode_count values.
void extract_component(const SpectralField& field, int component, Complex* cube);
void insert_component(SpectralField& field, int component, const Complex* cube);

/// Largest max|k_i| carrying a nonzero coefficient (at least 1).
int effective_cutoff(const SpectralField& field);

/// Product grid for factors limited to |k_i| <= band. The lattice rule
/// always uses N; the minimal rule shrinks to the smallest smooth size that
/// still integrates triple products exactly.
int product_grid_for(const Lattice& lattice, int band);

/// Component c restricted to |k_i| <= band, optionally multiplied by
/// i k_axis (axis < 0 for none), as a (2 band + 1)^3 cube.
void band_component(const SpectralField& field, int component, int band, int axis,
                    Complex* cube);

}  // namespace npe::detail
