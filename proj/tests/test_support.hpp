#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "npe/generators.hpp"
#include "npe/spectral.hpp"

namespace npe::test {

inline double rel_err(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

inline double field_rel_err(const SpectralField& a, const SpectralField& b) {
  const double scale = std::max(l2_norm(a), l2_norm(b));
  return scale == 0.0 ? 0.0 : l2_norm(a - b) / scale;
}

/// Seeded random smooth fields with decays cycling through 1..4.
inline std::vector<SpectralField> corpus(const Lattice& lattice, int count,
                                         std::uint64_t seed = 1000) {
  std::vector<SpectralField> out;
  for (int i = 0; i < count; ++i) {
    out.push_back(random_smooth(lattice, seed + i, 1.0 + i % 4, 1.0));
  }
  return out;
}

}  // namespace npe::test
