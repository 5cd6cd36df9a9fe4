#include "npe/generators.hpp"

#include <cmath>
#include <random>
#include <string>

#include "npe/error.hpp"
#include "npe/spectral.hpp"

namespace npe {

SpectralField single_mode(const Lattice& lattice, const std::array<int, 3>& k,
                          int component, Complex coeff) {
  const int kc = lattice.k();
  for (int v : k) {
    if (std::abs(v) > kc) {
      throw Error(ErrorCode::kConfiguration, "single_mode: wavevector outside cutoff");
    }
  }
  if (k[0] == 0 && k[1] == 0 && k[2] == 0) {
    throw Error(ErrorCode::kConfiguration, "single_mode: the mean mode is not allowed");
  }
  if (component < 0 || component > 2) {
    throw Error(ErrorCode::kConfiguration, "single_mode: component must be 0, 1 or 2");
  }
  SpectralField f(lattice);
  f.set_pair(k[0], k[1], k[2], component, coeff);
  f = leray_project(f);
  if (f.max_abs() <= 1e-14 * std::abs(coeff)) {
    throw Error(ErrorCode::kConfiguration,
                "single_mode: component is parallel to k, projection is zero");
  }
  return f;
}

SpectralField shear_mode(const Lattice& lattice) {
  return single_mode(lattice, {0, 0, 1}, 1, Complex{0.0, 0.5});
}

SpectralField random_smooth(const Lattice& lattice, std::uint64_t seed,
                            double decay, double norm) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  SpectralField raw(lattice);
  const int kc = lattice.k();
  for (int k1 = -kc; k1 <= kc; ++k1)
    for (int k2 = -kc; k2 <= kc; ++k2)
      for (int k3 = -kc; k3 <= kc; ++k3) {
        const double weight = std::pow(1.0 + k1 * k1 + k2 * k2 + k3 * k3, -0.5 * decay);
        for (int c = 0; c < 3; ++c) {
          const double re = normal(rng);
          const double im = normal(rng);
          raw.at(k1, k2, k3, c) = weight * Complex{re, im};
        }
      }
  SpectralField sym(lattice);
  for (int k1 = -kc; k1 <= kc; ++k1)
    for (int k2 = -kc; k2 <= kc; ++k2)
      for (int k3 = -kc; k3 <= kc; ++k3)
        for (int c = 0; c < 3; ++c) {
          sym.at(k1, k2, k3, c) =
              0.5 * (raw.at(k1, k2, k3, c) + std::conj(raw.at(-k1, -k2, -k3, c)));
        }
  SpectralField out = leray_project(sym);
  if (norm > 0.0) {
    const double current = l2_norm(out);
    if (current == 0.0) throw Error(ErrorCode::kInvariant, "random_smooth: zero field");
    out *= norm / current;
  }
  return out;
}

}  // namespace npe
