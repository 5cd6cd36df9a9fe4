#pragma once

#include <cstdint>
#include <vector>

#include "npe/quadrature.hpp"
#include "npe/spectral_field.hpp"

namespace npe {

/// Maximum over [0, horizon] of t -> \int_0^t Phi(S(tau; v)) dtau on the
/// unit sphere. The value is never negative because the integral vanishes
/// at t = 0.
struct StabilityValue {
  double value = 0.0;
  double argmax_time = 0.0;
  /// False when the maximum sits at the horizon and the tail bound exceeds
  /// 1e-6, i.e. the supremum may only be approached as t -> infinity.
  bool attained = true;
  double tail_bound = 0.0;
};

StabilityValue stability_function_b(const SpectralField& v, const QuadratureSpec& spec);

/// v / b(v) for b(v) > 0.
SpectralField gamma_map(const SpectralField& v, const QuadratureSpec& spec);

/// Empirical constant from a sampling maximization, with its provenance.
struct ConstantEstimate {
  double value = 0.0;
  int samples = 0;
  std::uint64_t seed = 0;
  /// Index of the maximizing sample (extra fields follow the random ones).
  int argmax = -1;
};

/// sup |\int_0^t Phi(S(tau; y)) dtau| / ||y||_0 over t and over random
/// smooth fields plus `extra` fields.
ConstantEstimate estimate_integral_constant(const Lattice& lattice, int samples,
                                            std::uint64_t seed, const QuadratureSpec& spec,
                                            const std::vector<SpectralField>& extra = {});

/// sup |Psi(y1, y2, y3)| / (||y1||_{1/2} ||y2||_{1/2} ||y3||_{1/2}) over random
/// triples.
ConstantEstimate estimate_trilinear_constant(const Lattice& lattice, int samples,
                                             std::uint64_t seed);

/// sup |Phi(w)| / ||w||_{3/2} over random fields.
ConstantEstimate estimate_phi_constant(const Lattice& lattice, int samples, std::uint64_t seed);

}  // namespace npe
