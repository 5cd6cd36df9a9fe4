#include <algorithm>
#include <cmath>

#include "npe/error.hpp"
#include "npe/functionals.hpp"
#include "npe/generators.hpp"
#include "npe/parallel.hpp"
#include "npe/phase_space.hpp"
#include "npe/spectral.hpp"

namespace npe {

namespace {

// Cycling the decay exponent mixes rough and smooth members in the ensemble.
constexpr double kDecays[] = {1.0, 2.0, 3.0, 4.0};

double decay_for(int i) { return kDecays[i % 4]; }

void require_samples(int samples) {
  if (samples < 1) throw Error(ErrorCode::kConfiguration, "constant estimate needs >= 1 sample");
}

}  // namespace

ConstantEstimate estimate_integral_constant(const Lattice& lattice, int samples,
                                            std::uint64_t seed, const QuadratureSpec& spec,
                                            const std::vector<SpectralField>& extra) {
  require_samples(samples);
  ConstantEstimate out{0.0, samples, seed, -1};
  const int total = samples + static_cast<int>(extra.size());
  std::vector<double> ratios(static_cast<std::size_t>(total), 0.0);
  parallel_for(ratios.size(), [&](std::size_t idx) {
    const int i = static_cast<int>(idx);
    SpectralField y = i < samples ? random_smooth(lattice, seed + i, decay_for(i), 1.0)
                                  : extra[i - samples].resampled(lattice);
    const double norm = l2_norm(y);
    if (norm == 0.0) return;
    PhiIntegrator integrator(y, spec);
    const PhiTrace& trace = integrator.full_trace();
    double worst = 0.0;
    for (double g : trace.cumulative) worst = std::max(worst, std::abs(g));
    ratios[idx] = (worst + trace.tail_bound) / norm;
  });
  for (int i = 0; i < total; ++i) {
    if (ratios[i] > out.value) {
      out.value = ratios[i];
      out.argmax = i;
    }
  }
  return out;
}

ConstantEstimate estimate_trilinear_constant(const Lattice& lattice, int samples,
                                             std::uint64_t seed) {
  require_samples(samples);
  ConstantEstimate out{0.0, samples, seed, -1};
  for (int i = 0; i < samples; ++i) {
    const std::uint64_t base = seed + 3 * static_cast<std::uint64_t>(i);
    const SpectralField a = random_smooth(lattice, base, decay_for(i), 1.0);
    const SpectralField b = random_smooth(lattice, base + 1, decay_for(i + 1), 1.0);
    const SpectralField c = random_smooth(lattice, base + 2, decay_for(i + 2), 1.0);
    const double denom = sobolev_norm(a, 0.5) * sobolev_norm(b, 0.5) * sobolev_norm(c, 0.5);
    const double ratio = std::abs(psi3(a, b, c)) / denom;
    if (ratio > out.value) {
      out.value = ratio;
      out.argmax = i;
    }
  }
  return out;
}

ConstantEstimate estimate_phi_constant(const Lattice& lattice, int samples, std::uint64_t seed) {
  require_samples(samples);
  ConstantEstimate out{0.0, samples, seed, -1};
  for (int i = 0; i < samples; ++i) {
    const SpectralField w = random_smooth(lattice, seed + i, decay_for(i), 1.0);
    const double ratio = std::abs(phi(w)) / sobolev_norm(w, 1.5);
    if (ratio > out.value) {
      out.value = ratio;
      out.argmax = i;
    }
  }
  return out;
}

}  // namespace npe
