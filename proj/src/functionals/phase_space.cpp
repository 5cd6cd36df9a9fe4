#include <cmath>
#include <string>

#include "npe/error.hpp"
#include "npe/phase_space.hpp"
#include "npe/spectral.hpp"

namespace npe {

StabilityValue stability_function_b(const SpectralField& v, const QuadratureSpec& spec) {
  const double norm = l2_norm(v);
  if (std::abs(norm - 1.0) > 1e-10) {
    throw Error(ErrorCode::kDomain,
                "stability_function_b: datum must have unit norm, got " + std::to_string(norm));
  }
  PhiIntegrator integrator(v, spec);
  const PhiTrace& trace = integrator.full_trace();
  StabilityValue out;
  std::size_t best = 0;
  for (std::size_t j = 1; j < trace.cumulative.size(); ++j) {
    if (trace.cumulative[j] > trace.cumulative[best]) best = j;
  }
  out.value = trace.cumulative[best];
  out.argmax_time = trace.times[best];
  out.tail_bound = trace.tail_bound;
  out.attained = !(best + 1 == trace.times.size() && best > 0 && trace.tail_bound > 1e-6);
  return out;
}

SpectralField gamma_map(const SpectralField& v, const QuadratureSpec& spec) {
  const StabilityValue b = stability_function_b(v, spec);
  if (!(b.value > 0.0)) {
    throw Error(ErrorCode::kDomain, "gamma_map: b(v) = " + std::to_string(b.value) +
                                        " is not positive");
  }
  return (1.0 / b.value) * v;
}

}  // namespace npe
