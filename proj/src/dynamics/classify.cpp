#include <algorithm>

#include "npe/dynamics.hpp"
#include "npe/error.hpp"

namespace npe {

const char* to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::kStability: return "Stability";
    case Verdict::kExplosion: return "Explosion";
    case Verdict::kGrowing: return "Growing";
    case Verdict::kUndetermined: return "Undetermined";
  }
  return "unknown";
}

Classification classify(const SpectralField& omega0, const QuadratureSpec& spec, double tol) {
  if (omega0.is_zero()) throw Error(ErrorCode::kDomain, "classify: datum is the zero field");
  if (!(tol > 0.0 && tol < 1.0)) throw Error(ErrorCode::kConfiguration, "classify: tol must lie in (0, 1)");
  PhiIntegrator integrator(omega0, spec);
  const PhiTrace& trace = integrator.full_trace();
  Classification out;
  out.tolerance = tol;
  out.tail_bound = trace.tail_bound;
  std::size_t best = 0;
  for (std::size_t j = 1; j < trace.cumulative.size(); ++j) {
    if (trace.cumulative[j] > trace.cumulative[best]) best = j;
  }
  out.sup_integral = std::max(0.0, trace.cumulative[best]);
  out.argmax_time = trace.times[best];
  out.attained = !(best + 1 == trace.times.size() && best > 0 && trace.tail_bound > 1e-6);

  if (out.sup_integral >= 1.0 + tol) {
    out.verdict = Verdict::kExplosion;
  } else if (out.sup_integral + out.tail_bound <= 1.0 - tol) {
    out.verdict = Verdict::kStability;
  } else if (!out.attained && out.sup_integral >= 1.0 - tol) {
    out.verdict = Verdict::kGrowing;
  } else {
    out.verdict = Verdict::kUndetermined;
  }
  return out;
}

}  // namespace npe
