#pragma once

// Closed-form NPE evolution y(t) = S(t; w0) / D(t),
//   D(t) = 1 - \int_0^t Phi(S(tau; w0)) dtau,
// an independent time stepper for dy/dt = Laplacian y + Phi(y) y, and the
// phase-space classifier.

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "npe/quadrature.hpp"
#include "npe/spectral_field.hpp"

namespace npe {

/// Denominator level treated as a blow-up.
inline constexpr double kDenominatorFloor = 1e-8;

enum class TrajectoryStatus { kCompleted, kBlowUp, kQuadratureFailure, kTruncated };

const char* to_string(TrajectoryStatus status);

struct Trajectory {
  std::vector<double> times;
  std::vector<double> norm0;
  std::vector<double> denominator;
  /// Populated only when requested (oracle comparisons).
  std::vector<SpectralField> states;
  TrajectoryStatus status = TrajectoryStatus::kCompleted;
  double blowup_lower = std::numeric_limits<double>::quiet_NaN();
  double blowup_upper = std::numeric_limits<double>::quiet_NaN();
  /// sup_t ||y(t)||_0 e^t / ||y(0)||_0 over the recorded samples.
  double alpha = std::numeric_limits<double>::quiet_NaN();
  std::string message;

  double blowup_time() const noexcept { return 0.5 * (blowup_lower + blowup_upper); }
};

/// Closed-form solution with a cached Phi trace; successive queries reuse
/// the quadrature.
class NpeSolver {
 public:
  NpeSolver(SpectralField omega0, QuadratureSpec spec);

  double denominator(double t);
  /// Throws BlowUpError when D reaches kDenominatorFloor on [0, t].
  SpectralField state(double t);
  /// Bracket of the first crossing of D = kDenominatorFloor before t_end.
  std::optional<std::pair<double, double>> blowup_before(double t_end);

  PhiIntegrator& integrator() noexcept { return integrator_; }

 private:
  PhiIntegrator integrator_;
};

SpectralField npe_solution_at(const SpectralField& omega0, double t, const QuadratureSpec& spec);

/// Samples the closed form on an increasing grid starting at 0. A blow-up
/// stops the trajectory with a bracketed blow-up time of relative width
/// 1e-10; a quadrature failure is reported through the status.
Trajectory simulate(const SpectralField& omega0, const std::vector<double>& grid,
                    const QuadratureSpec& spec, bool keep_states = false);

enum class OracleScheme {
  /// Integrating-factor Runge-Kutta (Lawson), four Phi evaluations per step.
  kLawsonRk4,
  /// Integrating-factor Adams-Bashforth of order four started by three
  /// Lawson steps; one Phi evaluation per step.
  kAdamsBashforth4,
};

const char* to_string(OracleScheme scheme);
OracleScheme oracle_scheme_from_string(const std::string& name);

/// Time stepper for dy/dt = Laplacian y + Phi(y) y. The Laplacian is
/// handled exactly by exp(-|k|^2 dt); Phi is evaluated afresh on the
/// stepper's own states. Samples every `stride` steps. A step that grows
/// ||y||_0 more than tenfold truncates the run.
Trajectory timestep_oracle(const SpectralField& omega0, double dt, double t_end, int stride = 100,
                           bool keep_states = false,
                           OracleScheme scheme = OracleScheme::kAdamsBashforth4);

enum class Verdict { kStability, kExplosion, kGrowing, kUndetermined };

const char* to_string(Verdict verdict);

struct Classification {
  Verdict verdict = Verdict::kUndetermined;
  /// sup over the trace of \int_0^t Phi, never below 0.
  double sup_integral = 0.0;
  double argmax_time = 0.0;
  double tail_bound = 0.0;
  bool attained = true;
  double tolerance = 0.0;
};

Classification classify(const SpectralField& omega0, const QuadratureSpec& spec, double tol = 1e-3);

/// 1 / (2 c1).
double small_ball_radius(double c1);

}  // namespace npe
