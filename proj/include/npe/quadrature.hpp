#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "npe/spectral_field.hpp"

namespace npe {

/// Graded mesh for t -> \int_0^t Phi(S(tau; w0)) dtau. Panel j has width
/// initial_step * growth^j; each panel is refined adaptively until its
/// error estimate is below tail_tolerance * width * max|Phi|.
struct QuadratureSpec {
  double initial_step = 1e-3;
  double growth = 1.05;
  double horizon = 30.0;
  double tail_tolerance = 1e-9;
  /// Multiplier of ||S(horizon; w0)||_0 in the tail bound.
  double tail_constant = 1.0;
  int max_depth = 30;

  void validate() const;
};

/// Panel boundaries of the graded mesh with Phi and the running integral.
struct PhiTrace {
  std::vector<double> times;
  std::vector<double> phi_values;
  std::vector<double> cumulative;
  double tail_bound = 0.0;
  double error_estimate = 0.0;
};

/// Lazily extended quadrature of Phi along the heat flow of one datum.
/// Not thread-safe; use one instance per thread.
class PhiIntegrator {
 public:
  PhiIntegrator(SpectralField omega0, QuadratureSpec spec);

  const SpectralField& datum() const noexcept { return omega0_; }
  const QuadratureSpec& spec() const noexcept { return spec_; }

  /// Phi(S(tau; w0)).
  double phi_at(double tau);

  /// \int_0^t Phi(S(tau; w0)) dtau for 0 <= t <= horizon.
  double integral(double t);
  /// Accumulated a posteriori error estimate of integral(t).
  double error_at(double t);

  /// Trace extended to cover [0, t] (at least).
  const PhiTrace& trace_until(double t);
  /// Trace over the whole horizon, including the tail bound.
  const PhiTrace& full_trace();

  /// Earliest t <= t_end with integral(t) >= level, bracketed to relative
  /// width rel_width, or nothing if the level is not reached.
  std::optional<std::pair<double, double>> first_crossing(double level, double t_end,
                                                          double rel_width = 1e-10);

  std::size_t evaluations() const noexcept { return evaluations_; }

 private:
  struct Segment {
    double value;
    double error;
  };

  void extend_once();
  Segment integrate_panel(double a, double b, double fa, double fb);
  Segment adaptive(double a, double b, double fa, double fm, double fb, double coarse,
                   int depth);
  std::size_t panel_containing(double t);

  SpectralField omega0_;
  QuadratureSpec spec_;
  PhiTrace trace_;
  std::vector<double> error_prefix_;
  double next_width_;
  double phi_ref_ = 0.0;
  bool complete_ = false;
  std::size_t evaluations_ = 0;
};

/// (integral, error estimate) of Phi along the heat flow up to t.
std::pair<double, double> phi_time_integral(const SpectralField& omega0, double t,
                                            const QuadratureSpec& spec);

}  // namespace npe
