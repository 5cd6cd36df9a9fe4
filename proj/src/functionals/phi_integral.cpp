#include <algorithm>
#include <cmath>
#include <string>

#include "npe/error.hpp"
#include "npe/functionals.hpp"
#include "npe/quadrature.hpp"
#include "npe/spectral.hpp"

namespace npe {

void QuadratureSpec::validate() const {
  if (!(initial_step > 0.0)) throw Error(ErrorCode::kConfiguration, "quadrature: initial_step must be > 0");
  if (!(growth > 1.0)) throw Error(ErrorCode::kConfiguration, "quadrature: growth must be > 1");
  if (!(horizon > 0.0)) throw Error(ErrorCode::kConfiguration, "quadrature: horizon must be > 0");
  if (!(tail_tolerance > 0.0)) throw Error(ErrorCode::kConfiguration, "quadrature: tail_tolerance must be > 0");
  if (!(tail_constant >= 0.0)) throw Error(ErrorCode::kConfiguration, "quadrature: tail_constant must be >= 0");
  if (max_depth < 1) throw Error(ErrorCode::kConfiguration, "quadrature: max_depth must be >= 1");
}

PhiIntegrator::PhiIntegrator(SpectralField omega0, QuadratureSpec spec)
    : omega0_(std::move(omega0)), spec_(spec), next_width_(spec.initial_step) {
  spec_.validate();
  const double f0 = phi_at(0.0);
  phi_ref_ = std::abs(f0);
  trace_.times.push_back(0.0);
  trace_.phi_values.push_back(f0);
  trace_.cumulative.push_back(0.0);
  error_prefix_.push_back(0.0);
}

double PhiIntegrator::phi_at(double tau) {
  ++evaluations_;
  const double value = phi(heat_propagate(omega0_, tau));
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::kQuadrature, "non-finite Phi at t = " + std::to_string(tau));
  }
  return value;
}

PhiIntegrator::Segment PhiIntegrator::adaptive(double a, double b, double fa, double fm,
                                               double fb, double coarse, int depth) {
  const double m = 0.5 * (a + b);
  const double flm = phi_at(0.5 * (a + m));
  const double frm = phi_at(0.5 * (m + b));
  phi_ref_ = std::max({phi_ref_, std::abs(flm), std::abs(frm)});
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double fine = left + right;
  const double err = std::abs(fine - coarse) / 15.0;
  if (err <= spec_.tail_tolerance * (b - a) * phi_ref_) {
    return {fine + (fine - coarse) / 15.0, err};
  }
  if (depth >= spec_.max_depth) {
    throw Error(ErrorCode::kQuadrature,
                "quadrature did not converge on [" + std::to_string(a) + ", " +
                    std::to_string(b) + "] (error estimate " + std::to_string(err) + ")");
  }
  const Segment l = adaptive(a, m, fa, flm, fm, left, depth + 1);
  const Segment r = adaptive(m, b, fm, frm, fb, right, depth + 1);
  return {l.value + r.value, l.error + r.error};
}

PhiIntegrator::Segment PhiIntegrator::integrate_panel(double a, double b, double fa, double fb) {
  const double fm = phi_at(0.5 * (a + b));
  phi_ref_ = std::max(phi_ref_, std::abs(fm));
  const double coarse = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive(a, b, fa, fm, fb, coarse, 0);
}

void PhiIntegrator::extend_once() {
  const double a = trace_.times.back();
  double b = a + next_width_;
  if (b >= spec_.horizon * (1.0 - 1e-12)) b = spec_.horizon;
  next_width_ *= spec_.growth;
  const double fa = trace_.phi_values.back();
  const double fb = phi_at(b);
  phi_ref_ = std::max(phi_ref_, std::abs(fb));
  const Segment s = integrate_panel(a, b, fa, fb);
  trace_.times.push_back(b);
  trace_.phi_values.push_back(fb);
  trace_.cumulative.push_back(trace_.cumulative.back() + s.value);
  trace_.error_estimate += s.error;
  error_prefix_.push_back(trace_.error_estimate);
  if (b == spec_.horizon) {
    complete_ = true;
    trace_.tail_bound = spec_.tail_constant * l2_norm(heat_propagate(omega0_, spec_.horizon));
  }
}

const PhiTrace& PhiIntegrator::trace_until(double t) {
  const double target = std::min(t, spec_.horizon);
  while (!complete_ && trace_.times.back() < target) extend_once();
  return trace_;
}

const PhiTrace& PhiIntegrator::full_trace() { return trace_until(spec_.horizon); }

std::size_t PhiIntegrator::panel_containing(double t) {
  if (t < 0.0 || t > spec_.horizon) {
    throw Error(ErrorCode::kDomain, "time " + std::to_string(t) + " outside quadrature horizon");
  }
  trace_until(t);
  const auto it = std::upper_bound(trace_.times.begin(), trace_.times.end(), t);
  return static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - trace_.times.begin() - 1, 0));
}

double PhiIntegrator::integral(double t) {
  const std::size_t j = panel_containing(t);
  const double a = trace_.times[j];
  if (t == a) return trace_.cumulative[j];
  const Segment s = integrate_panel(a, t, trace_.phi_values[j], phi_at(t));
  return trace_.cumulative[j] + s.value;
}

double PhiIntegrator::error_at(double t) {
  const std::size_t j = panel_containing(t);
  // The containing panel is charged in full.
  return error_prefix_[std::min(j + 1, error_prefix_.size() - 1)];
}

std::optional<std::pair<double, double>> PhiIntegrator::first_crossing(double level, double t_end,
                                                                       double rel_width) {
  const double end = std::min(t_end, spec_.horizon);
  std::size_t j = 0;
  while (true) {
    if (j + 1 >= trace_.times.size()) {
      if (complete_ || trace_.times.back() >= end) break;
      extend_once();
    }
    if (trace_.times[j + 1] > end) break;
    if (trace_.cumulative[j + 1] >= level) {
      double lo = trace_.times[j];
      double hi = trace_.times[j + 1];
      while (hi - lo > rel_width * hi) {
        const double mid = 0.5 * (lo + hi);
        (integral(mid) >= level ? hi : lo) = mid;
      }
      return std::make_pair(lo, hi);
    }
    ++j;
  }
  // Partial panel up to t_end.
  if (trace_.times[j] < end && integral(end) >= level) {
    double lo = trace_.times[j];
    double hi = end;
    while (hi - lo > rel_width * hi) {
      const double mid = 0.5 * (lo + hi);
      (integral(mid) >= level ? hi : lo) = mid;
    }
    return std::make_pair(lo, hi);
  }
  return std::nullopt;
}

std::pair<double, double> phi_time_integral(const SpectralField& omega0, double t,
                                            const QuadratureSpec& spec) {
  if (!(t >= 0.0)) throw Error(ErrorCode::kDomain, "phi_time_integral: negative time");
  PhiIntegrator integrator(omega0, spec);
  if (t > spec.horizon) {
    throw Error(ErrorCode::kDomain, "phi_time_integral: t beyond quadrature horizon");
  }
  const double value = integrator.integral(t);
  return {value, integrator.error_at(t)};
}

}  // namespace npe
