#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "npe/dynamics.hpp"
#include "npe/error.hpp"
#include "npe/functionals.hpp"
#include "npe/spectral.hpp"

namespace npe {

const char* to_string(OracleScheme scheme) {
  return scheme == OracleScheme::kLawsonRk4 ? "lawson-rk4" : "ab4";
}

OracleScheme oracle_scheme_from_string(const std::string& name) {
  if (name == "lawson-rk4" || name == "rk4") return OracleScheme::kLawsonRk4;
  if (name == "ab4") return OracleScheme::kAdamsBashforth4;
  throw Error(ErrorCode::kConfiguration, "unknown oracle scheme '" + name + "'");
}

namespace {

std::vector<double> decay_factors(const Lattice& lat, double h) {
  std::vector<double> out(lat.mode_count());
  for (std::size_t m = 0; m < out.size(); ++m) {
    const auto k = lat.wavevector(m);
    out[m] = std::exp(-double(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) * h);
  }
  return out;
}

// acc += scale * factors .* f
void axpy_damped(SpectralField& acc, double scale, const SpectralField& f,
                 const std::vector<double>& factors) {
  auto d = acc.data();
  const auto s = f.data();
  for (std::size_t m = 0; m < factors.size(); ++m) {
    const double w = scale * factors[m];
    for (int c = 0; c < 3; ++c) d[3 * m + c] += w * s[3 * m + c];
  }
}

SpectralField damp(const SpectralField& f, const std::vector<double>& factors) {
  SpectralField out(f.lattice());
  axpy_damped(out, 1.0, f, factors);
  return out;
}

SpectralField nonlinearity(const SpectralField& y) { return phi(y) * y; }

class Stepper {
 public:
  Stepper(const Lattice& lat, double h)
      : h_(h), e_{{std::vector<double>(lat.mode_count(), 1.0), decay_factors(lat, 0.5 * h),
                   decay_factors(lat, h), decay_factors(lat, 2.0 * h), decay_factors(lat, 3.0 * h),
                   decay_factors(lat, 4.0 * h)}} {}

  // Lawson RK4; returns N(y) as a by-product.
  SpectralField rk4(const SpectralField& y, SpectralField& n_y) const {
    const double h = h_;
    n_y = nonlinearity(y);
    const SpectralField& k1 = n_y;
    SpectralField stage = y;
    stage += (0.5 * h) * k1;
    const SpectralField k2 = nonlinearity(damp(stage, half()));
    stage = damp(y, half());
    stage += (0.5 * h) * k2;
    const SpectralField k3 = nonlinearity(stage);
    stage = damp(y, full());
    axpy_damped(stage, h, k3, half());
    const SpectralField k4 = nonlinearity(stage);
    SpectralField next = damp(y, full());
    axpy_damped(next, h / 6.0, k1, full());
    axpy_damped(next, h / 3.0, k2, half());
    axpy_damped(next, h / 3.0, k3, half());
    next += (h / 6.0) * k4;
    return next;
  }

  // history[0] = N(y_n), history[1] = N(y_{n-1}), ...
  SpectralField ab4(const SpectralField& y, const std::array<const SpectralField*, 4>& history) const {
    const double h = h_ / 24.0;
    SpectralField next = damp(y, full());
    axpy_damped(next, 55.0 * h, *history[0], e_[2]);
    axpy_damped(next, -59.0 * h, *history[1], e_[3]);
    axpy_damped(next, 37.0 * h, *history[2], e_[4]);
    axpy_damped(next, -9.0 * h, *history[3], e_[5]);
    return next;
  }

 private:
  const std::vector<double>& half() const { return e_[1]; }
  const std::vector<double>& full() const { return e_[2]; }

  double h_;
  std::array<std::vector<double>, 6> e_;
};

}  // namespace

Trajectory timestep_oracle(const SpectralField& omega0, double dt, double t_end, int stride,
                           bool keep_states, OracleScheme scheme) {
  if (!(dt > 0.0) || !(t_end > 0.0)) {
    throw Error(ErrorCode::kDomain, "timestep_oracle: dt and T must be positive");
  }
  if (stride < 1) throw Error(ErrorCode::kDomain, "timestep_oracle: stride must be >= 1");
  omega0.require_valid("timestep_oracle");
  const long steps = std::max(1L, std::lround(t_end / dt));
  const double h = t_end / static_cast<double>(steps);
  const Stepper stepper(omega0.lattice(), h);

  Trajectory traj;
  SpectralField y = omega0;
  double norm = l2_norm(y);
  const double norm_initial = norm;
  auto record = [&](double t) {
    traj.times.push_back(t);
    traj.norm0.push_back(norm);
    // Implied |D(t)| = ||S(t; w0)||_0 / ||y(t)||_0.
    traj.denominator.push_back(norm > 0.0 ? l2_norm(heat_propagate(omega0, t)) / norm : 1.0);
    if (keep_states) traj.states.push_back(y);
  };
  record(0.0);
  // Newest first.
  std::vector<SpectralField> history;
  for (long n = 1; n <= steps; ++n) {
    SpectralField next(omega0.lattice());
    if (scheme == OracleScheme::kLawsonRk4 || history.size() < 3) {
      SpectralField n_y(omega0.lattice());
      next = stepper.rk4(y, n_y);
      history.insert(history.begin(), std::move(n_y));
    } else {
      history.insert(history.begin(), nonlinearity(y));
      next = stepper.ab4(y, {&history[0], &history[1], &history[2], &history[3]});
    }
    if (history.size() > 3) history.pop_back();
    const double next_norm = l2_norm(next);
    if (!std::isfinite(next_norm) || (norm > 0.0 && next_norm > 10.0 * norm)) {
      traj.status = TrajectoryStatus::kTruncated;
      traj.message = "step rejected at t = " + std::to_string((n - 1) * h) +
                     ": norm grew more than tenfold";
      break;
    }
    y = std::move(next);
    norm = next_norm;
    if (n % stride == 0 || n == steps) record(n * h);
  }
  if (norm_initial > 0.0) {
    double alpha = 0.0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      alpha = std::max(alpha, traj.norm0[i] * std::exp(traj.times[i]) / norm_initial);
    }
    traj.alpha = alpha;
  }
  return traj;
}

}  // namespace npe
