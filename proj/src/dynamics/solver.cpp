#include <algorithm>
#include <cmath>
#include <string>

#include "npe/dynamics.hpp"
#include "npe/error.hpp"
#include "npe/spectral.hpp"

namespace npe {

const char* to_string(TrajectoryStatus status) {
  switch (status) {
    case TrajectoryStatus::kCompleted: return "completed";
    case TrajectoryStatus::kBlowUp: return "blowup";
    case TrajectoryStatus::kQuadratureFailure: return "quadrature_failure";
    case TrajectoryStatus::kTruncated: return "truncated";
  }
  return "unknown";
}

NpeSolver::NpeSolver(SpectralField omega0, QuadratureSpec spec)
    : integrator_(std::move(omega0), spec) {}

double NpeSolver::denominator(double t) { return 1.0 - integrator_.integral(t); }

std::optional<std::pair<double, double>> NpeSolver::blowup_before(double t_end) {
  return integrator_.first_crossing(1.0 - kDenominatorFloor, t_end);
}

SpectralField NpeSolver::state(double t) {
  if (!(t >= 0.0)) throw Error(ErrorCode::kDomain, "npe solution: negative time");
  if (auto crossing = blowup_before(t)) {
    throw BlowUpError(crossing->first, crossing->second,
                      "denominator vanishes at t = " + std::to_string(crossing->first));
  }
  const double d = denominator(t);
  return (1.0 / d) * heat_propagate(integrator_.datum(), t);
}

SpectralField npe_solution_at(const SpectralField& omega0, double t, const QuadratureSpec& spec) {
  NpeSolver solver(omega0, spec);
  return solver.state(t);
}

namespace {

void require_grid(const std::vector<double>& grid) {
  if (grid.empty() || grid.front() != 0.0) {
    throw Error(ErrorCode::kConfiguration, "time grid must start at 0");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw Error(ErrorCode::kConfiguration, "time grid must increase");
  }
}

}  // namespace

Trajectory simulate(const SpectralField& omega0, const std::vector<double>& grid,
                    const QuadratureSpec& spec, bool keep_states) {
  require_grid(grid);
  if (grid.back() > spec.horizon) {
    throw Error(ErrorCode::kConfiguration, "time grid extends beyond the quadrature horizon");
  }
  Trajectory traj;
  const double norm_initial = l2_norm(omega0);
  try {
    NpeSolver solver(omega0, spec);
    auto crossing = solver.blowup_before(grid.back());
    for (double t : grid) {
      if (crossing && t >= crossing->first) break;
      const double d = solver.denominator(t);
      const SpectralField heat = heat_propagate(omega0, t);
      traj.times.push_back(t);
      traj.denominator.push_back(d);
      traj.norm0.push_back(l2_norm(heat) / std::abs(d));
      if (keep_states) traj.states.push_back((1.0 / d) * heat);
    }
    if (crossing) {
      traj.status = TrajectoryStatus::kBlowUp;
      traj.blowup_lower = crossing->first;
      traj.blowup_upper = crossing->second;
      traj.message = "denominator falls below 1e-8";
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kQuadrature) throw;
    traj.status = TrajectoryStatus::kQuadratureFailure;
    traj.message = e.what();
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

double small_ball_radius(double c1) {
  if (!(c1 > 0.0)) throw Error(ErrorCode::kDomain, "small_ball_radius: constant must be > 0");
  return 1.0 / (2.0 * c1);
}

}  // namespace npe
