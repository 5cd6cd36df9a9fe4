#include <doctest.h>

#include <cmath>

#include "npe/control.hpp"
#include "npe/dynamics.hpp"
#include "npe/error.hpp"
#include "npe/functionals.hpp"
#include "npe/generators.hpp"
#include "npe/spectral.hpp"
#include "reference_values.hpp"
#include "test_support.hpp"

using namespace npe;
using npe::test::field_rel_err;
using npe::test::rel_err;

namespace {

SpectralField demo_control() {
  ControlParams params;
  params.amplitudes = {-1.0, -1.0, 0.0};
  return build_control_u(params, Lattice(32, 8)).u;
}

std::vector<double> uniform(double t_end, int points) {
  std::vector<double> grid;
  for (int i = 0; i < points; ++i) grid.push_back(t_end * i / (points - 1));
  return grid;
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("shear mode follows the heat flow") {
  const Lattice lat(26, 8);
  const SpectralField s = shear_mode(lat);
  const Trajectory traj = simulate(s, uniform(2.0, 21), QuadratureSpec{});
  CHECK(traj.status == TrajectoryStatus::kCompleted);
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    CHECK(traj.denominator[i] == 1.0);
    CHECK(rel_err(traj.norm0[i], l2_norm(s) * std::exp(-traj.times[i])) < 1e-14);
  }
  CHECK(traj.alpha == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("denominator scales with the datum") {
  const Lattice lat(26, 8);
  const SpectralField y = random_smooth(lat, 21, 2.0, 1.0);
  NpeSolver base(y, QuadratureSpec{});
  for (double c : {0.5, 3.0, -2.0}) {
    NpeSolver scaled(c * y, QuadratureSpec{});
    for (double t : {0.05, 0.4, 1.7}) {
      CHECK(std::abs(scaled.denominator(t) - (1.0 - c * (1.0 - base.denominator(t)))) < 1e-12);
    }
  }
  // y(t) = S(t) y0 / D(t)
  const double t = 0.3;
  CHECK(field_rel_err(base.state(t), (1.0 / base.denominator(t)) * heat_propagate(y, t)) < 1e-14);
}

TEST_CASE("blow-up of the scaled control") {
  const SpectralField u = demo_control();
  const SpectralField y = (2.0 / reference::kGInf) * u;
  const Trajectory traj = simulate(y, uniform(1.0, 101), QuadratureSpec{});
  CHECK(traj.status == TrajectoryStatus::kBlowUp);
  CHECK(traj.blowup_upper - traj.blowup_lower <= 1e-9 * traj.blowup_upper);
  CHECK(std::abs(traj.blowup_time() - reference::kBlowupTime) < 1e-7);
  CHECK(traj.times.back() < traj.blowup_lower);

  NpeSolver solver(y, QuadratureSpec{});
  CHECK_NOTHROW(solver.state(0.1));
  try {
    solver.state(0.5);
    FAIL("expected a blow-up");
  } catch (const BlowUpError& e) {
    CHECK(e.code() == ErrorCode::kBlowUp);
    CHECK(e.t_lower() <= e.t_upper());
    CHECK(std::abs(e.t_lower() - reference::kBlowupTime) < 1e-7);
  }
  CHECK(solver.blowup_before(0.1) == std::nullopt);
}

TEST_CASE("classification") {
  const SpectralField u = demo_control();
  const QuadratureSpec spec;
  CHECK(classify(-u, spec).verdict == Verdict::kStability);
  CHECK(classify(u, spec).verdict == Verdict::kStability);
  CHECK(classify((2.0 / reference::kGInf) * u, spec).verdict == Verdict::kExplosion);
  const Classification edge = classify((1.0 / reference::kGInf) * u, spec);
  CHECK(edge.verdict == Verdict::kUndetermined);
  CHECK(edge.sup_integral == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(classify((0.99 / reference::kGInf) * u, spec).verdict == Verdict::kStability);
  CHECK(classify((1.01 / reference::kGInf) * u, spec).verdict == Verdict::kExplosion);
  try {
    classify(SpectralField(u.lattice()), spec);
    FAIL("expected a domain error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDomain);
  }
  CHECK_THROWS_AS(classify(u, spec, 0.0), Error);
  CHECK(std::string(to_string(Verdict::kGrowing)) != to_string(Verdict::kUndetermined));
}

TEST_CASE("time-stepping oracle agrees with the closed form") {
  const Lattice lat(26, 8);
  for (OracleScheme scheme : {OracleScheme::kAdamsBashforth4, OracleScheme::kLawsonRk4}) {
    for (const auto& y0 : test::corpus(lat, 2, 300)) {
      const SpectralField y = 20.0 * y0;
      const Trajectory oracle = timestep_oracle(y, 1e-3, 0.2, 50, true, scheme);
      REQUIRE(oracle.status == TrajectoryStatus::kCompleted);
      REQUIRE(oracle.times.size() == 5u);
      NpeSolver solver(y, QuadratureSpec{});
      for (std::size_t i = 0; i < oracle.times.size(); ++i) {
        CHECK(field_rel_err(oracle.states[i], solver.state(oracle.times[i])) < 1e-6);
      }
    }
  }
  CHECK(oracle_scheme_from_string(to_string(OracleScheme::kLawsonRk4)) == OracleScheme::kLawsonRk4);
  CHECK(oracle_scheme_from_string(to_string(OracleScheme::kAdamsBashforth4)) ==
        OracleScheme::kAdamsBashforth4);
  CHECK_THROWS_AS(oracle_scheme_from_string("euler"), Error);
  CHECK_THROWS_AS(timestep_oracle(shear_mode(lat), 0.0, 1.0), Error);
}

TEST_CASE("simulate rejects bad grids") {
  const Lattice lat(26, 8);
  const SpectralField y = random_smooth(lat, 4, 2.0, 1.0);
  CHECK_THROWS_AS(simulate(y, {0.0, 0.5, 0.2}, QuadratureSpec{}), Error);
  CHECK_THROWS_AS(simulate(y, {}, QuadratureSpec{}), Error);
  CHECK(std::string(to_string(TrajectoryStatus::kBlowUp)).size() > 0);
}

}  // TEST_SUITE
