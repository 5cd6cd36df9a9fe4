#include <doctest.h>

#include <cmath>
#include <numbers>

#include "npe/control.hpp"
#include "npe/dynamics.hpp"
#include "npe/error.hpp"
#include "npe/functionals.hpp"
#include "npe/spectral.hpp"
#include "reference_values.hpp"
#include "test_support.hpp"

using namespace npe;
using npe::test::field_rel_err;
using npe::test::rel_err;

namespace {

constexpr double kPi = std::numbers::pi;
using Triple = std::array<double, 3>;

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return static_cast<ErrorCode>(0);
}

SupportBox box(double lo, double hi) {
  SupportBox b;
  b.lower = {lo, lo, lo};
  b.upper = {hi, hi, hi};
  return b;
}

ControlParams demo_params() {
  ControlParams params;
  params.amplitudes = {-1.0, -1.0, 0.0};
  return params;
}

// Amplitude of the datum used by the stabilization example, and the
// lambda its certificate settles on.
constexpr double kDemoMu = 6939.66;
constexpr double kDemoLambda = 106870.75;

}  // namespace

TEST_SUITE("control") {

TEST_CASE("support boxes and the scale p") {
  CHECK(choose_p(SupportBox::full_torus()) == 1);
  CHECK(choose_p(box(0.0, kPi)) == 2);
  CHECK(choose_p(box(1.0, 1.0 + 2 * kPi / 3)) == 3);
  SupportBox mixed = SupportBox::full_torus();
  mixed.lower[1] = 0.5;
  mixed.upper[1] = 1.5;
  CHECK(choose_p(mixed) == 7);
  CHECK(code_of([] { box(1.0, 1.0).validate(); }) == ErrorCode::kConfiguration);
  CHECK(code_of([] { box(-0.1, 1.0).validate(); }) == ErrorCode::kConfiguration);
  ControlParams params;
  params.box = box(0.0, kPi);
  params.p = 1;
  CHECK(code_of([&] { params.validate(); }) == ErrorCode::kConfiguration);
  params.p = 2;
  CHECK_NOTHROW(params.validate());
  CHECK(box(0.0, kPi).center()[2] == doctest::Approx(kPi / 2));
}

TEST_CASE("the stream function w") {
  const Triple a{1.0, 2.0, 3.0};
  // s(pi/2) = 1, s(0) = 0, 1 + cos 0 = 2
  CHECK(build_w({kPi / 2, kPi / 2, 0.0}, a) == doctest::Approx(2.0 * a[2]));
  CHECK(build_w({0.0, kPi / 2, kPi / 2}, a) == doctest::Approx(2.0 * a[0]));
  const double s = std::sin(0.7) + 0.5 * std::sin(1.4);
  CHECK(build_w({0.7, 0.7, 0.7}, a) == doctest::Approx((a[0] + a[1] + a[2]) * (1 + std::cos(0.7)) * s * s));
  for (double edge : {kPi, -kPi}) {
    CHECK(std::abs(build_w({edge, 0.4, 1.1}, a)) < 1e-15);
    CHECK(std::abs(build_w({0.4, edge, -2.0}, a)) < 1e-15);
    CHECK(std::abs(w_derivative({0.4, 1.0, edge}, a, {1, 0, 0})) < 1e-14);
  }
  const std::array<double, 3> x{0.3, -1.2, 2.1};
  const double h = 1e-5;
  for (int axis = 0; axis < 3; ++axis) {
    for (int order = 0; order < 3; ++order) {
      std::array<int, 3> lo{0, 0, 0};
      lo[axis] = order;
      std::array<int, 3> hi = lo;
      ++hi[axis];
      std::array<double, 3> xp = x, xm = x;
      xp[axis] += h;
      xm[axis] -= h;
      const double fd = (w_derivative(xp, a, lo) - w_derivative(xm, a, lo)) / (2 * h);
      CHECK(std::abs(fd - w_derivative(x, a, hi)) < 1e-7 * (1 + std::abs(fd)));
    }
  }
}

TEST_CASE("control field on the full torus") {
  const Lattice lat(32, 8);
  const ControlField c = build_control_u(demo_params(), lat);
  CHECK(rel_err(l2_norm(c.u), 1.0) < 1e-14);
  CHECK(c.u.divergence_defect() < 1e-14);
  CHECK(c.pre_projection_divergence < 1e-12);
  CHECK(c.truncation_residual < 1e-12);
  CHECK(c.support_leak == 0.0);
  CHECK(c.sup_norm > 0.0);
  CHECK(rel_err(psi(c.u), reference::kPsiU) < 1e-10);
  CHECK(rel_err(psi(heat_propagate(c.u, 0.1)), reference::kPsiHeatU01) < 1e-10);
  ControlParams p123;
  p123.amplitudes = {1.0, 2.0, 3.0};
  CHECK(rel_err(psi(build_control_u(p123, lat).u), reference::kPsiU123) < 1e-10);
  // band-limited: a larger cutoff reproduces the same field
  const ControlField wide = build_control_u(demo_params(), Lattice(40, 12));
  CHECK(field_rel_err(wide.u.resampled(lat), c.u) < 1e-13);
  // a2 = a3 makes u mirror symmetric under x2 <-> x3, so Psi vanishes
  CHECK(std::abs(psi(build_control_u(ControlParams{}, lat).u)) < 1e-14);

  ControlParams zero;
  zero.amplitudes = {0.0, 0.0, 0.0};
  CHECK(code_of([&] { build_control_u(zero, lat); }) == ErrorCode::kInvariant);
  ControlParams fine = demo_params();
  fine.box = box(0.0, kPi);
  fine.p = 2;
  CHECK(code_of([&] { build_control_u(fine, Lattice(13, 3)); }) == ErrorCode::kConfiguration);
}

TEST_CASE("localized control") {
  ControlParams params = demo_params();
  params.box = box(0.5, 0.5 + kPi);
  params.p = 2;
  const ControlField coarse = build_control_u(params, Lattice(26, 8));
  const ControlField c = build_control_u(params, Lattice(50, 16));
  MESSAGE("p = 2, K = 16: divergence " << c.pre_projection_divergence << ", residual "
                                       << c.truncation_residual << ", leak " << c.support_leak);
  CHECK(rel_err(l2_norm(c.u), 1.0) < 1e-14);
  CHECK(c.u.divergence_defect() < 1e-14);
  // u is only continuous across the box faces, so truncation leaves a
  // slowly shrinking residue outside the box
  CHECK(c.truncation_residual < coarse.truncation_residual);
  CHECK(c.pre_projection_divergence < coarse.pre_projection_divergence);
  CHECK(c.support_leak < coarse.support_leak);
  CHECK(c.truncation_residual < 0.05);
  CHECK(c.support_leak < 0.1);
  // the centered field moved by the box center
  ControlParams centered = params;
  centered.box = box(-kPi / 2 + kPi, kPi / 2 + kPi);
  const SpectralField at_pi = build_control_u(centered, Lattice(50, 16)).u;
  const std::array<double, 3> shift{0.5 + kPi / 2 - kPi, 0.5 + kPi / 2 - kPi, 0.5 + kPi / 2 - kPi};
  CHECK(field_rel_err(translate(at_pi, shift), c.u) < 1e-12);
}

TEST_CASE("decay certificate") {
  const Lattice lat(32, 8);
  const auto grid = certification_grid();
  CHECK(grid.size() == 201u);
  CHECK(grid.front() == 0.0);
  CHECK(grid[1] == doctest::Approx(1e-4));
  CHECK(grid.back() == 3.0);
  CHECK(code_of([] { certification_grid(1, 1e-4, 3.0); }) == ErrorCode::kConfiguration);

  const DecayCertificate bad = certify_decay(build_control_u(ControlParams{}, lat).u, grid);
  CHECK_FALSE(bad.passed);
  REQUIRE(bad.first_failure);
  CHECK(*bad.first_failure == 0u);
  CHECK(code_of([&] { certified_control(ControlParams{}, lat, grid, false); }) ==
        ErrorCode::kCertification);

  const CertifiedControl cc = certified_control(ControlParams{}, lat, grid, true);
  CHECK(cc.amplitudes == Triple{-1.0, -1.0, 0.0});
  CHECK(cc.decay.passed);
  CHECK(rel_err(cc.decay.beta_hat, reference::kPsiU / 3.0) < 1e-10);
  CHECK(cc.decay.argmin_time == 0.0);
  CHECK(cc.tried.size() > 8u);
  CHECK_FALSE(certify_decay(-cc.control.u, grid).passed);
  const DecayCertificate scaled = certify_decay(2.0 * cc.control.u, grid);
  CHECK(rel_err(scaled.beta_hat, 8.0 * cc.decay.beta_hat) < 1e-12);
}

TEST_CASE("amplitude search order") {
  const auto c = amplitude_candidates({1.0, 1.0, 1.0});
  REQUIRE(c.size() > 7u);
  CHECK(c[0] == Triple{1.0, 1.0, -1.0});
  CHECK(c[6] == Triple{-1.0, -1.0, -1.0});
  CHECK(c[7] == Triple{-1.0, 0.0, 0.0});
  auto l1 = [](const Triple& t) { return std::abs(t[0]) + std::abs(t[1]) + std::abs(t[2]); };
  for (std::size_t i = 8; i < c.size(); ++i) CHECK(l1(c[i]) >= l1(c[i - 1]));
  for (const auto& t : c) {
    CHECK_FALSE(t == Triple{0.0, 0.0, 0.0});
    CHECK_FALSE(t == Triple{2.0, 2.0, 2.0});
  }
}

TEST_CASE("time and lambda thresholds") {
  CHECK(rel_err(choose_t0(1.0), reference::kT0Unit) < 1e-15);
  CHECK(rel_err(choose_t0(2.0), reference::kT0Unit / 16.0) < 1e-15);
  CHECK(rel_err(a_constant(reference::kT0Unit), reference::kAAtT0Unit) < 1e-14);
  CHECK(rel_err(a_constant(0.25), 1.0) < 1e-15);
  CHECK(code_of([] { choose_t0(0.0); }) == ErrorCode::kDomain);
  CHECK(code_of([] { a_constant(-1.0); }) == ErrorCode::kDomain);

  // c = beta, A = 1, y = 1: 3 e^{15 T} and e^{16 t0} + e^{17 t0} + e^{18 t0}
  CHECK(rel_err(lambda_threshold_1(1.0, 0.1, 2.0, 2.0, 1.0), 3.0 * std::exp(1.5)) < 1e-15);
  CHECK(rel_err(lambda_threshold_1(2.0, 0.0, 1.0, 1.0, 1.0), 2.0 + 4.0 + 8.0) < 1e-15);
  CHECK(rel_err(lambda_threshold_2(1.0, 0.0, 1.0, 1.0, 1.0), 3.0) < 1e-15);
  CHECK(rel_err(lambda_threshold_2(1.0, 0.1, 1.0, 1.0, 1.0),
                std::exp(1.6) + std::exp(1.7) + std::exp(1.8)) < 1e-14);
  CHECK(code_of([] { lambda_threshold_1(0.0, 1.0, 1.0, 1.0, 1.0); }) == ErrorCode::kDomain);
}

TEST_CASE("stabilization horizon") {
  const Horizon unit = stabilization_horizon(32.0, 1.0);
  CHECK(rel_err(unit.root, reference::kRootUnit) < 1e-14);
  CHECK(rel_err(unit.horizon, reference::kHorizonUnit) < 1e-13);
  const Horizon small = stabilization_horizon(1e-4, 1.0);
  CHECK(rel_err(small.root, reference::kRootSmall) < 1e-14);
  CHECK(rel_err(small.horizon, reference::kHorizonSmall) < 1e-14);
  for (double ratio : {1e-3, 0.1, 1.0, 10.0, 100.0}) {
    const Horizon h = stabilization_horizon(ratio, 1.0);
    const double x = h.root;
    CHECK(std::abs(ratio * std::pow(x, 16) + 32.0 * x - ratio) < 1e-14 * (ratio + 32.0));
    CHECK(x > 0.0);
    CHECK(x < 1.0);
  }
  // the root tends to beta / (32 c1) for small beta / c1
  CHECK(rel_err(stabilization_horizon(1e-8, 1.0).root, 1e-8 / 32.0) < 1e-12);
  CHECK(code_of([] { stabilization_horizon(0.0, 1.0); }) == ErrorCode::kDomain);
}

TEST_CASE("psi bound certificate") {
  const Lattice lat(32, 8);
  const SpectralField u = build_control_u(demo_params(), lat).u;
  const auto grid = certification_grid();
  const double beta = reference::kPsiU / 3.0;
  const SpectralField zero(lat);
  const PsiBoundCertificate trivial = verify_psi_bound(zero, 1.0, u, grid, beta);
  CHECK(trivial.passed);
  CHECK(trivial.precondition_met);

  const SpectralField y0 = kDemoMu * u;
  const PsiBoundCertificate demo = verify_psi_bound(y0, kDemoLambda, u, grid, beta);
  CHECK(demo.passed);
  CHECK(demo.precondition_met);
  const PsiBoundCertificate weak = verify_psi_bound(y0, kDemoLambda / 100.0, u, grid, beta);
  CHECK_FALSE(weak.passed);
  CHECK(weak.worst_margin < 0.0);
  const PsiBoundCertificate strong = verify_psi_bound(y0, 2.0 * kDemoLambda, u, grid, beta);
  CHECK(strong.passed);
  CHECK(strong.worst_margin >= demo.worst_margin);
}

TEST_CASE("synthesis for the zero datum") {
  const Lattice lat(32, 8);
  SynthesisOptions options;
  options.constant_samples = 3;
  const SynthesisResult r = synthesize(SpectralField(lat), lat, options);
  CHECK(r.plan.amplitudes == Triple{-1.0, -1.0, 0.0});
  CHECK(r.plan.lambda == 1.0);
  CHECK(r.plan.doublings == 0);
  CHECK(r.bound.passed);
  CHECK(field_rel_err(r.v, -r.u) == 0.0);
  CHECK(rel_err(r.plan.beta_hat, reference::kPsiU / 3.0) < 1e-10);
  CHECK(rel_err(r.plan.r0, 1.0 / (2.0 * r.plan.c1_hat)) < 1e-15);
  CHECK(r.plan.lambda01 == 0.0);
  CHECK(classify(r.v, options.quadrature).verdict == Verdict::kStability);
  CHECK(code_of([&] { synthesize(SpectralField(Lattice(26, 8)), lat, options); }) ==
        ErrorCode::kConfiguration);
}

}  // TEST_SUITE
