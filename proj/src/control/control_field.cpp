#include <cmath>
#include <numbers>

#include "npe/control.hpp"
#include "npe/error.hpp"
#include "npe/spectral.hpp"

namespace npe {

namespace {

// Derivatives of 1 + cos x.
double bump(double x, int order) {
  switch (order) {
    case 0: return 1.0 + std::cos(x);
    case 1: return -std::sin(x);
    case 2: return -std::cos(x);
    default: return std::sin(x);
  }
}

// Derivatives of sin x + sin(2x) / 2.
double wave(double x, int order) {
  switch (order) {
    case 0: return std::sin(x) + 0.5 * std::sin(2.0 * x);
    case 1: return std::cos(x) + std::cos(2.0 * x);
    case 2: return -std::sin(x) - 2.0 * std::sin(2.0 * x);
    case 3: return -std::cos(x) - 4.0 * std::cos(2.0 * x);
    default: throw Error(ErrorCode::kDomain, "w_derivative: order above 3");
  }
}

double wrap_centered(double x) {
  const double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(x, two_pi);
  if (r < -std::numbers::pi) r += two_pi;
  if (r >= std::numbers::pi) r -= two_pi;
  return r;
}

}  // namespace

double w_derivative(const std::array<double, 3>& x, const std::array<double, 3>& amplitudes,
                    const std::array<int, 3>& order) {
  for (int o : order) {
    if (o < 0 || o > 3) throw Error(ErrorCode::kDomain, "w_derivative: order must be in [0, 3]");
  }
  double sum = 0.0;
  for (int k = 0; k < 3; ++k) {
    if (amplitudes[k] == 0.0) continue;
    double term = amplitudes[k];
    for (int axis = 0; axis < 3; ++axis) {
      term *= axis == k ? bump(x[axis], order[axis]) : wave(x[axis], order[axis]);
    }
    sum += term;
  }
  return sum;
}

double build_w(const std::array<double, 3>& x, const std::array<double, 3>& amplitudes) {
  return w_derivative(x, amplitudes, {0, 0, 0});
}

ControlField build_control_u(const ControlParams& params, const Lattice& lattice) {
  params.validate();
  const int p = params.p;
  if (lattice.k() < 2 * p) {
    throw Error(ErrorCode::kConfiguration, "control: cutoff K = " + std::to_string(lattice.k()) +
                                               " does not resolve scale p = " + std::to_string(p) +
                                               " (need K >= 2p)");
  }
  const int n = lattice.n();
  const double h = 2.0 * std::numbers::pi / n;
  const double reach = std::numbers::pi / p * (1.0 + 1e-12);
  const double scale = double(p) * p;
  const auto& a = params.amplitudes;

  PhysicalField sampled(lattice);
  auto u1 = sampled.component(0);
  auto u2 = sampled.component(1);
  auto u3 = sampled.component(2);
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2)
      for (int i3 = 0; i3 < n; ++i3) {
        const std::array<double, 3> xi{wrap_centered(i1 * h), wrap_centered(i2 * h),
                                       wrap_centered(i3 * h)};
        if (std::abs(xi[0]) > reach || std::abs(xi[1]) > reach || std::abs(xi[2]) > reach) continue;
        const std::array<double, 3> px{p * xi[0], p * xi[1], p * xi[2]};
        const std::size_t at = sampled.offset(i1, i2, i3);
        u1[at] = scale * (-w_derivative(px, a, {0, 2, 0}) - w_derivative(px, a, {0, 0, 2}));
        u2[at] = scale * w_derivative(px, a, {1, 1, 0});
        u3[at] = scale * w_derivative(px, a, {1, 0, 1});
      }

  ControlField out{SpectralField(lattice)};
  const SpectralField truncated = forward_transform(sampled);
  out.pre_projection_divergence = truncated.divergence_defect();
  SpectralField projected = leray_project(truncated);
  out.raw_norm = l2_norm(projected);
  const double sample_scale = sampled.max_abs();
  if (!(out.raw_norm > 1e-12 * std::max(1.0, sample_scale))) {
    throw Error(ErrorCode::kInvariant, "control: degenerate amplitudes give a zero field");
  }

  const PhysicalField back = inverse_transform(projected);
  double diff = 0.0;
  double ref = 0.0;
  for (std::size_t i = 0; i < sampled.samples.size(); ++i) {
    diff += (back.samples[i] - sampled.samples[i]) * (back.samples[i] - sampled.samples[i]);
    ref += sampled.samples[i] * sampled.samples[i];
  }
  out.truncation_residual = ref > 0.0 ? std::sqrt(diff / ref) : 0.0;

  projected *= 1.0 / out.raw_norm;
  out.u = translate_support(projected, params.box);

  const PhysicalField moved = inverse_transform(out.u);
  const auto rho = params.box.half_widths();
  const auto c = params.box.center();
  double inside = 0.0;
  double outside = 0.0;
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2)
      for (int i3 = 0; i3 < n; ++i3) {
        const std::size_t at = moved.offset(i1, i2, i3);
        double mag = 0.0;
        for (int comp = 0; comp < 3; ++comp) mag += moved.component(comp)[at] * moved.component(comp)[at];
        mag = std::sqrt(mag);
        const bool in = std::abs(wrap_centered(i1 * h - c[0])) <= rho[0] + 1e-12 &&
                        std::abs(wrap_centered(i2 * h - c[1])) <= rho[1] + 1e-12 &&
                        std::abs(wrap_centered(i3 * h - c[2])) <= rho[2] + 1e-12;
        if (in) {
          inside = std::max(inside, mag);
        } else {
          outside = std::max(outside, mag);
        }
      }
  const double peak = std::max(inside, outside);
  out.support_leak = peak > 0.0 ? outside / peak : 0.0;
  out.sup_norm = sup_norm_estimate(out.u, out.sup_refinement);
  return out;
}

}  // namespace npe
