#include <algorithm>
#include <cmath>
#include <string>

#include "npe/control.hpp"
#include "npe/dynamics.hpp"
#include "npe/error.hpp"
#include "npe/phase_space.hpp"
#include "npe/spectral.hpp"

namespace npe {

namespace {

using Triple = std::array<double, 3>;

bool positive_multiple(const Triple& a, const Triple& b) {
  double ratio = 0.0;
  for (int i = 0; i < 3; ++i) {
    if ((a[i] == 0.0) != (b[i] == 0.0)) return false;
    if (a[i] == 0.0) continue;
    const double r = a[i] / b[i];
    if (r <= 0.0) return false;
    if (ratio == 0.0) {
      ratio = r;
    } else if (std::abs(r - ratio) > 1e-12 * ratio) {
      return false;
    }
  }
  return ratio > 0.0;
}

Lattice reduced_lattice(const Lattice& lattice, int cutoff) {
  if (cutoff <= 0 || cutoff >= lattice.k()) return lattice;
  return Lattice(minimal_modes_per_axis(cutoff), cutoff, lattice.product_rule());
}

}  // namespace

std::vector<Triple> amplitude_candidates(const Triple& first) {
  std::vector<Triple> out;
  auto push = [&](const Triple& t) {
    if (t == Triple{0.0, 0.0, 0.0}) return;
    if (positive_multiple(t, first)) return;
    for (const auto& seen : out) {
      if (positive_multiple(t, seen)) return;
    }
    out.push_back(t);
  };
  for (int mask = 0; mask < 8; ++mask) {
    push({mask & 4 ? -1.0 : 1.0, mask & 2 ? -1.0 : 1.0, mask & 1 ? -1.0 : 1.0});
  }
  std::vector<Triple> grid;
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b)
      for (int c = -2; c <= 2; ++c) grid.push_back({double(a), double(b), double(c)});
  std::stable_sort(grid.begin(), grid.end(), [](const Triple& x, const Triple& y) {
    const double lx = std::abs(x[0]) + std::abs(x[1]) + std::abs(x[2]);
    const double ly = std::abs(y[0]) + std::abs(y[1]) + std::abs(y[2]);
    return lx < ly;
  });
  for (const auto& t : grid) push(t);
  return out;
}

CertifiedControl certified_control(const ControlParams& params, const Lattice& lattice,
                                   const std::vector<double>& t_grid, bool search,
                                   int search_cutoff) {
  params.validate();
  std::vector<Triple> candidates{params.amplitudes};
  if (search) {
    const auto more = amplitude_candidates(params.amplitudes);
    candidates.insert(candidates.end(), more.begin(), more.end());
  }
  const int cutoff = search_cutoff > 0 ? search_cutoff : 8 * params.p;
  const Lattice coarse = reduced_lattice(lattice, std::max(cutoff, 2 * params.p));

  CertifiedControl out{ControlField{SpectralField(lattice)}, {}, params.amplitudes, {}};
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    ControlParams trial = params;
    trial.amplitudes = candidates[i];
    out.tried.push_back(candidates[i]);
    // The configured amplitudes must at least produce a field; later search
    // candidates never vanish identically.
    if (!(coarse == lattice)) {
      const ControlField screen = build_control_u(trial, coarse);
      if (!certify_decay(screen.u, t_grid).passed) continue;
    }
    ControlField control = build_control_u(trial, lattice);
    DecayCertificate decay = certify_decay(control.u, t_grid);
    if (decay.passed) {
      out.control = std::move(control);
      out.decay = std::move(decay);
      out.amplitudes = candidates[i];
      return out;
    }
    if (!search) {
      out.decay = std::move(decay);
      break;
    }
  }
  std::string msg = "decay certificate failed for " + std::to_string(out.tried.size()) +
                    " amplitude pattern(s)";
  if (!search && out.decay.first_failure) {
    const auto& row = out.decay.rows[*out.decay.first_failure];
    msg += "; Psi(S(t;u)) = " + std::to_string(row.psi) + " at t = " + std::to_string(row.t);
  }
  throw Error(ErrorCode::kCertification, msg);
}

SynthesisResult synthesize(const SpectralField& y0, const Lattice& lattice,
                           const SynthesisOptions& options) {
  if (!(y0.lattice() == lattice)) {
    throw Error(ErrorCode::kConfiguration, "synthesize: datum lattice differs from the plan lattice");
  }
  y0.require_valid("synthesize");
  options.quadrature.validate();

  CertifiedControl cc = certified_control(options.control, lattice, options.certification_times,
                                          options.search_amplitudes, options.search_cutoff);
  StabilizationPlan plan;
  plan.amplitudes = cc.amplitudes;
  plan.amplitudes_tried = cc.tried;
  plan.p = options.control.p;
  plan.beta_hat = cc.decay.beta_hat;
  plan.u_inf = cc.control.sup_norm;
  plan.y0_norm0 = l2_norm(y0);
  plan.y0_half = sobolev_norm(y0, 0.5);

  const Lattice sample_lattice =
      reduced_lattice(lattice, options.constant_cutoff > 0 ? options.constant_cutoff : 8);
  const SpectralField& u = cc.control.u;
  const ConstantEstimate c1 = estimate_integral_constant(
      sample_lattice, options.constant_samples, options.constant_seed, options.quadrature, {u, -u});
  const ConstantEstimate c_hat = estimate_trilinear_constant(
      sample_lattice, options.constant_samples, options.constant_seed + 7919);
  const ConstantEstimate phi_const =
      estimate_phi_constant(sample_lattice, options.constant_samples, options.constant_seed + 104729);
  plan.c1_hat = c1.value;
  plan.c_hat = c_hat.value;
  plan.phi_constant = phi_const.value;
  plan.r0 = small_ball_radius(plan.c1_hat);

  plan.t0 = choose_t0(plan.u_inf);
  plan.a_t0 = a_constant(plan.t0);
  const Horizon h = stabilization_horizon(plan.beta_hat, plan.c1_hat);
  plan.horizon = h.horizon;
  plan.root = h.root;
  if (plan.y0_half > 0.0) {
    plan.lambda01 = lambda_threshold_1(plan.y0_half, plan.horizon, plan.beta_hat, plan.c_hat, plan.a_t0);
    plan.lambda02 = lambda_threshold_2(plan.y0_half, plan.t0, plan.beta_hat, plan.c_hat, plan.a_t0);
  }
  plan.lambda_analytic = 1.1 * std::max({plan.lambda01, plan.lambda02, 7.0 * plan.y0_norm0});

  SynthesisResult result{plan, u, y0, cc.control, cc.decay, {}, c_hat, c1, phi_const};
  if (!y0.is_zero() && !options.lambda_override) {
    const Classification cls = classify(y0, options.quadrature, options.classification_tol);
    if (cls.verdict == Verdict::kStability) {
      result.plan.trivial = true;
      result.plan.lambda = 0.0;
      result.plan.lambda_source = "datum already decays";
      return result;
    }
  }

  if (options.lambda_override) {
    result.plan.lambda = *options.lambda_override;
    result.plan.lambda_source = "override";
    result.bound = verify_psi_bound(y0, result.plan.lambda, u, options.certification_times,
                                    plan.beta_hat);
  } else {
    double lambda = plan.y0_norm0 > 0.0 ? 1.1 * 7.0 * plan.y0_norm0 : 1.0;
    int doublings = 0;
    while (true) {
      result.bound = verify_psi_bound(y0, lambda, u, options.certification_times, plan.beta_hat);
      if (result.bound.passed) break;
      if (doublings >= options.max_doublings) {
        throw Error(ErrorCode::kCertification,
                    "lambda escalation exceeded " + std::to_string(options.max_doublings) +
                        " doublings (last lambda " + std::to_string(lambda) + ", worst margin " +
                        std::to_string(result.bound.worst_margin) + " at t = " +
                        std::to_string(result.bound.worst_time) + ")");
      }
      lambda *= 2.0;
      ++doublings;
    }
    result.plan.lambda = lambda;
    result.plan.doublings = doublings;
    result.plan.lambda_source = "certificate";
  }
  result.v = SpectralField::combine(1.0, y0, -result.plan.lambda, u);
  return result;
}

}  // namespace npe
