#pragma once

// Starting control u = u~ / ||u~||_0 with
//   u~(x) = p^2 chi(x) (-d22 w - d33 w, d12 w, d13 w)(p x),
// where chi is the indicator of [-pi/p, pi/p]^3 and
//   w = sum_{i<j, k != i,j} a_k (1 + cos x_k) s(x_i) s(x_j),
//   s(x) = sin x + sin(2x) / 2,
// and the numerical certificates and constants that turn it into a
// stabilization plan.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "npe/phase_space.hpp"
#include "npe/quadrature.hpp"
#include "npe/spectral_field.hpp"

namespace npe {

/// Axis-aligned box [a_i, b_i] on the torus. The full torus (a = 0,
/// b = 2 pi, half-width pi) is admitted.
struct SupportBox {
  std::array<double, 3> lower{0.0, 0.0, 0.0};
  std::array<double, 3> upper{0.0, 0.0, 0.0};

  static SupportBox full_torus();

  std::array<double, 3> half_widths() const noexcept;
  std::array<double, 3> center() const noexcept;
  void validate() const;
};

struct ControlParams {
  SupportBox box = SupportBox::full_torus();
  int p = 1;
  std::array<double, 3> amplitudes{1.0, 1.0, 1.0};

  void validate() const;
};

/// Smallest p with pi / p <= min rho_i.
int choose_p(const SupportBox& box);

double build_w(const std::array<double, 3>& x, const std::array<double, 3>& amplitudes);

/// Partial derivative of w of the given order along each axis (orders up
/// to 3 per axis).
double w_derivative(const std::array<double, 3>& x, const std::array<double, 3>& amplitudes,
                    const std::array<int, 3>& order);

struct ControlField {
  SpectralField u;
  /// ||u~||_0 of the projected truncation before normalization.
  double raw_norm = 0.0;
  /// Divergence defect of the sampled field before projection.
  double pre_projection_divergence = 0.0;
  /// Relative grid L2 distance between the samples and the truncated field.
  double truncation_residual = 0.0;
  /// max |u| outside the support box after truncation, relative to max |u|.
  double support_leak = 0.0;
  /// max |u(x)| on a 2x refined grid.
  double sup_norm = 0.0;
  int sup_refinement = 2;
};

/// Samples the centered control on the lattice grid, transforms, projects,
/// normalizes and moves it into the box. Requires K >= 2p.
ControlField build_control_u(const ControlParams& params, const Lattice& lattice);

/// Multiplies coefficients by exp(-i k.c), c the box center.
SpectralField translate_support(const SpectralField& field, const SupportBox& box);

/// 200 log-spaced points on [1e-4, 3] preceded by t = 0.
std::vector<double> certification_grid(int points = 200, double t_min = 1e-4, double t_max = 3.0);

struct DecayRow {
  double t;
  double psi;
  double magnitude;
  double ratio;  // psi e^{18 t}
};

struct DecayCertificate {
  std::vector<DecayRow> rows;
  double beta_hat = 0.0;
  double min_ratio = 0.0;
  double argmin_time = 0.0;
  bool passed = false;
  /// Index of the first point that failed the positivity test.
  std::optional<std::size_t> first_failure;
};

/// r(t) = Psi(S(t; u)) e^{18t}; beta_hat = min r / 3. A point counts as
/// positive only if Psi exceeds 1e-10 of the integrand magnitude.
DecayCertificate certify_decay(const SpectralField& u, const std::vector<double>& t_grid);

double choose_t0(double u_inf);
double a_constant(double t0);

double lambda_threshold_1(double y0_half, double horizon, double beta_hat, double c_hat, double a);
double lambda_threshold_2(double y0_half, double t0, double beta_hat, double c_hat, double a);

struct Horizon {
  double horizon = 0.0;
  double root = 0.0;
};

/// Root of beta x^16 + 32 c1 x - beta on (0, 1) and T = ln(1 / x0).
Horizon stabilization_horizon(double beta_hat, double c1);

struct PsiBoundRow {
  double t;
  double neg_psi;    // -Psi(S(t; y0 - lambda u))
  double threshold;  // 2 beta lambda^3 e^{-18t}
  double normalized; // -Psi / ||S||_0^3
  double normalized_threshold;  // beta e^{-15t}
  double margin;     // min of the two relative margins
};

struct PsiBoundCertificate {
  std::vector<PsiBoundRow> rows;
  bool passed = false;
  bool precondition_met = false;  // lambda > 7 ||y0||_0
  double worst_margin = 0.0;
  double worst_time = 0.0;
};

PsiBoundCertificate verify_psi_bound(const SpectralField& y0, double lambda,
                                     const SpectralField& u, const std::vector<double>& t_grid,
                                     double beta_hat);

struct SynthesisOptions {
  ControlParams control;
  /// Try other amplitude patterns when the configured one fails to certify.
  bool search_amplitudes = true;
  /// Cutoff used while searching; certification always runs on the full
  /// lattice.
  int search_cutoff = 0;
  QuadratureSpec quadrature;
  std::vector<double> certification_times = certification_grid();
  int constant_samples = 24;
  std::uint64_t constant_seed = 20240601;
  /// Cutoff of the lattice used for constant sampling (0: min(K, 8)).
  int constant_cutoff = 0;
  int max_doublings = 60;
  std::optional<double> lambda_override;
  double classification_tol = 1e-3;
};

struct StabilizationPlan {
  std::array<double, 3> amplitudes{0.0, 0.0, 0.0};
  int p = 1;
  double beta_hat = 0.0;
  double c_hat = 0.0;
  double c1_hat = 0.0;
  double phi_constant = 0.0;
  double t0 = 0.0;
  double a_t0 = 0.0;
  double lambda01 = 0.0;
  double lambda02 = 0.0;
  /// 1.1 max(lambda01, lambda02, 7 ||y0||_0).
  double lambda_analytic = 0.0;
  double lambda = 0.0;
  int doublings = 0;
  double horizon = 0.0;
  double root = 0.0;
  double r0 = 0.0;
  double u_inf = 0.0;
  double y0_norm0 = 0.0;
  double y0_half = 0.0;
  bool trivial = false;  // datum already decays; lambda = 0
  std::string lambda_source;
  std::vector<std::array<double, 3>> amplitudes_tried;
};

struct SynthesisResult {
  StabilizationPlan plan;
  SpectralField u;
  SpectralField v;
  ControlField control;
  DecayCertificate decay;
  PsiBoundCertificate bound;
  ConstantEstimate c_hat;
  ConstantEstimate c1_hat;
  ConstantEstimate phi_constant;
};

/// Builds and certifies u (searching amplitudes if allowed), estimates
/// the constants, derives t0, A, lambda01, lambda02, T, r0 and raises
/// lambda from 1.1 * 7 ||y0||_0 by doubling until verify_psi_bound passes.
SynthesisResult synthesize(const SpectralField& y0, const Lattice& lattice,
                           const SynthesisOptions& options);

/// Builds u and certifies it, trying the configured amplitudes first and
/// then (if allowed) the search sequence. Throws Error(kCertification) when
/// nothing passes.
struct CertifiedControl {
  ControlField control;
  DecayCertificate decay;
  std::array<double, 3> amplitudes{0.0, 0.0, 0.0};
  std::vector<std::array<double, 3>> tried;
};

CertifiedControl certified_control(const ControlParams& params, const Lattice& lattice,
                                   const std::vector<double>& t_grid, bool search,
                                   int search_cutoff = 0);

/// Amplitude candidates after the configured triple: the remaining sign
/// patterns of (1,1,1), then {-2..2}^3 by L1 norm and lexicographic order.
std::vector<std::array<double, 3>> amplitude_candidates(const std::array<double, 3>& first);

}  // namespace npe
