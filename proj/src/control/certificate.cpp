#include <algorithm>
#include <cmath>
#include <limits>

#include "npe/control.hpp"
#include "npe/error.hpp"
#include "npe/functionals.hpp"
#include "npe/parallel.hpp"
#include "npe/spectral.hpp"

namespace npe {

namespace {

// Relative size below which a computed Psi is indistinguishable from
// roundoff in the quadrature sum.
constexpr double kNoiseFloor = 1e-10;

}  // namespace

std::vector<double> certification_grid(int points, double t_min, double t_max) {
  if (points < 2 || !(t_min > 0.0) || !(t_max > t_min)) {
    throw Error(ErrorCode::kConfiguration, "certification grid: need >= 2 points on 0 < t_min < t_max");
  }
  std::vector<double> grid{0.0};
  const double ratio = std::log(t_max / t_min) / (points - 1);
  for (int i = 0; i < points; ++i) grid.push_back(t_min * std::exp(ratio * i));
  grid.back() = t_max;
  return grid;
}

DecayCertificate certify_decay(const SpectralField& u, const std::vector<double>& t_grid) {
  if (t_grid.empty()) throw Error(ErrorCode::kConfiguration, "certify_decay: empty time grid");
  DecayCertificate cert;
  cert.min_ratio = std::numeric_limits<double>::infinity();
  cert.rows.resize(t_grid.size());
  parallel_for(t_grid.size(), [&](std::size_t i) {
    const double t = t_grid[i];
    const PsiValue v = psi_detailed(heat_propagate(u, t));
    cert.rows[i] = DecayRow{t, v.value, v.magnitude, v.value * std::exp(18.0 * t)};
  });
  for (std::size_t i = 0; i < cert.rows.size(); ++i) {
    const DecayRow& row = cert.rows[i];
    const bool positive = row.psi > kNoiseFloor * row.magnitude && row.psi > 0.0;
    if (!positive && !cert.first_failure) cert.first_failure = i;
    if (row.ratio < cert.min_ratio) {
      cert.min_ratio = row.ratio;
      cert.argmin_time = row.t;
    }
  }
  cert.passed = !cert.first_failure;
  cert.beta_hat = cert.min_ratio / 3.0;
  return cert;
}

PsiBoundCertificate verify_psi_bound(const SpectralField& y0, double lambda,
                                     const SpectralField& u, const std::vector<double>& t_grid,
                                     double beta_hat) {
  require_same_lattice(y0, u, "verify_psi_bound");
  PsiBoundCertificate cert;
  cert.precondition_met = lambda > 7.0 * l2_norm(y0);
  cert.worst_margin = std::numeric_limits<double>::infinity();
  const SpectralField v = SpectralField::combine(1.0, y0, -lambda, u);
  cert.rows.resize(t_grid.size());
  parallel_for(t_grid.size(), [&](std::size_t i) {
    const double t = t_grid[i];
    const SpectralField s = heat_propagate(v, t);
    const double neg_psi = -psi(s);
    const double norm = l2_norm(s);
    PsiBoundRow& row = cert.rows[i];
    row.t = t;
    row.neg_psi = neg_psi;
    row.threshold = 2.0 * beta_hat * lambda * lambda * lambda * std::exp(-18.0 * t);
    row.normalized = norm > 0.0 ? neg_psi / (norm * norm * norm) : 0.0;
    row.normalized_threshold = beta_hat * std::exp(-15.0 * t);
    const double m1 = row.threshold > 0.0 ? neg_psi / row.threshold - 1.0 : -1.0;
    const double m2 = row.normalized_threshold > 0.0 ? row.normalized / row.normalized_threshold - 1.0 : -1.0;
    row.margin = std::min(m1, m2);
  });
  for (const auto& row : cert.rows) {
    if (row.margin < cert.worst_margin) {
      cert.worst_margin = row.margin;
      cert.worst_time = row.t;
    }
  }
  cert.passed = cert.worst_margin > 0.0;
  return cert;
}

}  // namespace npe
