#include "npe/spectral_field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "npe/error.hpp"

namespace npe {

SpectralField::SpectralField(const Lattice& lattice)
    : lattice_(lattice), coeffs_(3 * lattice.mode_count(), Complex{}) {}

void SpectralField::set_pair(int k1, int k2, int k3, int component,
                             Complex value) noexcept {
  at(k1, k2, k3, component) = value;
  at(-k1, -k2, -k3, component) = std::conj(value);
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_lattice(*this, other, "field addition");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_lattice(*this, other, "field subtraction");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double scale) noexcept {
  for (auto& c : coeffs_) c *= scale;
  return *this;
}

SpectralField SpectralField::combine(double a, const SpectralField& x, double b,
                                     const SpectralField& y) {
  require_same_lattice(x, y, "field combination");
  SpectralField out(x.lattice());
  for (std::size_t i = 0; i < out.coeffs_.size(); ++i) {
    out.coeffs_[i] = a * x.coeffs_[i] + b * y.coeffs_[i];
  }
  return out;
}

double SpectralField::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::norm(c));
  return std::sqrt(m);
}

bool SpectralField::is_zero() const noexcept {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](const Complex& c) { return c == Complex{}; });
}

double SpectralField::hermitian_defect() const noexcept {
  // Lexicographic order maps -k to the mirrored position.
  const std::size_t modes = lattice_.mode_count();
  double worst = 0.0;
  for (std::size_t m = 0; m < modes; ++m) {
    const std::size_t mirror = modes - 1 - m;
    for (int c = 0; c < 3; ++c) {
      worst = std::max(worst, std::norm(coeffs_[3 * mirror + c] - std::conj(coeffs_[3 * m + c])));
    }
  }
  if (worst == 0.0) return 0.0;
  return std::sqrt(worst) / max_abs();
}

// Measured against the largest coefficient so that cancellation in sums of
// fields does not inflate the defect of near-empty modes.
double SpectralField::divergence_defect() const noexcept {
  const int kc = lattice_.k();
  double worst = 0.0;
  std::size_t m = 0;
  for (int k1 = -kc; k1 <= kc; ++k1)
    for (int k2 = -kc; k2 <= kc; ++k2)
      for (int k3 = -kc; k3 <= kc; ++k3, ++m) {
        const int kk = k1 * k1 + k2 * k2 + k3 * k3;
        if (kk == 0) continue;
        const Complex dot = double(k1) * coeffs_[3 * m] + double(k2) * coeffs_[3 * m + 1] +
                            double(k3) * coeffs_[3 * m + 2];
        worst = std::max(worst, std::norm(dot) / kk);
      }
  if (worst == 0.0) return 0.0;
  return std::sqrt(worst) / max_abs();
}

double SpectralField::mean_magnitude() const noexcept {
  return std::abs(at(0, 0, 0, 0)) + std::abs(at(0, 0, 0, 1)) + std::abs(at(0, 0, 0, 2));
}

void SpectralField::require_hermitian(const char* context) const {
  const double defect = hermitian_defect();
  if (defect > kHermitianTolerance) {
    throw Error(ErrorCode::kInvariant, std::string(context) +
                                           ": coefficients violate Hermitian symmetry (defect " +
                                           std::to_string(defect) + ")");
  }
}

void SpectralField::require_valid(const char* context) const {
  require_hermitian(context);
  const double mean = mean_magnitude();
  if (mean > 0.0 && mean > kHermitianTolerance * std::max(1.0, max_abs())) {
    throw Error(ErrorCode::kInvariant, std::string(context) + ": field has a nonzero mean mode");
  }
  const double div = divergence_defect();
  if (div > kDivergenceTolerance) {
    throw Error(ErrorCode::kInvariant, std::string(context) +
                                           ": field is not divergence-free (defect " +
                                           std::to_string(div) + ")");
  }
}

SpectralField SpectralField::resampled(const Lattice& target) const {
  SpectralField out(target);
  const int kc = std::min(target.k(), lattice_.k());
  for (int k1 = -kc; k1 <= kc; ++k1)
    for (int k2 = -kc; k2 <= kc; ++k2)
      for (int k3 = -kc; k3 <= kc; ++k3)
        for (int c = 0; c < 3; ++c) out.at(k1, k2, k3, c) = at(k1, k2, k3, c);
  return out;
}

void require_same_lattice(const SpectralField& a, const SpectralField& b,
                          const char* context) {
  if (!(a.lattice() == b.lattice())) {
    throw Error(ErrorCode::kConfiguration,
                std::string(context) + ": lattice mismatch (N=" + std::to_string(a.lattice().n()) +
                    ",K=" + std::to_string(a.lattice().k()) + " vs N=" +
                    std::to_string(b.lattice().n()) + ",K=" + std::to_string(b.lattice().k()) + ")");
  }
}

PhysicalField::PhysicalField(const Lattice& lat)
    : lattice(lat), samples(3 * lat.grid_points(), 0.0) {}

double PhysicalField::max_abs() const noexcept {
  double m = 0.0;
  for (double v : samples) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace npe
