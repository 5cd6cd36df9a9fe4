#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "npe/lattice.hpp"

namespace npe {

using Complex = std::complex<double>;

/// Relative tolerance for |k . F(k)| <= eps |F(k)| on divergence-free fields.
inline constexpr double kDivergenceTolerance = 1e-10;
/// Relative tolerance for coeff(-k) = conj(coeff(k)).
inline constexpr double kHermitianTolerance = 1e-12;

/// Truncated Fourier representation of a real vector field on the 3-torus:
///   f(x) = sum_{|k_i| <= K} F(k) exp(i k.x),  F(k) in C^3.
/// Coefficients are stored mode-major in lexicographic k order with the
/// three components contiguous.
class SpectralField {
 public:
  explicit SpectralField(const Lattice& lattice);

  const Lattice& lattice() const noexcept { return lattice_; }

  Complex& at(int k1, int k2, int k3, int component) noexcept {
    return coeffs_[3 * lattice_.index(k1, k2, k3) + component];
  }
  const Complex& at(int k1, int k2, int k3, int component) const noexcept {
    return coeffs_[3 * lattice_.index(k1, k2, k3) + component];
  }

  /// Sets F(k) and F(-k) = conj(F(k)) together.
  void set_pair(int k1, int k2, int k3, int component, Complex value) noexcept;

  std::span<Complex> data() noexcept { return coeffs_; }
  std::span<const Complex> data() const noexcept { return coeffs_; }

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double scale) noexcept;

  friend SpectralField operator+(SpectralField a, const SpectralField& b) {
    return a += b;
  }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) {
    return a -= b;
  }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }
  friend SpectralField operator*(SpectralField a, double s) { return a *= s; }
  friend SpectralField operator-(SpectralField a) { return a *= -1.0; }

  /// a*x + b*y computed in one pass.
  static SpectralField combine(double a, const SpectralField& x, double b,
                               const SpectralField& y);

  double max_abs() const noexcept;
  bool is_zero() const noexcept;

  /// max_k |F(-k) - conj F(k)| / max_k |F(k)| (0 for the zero field).
  double hermitian_defect() const noexcept;
  /// max_k |k . F(k)| / (|k| |F(k)|) over modes with F(k) != 0.
  double divergence_defect() const noexcept;
  double mean_magnitude() const noexcept;

  /// Throws Error(kInvariant) unless the field is Hermitian, mean-free and
  /// divergence-free within tolerance.
  void require_valid(const char* context) const;
  void require_hermitian(const char* context) const;

  /// Same field on another lattice: shared modes copied, others zero.
  SpectralField resampled(const Lattice& target) const;

 private:
  Lattice lattice_;
  std::vector<Complex> coeffs_;
};

void require_same_lattice(const SpectralField& a, const SpectralField& b,
                          const char* context);

/// Samples of a real vector field on the uniform N^3 grid over [0, 2pi)^3,
/// stored component-major, each component in row-major (x1, x2, x3) order.
struct PhysicalField {
  explicit PhysicalField(const Lattice& lattice);

  Lattice lattice;
  std::vector<double> samples;
  /// Largest imaginary part discarded by the inverse transform.
  double imaginary_residue = 0.0;

  std::span<double> component(int c) noexcept {
    const auto n = lattice.grid_points();
    return {samples.data() + c * n, n};
  }
  std::span<const double> component(int c) const noexcept {
    const auto n = lattice.grid_points();
    return {samples.data() + c * n, n};
  }
  std::size_t offset(int i1, int i2, int i3) const noexcept {
    const auto n = static_cast<std::size_t>(lattice.n());
    return (static_cast<std::size_t>(i1) * n + i2) * n + i3;
  }
  double max_abs() const noexcept;
};

}  // namespace npe
