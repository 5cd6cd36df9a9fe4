#include <cmath>
#include <numbers>
#include <string>

#include "npe/control.hpp"
#include "npe/error.hpp"
#include "npe/spectral.hpp"

namespace npe {

SupportBox SupportBox::full_torus() {
  const double two_pi = 2.0 * std::numbers::pi;
  return {{0.0, 0.0, 0.0}, {two_pi, two_pi, two_pi}};
}

std::array<double, 3> SupportBox::half_widths() const noexcept {
  return {0.5 * (upper[0] - lower[0]), 0.5 * (upper[1] - lower[1]), 0.5 * (upper[2] - lower[2])};
}

std::array<double, 3> SupportBox::center() const noexcept {
  return {0.5 * (upper[0] + lower[0]), 0.5 * (upper[1] + lower[1]), 0.5 * (upper[2] + lower[2])};
}

void SupportBox::validate() const {
  const double two_pi = 2.0 * std::numbers::pi;
  for (int i = 0; i < 3; ++i) {
    const std::string axis = std::to_string(i + 1);
    if (!(lower[i] >= 0.0 && lower[i] < two_pi)) {
      throw Error(ErrorCode::kConfiguration, "support box: a_" + axis + " must lie in [0, 2pi)");
    }
    if (!(upper[i] > lower[i] && upper[i] - lower[i] <= two_pi + 1e-12)) {
      throw Error(ErrorCode::kConfiguration,
                  "support box: need a_" + axis + " < b_" + axis + " <= a_" + axis + " + 2pi");
    }
  }
}

void ControlParams::validate() const {
  box.validate();
  if (p < 1) throw Error(ErrorCode::kConfiguration, "control: p must be a positive integer");
  const auto rho = box.half_widths();
  for (double r : rho) {
    if (std::numbers::pi / p > r * (1.0 + 1e-12)) {
      throw Error(ErrorCode::kConfiguration, "control: pi/p = " + std::to_string(std::numbers::pi / p) +
                                                 " exceeds the box half-width " + std::to_string(r));
    }
  }
}

int choose_p(const SupportBox& box) {
  box.validate();
  const auto rho = box.half_widths();
  const double rho_min = std::min({rho[0], rho[1], rho[2]});
  int p = static_cast<int>(std::ceil(std::numbers::pi / rho_min - 1e-12));
  return p < 1 ? 1 : p;
}

SpectralField translate_support(const SpectralField& field, const SupportBox& box) {
  return translate(field, box.center());
}

}  // namespace npe
