#include <cmath>
#include <string>

#include "npe/error.hpp"
#include "npe/spectral.hpp"

namespace npe {

namespace {

template <class Fn>
void for_each_mode(const Lattice& lat, Fn&& fn) {
  const int kc = lat.k();
  std::size_t m = 0;
  for (int k1 = -kc; k1 <= kc; ++k1)
    for (int k2 = -kc; k2 <= kc; ++k2)
      for (int k3 = -kc; k3 <= kc; ++k3, ++m) fn(m, k1, k2, k3);
}

}  // namespace

SpectralField curl(const SpectralField& field) {
  SpectralField out(field.lattice());
  const auto in = field.data();
  auto dst = out.data();
  const Complex i{0.0, 1.0};
  for_each_mode(field.lattice(), [&](std::size_t m, int k1, int k2, int k3) {
    const Complex a1 = in[3 * m], a2 = in[3 * m + 1], a3 = in[3 * m + 2];
    dst[3 * m] = i * (double(k2) * a3 - double(k3) * a2);
    dst[3 * m + 1] = i * (double(k3) * a1 - double(k1) * a3);
    dst[3 * m + 2] = i * (double(k1) * a2 - double(k2) * a1);
  });
  return out;
}

SpectralField curl_inv(const SpectralField& field) {
  const double mean = field.mean_magnitude();
  if (mean > 0.0 && mean > kHermitianTolerance * std::max(1.0, field.max_abs())) {
    throw Error(ErrorCode::kInvariant, "curl_inv: field has a nonzero mean mode");
  }
  SpectralField out(field.lattice());
  const auto in = field.data();
  auto dst = out.data();
  const Complex i{0.0, 1.0};
  for_each_mode(field.lattice(), [&](std::size_t m, int k1, int k2, int k3) {
    const int kk = k1 * k1 + k2 * k2 + k3 * k3;
    if (kk == 0) return;
    const Complex s = i / double(kk);
    const Complex a1 = in[3 * m], a2 = in[3 * m + 1], a3 = in[3 * m + 2];
    dst[3 * m] = s * (double(k2) * a3 - double(k3) * a2);
    dst[3 * m + 1] = s * (double(k3) * a1 - double(k1) * a3);
    dst[3 * m + 2] = s * (double(k1) * a2 - double(k2) * a1);
  });
  return out;
}

SpectralField leray_project(const SpectralField& field) {
  SpectralField out = field;
  auto dst = out.data();
  for_each_mode(field.lattice(), [&](std::size_t m, int k1, int k2, int k3) {
    const int kk = k1 * k1 + k2 * k2 + k3 * k3;
    if (kk == 0) {
      dst[3 * m] = dst[3 * m + 1] = dst[3 * m + 2] = 0.0;
      return;
    }
    const Complex dot = double(k1) * dst[3 * m] + double(k2) * dst[3 * m + 1] +
                        double(k3) * dst[3 * m + 2];
    const Complex s = dot / double(kk);
    dst[3 * m] -= double(k1) * s;
    dst[3 * m + 1] -= double(k2) * s;
    dst[3 * m + 2] -= double(k3) * s;
  });
  return out;
}

double sobolev_norm(const SpectralField& field, double s) {
  if (!(s >= -2.0 && s <= 2.0)) {
    throw Error(ErrorCode::kDomain, "sobolev_norm: order s = " + std::to_string(s) +
                                        " outside supported range [-2, 2]");
  }
  const auto in = field.data();
  double sum = 0.0;
  for_each_mode(field.lattice(), [&](std::size_t m, int k1, int k2, int k3) {
    const int kk = k1 * k1 + k2 * k2 + k3 * k3;
    if (kk == 0) return;
    const double mag = std::norm(in[3 * m]) + std::norm(in[3 * m + 1]) + std::norm(in[3 * m + 2]);
    if (mag == 0.0) return;
    sum += (s == 0.0 ? 1.0 : std::pow(double(kk), s)) * mag;
  });
  return std::sqrt(kTorusVolume * sum);
}

SpectralField heat_propagate(const SpectralField& field, double t) {
  if (!(t >= 0.0)) {
    throw Error(ErrorCode::kDomain, "heat_propagate: negative time " + std::to_string(t));
  }
  SpectralField out = field;
  if (t == 0.0) return out;
  auto dst = out.data();
  for_each_mode(field.lattice(), [&](std::size_t m, int k1, int k2, int k3) {
    const double decay = std::exp(-double(k1 * k1 + k2 * k2 + k3 * k3) * t);
    for (int c = 0; c < 3; ++c) dst[3 * m + c] *= decay;
  });
  return out;
}

double l2_inner(const SpectralField& f, const SpectralField& g) {
  require_same_lattice(f, g, "l2_inner");
  const auto a = f.data();
  const auto b = g.data();
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += (a[i] * std::conj(b[i])).real();
  return kTorusVolume * sum;
}

SpectralField translate(const SpectralField& field, const std::array<double, 3>& shift) {
  SpectralField out = field;
  auto dst = out.data();
  for_each_mode(field.lattice(), [&](std::size_t m, int k1, int k2, int k3) {
    const double phase = -(k1 * shift[0] + k2 * shift[1] + k3 * shift[2]);
    const Complex rot{std::cos(phase), std::sin(phase)};
    for (int c = 0; c < 3; ++c) dst[3 * m + c] *= rot;
  });
  return out;
}

}  // namespace npe
