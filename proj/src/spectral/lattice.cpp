#include "npe/lattice.hpp"

#include "npe/error.hpp"

namespace npe {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfiguration: return "configuration";
    case ErrorCode::kInvariant: return "invariant";
    case ErrorCode::kCertification: return "certification";
    case ErrorCode::kBlowUp: return "blow-up";
    case ErrorCode::kQuadrature: return "quadrature";
    case ErrorCode::kEnvelope: return "envelope";
    case ErrorCode::kDomain: return "domain";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

const char* to_string(ProductRule rule) {
  return rule == ProductRule::kLatticeGrid ? "lattice" : "minimal";
}

ProductRule product_rule_from_string(const std::string& name) {
  if (name == "lattice") return ProductRule::kLatticeGrid;
  if (name == "minimal") return ProductRule::kMinimalGrid;
  throw Error(ErrorCode::kConfiguration, "unknown product rule '" + name + "'");
}

Lattice::Lattice(int modes_per_axis, int cutoff, ProductRule rule)
    : n_(modes_per_axis), k_(cutoff), rule_(rule) {
  if (k_ < 1) {
    throw Error(ErrorCode::kConfiguration,
                "lattice cutoff K must be >= 1, got " + std::to_string(k_));
  }
  if (n_ <= 0 || n_ % 2 != 0) {
    throw Error(ErrorCode::kConfiguration,
                "modes per axis N must be a positive even integer, got " +
                    std::to_string(n_));
  }
  if (n_ < 3 * k_ + 1) {
    throw Error(ErrorCode::kConfiguration,
                "N = " + std::to_string(n_) + " violates N >= 3K+1 for K = " +
                    std::to_string(k_));
  }
}

std::array<int, 3> Lattice::wavevector(std::size_t index) const noexcept {
  const auto s = static_cast<std::size_t>(side());
  const int k3 = static_cast<int>(index % s) - k_;
  index /= s;
  const int k2 = static_cast<int>(index % s) - k_;
  const int k1 = static_cast<int>(index / s) - k_;
  return {k1, k2, k3};
}

int Lattice::product_grid() const noexcept {
  if (rule_ == ProductRule::kLatticeGrid) return n_;
  const int m = smooth_size_at_least(3 * k_ + 1);
  return m < n_ ? m : n_;
}

int smooth_size_at_least(int lower) {
  for (int m = lower < 1 ? 1 : lower;; ++m) {
    int r = m;
    for (int f : {2, 3, 5}) {
      while (r % f == 0) r /= f;
    }
    if (r == 1) return m;
  }
}

int minimal_modes_per_axis(int cutoff) {
  const int n = 3 * cutoff + 1;
  return n % 2 == 0 ? n : n + 1;
}

}  // namespace npe
