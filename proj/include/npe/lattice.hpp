#pragma once

#include <array>
#include <cstddef>
#include <string>

namespace npe {

/// Grid used for pointwise products inside triple-product quadratures.
/// Both rules are exact for band-limited factors; kMinimalGrid picks the
/// smallest 2,3,5-smooth size >= 3K+1 and is cheaper when N is generous.
enum class ProductRule { kLatticeGrid, kMinimalGrid };

const char* to_string(ProductRule rule);
ProductRule product_rule_from_string(const std::string& name);

/// Discretization of the 3-torus: N samples per axis on [0, 2pi)^3 and a
/// cube of retained wavevectors max|k_i| <= K.
class Lattice {
 public:
  Lattice(int modes_per_axis, int cutoff,
          ProductRule rule = ProductRule::kMinimalGrid);

  int n() const noexcept { return n_; }
  int k() const noexcept { return k_; }
  ProductRule product_rule() const noexcept { return rule_; }

  /// Edge length of the retained wavevector cube, 2K+1.
  int side() const noexcept { return 2 * k_ + 1; }
  std::size_t mode_count() const noexcept {
    return static_cast<std::size_t>(side()) * side() * side();
  }
  std::size_t grid_points() const noexcept {
    return static_cast<std::size_t>(n_) * n_ * n_;
  }

  /// Lexicographic position of wavevector (k1,k2,k3), each in [-K, K].
  std::size_t index(int k1, int k2, int k3) const noexcept {
    const int s = side();
    return (static_cast<std::size_t>(k1 + k_) * s + (k2 + k_)) * s + (k3 + k_);
  }
  std::array<int, 3> wavevector(std::size_t index) const noexcept;

  /// Grid size used for products of band-limited fields.
  int product_grid() const noexcept;

  /// Same lattice with a different cutoff/grid, keeping the product rule.
  Lattice with(int modes_per_axis, int cutoff) const {
    return Lattice(modes_per_axis, cutoff, rule_);
  }

  friend bool operator==(const Lattice& a, const Lattice& b) noexcept {
    return a.n_ == b.n_ && a.k_ == b.k_;
  }

 private:
  int n_;
  int k_;
  ProductRule rule_;
};

/// Smallest integer >= lower whose only prime factors are 2, 3 and 5.
int smooth_size_at_least(int lower);

/// Smallest even N >= 3K+1, the minimal admissible lattice for cutoff K.
int minimal_modes_per_axis(int cutoff);

}  // namespace npe
