#pragma once

#include <cstddef>
#include <vector>

namespace sslab {

/// Sampled real field on a uniform grid; values are row-major with y as the
/// slow index.
struct Field2D {
  double x_min = 0.0, x_max = 0.0;
  double y_min = 0.0, y_max = 0.0;
  std::size_t nx = 0, ny = 0;
  std::vector<double> values;
  /// Set when the grid step cannot resolve the fastest retained mode.
  bool under_resolved = false;

  double hx() const noexcept { return nx > 1 ? (x_max - x_min) / static_cast<double>(nx - 1) : 0.0; }
  double hy() const noexcept { return ny > 1 ? (y_max - y_min) / static_cast<double>(ny - 1) : 0.0; }
  // Affine blend of the ends: on a symmetric range mirrored nodes are exact negatives.
  double x(std::size_t ix) const noexcept { return node(x_min, x_max, nx, ix); }
  double y(std::size_t iy) const noexcept { return node(y_min, y_max, ny, iy); }
  double& at(std::size_t ix, std::size_t iy) { return values[iy * nx + ix]; }
  double at(std::size_t ix, std::size_t iy) const { return values[iy * nx + ix]; }

  static double node(double lo, double hi, std::size_t n, std::size_t i) noexcept {
    if (n < 2) return lo;
    const auto last = static_cast<double>(n - 1), k = static_cast<double>(i);
    return (lo * (last - k) + hi * k) / last;
  }
};

}  // namespace sslab
