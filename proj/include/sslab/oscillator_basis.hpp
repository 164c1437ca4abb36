#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sslab {

/// Oscillator level n >= 0 with transverse energy n + 1/2.
struct BasisIndex {
  std::size_t n = 0;

  constexpr double energy() const noexcept { return static_cast<double>(n) + 0.5; }
  friend constexpr bool operator==(BasisIndex, BasisIndex) = default;
};

/// psi_0(y) .. psi_N(y) of the normalized oscillator eigenfunctions at one point.
struct HermitePoint {
  double y = 0.0;
  std::vector<double> values;
};

/// Fills `out` (size N+1) with psi_0(y)..psi_N(y).
///
/// Uses the normalized three-term recurrence
///   psi_{n+1} = (sqrt(2) y psi_n - sqrt(n) psi_{n-1}) / sqrt(n+1)
/// carried with a separate binary exponent, so the Gaussian factor never
/// underflows ahead of the polynomial growth (|y| <= 40, N <= 1e4 stay exact
/// to rounding). Throws StabilityError naming the first non-finite level.
void eval_basis(double y, std::span<double> out);

std::vector<double> eval_basis(double y, std::size_t N);

HermitePoint hermite_point(double y, std::size_t N);

/// (psi_m, y psi_n) = (sqrt(n+1) delta_{m,n+1} + sqrt(n) delta_{m,n-1}) / sqrt(2).
double position_element(BasisIndex m, BasisIndex n) noexcept;

}  // namespace sslab
