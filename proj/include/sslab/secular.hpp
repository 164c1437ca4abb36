#pragma once

#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "sslab/tridiagonal.hpp"

namespace sslab {

enum class VariantKind { Delta, DeltaPrime };

/// Critical couplings of the two interaction types.
inline constexpr double kDeltaCritical = std::numbers::sqrt2;
inline constexpr double kDeltaPrimeCritical = 2.0 * std::numbers::sqrt2;

/// Edge offset below the threshold 1/2 at which spectra are cut off.
inline constexpr double kEdgeOffset = 1e-8;

/// Coupling of the y-scaled point interaction: lambda >= 0 for the delta
/// interaction, beta > 0 for the delta-prime one (small beta = strong coupling).
struct CouplingVariant {
  VariantKind kind = VariantKind::Delta;
  double coupling = 0.0;

  static CouplingVariant delta(double lambda);
  static CouplingVariant delta_prime(double beta);

  double critical() const noexcept {
    return kind == VariantKind::Delta ? kDeltaCritical : kDeltaPrimeCritical;
  }
  /// True when the coupling lies strictly inside the subcritical regime.
  bool subcritical() const noexcept;
};

const char* to_string(VariantKind kind) noexcept;

/// Truncated secular family eps -> B(eps) of size (N+1) x (N+1).
///
/// delta:       B = diag(kappa_n) + (lambda/2) Y
/// delta-prime: B = beta diag(kappa_n) + 2 Y
/// with kappa_n = sqrt(n + 1/2 - eps) and Y the oscillator position matrix.
class SecularSystem {
 public:
  SecularSystem(CouplingVariant variant, std::size_t N);

  const CouplingVariant& variant() const noexcept { return variant_; }
  std::size_t truncation() const noexcept { return N_; }

  /// Matrix at energy eps < 1/2. Throws DomainError otherwise.
  SymTridiagonal at_energy(double eps) const;

  /// Matrix parametrized by the binding mu = 1/2 - eps > 0, which keeps
  /// full relative precision for weakly bound states.
  SymTridiagonal at_binding(double mu) const;

  /// Number of negative eigenvalues of B at binding mu.
  std::size_t inertia(double mu) const;

 private:
  CouplingVariant variant_;
  std::size_t N_;
  std::vector<double> off_;
};

SymTridiagonal build_secular(const CouplingVariant& variant, double eps, std::size_t N);

double smallest_eigenvalue(const CouplingVariant& variant, double eps, std::size_t N);

struct SpectralScan {
  CouplingVariant variant;
  std::size_t N = 0;
  /// Eigenvalues in (0, 1/2), ascending.
  std::vector<double> eigenvalues;
  /// Parallel to `eigenvalues`: root within tol of the threshold 1/2 and
  /// therefore sensitive to truncation.
  std::vector<bool> near_threshold;
  /// max |eps_j(N) - eps_j(N/2)|; +inf when the counts differ.
  double convergence_gap = 0.0;
};

/// All roots of det B(eps) = 0 in (0, 1/2 - kEdgeOffset), isolated by
/// inertia counting and refined by bisection to |d eps| <= tol.
SpectralScan find_spectrum(const CouplingVariant& variant, std::size_t N, double tol);

/// Doubles N from `N_start` until the convergence gap drops below `gap_tol`.
/// Throws ConvergenceError when `N_max` is reached first.
SpectralScan find_spectrum_adaptive(const CouplingVariant& variant, double tol, double gap_tol,
                                    std::size_t N_start = 500, std::size_t N_max = std::size_t{1} << 20);

/// inertia(B(1/2 - kEdgeOffset)) - inertia(B(0)).
std::size_t count_eigenvalues(const CouplingVariant& variant, std::size_t N);

/// Smallest coupling strength at which at least j eigenvalues exist:
/// lambda in (0, sqrt 2) for delta, beta in (2 sqrt 2, inf) approached
/// from above for delta-prime. Throws ThresholdNotFound.
double coupling_threshold(VariantKind kind, std::size_t j, std::size_t N, double tol);

struct PowerLawFit {
  double exponent = 0.0;
  double coefficient = 0.0;
};

/// Least-squares line through (log x, log y).
PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y);

/// Ground-state binding 1/2 - E_1 converged in N to relative accuracy
/// `rel_tol`. Throws ConvergenceError if it cannot be converged.
struct GroundBinding {
  double binding = 0.0;
  std::size_t N = 0;
};
GroundBinding converged_ground_binding(const CouplingVariant& variant, double rel_tol = 1e-9,
                                       std::size_t N_start = 500,
                                       std::size_t N_max = std::size_t{1} << 18);

/// Fits 1/2 - E_1 = coefficient * coupling^exponent over `couplings`.
PowerLawFit weak_coupling_fit(VariantKind kind, std::span<const double> couplings);

/// Large-count asymptotics 1 / (4 sqrt(2 (mu - 1))) with mu = sqrt2/lambda
/// (delta) or beta/(2 sqrt2) (delta-prime). Returns +inf once mu - 1 falls
/// below kCountCutoff; throws DomainError for supercritical couplings.
inline constexpr double kCountCutoff = 1e-12;
double asymptotic_count(VariantKind kind, double coupling);

/// Inverse of asymptotic_count.
double coupling_for_count(VariantKind kind, double count);

}  // namespace sslab
