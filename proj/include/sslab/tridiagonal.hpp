#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace sslab {

/// Real symmetric tridiagonal matrix stored by its diagonal and first
/// off-diagonal (off.size() == diag.size() - 1).
struct SymTridiagonal {
  std::vector<double> diag;
  std::vector<double> off;

  std::size_t size() const noexcept { return diag.size(); }
};

/// Gershgorin enclosure [lo, hi] of the spectrum.
std::pair<double, double> gershgorin_bounds(const SymTridiagonal& m);

/// Number of eigenvalues strictly below `shift`, from the signs of the
/// LDL^T pivots of (m - shift) (Sylvester inertia).
std::size_t count_below(const SymTridiagonal& m, double shift);

/// k-th smallest eigenvalue (k = 0 is the minimum) by Sturm bisection.
double kth_eigenvalue(const SymTridiagonal& m, std::size_t k, double abs_tol = 0.0);

/// The `count` smallest eigenvalues, ascending.
std::vector<double> lowest_eigenvalues(const SymTridiagonal& m, std::size_t count,
                                       double abs_tol = 0.0);

/// Unit eigenvector for an eigenvalue approximation `shift` by inverse
/// iteration. The sign is fixed so that the largest component is positive.
std::vector<double> eigenvector(const SymTridiagonal& m, double shift, int iterations = 3);

/// Solves a general tridiagonal system with partial pivoting (LAPACK gtsv
/// scheme). `sub` and `super` have size n-1. Throws DomainError on an
/// exactly singular pivot.
template <class T>
std::vector<T> solve_tridiagonal(std::span<const T> sub, std::span<const T> diag,
                                 std::span<const T> super, std::span<const T> rhs);

extern template std::vector<double> solve_tridiagonal<double>(std::span<const double>,
                                                              std::span<const double>,
                                                              std::span<const double>,
                                                              std::span<const double>);
extern template std::vector<std::complex<double>> solve_tridiagonal<std::complex<double>>(
    std::span<const std::complex<double>>, std::span<const std::complex<double>>,
    std::span<const std::complex<double>>, std::span<const std::complex<double>>);

}  // namespace sslab
