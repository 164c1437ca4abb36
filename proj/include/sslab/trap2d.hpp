#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "sslab/field.hpp"
#include "sslab/schrodinger1d.hpp"

namespace sslab {

/// V(x, y) = |xy|^p - lambda (x^2 + y^2)^(p/(p+2)), p >= 1, lambda >= 0.
struct TrapPotential {
  double p = 2.0;
  double lambda = 0.0;

  TrapPotential() = default;
  TrapPotential(double p, double lambda);

  double operator()(double x, double y) const noexcept;
};

/// The square lattice h Z^2 clipped to the open disc of radius R.
struct DiscProblem {
  TrapPotential potential;
  double R = 10.0;
  double h = 0.1;
  Boundary boundary = Boundary::Dirichlet;

  /// Throws DomainError unless R > 0 and h <= R/50.
  void validate() const;
};

struct EigensolverOptions {
  double shift = -1.0;           // lower end of the search window
  std::size_t block = 4;         // Krylov block width (>= largest multiplicity)
  std::size_t max_dimension = 240;
  double residual_tol = 1e-9;    // ||A x - theta x||
};

struct DiscSpectrum {
  std::vector<double> values;
  std::vector<double> residuals;
  std::vector<std::vector<double>> vectors;  // unit l2 norm over the unknowns
  std::size_t unknowns = 0;
  double shift = 0.0;  // shift actually factorized (inertia verified zero)
  std::size_t dimension = 0;
};

/// Lowest `count` eigenvalues of the 5-point discretization. Dirichlet drops
/// exterior neighbours; Neumann mirrors them (the node's own value), which
/// makes the Neumann matrix the Dirichlet one minus a nonnegative diagonal.
/// Shift-invert block Krylov with Rayleigh-Ritz on A; the shift is moved
/// down until the LDL^T inertia shows no eigenvalue below it.
DiscSpectrum disc_eigenvalues(const DiscProblem& problem, std::size_t count, const EigensolverOptions& options = {},
                              bool keep_vectors = false);

struct RefinedEigenvalues {
  std::vector<double> coarse;        // step h
  std::vector<double> fine;          // step h/2
  std::vector<double> extrapolated;  // (4 fine - coarse) / 3
  std::vector<double> errors;        // |extrapolated - fine|
};

/// Eigenvalues at h and h/2 with second-order Richardson extrapolation.
RefinedEigenvalues disc_eigenvalues_refined(const DiscProblem& problem, std::size_t count,
                                            const EigensolverOptions& options = {});

struct SqueezeRow {
  double R = 0.0;
  std::vector<double> dirichlet;
  std::vector<double> neumann;
  std::vector<double> dirichlet_error;  // zero unless refined
  std::vector<double> neumann_error;
};

struct SqueezeReport {
  TrapPotential potential;
  double h = 0.0;
  bool refined = false;
  std::vector<SqueezeRow> rows;
  double estimate = 0.0;  // midpoint of the lowest D/N pair at the largest R
  double gap = 0.0;       // D - N there
  double R_star = 0.0;    // gap non-increasing for R >= R_star
  bool bracket_ok = true;         // N <= D on every row
  bool dirichlet_monotone = true; // D non-increasing in R
  std::vector<std::string> warnings;
};

SqueezeReport squeeze_scan(const TrapPotential& potential, const std::vector<double>& R_grid, double h,
                           std::size_t count = 2, bool refine = false, const EigensolverOptions& options = {},
                           unsigned jobs = 1);

struct GroundStateField {
  Field2D field;  // normalized, sum u^2 h^2 = 1, positive maximum
  double eigenvalue = 0.0;
  double level = 0.0;  // contour value = level fraction * max|field|
  /// Marching-squares segments {x0, y0, x1, y1} of the contour.
  std::vector<std::array<double, 4>> contour;
  bool degenerate = false;
};

GroundStateField ground_state_field(const DiscProblem& problem, double level = 1e-3,
                                    const EigensolverOptions& options = {});

/// Marching squares on a Field2D at an absolute value.
std::vector<std::array<double, 4>> contour_segments(const Field2D& field, double value);

}  // namespace sslab
