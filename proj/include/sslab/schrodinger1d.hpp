#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace sslab {

enum class Boundary { Dirichlet, Neumann };

const char* to_string(Boundary b) noexcept;

/// -u'' + V(t) u on [-half_width, half_width]. For whole-line problems the
/// box is a truncation of R with Dirichlet ends.
struct Problem1D {
  std::function<double(double)> potential;
  double half_width = 1.0;
  bool whole_line = false;
  Boundary boundary = Boundary::Dirichlet;
  double h = 0.01;  // coarsest grid step; refined twice for extrapolation
};

struct Eigen1D {
  std::vector<double> values;
  std::vector<double> errors;  // |R(h/2,h/4) - R(h,h/2)| per value
  bool extrapolated = true;
  std::string warning;
};

/// Central differences on h, h/2, h/4 (vertex grid for Dirichlet,
/// cell-centred grid with mirrored ghosts for Neumann), Richardson
/// extrapolated with order 2. When the observed order leaves [1.5, 2.5] the
/// raw finest values are returned with a warning.
Eigen1D eigenvalues_1d(const Problem1D& problem, std::size_t count);

/// Lowest eigenvalues of the discretization at a single grid step.
std::vector<double> raw_eigenvalues_1d(const Problem1D& problem, double h, std::size_t count);

/// Box half-width for -u'' + |t|^p u from the WKB tail exp(-2/(p+2) t^((p+2)/2)):
/// the tail exponent at the box edge is `decay_exponent`.
double anharmonic_box(double p, double decay_exponent = 30.0);

struct GammaValue {
  double p = 0.0;
  double gamma = 0.0;
  double error = 0.0;
};

/// Ground state gamma_p of -u'' + |t|^p u on R, with the grid refined until
/// the extrapolation error estimate is below tol.
GammaValue gamma_p(double p, double tol = 1e-8);

/// Golden-section minimum of gamma_p on [p_lo, p_hi].
GammaValue gamma_minimum(double p_lo, double p_hi, double p_tol = 1e-4);

/// Ground state of the Neumann operator -u'' + |t|^p u on [-k, k].
double neumann_cut_ground(double p, double k, double tol = 1e-8);

enum class Regime { Subcritical, Critical, Supercritical };

const char* to_string(Regime r) noexcept;

/// Nonnegative, compactly supported channel profile V with supp V in [-a, a].
struct ComparisonPotential {
  std::function<double(double)> profile;
  double support = 1.0;
};

/// Indicator of [-a, a] with linear ramps of half-width `ramp` centred on
/// +-a (bounded derivative, integral 2a preserved).
ComparisonPotential mollified_well(double a = 1.0, double ramp = 0.01);

/// Samples the profile; throws DomainError if it is negative, nonzero
/// outside [-a, a], or its difference quotients blow up under refinement.
void validate_comparison(const ComparisonPotential& V);

struct Classification {
  double lambda_crit = 0.0;
  double inf_sigma = 0.0;  // inf sigma(L) at the requested lambda
  Regime regime = Regime::Subcritical;
};

/// inf sigma(L) for L = -d^2/dx^2 + omega^2 - lambda V on R.
double comparison_threshold(const ComparisonPotential& V, double omega, double lambda);

/// Sign of inf sigma(L); lambda_crit by bisection on that sign.
Classification classify_comparison(const ComparisonPotential& V, double omega, double lambda,
                                   double tol = 1e-7);

}  // namespace sslab
