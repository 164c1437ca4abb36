#pragma once

#include <cstddef>
#include <vector>

#include "sslab/field.hpp"
#include "sslab/secular.hpp"

namespace sslab {

/// Null vector c of B(eps), so that
///   f(x, y) = sum_n c_n exp(-kappa_n |x|) psi_n(y)
/// (times sgn x for the delta-prime variant) is an eigenfunction.
struct ModeExpansion {
  CouplingVariant variant;
  double eps = 0.0;
  std::vector<double> coefficients;  // unit l2 norm, c_0 > 0
  double residual = 0.0;             // ||B(eps) c||
};

/// Uniform rectangular grid with nx x ny nodes.
struct GridSpec {
  double x_min = -8.0, x_max = 8.0;
  double y_min = -6.0, y_max = 6.0;
  double step = 0.02;

  std::size_t nx() const;
  std::size_t ny() const;
};

/// Inverse iteration on B(eps). Throws ConsistencyError ("not an
/// eigenvalue") when ||B c|| > 10 tol ||B||.
ModeExpansion null_vector(const CouplingVariant& variant, double eps, std::size_t N, double tol = 1e-10);

/// Evaluates the eigenfunction on the grid; terms with kappa_n |x| > 40 are dropped.
Field2D evaluate_field(const ModeExpansion& mode, const GridSpec& grid);

/// Field at arbitrary points (x_i, y_i).
double evaluate_point(const ModeExpansion& mode, double x, double y);

/// Nodal lines as (number of sign domains) - 1. Domains are 4-connected
/// components of {f > t} and {f < -t} with t = 1e-8 max|f|. Throws DomainError
/// when max|f| < 1e-10.
int nodal_count(const Field2D& field);

/// Number of sign domains (same labelling as nodal_count).
int sign_domains(const Field2D& field);

}  // namespace sslab
