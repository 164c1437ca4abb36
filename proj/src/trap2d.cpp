#include "sslab/trap2d.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include "sslab/errors.hpp"
#include "sslab/parallel.hpp"

namespace sslab {

TrapPotential::TrapPotential(double p_, double lambda_) : p(p_), lambda(lambda_) {
  if (!(p >= 1.0)) throw DomainError("trap potential needs p >= 1");
  if (!(lambda >= 0.0)) throw DomainError("trap potential needs lambda >= 0");
}

double TrapPotential::operator()(double x, double y) const noexcept {
  return std::pow(std::abs(x * y), p) - lambda * std::pow(x * x + y * y, p / (p + 2.0));
}

void DiscProblem::validate() const {
  if (!(R > 0.0)) throw DomainError("disc radius must be positive");
  if (!(h > 0.0) || h > R / 50.0 * (1.0 + 1e-12)) throw DomainError("disc problem needs 0 < h <= R/50");
}

namespace {

using SpMat = Eigen::SparseMatrix<double>;

struct DiscMesh {
  long half = 0;                // lattice indices run over [-half, half]
  std::vector<long> index;      // (2 half + 1)^2 -> unknown or -1
  std::vector<std::pair<long, long>> nodes;

  long width() const { return 2 * half + 1; }
  long lookup(long i, long j) const {
    if (i < -half || i > half || j < -half || j > half) return -1;
    return index[(j + half) * width() + (i + half)];
  }
};

DiscMesh build_mesh(const DiscProblem& pb) {
  DiscMesh mesh;
  mesh.half = static_cast<long>(std::floor(pb.R / pb.h)) + 1;
  mesh.index.assign(static_cast<std::size_t>(mesh.width() * mesh.width()), -1);
  // Dirichlet keeps nodes within R - h so every zeroed neighbour lies in the
  // closed disc (inner approximation); Neumann keeps everything inside R.
  const double r = pb.boundary == Boundary::Dirichlet ? pb.R - pb.h : pb.R;
  const bool dirichlet = pb.boundary == Boundary::Dirichlet;
  const double R2 = r * r;
  for (long j = -mesh.half; j <= mesh.half; ++j)
    for (long i = -mesh.half; i <= mesh.half; ++i) {
      const double x = pb.h * static_cast<double>(i), y = pb.h * static_cast<double>(j);
      const double d2 = x * x + y * y;
      if (dirichlet ? d2 <= R2 * (1.0 + 1e-12) : d2 < R2) {
        mesh.index[(j + mesh.half) * mesh.width() + (i + mesh.half)] = static_cast<long>(mesh.nodes.size());
        mesh.nodes.emplace_back(i, j);
      }
    }
  return mesh;
}

SpMat assemble(const DiscProblem& pb, const DiscMesh& mesh) {
  const double inv_h2 = 1.0 / (pb.h * pb.h);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(mesh.nodes.size() * 5);
  for (std::size_t k = 0; k < mesh.nodes.size(); ++k) {
    const auto [i, j] = mesh.nodes[k];
    int inside = 0;
    for (const auto& [di, dj] : {std::pair{1L, 0L}, {-1L, 0L}, {0L, 1L}, {0L, -1L}}) {
      const long nb = mesh.lookup(i + di, j + dj);
      if (nb >= 0) {
        ++inside;
        trip.emplace_back(static_cast<int>(k), static_cast<int>(nb), -inv_h2);
      }
    }
    const double stencil = pb.boundary == Boundary::Dirichlet ? 4.0 : static_cast<double>(inside);
    const double x = pb.h * static_cast<double>(i), y = pb.h * static_cast<double>(j);
    trip.emplace_back(static_cast<int>(k), static_cast<int>(k), stencil * inv_h2 + pb.potential(x, y));
  }
  const auto n = static_cast<Eigen::Index>(mesh.nodes.size());
  SpMat A(n, n);
  A.setFromTriplets(trip.begin(), trip.end());
  return A;
}

struct Factorization {
  Eigen::SimplicialLDLT<SpMat, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt;
  double shift = 0.0;
};

// Factorizes A - shift with the shift lowered until no pivot is negative.
void factorize_below_spectrum(const SpMat& A, double shift, double min_potential, Factorization& f) {
  SpMat I(A.rows(), A.cols());
  I.setIdentity();
  for (int attempt = 0; attempt < 60; ++attempt) {
    f.ldlt.compute(A - shift * I);
    if (f.ldlt.info() != Eigen::Success)
      throw ConvergenceError("disc_eigenvalues: LDL^T factorization failed at shift " + std::to_string(shift));
    const auto D = f.ldlt.vectorD();
    const auto negatives = (D.array() < 0.0).count();
    if (negatives == 0) {
      f.shift = shift;
      return;
    }
    // Gershgorin: A >= min V, so this terminates.
    shift = std::min(2.0 * shift - 1.0, std::max(min_potential - 1.0, shift - 1.0));
  }
  throw ConvergenceError("disc_eigenvalues: no admissible shift");
}

}  // namespace

DiscSpectrum disc_eigenvalues(const DiscProblem& problem, std::size_t count, const EigensolverOptions& options,
                              bool keep_vectors) {
  problem.validate();
  if (count < 1) throw DomainError("disc_eigenvalues needs count >= 1");
  const DiscMesh mesh = build_mesh(problem);
  const SpMat A = assemble(problem, mesh);
  const auto n = A.rows();
  if (static_cast<std::size_t>(n) < count + options.block)
    throw DomainError("disc_eigenvalues: mesh too small for the requested count");

  double min_potential = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) min_potential = std::min(min_potential, A.coeff(k, k));
  Factorization fact;
  factorize_below_spectrum(A, options.shift, min_potential - 8.0 / (problem.h * problem.h), fact);

  const std::size_t b = options.block;
  const auto maxdim = static_cast<Eigen::Index>(std::min<std::size_t>(options.max_dimension, n));
  Eigen::MatrixXd V(n, maxdim), AV(n, maxdim), H = Eigen::MatrixXd::Zero(maxdim, maxdim);
  Eigen::Index dim = 0;

  // Orthonormalizes the columns of X against V and appends the survivors.
  const auto append = [&](Eigen::MatrixXd X) {
    std::vector<Eigen::Index> added;
    for (Eigen::Index c = 0; c < X.cols() && dim < maxdim; ++c) {
      Eigen::VectorXd x = X.col(c);
      const double original = x.norm();
      for (int pass = 0; pass < 2; ++pass) {
        if (dim > 0) x -= V.leftCols(dim) * (V.leftCols(dim).transpose() * x);
      }
      const double nx = x.norm();
      if (!(nx > 1e-10 * original)) continue;
      V.col(dim) = x / nx;
      AV.col(dim) = A * V.col(dim);
      added.push_back(dim);
      ++dim;
    }
    for (Eigen::Index k : added) {
      const Eigen::VectorXd h = V.leftCols(dim).transpose() * AV.col(k);
      H.block(0, k, dim, 1) = h;
      H.block(k, 0, 1, dim) = h.transpose();
    }
    return added;
  };

  std::mt19937 rng(20180704u);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Eigen::MatrixXd X(n, static_cast<Eigen::Index>(b));
  for (Eigen::Index c = 0; c < X.cols(); ++c)
    for (Eigen::Index k = 0; k < n; ++k) X(k, c) = uni(rng);
  std::vector<Eigen::Index> last = append(X);

  DiscSpectrum out;
  out.unknowns = static_cast<std::size_t>(n);
  out.shift = fact.shift;
  while (true) {
    // Krylov step with the shifted inverse.
    Eigen::MatrixXd Y(n, static_cast<Eigen::Index>(last.size()));
    for (std::size_t c = 0; c < last.size(); ++c) Y.col(static_cast<Eigen::Index>(c)) = fact.ldlt.solve(V.col(last[c]));
    last = append(std::move(Y));

    if (static_cast<std::size_t>(dim) >= count + b) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H.topLeftCorner(dim, dim));
      bool converged = true;
      out.values.assign(count, 0.0);
      out.residuals.assign(count, 0.0);
      for (std::size_t i = 0; i < count; ++i) {
        const Eigen::VectorXd y = es.eigenvectors().col(static_cast<Eigen::Index>(i));
        const double theta = es.eigenvalues()(static_cast<Eigen::Index>(i));
        const double res = (AV.leftCols(dim) * y - theta * (V.leftCols(dim) * y)).norm();
        out.values[i] = theta;
        out.residuals[i] = res;
        converged = converged && res <= options.residual_tol * std::max(1.0, std::abs(theta));
      }
      if (converged) {
        if (keep_vectors) {
          for (std::size_t i = 0; i < count; ++i) {
            const Eigen::VectorXd x = V.leftCols(dim) * es.eigenvectors().col(static_cast<Eigen::Index>(i));
            out.vectors.emplace_back(x.data(), x.data() + x.size());
          }
        }
        out.dimension = static_cast<std::size_t>(dim);
        return out;
      }
    }
    if (last.empty() || dim + static_cast<Eigen::Index>(b) > maxdim) {
      std::ostringstream os;
      os << "disc_eigenvalues: not converged at Krylov dimension " << dim << "; residuals";
      for (double r : out.residuals) os << ' ' << r;
      throw ConvergenceError(os.str());
    }
  }
}

RefinedEigenvalues disc_eigenvalues_refined(const DiscProblem& problem, std::size_t count,
                                            const EigensolverOptions& options) {
  DiscProblem fine = problem;
  fine.h = problem.h / 2.0;
  RefinedEigenvalues out;
  out.coarse = disc_eigenvalues(problem, count, options).values;
  out.fine = disc_eigenvalues(fine, count, options).values;
  for (std::size_t i = 0; i < count; ++i) {
    const double e = (4.0 * out.fine[i] - out.coarse[i]) / 3.0;
    out.extrapolated.push_back(e);
    out.errors.push_back(std::abs(e - out.fine[i]));
  }
  return out;
}

SqueezeReport squeeze_scan(const TrapPotential& potential, const std::vector<double>& R_grid, double h,
                           std::size_t count, bool refine, const EigensolverOptions& options, unsigned jobs) {
  if (R_grid.empty()) throw DomainError("squeeze_scan needs a nonempty R grid");
  SqueezeReport rep;
  rep.potential = potential;
  rep.h = h;
  rep.refined = refine;
  // (R, boundary) problems are independent.
  const auto solved = parallel_map(2 * R_grid.size(), jobs, [&](std::size_t k) {
    const Boundary bc = k % 2 == 0 ? Boundary::Dirichlet : Boundary::Neumann;
    const DiscProblem pb{potential, R_grid[k / 2], h, bc};
    std::pair<std::vector<double>, std::vector<double>> ve;
    if (refine) {
      const RefinedEigenvalues r = disc_eigenvalues_refined(pb, count, options);
      ve = {r.extrapolated, r.errors};
    } else {
      ve = {disc_eigenvalues(pb, count, options).values, std::vector<double>(count, 0.0)};
    }
    return ve;
  });
  for (std::size_t i = 0; i < R_grid.size(); ++i) {
    const double R = R_grid[i];
    SqueezeRow row;
    row.R = R;
    row.dirichlet = solved[2 * i].first;
    row.dirichlet_error = solved[2 * i].second;
    row.neumann = solved[2 * i + 1].first;
    row.neumann_error = solved[2 * i + 1].second;
    if (row.neumann[0] > row.dirichlet[0]) {
      rep.bracket_ok = false;
      rep.warnings.push_back("Neumann above Dirichlet at R = " + std::to_string(R));
    }
    if (!rep.rows.empty() && R > rep.rows.back().R &&
        row.dirichlet[0] > rep.rows.back().dirichlet[0] + 1e-9 * std::max(1.0, std::abs(row.dirichlet[0]))) {
      rep.dirichlet_monotone = false;
      rep.warnings.push_back("Dirichlet value increases at R = " + std::to_string(R) + "; mesh inadequate");
    }
    rep.rows.push_back(std::move(row));
  }
  const SqueezeRow& last = rep.rows.back();
  rep.estimate = 0.5 * (last.dirichlet[0] + last.neumann[0]);
  rep.gap = last.dirichlet[0] - last.neumann[0];
  rep.R_star = rep.rows.front().R;
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    const double g_prev = rep.rows[i - 1].dirichlet[0] - rep.rows[i - 1].neumann[0];
    const double g = rep.rows[i].dirichlet[0] - rep.rows[i].neumann[0];
    if (g > g_prev) rep.R_star = rep.rows[i].R;
  }
  return rep;
}

std::vector<std::array<double, 4>> contour_segments(const Field2D& f, double value) {
  std::vector<std::array<double, 4>> segs;
  if (f.nx < 2 || f.ny < 2) return segs;
  const auto lerp = [&](double x0, double y0, double v0, double x1, double y1, double v1) {
    const double t = (value - v0) / (v1 - v0);
    return std::array<double, 2>{x0 + t * (x1 - x0), y0 + t * (y1 - y0)};
  };
  for (std::size_t iy = 0; iy + 1 < f.ny; ++iy)
    for (std::size_t ix = 0; ix + 1 < f.nx; ++ix) {
      const double x0 = f.x(ix), x1 = f.x(ix + 1), y0 = f.y(iy), y1 = f.y(iy + 1);
      const double v[4] = {f.at(ix, iy), f.at(ix + 1, iy), f.at(ix + 1, iy + 1), f.at(ix, iy + 1)};
      const double cx[4] = {x0, x1, x1, x0}, cy[4] = {y0, y0, y1, y1};
      std::vector<std::array<double, 2>> crossings;
      for (int e = 0; e < 4; ++e) {
        const int a = e, b = (e + 1) % 4;
        if ((v[a] >= value) != (v[b] >= value)) crossings.push_back(lerp(cx[a], cy[a], v[a], cx[b], cy[b], v[b]));
      }
      // Saddle cells pair crossings in edge order.
      for (std::size_t k = 0; k + 1 < crossings.size(); k += 2)
        segs.push_back({crossings[k][0], crossings[k][1], crossings[k + 1][0], crossings[k + 1][1]});
    }
  return segs;
}

namespace {

// Average over the symmetry group of the square lattice (reflections in
// both axes and the diagonal), evaluated on the full grid.
std::vector<double> symmetrize(const std::vector<double>& u, std::size_t width) {
  std::vector<double> s(u.size(), 0.0);
  const std::size_t w = width;
  for (std::size_t j = 0; j < w; ++j)
    for (std::size_t i = 0; i < w; ++i) {
      const std::size_t ri = w - 1 - i, rj = w - 1 - j;
      const double sum = u[j * w + i] + u[j * w + ri] + u[rj * w + i] + u[rj * w + ri] + u[i * w + j] +
                         u[i * w + rj] + u[ri * w + j] + u[ri * w + rj];
      s[j * w + i] = sum / 8.0;
    }
  return s;
}

}  // namespace

GroundStateField ground_state_field(const DiscProblem& problem, double level, const EigensolverOptions& options) {
  EigensolverOptions opts = options;
  opts.residual_tol = std::min(opts.residual_tol, 1e-11);
  const DiscSpectrum spec = disc_eigenvalues(problem, 2, opts, true);
  const DiscMesh mesh = build_mesh(problem);

  GroundStateField out;
  out.eigenvalue = spec.values[0];
  out.degenerate = std::abs(spec.values[1] - spec.values[0]) < 1e-8;

  Field2D& f = out.field;
  f.nx = f.ny = static_cast<std::size_t>(mesh.width());
  f.x_min = f.y_min = -problem.h * static_cast<double>(mesh.half);
  f.x_max = f.y_max = problem.h * static_cast<double>(mesh.half);
  f.values.assign(f.nx * f.ny, 0.0);
  const auto scatter = [&](const std::vector<double>& u) {
    std::vector<double> grid(f.nx * f.ny, 0.0);
    for (std::size_t k = 0; k < mesh.nodes.size(); ++k) {
      const auto [i, j] = mesh.nodes[k];
      grid[static_cast<std::size_t>((j + mesh.half) * mesh.width() + (i + mesh.half))] = u[k];
    }
    return grid;
  };
  f.values = scatter(spec.vectors[0]);
  if (out.degenerate) {
    std::vector<double> sym = symmetrize(f.values, f.nx);
    double norm2 = 0.0;
    for (double v : sym) norm2 += v * v;
    if (norm2 < 1e-6) sym = symmetrize(scatter(spec.vectors[1]), f.nx);
    f.values = std::move(sym);
  }

  double norm2 = 0.0, vmax = 0.0, signed_max = 0.0;
  for (double v : f.values) {
    norm2 += v * v;
    if (std::abs(v) > vmax) {
      vmax = std::abs(v);
      signed_max = v;
    }
  }
  const double scale = (signed_max < 0.0 ? -1.0 : 1.0) / (std::sqrt(norm2) * problem.h);
  for (double& v : f.values) v *= scale;
  out.level = level * vmax * std::abs(scale);
  out.contour = contour_segments(f, out.level);
  return out;
}

}  // namespace sslab
