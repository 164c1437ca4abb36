#include "sslab/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <sstream>

#include "sslab/errors.hpp"
#include "sslab/oscillator_basis.hpp"
#include "sslab/tridiagonal.hpp"

namespace sslab {

namespace {

constexpr double kBranchGuard = 1e-14;
const complex kI{0.0, 1.0};

std::vector<complex> solve(const ComplexTridiagonal& m, std::span<const complex> rhs) {
  return solve_tridiagonal<complex>(m.off, m.diag, m.off, rhs);
}

// M^H is the entrywise conjugate of the complex symmetric M.
std::vector<complex> solve_adjoint(const ComplexTridiagonal& m, std::span<const complex> rhs) {
  std::vector<complex> d(m.diag.size()), e(m.off.size());
  std::transform(m.diag.begin(), m.diag.end(), d.begin(), [](complex v) { return std::conj(v); });
  std::transform(m.off.begin(), m.off.end(), e.begin(), [](complex v) { return std::conj(v); });
  return solve_tridiagonal<complex>(e, d, e, rhs);
}

std::vector<complex> multiply(const ComplexTridiagonal& m, std::span<const complex> x) {
  const std::size_t n = m.size();
  std::vector<complex> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    complex s = m.diag[i] * x[i];
    if (i > 0) s += m.off[i - 1] * x[i - 1];
    if (i + 1 < n) s += m.off[i] * x[i + 1];
    y[i] = s;
  }
  return y;
}

double norm(std::span<const complex> x) {
  double s = 0.0;
  for (complex v : x) s += std::norm(v);
  return std::sqrt(s);
}

std::vector<complex> start_vector(std::size_t n) {
  std::vector<complex> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = complex(1.0 + 0.3 * std::sin(0.9 * static_cast<double>(i) + 0.2), 0.2 * std::cos(1.3 * static_cast<double>(i)));
  return v;
}

struct NearZeroEigen {
  complex value;
  complex derivative;  // d value / dz
};

// Eigenvalue of M(z) closest to zero and its z-derivative via the
// unconjugated Rayleigh quotient (left = right eigenvector for complex
// symmetric matrices); dM/dz = diag(1/p_l).
NearZeroEigen near_zero_eigen(const ComplexTridiagonal& m) {
  std::vector<complex> v = start_vector(m.size());
  for (int it = 0; it < 6; ++it) {
    v = solve(m, v);
    const double nv = norm(v);
    if (!std::isfinite(nv) || nv == 0.0) throw StabilityError("inverse iteration broke down", it);
    for (complex& x : v) x /= nv;
  }
  const std::vector<complex> mv = multiply(m, v);
  complex vtv{}, vtmv{}, vtdv{};
  for (std::size_t i = 0; i < v.size(); ++i) {
    vtv += v[i] * v[i];
    vtmv += v[i] * mv[i];
    vtdv += v[i] * v[i] * (2.0 / m.diag[i]);  // 1/p_l with diag = 2 p_l
  }
  if (std::abs(vtv) < 1e-12) throw StabilityError("quasi-null eigenvector in Rayleigh quotient", 0);
  return {vtmv / vtv, vtdv / vtv};
}

bool sheet_admissible(const SheetSignature& sheet, complex z) {
  constexpr double kImagSlack = 1e-9;
  if (sheet.sheet_id() == 1) return std::abs(z.imag()) <= kImagSlack;
  return z.imag() <= kImagSlack;
}

}  // namespace

SheetSignature::SheetSignature(std::vector<int> signs) : signs_(std::move(signs)) {
  for (int s : signs_)
    if (s != 1 && s != -1) throw DomainError("sheet signs must be +1 or -1");
  while (!signs_.empty() && signs_.back() == 1) signs_.pop_back();
}

SheetSignature SheetSignature::nth(std::size_t n) {
  if (n < 1) throw DomainError("sheets are numbered from 1");
  return SheetSignature(std::vector<int>(n - 1, -1));
}

std::size_t SheetSignature::sheet_id() const noexcept {
  if (std::any_of(signs_.begin(), signs_.end(), [](int s) { return s != -1; })) return 0;
  return signs_.size() + 1;
}

complex channel_momentum(complex z, std::size_t n, int sign) {
  complex w = static_cast<double>(n) + 0.5 - z;
  if (std::abs(w) < kBranchGuard) throw DomainError("energy at the branch point eps_" + std::to_string(n));
  // On the cut the physical branch takes its limit from Im z < 0, so that
  // open channels carry p_n = +sqrt(z - eps_n).
  if (w.imag() == 0.0) w = complex(w.real(), 0.0);
  return static_cast<double>(sign) * (-kI) * std::sqrt(w);
}

ComplexTridiagonal secular_complex(complex z, double lambda, const SheetSignature& sheet, std::size_t N) {
  ComplexTridiagonal m;
  m.diag.resize(N + 1);
  m.off.resize(N);
  for (std::size_t l = 0; l <= N; ++l) m.diag[l] = 2.0 * channel_momentum(z, l, sheet.sign(l));
  for (std::size_t l = 0; l < N; ++l) m.off[l] = -kI * lambda * position_element({l}, {l + 1});
  return m;
}

double smallest_singular_value(const ComplexTridiagonal& m) {
  std::vector<complex> v = start_vector(m.size());
  double growth = 0.0;
  for (int it = 0; it < 12; ++it) {
    std::vector<complex> w = solve_adjoint(m, solve(m, v));
    growth = norm(w);
    if (!std::isfinite(growth)) return 0.0;
    if (growth == 0.0) throw StabilityError("smallest_singular_value: vanishing iterate", it);
    for (std::size_t i = 0; i < w.size(); ++i) v[i] = w[i] / growth;
  }
  return 1.0 / std::sqrt(growth);
}

namespace {

double largest_singular_value(const ComplexTridiagonal& m) {
  ComplexTridiagonal adj{m.diag, m.off};
  for (complex& x : adj.diag) x = std::conj(x);
  for (complex& x : adj.off) x = std::conj(x);
  std::vector<complex> v = start_vector(m.size());
  double growth = 0.0;
  for (int it = 0; it < 30; ++it) {
    std::vector<complex> w = multiply(adj, multiply(m, v));
    growth = norm(w);
    for (std::size_t i = 0; i < w.size(); ++i) v[i] = w[i] / growth;
  }
  return std::sqrt(growth);
}

}  // namespace

ResonancePole find_pole(double lambda, const SheetSignature& sheet, complex seed, std::size_t N,
                        const PoleOptions& options) {
  constexpr double kMaxStep = 0.25;
  complex z = seed;
  for (int it = 1; it <= options.max_iterations; ++it) {
    NearZeroEigen e;
    try {
      e = near_zero_eigen(secular_complex(z, lambda, sheet, N));
    } catch (const Error& ex) {
      throw ConvergenceError(std::string("find_pole: ") + ex.what());
    }
    if (e.derivative == complex{}) throw ConvergenceError("find_pole: flat secular functional");
    complex dz = e.value / e.derivative;
    if (std::abs(dz) > kMaxStep) dz *= kMaxStep / std::abs(dz);
    z -= dz;
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw ConvergenceError("find_pole: non-finite iterate");
    if (std::abs(dz) < options.tol) {
      const double residual = smallest_singular_value(secular_complex(z, lambda, sheet, N));
      if (residual > options.residual_tol) {
        std::ostringstream os;
        os << "find_pole: stalled at z = " << z << " with residual " << residual;
        throw ConvergenceError(os.str());
      }
      if (!sheet_admissible(sheet, z)) {
        std::ostringstream os;
        os << "find_pole: converged off-sheet at z = " << z;
        throw ConvergenceError(os.str());
      }
      return {z, sheet, lambda, residual, N, it};
    }
  }
  std::ostringstream os;
  os << "find_pole: no convergence after " << options.max_iterations << " iterations, last z = " << z;
  throw ConvergenceError(os.str());
}

complex weak_coupling_offset(std::size_t n, double lambda) {
  const double nn = static_cast<double>(n);
  const double scale = std::pow(lambda, 4) / 64.0;
  return -scale * complex(2.0 * nn + 1.0, 2.0 * nn * (nn + 1.0));
}

Trajectory track_trajectory(double lambda_start, double lambda_end, std::size_t steps,
                            const SheetSignature& sheet, complex seed, std::size_t N,
                            const PoleOptions& options, double min_step) {
  if (steps == 0) throw DomainError("track_trajectory needs steps >= 1");
  Trajectory traj;
  traj.poles.push_back(find_pole(lambda_start, sheet, seed, N, options));

  const double nominal = (lambda_end - lambda_start) / static_cast<double>(steps);
  const double direction = nominal >= 0.0 ? 1.0 : -1.0;
  double step = nominal;
  int failures = 0;
  while (direction * (lambda_end - traj.poles.back().lambda) > 1e-14) {
    const ResonancePole& last = traj.poles.back();
    double next = last.lambda + step;
    if (direction * (next - lambda_end) > 0.0) next = lambda_end;

    complex predicted = last.z;
    double drift = 1e-3;
    if (traj.poles.size() >= 2) {
      const ResonancePole& prev = traj.poles[traj.poles.size() - 2];
      const complex slope = (last.z - prev.z) / (last.lambda - prev.lambda);
      predicted = last.z + slope * (next - last.lambda);
      drift = std::max(drift, 10.0 * std::abs(predicted - last.z));
    }
    bool accepted = false;
    try {
      ResonancePole pole = find_pole(next, sheet, predicted, N, options);
      if (std::abs(pole.z - predicted) <= drift) {
        traj.poles.push_back(pole);
        accepted = true;
      }
    } catch (const ConvergenceError&) {
    }
    if (accepted) {
      if (std::abs(step) < std::abs(nominal)) step = std::clamp(2.0 * step, -std::abs(nominal), std::abs(nominal));
      continue;
    }
    ++failures;
    step *= 0.5;
    if (std::abs(step) < min_step) {
      std::ostringstream os;
      os << "continuation lost at lambda = " << last.lambda << " (z = " << last.z << ") after " << failures
         << " corrector failures";
      traj.lost = true;
      traj.diagnostic = os.str();
      break;
    }
  }
  if (!traj.lost && failures > 0) traj.diagnostic = std::to_string(failures) + " corrector failures recovered by step halving";
  return traj;
}

std::vector<ResonancePole> scan_poles(double lambda, const SheetSignature& sheet, const ScanWindow& w,
                                      std::size_t N, const PoleOptions& options) {
  if (w.n_re < 3 || w.n_im < 3) throw DomainError("scan_poles needs at least 3x3 samples");
  const double dre = (w.re_max - w.re_min) / static_cast<double>(w.n_re - 1);
  const double dim = (w.im_max - w.im_min) / static_cast<double>(w.n_im - 1);
  std::vector<double> land(w.n_re * w.n_im, std::numeric_limits<double>::infinity());
  const auto at = [&](std::size_t i, std::size_t j) -> double& { return land[j * w.n_re + i]; };
  for (std::size_t j = 0; j < w.n_im; ++j)
    for (std::size_t i = 0; i < w.n_re; ++i) {
      const complex z(w.re_min + dre * static_cast<double>(i), w.im_min + dim * static_cast<double>(j));
      try {
        const ComplexTridiagonal m = secular_complex(z, lambda, sheet, N);
        at(i, j) = smallest_singular_value(m) / largest_singular_value(m);
      } catch (const DomainError&) {
      }
    }

  std::vector<ResonancePole> found;
  for (std::size_t j = 1; j + 1 < w.n_im; ++j)
    for (std::size_t i = 1; i + 1 < w.n_re; ++i) {
      const double v = at(i, j);
      bool minimum = std::isfinite(v);
      for (int dj = -1; dj <= 1 && minimum; ++dj)
        for (int di = -1; di <= 1 && minimum; ++di)
          if ((di || dj) && at(i + di, j + dj) <= v) minimum = false;
      if (!minimum) continue;
      const complex seed(w.re_min + dre * static_cast<double>(i), w.im_min + dim * static_cast<double>(j));
      try {
        ResonancePole p = find_pole(lambda, sheet, seed, N, options);
        const bool inside = p.z.real() >= w.re_min - dre && p.z.real() <= w.re_max + dre &&
                            p.z.imag() >= w.im_min - dim && p.z.imag() <= w.im_max + dim;
        const bool fresh = std::none_of(found.begin(), found.end(),
                                        [&](const ResonancePole& q) { return std::abs(q.z - p.z) < 1e-6; });
        if (inside && fresh) found.push_back(std::move(p));
      } catch (const ConvergenceError&) {
      }
    }
  std::sort(found.begin(), found.end(),
            [](const ResonancePole& a, const ResonancePole& b) { return a.z.real() < b.z.real(); });
  return found;
}

PoleBirth detect_pole_birth(double lambda_lo, double lambda_hi, const SheetSignature& sheet,
                            const ScanWindow& window, std::size_t N, std::size_t steps, const PoleOptions& options) {
  if (!(lambda_lo < lambda_hi)) throw DomainError("detect_pole_birth needs lambda_lo < lambda_hi");
  PoleBirth birth;
  const std::vector<ResonancePole> before = scan_poles(lambda_lo, sheet, window, N, options);
  const std::vector<ResonancePole> after = scan_poles(lambda_hi, sheet, window, N, options);
  for (const ResonancePole& p : after) {
    const Trajectory back = track_trajectory(lambda_hi, lambda_lo, steps, sheet, p.z, N, options);
    if (!back.lost) continue;
    const ResonancePole& last = back.poles.back();
    birth.found = true;
    birth.lambda = last.lambda;
    birth.z = last.z;
    birth.emerged = p;
    birth.diagnostic = back.diagnostic;
    return birth;
  }
  std::ostringstream os;
  os << "no pole birth in [" << lambda_lo << ", " << lambda_hi << "]: " << before.size() << " poles before, "
     << after.size() << " after, all continuable";
  birth.diagnostic = os.str();
  return birth;
}

ScatteringSolution scattering_matrix(double k, double lambda, std::size_t N) {
  const double energy = k * k;
  if (!(energy > 0.5)) throw DomainError("scattering_matrix needs k^2 > 1/2");
  ScatteringSolution s;
  s.k = k;
  s.lambda = lambda;
  for (std::size_t n = 0; static_cast<double>(n) + 0.5 < energy; ++n) {
    if (std::abs(energy - (static_cast<double>(n) + 0.5)) < 1e-12)
      throw DomainError("scattering_matrix: k^2 at the threshold eps_" + std::to_string(n));
    s.open_channels = n + 1;
  }
  if (std::abs(energy - (static_cast<double>(s.open_channels) + 0.5)) < 1e-12)
    throw DomainError("scattering_matrix: k^2 at the threshold eps_" + std::to_string(s.open_channels));
  const std::size_t nu = s.open_channels;
  s.N = N == 0 ? nu + kEvanescentMargin : N;
  if (s.N < nu) throw DomainError("scattering_matrix: truncation below the open-channel count");

  const ComplexTridiagonal m = secular_complex(complex(energy, 0.0), lambda, SheetSignature::physical(), s.N);
  for (std::size_t n = 0; n < nu; ++n) s.momenta.push_back(m.diag[n].real() / 2.0);

  const double smin = smallest_singular_value(m);
  s.condition = smin > 0.0 ? largest_singular_value(m) / smin : std::numeric_limits<double>::infinity();
  s.ill_conditioned = !(s.condition < 1e12);

  s.r.assign(nu, std::vector<complex>(nu));
  s.t.assign(nu, std::vector<complex>(nu));
  for (std::size_t mi = 0; mi < nu; ++mi) {
    std::vector<complex> rhs(s.N + 1);
    if (mi > 0) rhs[mi - 1] = kI * lambda * position_element({mi - 1}, {mi});
    if (mi < s.N) rhs[mi + 1] = kI * lambda * position_element({mi + 1}, {mi});
    const std::vector<complex> x = solve(m, rhs);
    for (std::size_t n = 0; n < nu; ++n) {
      s.r[mi][n] = x[n];
      s.t[mi][n] = (mi == n ? 1.0 : 0.0) + x[n];
    }
  }
  return s;
}

double flux_defect(const ScatteringSolution& s) {
  double worst = 0.0;
  for (std::size_t m = 0; m < s.open_channels; ++m) {
    double flux = 0.0;
    for (std::size_t n = 0; n < s.open_channels; ++n)
      flux += s.momenta[n] * (std::norm(s.t[m][n]) + std::norm(s.r[m][n]));
    worst = std::max(worst, std::abs(flux - s.momenta[m]));
  }
  return worst;
}

}  // namespace sslab
