#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace sslab {

using complex = std::complex<double>;

/// Branch choice for the channel momenta p_m(z). sign(m) multiplies the
/// physical branch p_m = -i sqrt(eps_m - z) (principal root, Im p_m <= 0,
/// cut along z >= eps_m); indices past the stored signs are physical.
class SheetSignature {
 public:
  SheetSignature() = default;
  explicit SheetSignature(std::vector<int> signs);

  static SheetSignature physical() { return {}; }
  /// Sheet n: the first n-1 momenta flipped.
  static SheetSignature nth(std::size_t n);

  int sign(std::size_t m) const noexcept { return m < signs_.size() ? signs_[m] : 1; }
  const std::vector<int>& signs() const noexcept { return signs_; }
  /// n for signatures of the nth() form, 0 otherwise.
  std::size_t sheet_id() const noexcept;

  friend bool operator==(const SheetSignature&, const SheetSignature&) = default;

 private:
  std::vector<int> signs_;
};

/// Channel momentum on the given branch. Throws DomainError at a branch point.
complex channel_momentum(complex z, std::size_t n, int sign);

/// Complex symmetric tridiagonal M(z) = 2 diag(p_l) - i lambda Y, size N+1.
struct ComplexTridiagonal {
  std::vector<complex> diag;
  std::vector<complex> off;

  std::size_t size() const noexcept { return diag.size(); }
};

ComplexTridiagonal secular_complex(complex z, double lambda, const SheetSignature& sheet, std::size_t N);

/// Smallest singular value of M.
double smallest_singular_value(const ComplexTridiagonal& m);

struct ResonancePole {
  complex z;
  SheetSignature sheet;
  double lambda = 0.0;
  double residual = 0.0;  // smallest singular value of M(z)
  std::size_t N = 0;
  int iterations = 0;
};

struct PoleOptions {
  double tol = 1e-12;        // Newton step tolerance |dz|
  double residual_tol = 1e-8;
  int max_iterations = 60;
};

/// Newton iteration on the eigenvalue of M(z) closest to zero (an analytic
/// function of z), accepted when |dz| < tol and sigma_min(M) < residual_tol.
/// Throws ConvergenceError on divergence, or when the iterate leaves the
/// lower half-plane (off-sheet shadow).
ResonancePole find_pole(double lambda, const SheetSignature& sheet, complex seed, std::size_t N,
                        const PoleOptions& options = {});

/// Weak-coupling offset of the sheet-(n+1) pole from eps_n:
/// -(lambda^4/64) (2n+1 + 2 i n (n+1)).
complex weak_coupling_offset(std::size_t n, double lambda);

struct Trajectory {
  std::vector<ResonancePole> poles;
  bool lost = false;
  std::string diagnostic;
};

/// Natural-parameter continuation in lambda with linear predictor; the
/// step is halved on corrector failure down to `min_step`.
Trajectory track_trajectory(double lambda_start, double lambda_end, std::size_t steps,
                            const SheetSignature& sheet, complex seed, std::size_t N,
                            const PoleOptions& options = {}, double min_step = 1e-4);

/// Rectangle in the complex energy plane scanned for local minima of
/// sigma_min before Newton polishing.
struct ScanWindow {
  double re_min = 0.0, re_max = 1.0;
  double im_min = -0.5, im_max = 0.0;
  std::size_t n_re = 60, n_im = 30;
};

/// Distinct poles found from the local minima of the residual landscape.
std::vector<ResonancePole> scan_poles(double lambda, const SheetSignature& sheet, const ScanWindow& window,
                                      std::size_t N, const PoleOptions& options = {});

struct PoleBirth {
  bool found = false;
  double lambda = 0.0;   // last coupling at which the new pole was still tracked
  complex z;             // its position there
  ResonancePole emerged; // the pole at lambda_hi
  std::string diagnostic;
};

/// Looks for a pole present in `window` at lambda_hi that cannot be
/// continued back to lambda_lo. The first such pole (by Re z) is reported.
PoleBirth detect_pole_birth(double lambda_lo, double lambda_hi, const SheetSignature& sheet,
                            const ScanWindow& window, std::size_t N, std::size_t steps = 140,
                            const PoleOptions& options = {});

struct ScatteringSolution {
  double k = 0.0;
  double lambda = 0.0;
  std::size_t open_channels = 0;  // nu
  std::size_t N = 0;
  std::vector<double> momenta;    // p_n of the open channels
  /// r[m][n], t[m][n] for incident m and outgoing n, both open.
  std::vector<std::vector<complex>> r;
  std::vector<std::vector<complex>> t;
  double condition = 0.0;  // sigma_max / sigma_min of M
  bool ill_conditioned = false;
};

inline constexpr std::size_t kEvanescentMargin = 60;

/// Open-channel reflection and transmission amplitudes at energy k^2.
/// N = 0 selects nu + kEvanescentMargin. Throws DomainError at a threshold.
ScatteringSolution scattering_matrix(double k, double lambda, std::size_t N = 0);

/// max over incident m of |sum_n p_n (|t_mn|^2 + |r_mn|^2) - p_m|.
double flux_defect(const ScatteringSolution& s);

}  // namespace sslab
