#pragma once

// Periodic fields on the circle R/2piZ, stored as truncated Fourier series.
//
// Convention: e_k(x) = exp(ikx), u(x) = sum_k c_k e_k(x), c_k = (1/2pi) int u e_{-k}.
// A grid of N nodes carries modes |k| <= K = N/2 - 1; the Nyquist mode is
// always zero so real fields have an unambiguous Hermitian spectrum.

#include <complex>
#include <numbers>
#include <span>
#include <vector>

namespace diffs1 {

using cplx = std::complex<double>;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

class GridSpec {
 public:
  /// n_points must be even and >= 8.
  explicit GridSpec(int n_points);

  int n_points() const noexcept { return n_; }
  /// Largest resolved wavenumber K = N/2 - 1.
  int band() const noexcept { return n_ / 2 - 1; }
  /// Largest wavenumber kept by the 2/3 rule.
  int dealias_band() const noexcept { return n_ / 3; }
  double spacing() const noexcept { return two_pi / n_; }
  double node(int j) const noexcept { return two_pi * j / n_; }
  std::vector<double> nodes() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  int n_;
};

/// Real function on the circle as Hermitian-symmetric coefficients c_{-K..K}.
class PeriodicField {
 public:
  /// Zero field.
  explicit PeriodicField(GridSpec grid);

  static PeriodicField constant(GridSpec grid, double value);
  /// Coefficients for k = -K..K (length 2K+1). Hermitian symmetry is checked
  /// to a relative 1e-10 and then enforced exactly.
  static PeriodicField from_coefficients(GridSpec grid, std::span<const cplx> coeffs);
  /// a*cos(kx) + b*sin(kx) added into a zero field.
  static PeriodicField harmonic(GridSpec grid, int k, double cos_amp, double sin_amp);

  template <class F>
  static PeriodicField from_function(GridSpec grid, F&& f);

  const GridSpec& grid() const noexcept { return grid_; }
  int band() const noexcept { return grid_.band(); }

  /// c_k, zero outside the band.
  cplx coeff(int k) const noexcept {
    const int K = band();
    return (k < -K || k > K) ? cplx{} : coeffs_[static_cast<size_t>(k + K)];
  }
  std::span<const cplx> coeffs() const noexcept { return coeffs_; }

  /// Sets c_k = c and c_{-k} = conj(c); for k = 0 the imaginary part is dropped.
  void set_mode(int k, cplx c);

  /// Values at the N grid nodes.
  std::vector<double> samples() const;
  /// Values at the nodes of an m-point uniform grid (m even, zero-padded synthesis).
  std::vector<double> samples_on(int m) const;

  /// Off-grid evaluation by direct summation (Hermitian half sum).
  double value_at(double x) const noexcept;
  /// Value and first derivative at x.
  void value_and_derivative_at(double x, double& value, double& derivative) const noexcept;

  /// Highest |k| carrying a non-zero coefficient (-1 for the zero field).
  int support_band() const noexcept;
  double max_abs_coeff() const noexcept;
  bool is_finite() const noexcept;

  /// Copy with all modes |k| > kmax removed.
  PeriodicField truncated(int kmax) const;

  PeriodicField& operator+=(const PeriodicField& other);
  PeriodicField& operator-=(const PeriodicField& other);
  PeriodicField& operator*=(double s) noexcept;

  friend PeriodicField operator+(PeriodicField a, const PeriodicField& b) { return a += b; }
  friend PeriodicField operator-(PeriodicField a, const PeriodicField& b) { return a -= b; }
  friend PeriodicField operator*(PeriodicField a, double s) { return a *= s; }
  friend PeriodicField operator*(double s, PeriodicField a) { return a *= s; }
  friend PeriodicField operator-(PeriodicField a) { return a *= -1.0; }

 private:
  friend class FieldAccess;
  GridSpec grid_;
  std::vector<cplx> coeffs_;
};

/// Internal mutable access for library code that builds spectra in place.
class FieldAccess {
 public:
  static std::vector<cplx>& coeffs(PeriodicField& u) { return u.coeffs_; }
};

/// Discrete Fourier analysis of samples at the N grid nodes.
PeriodicField analyze(GridSpec grid, std::span<const double> samples);

/// Analysis of samples taken on an m-point grid, truncated to the band of `grid`.
PeriodicField analyze_resampled(GridSpec grid, std::span<const double> samples);

/// Evaluates the truncated series at arbitrary points. Throws
/// InternalConsistencyError if the imaginary residue exceeds 1e-10 relative.
std::vector<double> synthesize(const PeriodicField& u, std::span<const double> points);

/// Multiplier ik.
PeriodicField differentiate(const PeriodicField& u);

/// (sum (1+k^2)^q |c_k|^2)^{1/2}.
double sobolev_norm(const PeriodicField& u, double q);

/// (sum_{k != 0} |k|^{2 sigma} |c_k|^2)^{1/2}.
double fourier_seminorm(const PeriodicField& u, double sigma);

/// Gagliardo seminorm with p = 2, midpoint tensor quadrature on a 4x refined grid,
/// arc distance, diagonal cells excluded.
double gagliardo_seminorm(const PeriodicField& u, double sigma);

/// Exact convolution product, truncated to the band.
PeriodicField multiply(const PeriodicField& u, const PeriodicField& v);

/// 2/3-rule truncation.
PeriodicField dealias(const PeriodicField& u);

/// (R_s u)(x) = u(x + s).
PeriodicField rotate(const PeriodicField& u, double s);

/// Normalized L2 pairing (1/2pi) int u v = sum c_k conj(d_k).
double inner_l2(const PeriodicField& u, const PeriodicField& v);
double l2_norm(const PeriodicField& u);

/// max_k |u_k - v_k|.
double coeff_distance(const PeriodicField& u, const PeriodicField& v);

/// max_j |u(x_j)| over the grid nodes.
double sup_norm(const PeriodicField& u);

template <class F>
PeriodicField PeriodicField::from_function(GridSpec grid, F&& f) {
  std::vector<double> s(static_cast<size_t>(grid.n_points()));
  for (int j = 0; j < grid.n_points(); ++j) s[static_cast<size_t>(j)] = f(grid.node(j));
  return analyze(grid, s);
}

}  // namespace diffs1
