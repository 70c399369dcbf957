#include "diffs1/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "diffs1/errors.hpp"
#include "fft.hpp"

namespace diffs1 {

namespace {

void require_same_grid(const PeriodicField& a, const PeriodicField& b, const char* op) {
  if (!(a.grid() == b.grid()))
    throw ConfigurationError(std::string(op) + ": fields live on different grids (" +
                             std::to_string(a.grid().n_points()) + " vs " +
                             std::to_string(b.grid().n_points()) + ")");
}

}  // namespace

GridSpec::GridSpec(int n_points) : n_(n_points) {
  if (n_points < 8 || n_points % 2 != 0)
    throw ConfigurationError("grid: n_points must be even and >= 8, got " +
                             std::to_string(n_points));
}

std::vector<double> GridSpec::nodes() const {
  std::vector<double> x(static_cast<size_t>(n_));
  for (int j = 0; j < n_; ++j) x[static_cast<size_t>(j)] = node(j);
  return x;
}

PeriodicField::PeriodicField(GridSpec grid)
    : grid_(grid), coeffs_(static_cast<size_t>(2 * grid.band() + 1)) {}

PeriodicField PeriodicField::constant(GridSpec grid, double value) {
  PeriodicField u(grid);
  u.set_mode(0, value);
  return u;
}

PeriodicField PeriodicField::from_coefficients(GridSpec grid, std::span<const cplx> coeffs) {
  const int K = grid.band();
  if (coeffs.size() != static_cast<size_t>(2 * K + 1))
    throw ConfigurationError("from_coefficients: expected " + std::to_string(2 * K + 1) +
                             " coefficients, got " + std::to_string(coeffs.size()));
  double scale = 0.0;
  for (const cplx& c : coeffs) scale = std::max(scale, std::abs(c));
  PeriodicField u(grid);
  for (int k = 0; k <= K; ++k) {
    const cplx pos = coeffs[static_cast<size_t>(K + k)];
    const cplx neg = coeffs[static_cast<size_t>(K - k)];
    if (std::abs(pos - std::conj(neg)) > 1e-10 * std::max(scale, 1e-300))
      throw ConfigurationError("from_coefficients: spectrum is not Hermitian at k = " +
                               std::to_string(k));
    u.set_mode(k, 0.5 * (pos + std::conj(neg)));
  }
  return u;
}

PeriodicField PeriodicField::harmonic(GridSpec grid, int k, double cos_amp, double sin_amp) {
  if (k < 0 || k > grid.band())
    throw ConfigurationError("harmonic: wavenumber " + std::to_string(k) + " outside band");
  PeriodicField u(grid);
  if (k == 0) {
    u.set_mode(0, cos_amp);
  } else {
    // a cos + b sin = (a - ib)/2 e_k + (a + ib)/2 e_{-k}
    u.set_mode(k, cplx(0.5 * cos_amp, -0.5 * sin_amp));
  }
  return u;
}

void PeriodicField::set_mode(int k, cplx c) {
  const int K = band();
  if (k < -K || k > K) throw ConfigurationError("set_mode: wavenumber outside band");
  if (k == 0) {
    coeffs_[static_cast<size_t>(K)] = c.real();
    return;
  }
  if (k < 0) {
    k = -k;
    c = std::conj(c);
  }
  coeffs_[static_cast<size_t>(K + k)] = c;
  coeffs_[static_cast<size_t>(K - k)] = std::conj(c);
}

std::vector<double> PeriodicField::samples() const { return samples_on(grid_.n_points()); }

std::vector<double> PeriodicField::samples_on(int m) const {
  if (m < 8 || m % 2 != 0) throw ConfigurationError("samples_on: m must be even and >= 8");
  const int K = band();
  const int top = m / 2 - 1;
  if (support_band() > top)
    throw ResolutionError("samples_on: field support exceeds the band of an " +
                          std::to_string(m) + "-point grid");
  std::vector<cplx> half(static_cast<size_t>(m / 2 + 1));
  for (int k = 0; k <= std::min(K, top); ++k) half[static_cast<size_t>(k)] = coeff(k);
  std::vector<double> out(static_cast<size_t>(m));
  detail::inverse_half_spectrum(half, out);
  return out;
}

double PeriodicField::value_at(double x) const noexcept {
  const int K = band();
  double acc = coeff(0).real();
  const cplx step(std::cos(x), std::sin(x));
  cplx e = step;
  for (int k = 1; k <= K; ++k) {
    const cplx c = coeffs_[static_cast<size_t>(K + k)];
    acc += 2.0 * (c.real() * e.real() - c.imag() * e.imag());
    e *= step;
  }
  return acc;
}

void PeriodicField::value_and_derivative_at(double x, double& value,
                                            double& derivative) const noexcept {
  const int K = band();
  double v = coeff(0).real();
  double d = 0.0;
  const cplx step(std::cos(x), std::sin(x));
  cplx e = step;
  for (int k = 1; k <= K; ++k) {
    const cplx c = coeffs_[static_cast<size_t>(K + k)];
    const double re = c.real() * e.real() - c.imag() * e.imag();
    const double im = c.real() * e.imag() + c.imag() * e.real();
    v += 2.0 * re;
    d -= 2.0 * k * im;
    e *= step;
  }
  value = v;
  derivative = d;
}

int PeriodicField::support_band() const noexcept {
  const int K = band();
  for (int k = K; k >= 0; --k)
    if (coeffs_[static_cast<size_t>(K + k)] != cplx{}) return k;
  return -1;
}

double PeriodicField::max_abs_coeff() const noexcept {
  double m = 0.0;
  for (const cplx& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

bool PeriodicField::is_finite() const noexcept {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const cplx& c) {
    return std::isfinite(c.real()) && std::isfinite(c.imag());
  });
}

PeriodicField PeriodicField::truncated(int kmax) const {
  PeriodicField out(*this);
  const int K = band();
  for (int k = std::max(kmax + 1, 1); k <= K; ++k) {
    out.coeffs_[static_cast<size_t>(K + k)] = 0.0;
    out.coeffs_[static_cast<size_t>(K - k)] = 0.0;
  }
  if (kmax < 0) out.coeffs_[static_cast<size_t>(K)] = 0.0;
  return out;
}

PeriodicField& PeriodicField::operator+=(const PeriodicField& other) {
  require_same_grid(*this, other, "operator+");
  for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

PeriodicField& PeriodicField::operator-=(const PeriodicField& other) {
  require_same_grid(*this, other, "operator-");
  for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

PeriodicField& PeriodicField::operator*=(double s) noexcept {
  for (cplx& c : coeffs_) c *= s;
  return *this;
}

PeriodicField analyze(GridSpec grid, std::span<const double> samples) {
  if (samples.size() != static_cast<size_t>(grid.n_points()))
    throw ConfigurationError("analyze: expected " + std::to_string(grid.n_points()) +
                             " samples, got " + std::to_string(samples.size()));
  return analyze_resampled(grid, samples);
}

PeriodicField analyze_resampled(GridSpec grid, std::span<const double> samples) {
  const int m = static_cast<int>(samples.size());
  if (m < 8 || m % 2 != 0)
    throw ConfigurationError("analyze: sample count must be even and >= 8");
  std::vector<cplx> half(static_cast<size_t>(m / 2 + 1));
  detail::forward_half_spectrum(samples, half);
  PeriodicField u(grid);
  auto& c = FieldAccess::coeffs(u);
  const int K = grid.band();
  const int top = std::min(K, m / 2 - 1);
  const double inv = 1.0 / m;
  c[static_cast<size_t>(K)] = half[0].real() * inv;
  for (int k = 1; k <= top; ++k) {
    const cplx v = half[static_cast<size_t>(k)] * inv;
    c[static_cast<size_t>(K + k)] = v;
    c[static_cast<size_t>(K - k)] = std::conj(v);
  }
  return u;
}

std::vector<double> synthesize(const PeriodicField& u, std::span<const double> points) {
  const int K = u.band();
  double scale = 0.0;
  for (const cplx& c : u.coeffs()) scale += std::abs(c);
  std::vector<double> out;
  out.reserve(points.size());
  for (double x : points) {
    cplx acc = u.coeff(0);
    const cplx step(std::cos(x), std::sin(x));
    cplx ep = step;
    for (int k = 1; k <= K; ++k) {
      acc += u.coeff(k) * ep + u.coeff(-k) * std::conj(ep);
      ep *= step;
    }
    if (std::abs(acc.imag()) > 1e-10 * std::max(scale, 1e-300))
      throw InternalConsistencyError("synthesize: imaginary residue " +
                                     std::to_string(acc.imag()) + " at x = " +
                                     std::to_string(x));
    out.push_back(acc.real());
  }
  return out;
}

PeriodicField differentiate(const PeriodicField& u) {
  PeriodicField out(u.grid());
  for (int k = 1; k <= u.band(); ++k) out.set_mode(k, cplx(0.0, k) * u.coeff(k));
  return out;
}

double sobolev_norm(const PeriodicField& u, double q) {
  double s = std::norm(u.coeff(0));
  for (int k = 1; k <= u.band(); ++k)
    s += 2.0 * std::pow(1.0 + double(k) * k, q) * std::norm(u.coeff(k));
  return std::sqrt(s);
}

double fourier_seminorm(const PeriodicField& u, double sigma) {
  double s = 0.0;
  for (int k = 1; k <= u.band(); ++k) s += 2.0 * std::pow(double(k), 2.0 * sigma) * std::norm(u.coeff(k));
  return std::sqrt(s);
}

double gagliardo_seminorm(const PeriodicField& u, double sigma) {
  if (!(sigma > 0.0 && sigma < 1.0))
    throw DomainError("gagliardo_seminorm: sigma must lie in (0,1), got " + std::to_string(sigma));
  const int m = 4 * u.grid().n_points();
  const std::vector<double> w = u.samples_on(m);
  const double h = two_pi / m;
  double total = 0.0;
  for (int lag = 1; lag < m; ++lag) {
    const double d = std::min(lag, m - lag) * h;
    const double weight = std::pow(d, -(1.0 + 2.0 * sigma));
    double s = 0.0;
    for (int i = 0; i < m; ++i) {
      const double diff = w[static_cast<size_t>(i)] - w[static_cast<size_t>((i + lag) % m)];
      s += diff * diff;
    }
    total += s * weight;
  }
  return std::sqrt(total * h * h);
}

PeriodicField multiply(const PeriodicField& u, const PeriodicField& v) {
  require_same_grid(u, v, "multiply");
  const int m = 2 * u.grid().n_points();
  std::vector<double> a = u.samples_on(m);
  const std::vector<double> b = v.samples_on(m);
  for (size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
  return analyze_resampled(u.grid(), a);
}

PeriodicField dealias(const PeriodicField& u) { return u.truncated(u.grid().dealias_band()); }

PeriodicField rotate(const PeriodicField& u, double s) {
  PeriodicField out(u.grid());
  for (int k = 0; k <= u.band(); ++k)
    out.set_mode(k, u.coeff(k) * cplx(std::cos(k * s), std::sin(k * s)));
  return out;
}

double inner_l2(const PeriodicField& u, const PeriodicField& v) {
  require_same_grid(u, v, "inner_l2");
  double s = (u.coeff(0) * std::conj(v.coeff(0))).real();
  for (int k = 1; k <= u.band(); ++k) s += 2.0 * (u.coeff(k) * std::conj(v.coeff(k))).real();
  return s;
}

double l2_norm(const PeriodicField& u) { return sobolev_norm(u, 0.0); }

double coeff_distance(const PeriodicField& u, const PeriodicField& v) {
  require_same_grid(u, v, "coeff_distance");
  double d = 0.0;
  for (int k = 0; k <= u.band(); ++k) d = std::max(d, std::abs(u.coeff(k) - v.coeff(k)));
  return d;
}

double sup_norm(const PeriodicField& u) {
  double m = 0.0;
  for (double s : u.samples()) m = std::max(m, std::abs(s));
  return m;
}

}  // namespace diffs1
