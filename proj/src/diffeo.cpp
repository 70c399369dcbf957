#include "diffs1/diffeo.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "diffs1/errors.hpp"

namespace diffs1 {

double min_jacobian_of(const PeriodicField& displacement) {
  const std::vector<double> d = differentiate(displacement).samples_on(4 * displacement.grid().n_points());
  return 1.0 + *std::min_element(d.begin(), d.end());
}

Diffeo::Diffeo(PeriodicField displacement) : f_(std::move(displacement)) {
  if (!f_.is_finite()) throw NotADiffeomorphism("displacement has non-finite coefficients");
  min_jac_ = min_jacobian_of(f_);
  if (!(min_jac_ > 0.0)) {
    std::ostringstream msg;
    msg << "phi_x reaches " << min_jac_ << " <= 0 on the refined grid";
    throw NotADiffeomorphism(msg.str());
  }
}

Diffeo Diffeo::identity(GridSpec grid) { return Diffeo(PeriodicField(grid)); }

Diffeo Diffeo::rotation(GridSpec grid, double s) { return Diffeo(PeriodicField::constant(grid, s)); }

void Diffeo::eval(double x, double& value, double& derivative) const noexcept {
  double f = 0.0, fx = 0.0;
  f_.value_and_derivative_at(x, f, fx);
  value = x + f;
  derivative = 1.0 + fx;
}

std::vector<double> Diffeo::samples() const {
  std::vector<double> s = f_.samples();
  for (int j = 0; j < grid().n_points(); ++j) s[static_cast<size_t>(j)] += grid().node(j);
  return s;
}

std::vector<double> Diffeo::jacobian() const {
  std::vector<double> s = differentiate(f_).samples();
  for (double& v : s) v += 1.0;
  return s;
}

PeriodicField compose_field(const PeriodicField& v, const Diffeo& phi) {
  if (!(v.grid() == phi.grid())) throw ConfigurationError("compose_field: grid mismatch");
  const std::vector<double> warped = phi.samples();
  std::vector<double> vals(warped.size());
  for (size_t j = 0; j < warped.size(); ++j) vals[j] = v.value_at(warped[j]);
  return analyze(v.grid(), vals);
}

Diffeo compose(const Diffeo& phi, const Diffeo& psi) {
  return Diffeo(psi.displacement() + compose_field(phi.displacement(), psi));
}

std::vector<double> inverse_at_nodes(const Diffeo& phi, double tol) {
  const GridSpec& grid = phi.grid();
  double bound = 0.0;
  for (const cplx& c : phi.displacement().coeffs()) bound += std::abs(c);
  bound += 1e-12;

  std::vector<double> y(static_cast<size_t>(grid.n_points()));
  for (int j = 0; j < grid.n_points(); ++j) {
    const double target = grid.node(j);
    double lo = target - bound;
    double hi = target + bound;
    double x = target - phi.displacement().value_at(target);
    x = std::clamp(x, lo, hi);
    bool done = false;
    for (int it = 0; it < 200 && !done; ++it) {
      double val = 0.0, der = 0.0;
      phi.eval(x, val, der);
      const double g = val - target;
      if (std::abs(g) <= tol) {
        // one more Newton step to reach rounding level
        const double polished = x - g / der;
        if (polished > lo && polished < hi) x = polished;
        done = true;
        break;
      }
      if (g < 0) {
        lo = x;
      } else {
        hi = x;
      }
      double next = x - g / der;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(x))) {
        x = next;
        done = true;
        break;
      }
      x = next;
    }
    y[static_cast<size_t>(j)] = x;
  }
  return y;
}

Diffeo invert_diffeo(const Diffeo& phi, double tol) {
  const GridSpec& grid = phi.grid();
  const std::vector<double> y = inverse_at_nodes(phi, tol);
  std::vector<double> g(y.size());
  for (int j = 0; j < grid.n_points(); ++j) g[static_cast<size_t>(j)] = y[static_cast<size_t>(j)] - grid.node(j);
  Diffeo inv(analyze(grid, g));

  double residual = 0.0;
  for (int j = 0; j < grid.n_points(); ++j) {
    const double xj = grid.node(j);
    residual = std::max(residual, std::abs(phi(inv(xj)) - xj));
  }
  if (residual > 10.0 * tol) {
    std::ostringstream msg;
    msg << "inverse diffeomorphism not resolved on " << grid.n_points()
        << " points: sup|phi o phi^-1 - id| = " << residual;
    throw ResolutionError(msg.str());
  }
  return inv;
}

namespace {

PeriodicField collocation_inverse(const PeriodicField& v, const Diffeo& phi) {
  const GridSpec& grid = v.grid();
  const int N = grid.n_points();
  const int K = grid.band();
  const std::vector<double> warped = phi.samples();
  const std::vector<double> rhs = v.samples();
  Eigen::MatrixXd M(N, 2 * K + 1);
  Eigen::VectorXd b(N);
  for (int j = 0; j < N; ++j) {
    const double p = warped[static_cast<size_t>(j)];
    M(j, 0) = 1.0;
    for (int k = 1; k <= K; ++k) {
      M(j, 2 * k - 1) = std::cos(k * p);
      M(j, 2 * k) = std::sin(k * p);
    }
    b(j) = rhs[static_cast<size_t>(j)];
  }
  const Eigen::VectorXd a = M.colPivHouseholderQr().solve(b);
  PeriodicField w(grid);
  w.set_mode(0, a(0));
  for (int k = 1; k <= K; ++k) w.set_mode(k, cplx(0.5 * a(2 * k - 1), -0.5 * a(2 * k)));
  return w;
}

}  // namespace

PeriodicField compose_inverse(const PeriodicField& v, const Diffeo& phi, InverseComposition method) {
  if (!(v.grid() == phi.grid())) throw ConfigurationError("compose_inverse: grid mismatch");
  if (method == InverseComposition::collocation) return collocation_inverse(v, phi);
  const std::vector<double> y = inverse_at_nodes(phi);
  std::vector<double> vals(y.size());
  for (size_t j = 0; j < y.size(); ++j) vals[j] = v.value_at(y[j]);
  return analyze(v.grid(), vals);
}

PeriodicField conjugate_apply(const MultiplierSymbol& A, const Diffeo& phi, const PeriodicField& v,
                              InverseComposition method) {
  return compose_field(apply(A, compose_inverse(v, phi, method)), phi);
}

double metric_inner(const MultiplierSymbol& A, const Diffeo& phi, const PeriodicField& xi,
                    const PeriodicField& eta, InverseComposition method) {
  if (!(xi.grid() == eta.grid())) throw ConfigurationError("metric_inner: grid mismatch");
  const std::vector<double> a = conjugate_apply(A, phi, xi, method).samples();
  const std::vector<double> e = eta.samples();
  const std::vector<double> jac = phi.jacobian();
  double s = 0.0;
  for (size_t j = 0; j < a.size(); ++j) s += e[j] * a[j] * jac[j];
  return s / static_cast<double>(a.size());
}

}  // namespace diffs1
