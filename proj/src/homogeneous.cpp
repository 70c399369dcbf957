#include "diffs1/homogeneous.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "diffs1/errors.hpp"

namespace diffs1 {

namespace {

Eigen::MatrixXd as_matrix(const std::vector<double>& m, int n) {
  Eigen::MatrixXd M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = m[static_cast<size_t>(i * n + j)];
  return M;
}

}  // namespace

Constraint::Constraint(Kind kind, GridSpec grid, std::vector<double> points)
    : kind_(kind), grid_(grid), points_(std::move(points)) {
  for (double p : points_)
    if (!(p >= 0.0 && p < two_pi))
      throw ConfigurationError("constraint points must lie in [0, 2pi)");
  for (size_t i = 0; i < points_.size(); ++i) {
    for (size_t j = i + 1; j < points_.size(); ++j) {
      const double d = std::abs(points_[i] - points_[j]);
      if (std::min(d, two_pi - d) < 1e-12) throw DegeneratePoints("constraint points must be distinct");
    }
  }
  basis_.push_back(PeriodicField::constant(grid, 1.0));
  if (kind == Kind::fix3) {
    basis_.push_back(PeriodicField::harmonic(grid, 1, 1.0, 0.0));
    basis_.push_back(PeriodicField::harmonic(grid, 1, 0.0, 1.0));
  }
  const int n = static_cast<int>(basis_.size());
  if (static_cast<int>(points_.size()) != n)
    throw ConfigurationError("constraint needs exactly " + std::to_string(n) + " points");
  for (int i = 0; i < n; ++i)
    for (int b = 0; b < n; ++b) matrix_.push_back(basis_[static_cast<size_t>(b)].value_at(points_[static_cast<size_t>(i)]));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(as_matrix(matrix_, n));
  const auto& s = svd.singularValues();
  cond_ = s(s.size() - 1) > 0.0 ? s(0) / s(s.size() - 1) : INFINITY;
  if (!(cond_ < 1e12)) {
    std::ostringstream msg;
    msg << "interpolation matrix is singular (condition " << cond_ << ")";
    throw DegeneratePoints(msg.str());
  }
}

Constraint Constraint::fix1(GridSpec grid, double x0) { return Constraint(Kind::fix1, grid, {x0}); }

Constraint Constraint::fix3(GridSpec grid, std::vector<double> points) {
  if (points.empty()) points = {0.0, two_pi / 3.0, 2.0 * two_pi / 3.0};
  return Constraint(Kind::fix3, grid, std::move(points));
}

std::vector<int> Constraint::kernel_modes() const {
  if (kind_ == Kind::fix1) return {0};
  return {-1, 0, 1};
}

std::vector<double> Constraint::interpolate(const std::vector<double>& values) const {
  const int n = static_cast<int>(basis_.size());
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) b(i) = values[static_cast<size_t>(i)];
  const Eigen::VectorXd a = as_matrix(matrix_, n).fullPivLu().solve(b);
  return {a.data(), a.data() + n};
}

double Constraint::violation(const PeriodicField& u) const {
  double v = 0.0;
  for (double p : points_) v = std::max(v, std::abs(u.value_at(p)));
  return v;
}

PeriodicField project_to_fixed(const PeriodicField& u, const Constraint& c) {
  if (!(u.grid() == c.grid())) throw ConfigurationError("project_to_fixed: grid mismatch");
  std::vector<double> vals;
  for (double p : c.points()) vals.push_back(u.value_at(p));
  const std::vector<double> a = c.interpolate(vals);
  PeriodicField out = u;
  for (size_t b = 0; b < a.size(); ++b) out -= a[b] * c.kernel_basis()[b];
  return out;
}

PeriodicField constrained_invert(const MultiplierSymbol& A, const PeriodicField& m, const Constraint& c,
                                 double tol) {
  if (!(m.grid() == c.grid())) throw ConfigurationError("constrained_invert: grid mismatch");
  const std::vector<int> kmodes = c.kernel_modes();
  auto in_kernel = [&](int k) { return std::find(kmodes.begin(), kmodes.end(), k) != kmodes.end(); };
  const double allowed = tol * l2_norm(m);
  PeriodicField out(m.grid());
  for (int k = 0; k <= m.band(); ++k) {
    const cplx ck = m.coeff(k);
    if (in_kernel(k)) {
      if (std::abs(ck) > allowed) throw RangeViolation(k, std::abs(ck), allowed);
      continue;
    }
    const cplx p = A.at(k);
    if (p == cplx{})
      throw ConfigurationError("operator '" + A.name() + "' vanishes at k = " + std::to_string(k) +
                               ", outside the constraint's kernel modes");
    out.set_mode(k, ck / p);
  }
  return project_to_fixed(out, c);
}

PeriodicField constrained_euler_rhs(const MultiplierSymbol& A, const PeriodicField& u, const Constraint& c,
                                    double tol) {
  const double viol = c.violation(u);
  if (viol > 1e-10 * std::max(1.0, sup_norm(u))) {
    std::ostringstream msg;
    msg << "state violates the constraint by " << viol;
    throw DomainError(msg.str());
  }
  const PeriodicField m = apply(A, u);
  return -constrained_invert(A, product(differentiate(m), u) + 2.0 * product(m, differentiate(u)), c, tol);
}

PeriodicField constrained_spray_S(const MultiplierSymbol& A, const PeriodicField& u, const Constraint& c,
                                  double tol) {
  const PeriodicField ux = differentiate(u);
  const PeriodicField bracket = apply(A, product(u, ux)) - product(u, apply(A, ux));
  return constrained_invert(A, bracket - 2.0 * product(apply(A, u), ux), c, tol);
}

double verify_equivariance(const MultiplierSymbol& A, const PeriodicField& w, const PeriodicField& u) {
  if (!(w.grid() == u.grid())) throw ConfigurationError("verify_equivariance: grid mismatch");
  const PeriodicField wx = differentiate(w);
  const PeriodicField Au = apply(A, u);
  const PeriodicField lhs = apply(A, multiply(wx, u) - multiply(w, differentiate(u)));
  const PeriodicField rhs = -(multiply(w, differentiate(Au)) + 2.0 * multiply(wx, Au));
  return l2_norm((lhs - rhs).truncated(u.band() - 2));
}

ConstrainedRun integrate_constrained(const MultiplierSymbol& A, const Constraint& c, const PeriodicField& u0,
                                     const IntegratorOptions& opt) {
  if (c.violation(u0) > 1e-10 * std::max(1.0, sup_norm(u0)))
    throw DomainError("initial velocity does not vanish at the constraint points");
  ConstrainedRun run;
  SprayFn spray = [&](const Diffeo& phi, const PeriodicField& v) {
    return compose_field(constrained_spray_S(A, compose_inverse(v, phi), c), phi);
  };
  StepHook hook = [&](GeodesicState& s) {
    const double drift = std::max(c.violation(s.phi.displacement()), c.violation(s.v));
    run.max_drift = std::max(run.max_drift, drift);
    if (drift <= 1e-11) return;
    s.phi = Diffeo(project_to_fixed(s.phi.displacement(), c));
    s.v = project_to_fixed(s.v, c);
    ++run.reprojections;
    const double after = std::max(c.violation(s.phi.displacement()), c.violation(s.v));
    if (after > 1e-9) {
      std::ostringstream msg;
      msg << "constraint drift " << after << " remains after re-projection at t = " << s.t;
      throw ConstraintDriftError(msg.str());
    }
  };
  run.trajectory = integrate_spray(spray, GeodesicState{Diffeo::identity(u0.grid()), u0, 0.0}, opt, hook);
  return run;
}

}  // namespace diffs1
