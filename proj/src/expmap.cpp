#include "diffs1/expmap.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "diffs1/errors.hpp"

namespace diffs1 {

Diffeo geodesic_flow(const MultiplierSymbol& A, const PeriodicField& v0, double t, long long steps) {
  if (steps < 1) throw ConfigurationError("geodesic_flow: need at least one step");
  if (t == 0.0) return Diffeo::identity(v0.grid());
  IntegratorOptions opt;
  opt.T = t;
  opt.dt = t / static_cast<double>(steps);
  const auto traj = integrate_lagrangian(A, GeodesicState{Diffeo::identity(v0.grid()), v0, 0.0}, opt);
  if (traj.status != RunStatus::completed) {
    std::ostringstream msg;
    msg << "geodesic left the chart at t = " << traj.final_time << " before reaching " << t << ": "
        << traj.message;
    throw OutsideDomain(msg.str(), traj.final_time);
  }
  return traj.back().phi;
}

Diffeo exp_id(const MultiplierSymbol& A, const PeriodicField& v0, double dt) {
  if (!(dt > 0.0)) throw ConfigurationError("exp_id: dt must be positive");
  if (v0.max_abs_coeff() == 0.0) return Diffeo::identity(v0.grid());
  return geodesic_flow(A, v0, 1.0, std::max(1LL, std::llround(1.0 / dt)));
}

namespace {

Eigen::VectorXd pack(const PeriodicField& f, int kmax) {
  Eigen::VectorXd x(2 * kmax + 1);
  x(0) = f.coeff(0).real();
  for (int k = 1; k <= kmax; ++k) {
    x(2 * k - 1) = f.coeff(k).real();
    x(2 * k) = f.coeff(k).imag();
  }
  return x;
}

PeriodicField unpack(GridSpec grid, const Eigen::VectorXd& x) {
  const int kmax = static_cast<int>((x.size() - 1) / 2);
  PeriodicField f(grid);
  f.set_mode(0, x(0));
  for (int k = 1; k <= kmax; ++k) f.set_mode(k, cplx(x(2 * k - 1), x(2 * k)));
  return f;
}

}  // namespace

LogResult log_map(const MultiplierSymbol& A, const Diffeo& target, const PeriodicField& v_init, int max_iter,
                  double tol, const LogOptions& opt) {
  const GridSpec grid = target.grid();
  if (!(v_init.grid() == grid)) throw ConfigurationError("log_map: grid mismatch");
  const int K = grid.band();
  const int kn = std::clamp(opt.k_newton, 0, K);
  const Eigen::VectorXd goal = pack(target.displacement(), K);

  auto residual = [&](const Eigen::VectorXd& x, Eigen::VectorXd& r) {
    try {
      r = pack(exp_id(A, unpack(grid, x), opt.dt).displacement(), K) - goal;
      return true;
    } catch (const OutsideDomain&) {
      return false;
    }
  };

  LogResult res{PeriodicField(grid)};
  Eigen::VectorXd x = pack(v_init.truncated(kn), kn);
  Eigen::VectorXd r;
  if (!residual(x, r)) {
    res.v = v_init.truncated(kn);
    res.residual = INFINITY;
    return res;
  }
  res.residual = r.lpNorm<Eigen::Infinity>();
  const int n = static_cast<int>(x.size());
  for (int it = 0; it < max_iter && res.residual > tol; ++it) {
    res.iterations = it + 1;
    Eigen::MatrixXd J(r.size(), n);
    bool ok = true;
    for (int j = 0; j < n && ok; ++j) {
      Eigen::VectorXd xp = x, xm = x, rp, rm;
      xp(j) += opt.fd_step;
      xm(j) -= opt.fd_step;
      ok = residual(xp, rp) && residual(xm, rm);
      if (ok) J.col(j) = (rp - rm) / (2.0 * opt.fd_step);
    }
    if (!ok) break;
    const Eigen::VectorXd dx = J.colPivHouseholderQr().solve(-r);
    const double r2 = r.squaredNorm();
    double step = 1.0;
    bool accepted = false;
    for (int halving = 0; halving <= 8; ++halving, step *= 0.5) {
      Eigen::VectorXd xt = x + step * dx, rt;
      if (residual(xt, rt) && rt.squaredNorm() <= (1.0 - 1e-4 * step) * r2) {
        x = xt;
        r = rt;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    res.residual = r.lpNorm<Eigen::Infinity>();
  }
  res.v = unpack(grid, x);
  res.converged = res.residual <= tol;
  return res;
}

PolarCoords polar_coords(const MultiplierSymbol& A, double s, const Diffeo& phi, const LogOptions& opt,
                         int max_iter, double tol) {
  const LogResult lr = log_map(A, phi, phi.displacement(), max_iter, tol, opt);
  if (!lr.converged) {
    std::ostringstream msg;
    msg << "shooting did not converge (residual " << lr.residual << " after " << lr.iterations
        << " iterations)";
    throw OutsideNormalNeighborhood(msg.str());
  }
  PolarCoords pc{sobolev_norm(lr.v, s), PeriodicField(phi.grid())};
  if (pc.rho > 0.0) pc.w = (1.0 / pc.rho) * lr.v;
  return pc;
}

double path_length(const MultiplierSymbol& A, const std::vector<Diffeo>& path,
                   const std::vector<PeriodicField>& velocities, double rel_tol) {
  const size_t M = path.size();
  if (M < 2) throw ValidationError("path needs at least two points");
  if (velocities.size() != M) throw ValidationError("path and velocity sequences differ in length");
  const GridSpec grid = path[0].grid();
  for (size_t i = 0; i < M; ++i)
    if (!(path[i].grid() == grid) || !(velocities[i].grid() == grid))
      throw ValidationError("path lives on several grids");

  const double h = 1.0 / static_cast<double>(M - 1);
  double scale = 0.0;
  for (const auto& v : velocities) scale = std::max(scale, v.max_abs_coeff());
  for (size_t i = 0; i < M; ++i) {
    PeriodicField fd(grid);
    if (M == 2) {
      fd = (1.0 / h) * (path[1].displacement() - path[0].displacement());
      const PeriodicField mean = 0.5 * (velocities[0] + velocities[1]);
      if (coeff_distance(fd, mean) > rel_tol * scale + 1e-12)
        throw ValidationError("velocities do not match the path");
      break;
    }
    const size_t lo = i == 0 ? 0 : i - 1;
    const size_t hi = i == M - 1 ? M - 1 : i + 1;
    fd = (1.0 / (static_cast<double>(hi - lo) * h)) * (path[hi].displacement() - path[lo].displacement());
    // one-sided differences at the ends are first order
    const double allowed = (i == 0 || i == M - 1) ? std::max(rel_tol, 10.0 * h) : rel_tol;
    if (coeff_distance(fd, velocities[i]) > allowed * scale + 1e-12) {
      std::ostringstream msg;
      msg << "velocity " << i << " disagrees with the path's finite difference by "
          << coeff_distance(fd, velocities[i]);
      throw ValidationError(msg.str());
    }
  }

  std::vector<double> speed(M);
  for (size_t i = 0; i < M; ++i)
    speed[i] = std::sqrt(std::max(0.0, metric_inner(A, path[i], velocities[i], velocities[i])));
  double L = 0.0;
  for (size_t i = 0; i + 1 < M; ++i) L += 0.5 * h * (speed[i] + speed[i + 1]);
  return L;
}

}  // namespace diffs1
