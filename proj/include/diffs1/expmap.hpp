#pragma once

// Riemannian exponential map at the identity and its local inverse by shooting.

#include <vector>

#include "diffs1/geodesic.hpp"

namespace diffs1 {

/// phi(t) of the geodesic from (id, v0), integrated with `steps` RK4 steps.
/// Throws OutsideDomain if the flow leaves the chart first.
Diffeo geodesic_flow(const MultiplierSymbol& A, const PeriodicField& v0, double t, long long steps);

/// Time-one map; the step count is round(1/dt).
Diffeo exp_id(const MultiplierSymbol& A, const PeriodicField& v0, double dt = 1e-2);

struct LogOptions {
  double dt = 1e-2;
  /// Shooting unknowns are the modes |k| <= min(K, k_newton).
  int k_newton = 16;
  double fd_step = 1e-6;
};

struct LogResult {
  PeriodicField v;
  bool converged = false;
  int iterations = 0;
  /// max-norm of the displacement mismatch over all modes.
  double residual = 0.0;
};

/// Gauss-Newton on r(v) = coeffs(exp_id(v)) - coeffs(target) with a centered
/// finite-difference Jacobian and halving line search (Armijo, at most 8 halvings).
/// Non-convergence is reported through `converged`, not thrown.
LogResult log_map(const MultiplierSymbol& A, const Diffeo& target, const PeriodicField& v_init, int max_iter,
                  double tol, const LogOptions& opt = {});

struct PolarCoords {
  double rho = 0.0;
  PeriodicField w;
};

/// rho = ||log phi||_{H^s}, w = log phi / rho (zero field if rho = 0).
/// Throws OutsideNormalNeighborhood if shooting fails.
PolarCoords polar_coords(const MultiplierSymbol& A, double s, const Diffeo& phi, const LogOptions& opt = {},
                         int max_iter = 20, double tol = 1e-12);

/// Trapezoid rule for the integral of sqrt(metric_inner(A, phi, phi_t, phi_t))
/// over a path sampled uniformly on [0, 1]. velocities[i] is phi_t at path[i]
/// and must agree with centered differences of the path to rel_tol.
double path_length(const MultiplierSymbol& A, const std::vector<Diffeo>& path,
                   const std::vector<PeriodicField>& velocities, double rel_tol = 1e-2);

}  // namespace diffs1
