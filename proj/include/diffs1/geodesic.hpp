#pragma once

// Euler-Arnold equations of right-invariant metrics <u, v> = mean((Au) v) on
// the circle diffeomorphism group, in Eulerian and Lagrangian form.
//
// All pointwise products are followed by 2/3-rule truncation.

#include <functional>
#include <string>
#include <vector>

#include "diffs1/diffeo.hpp"
#include "diffs1/multiplier.hpp"
#include "diffs1/spectral.hpp"

namespace diffs1 {

struct GeodesicState {
  Diffeo phi;
  PeriodicField v;
  double t = 0.0;
};

struct EulerState {
  PeriodicField u;
  PeriodicField m;
  double t = 0.0;
};

struct Diagnostics {
  double energy = 0.0;
  PeriodicField noether_field;
  double noether_drift = 0.0;
  double mean_momentum = 0.0;
};

/// dealias(multiply(a, b)).
PeriodicField product(const PeriodicField& a, const PeriodicField& b);

/// [u, w] = u_x w - u w_x.
PeriodicField lie_bracket(const PeriodicField& u, const PeriodicField& w);

/// A^{-1}(2 (Av) u_x + (Av)_x u).
PeriodicField ad_transpose(const MultiplierSymbol& A, const PeriodicField& u, const PeriodicField& v,
                           double tol = 1e-10);

/// 1/2 (ad_transpose(u, v) + ad_transpose(v, u)).
PeriodicField christoffel_B(const MultiplierSymbol& A, const PeriodicField& u, const PeriodicField& v,
                            double tol = 1e-10);

/// w_t - 1/2 [u, w] + B(u, w): the metric-compatible covariant derivative of w
/// along a curve with Eulerian velocity u.
PeriodicField covariant_derivative(const MultiplierSymbol& A, const PeriodicField& u,
                                   const PeriodicField& w, const PeriodicField& w_t,
                                   double tol = 1e-10);

/// A^{-1}{ A(u u_x) - u A(u_x) - 2 (Au) u_x }.
PeriodicField spray_S(const MultiplierSymbol& A, const PeriodicField& u, double tol = 1e-10);

/// -A^{-1}{ (Au)_x u + 2 (Au) u_x }.
PeriodicField euler_rhs(const MultiplierSymbol& A, const PeriodicField& u, double tol = 1e-10);

/// S_phi(v) = (S(v o phi^{-1})) o phi.
PeriodicField lagrangian_spray(const MultiplierSymbol& A, const Diffeo& phi, const PeriodicField& v);

/// u = v o phi^{-1}.
PeriodicField eulerian_velocity(const GeodesicState& s);

struct IntegratorOptions {
  double dt = 1e-3;
  double T = 1.0;
  /// Store a state every this many steps (0: only the first and last).
  int snapshot_every = 0;
  /// Step halving until one step and two half steps agree to adaptive_tol in
  /// the coefficient max-norm.
  bool adaptive = false;
  double adaptive_tol = 1e-10;
};

enum class RunStatus { completed, blow_up };

template <class State>
struct Trajectory {
  std::vector<State> states;
  RunStatus status = RunStatus::completed;
  double final_time = 0.0;
  std::string message;

  const State& back() const { return states.back(); }
};

using SprayFn = std::function<PeriodicField(const Diffeo&, const PeriodicField&)>;
/// Called after every accepted step; may modify the state (e.g. re-projection).
using StepHook = std::function<void(GeodesicState&)>;

/// RK4 for phi_t = v, v_t = spray(phi, v) on the coefficients of (f, v).
Trajectory<GeodesicState> integrate_spray(const SprayFn& spray, GeodesicState state0,
                                          const IntegratorOptions& opt, const StepHook& hook = {});

Trajectory<GeodesicState> integrate_lagrangian(const MultiplierSymbol& A, GeodesicState state0,
                                               const IntegratorOptions& opt);

using EulerRhs = std::function<PeriodicField(const PeriodicField&)>;

/// RK4 for u_t = rhs(u); m is filled with apply(A, u).
Trajectory<EulerState> integrate_field(const MultiplierSymbol& A, const EulerRhs& rhs,
                                       const PeriodicField& u0, const IntegratorOptions& opt);

Trajectory<EulerState> integrate_euler(const MultiplierSymbol& A, const PeriodicField& u0,
                                       const IntegratorOptions& opt);

/// Energy 1/2 metric_inner(A, phi, v, v), Noether field (m o phi) phi_x^2 with
/// m = A(v o phi^{-1}), and m's mean. noether_drift is left at zero; use
/// noether_drift() against a reference field.
Diagnostics diagnostics(const MultiplierSymbol& A, const GeodesicState& s);

/// sup over the nodes of |field - reference|.
double noether_drift(const PeriodicField& field, const PeriodicField& reference);

}  // namespace diffs1
