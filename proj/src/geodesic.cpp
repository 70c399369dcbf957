#include "diffs1/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "diffs1/errors.hpp"

namespace diffs1 {

PeriodicField product(const PeriodicField& a, const PeriodicField& b) { return dealias(multiply(a, b)); }

PeriodicField lie_bracket(const PeriodicField& u, const PeriodicField& w) {
  return product(differentiate(u), w) - product(u, differentiate(w));
}

namespace {

// 2 (Av) u_x + (Av)_x u
PeriodicField coadjoint_term(const MultiplierSymbol& A, const PeriodicField& u, const PeriodicField& v) {
  const PeriodicField Av = apply(A, v);
  return 2.0 * product(Av, differentiate(u)) + product(differentiate(Av), u);
}

}  // namespace

PeriodicField ad_transpose(const MultiplierSymbol& A, const PeriodicField& u, const PeriodicField& v,
                           double tol) {
  return invert_on_range(A, coadjoint_term(A, u, v), tol);
}

PeriodicField christoffel_B(const MultiplierSymbol& A, const PeriodicField& u, const PeriodicField& v,
                            double tol) {
  return 0.5 * invert_on_range(A, coadjoint_term(A, u, v) + coadjoint_term(A, v, u), tol);
}

PeriodicField covariant_derivative(const MultiplierSymbol& A, const PeriodicField& u,
                                   const PeriodicField& w, const PeriodicField& w_t, double tol) {
  return w_t - 0.5 * lie_bracket(u, w) + christoffel_B(A, u, w, tol);
}

PeriodicField spray_S(const MultiplierSymbol& A, const PeriodicField& u, double tol) {
  const PeriodicField ux = differentiate(u);
  const PeriodicField bracket = apply(A, product(u, ux)) - product(u, apply(A, ux));
  return invert_on_range(A, bracket - 2.0 * product(apply(A, u), ux), tol);
}

PeriodicField euler_rhs(const MultiplierSymbol& A, const PeriodicField& u, double tol) {
  const PeriodicField m = apply(A, u);
  return -invert_on_range(A, product(differentiate(m), u) + 2.0 * product(m, differentiate(u)), tol);
}

PeriodicField lagrangian_spray(const MultiplierSymbol& A, const Diffeo& phi, const PeriodicField& v) {
  return compose_field(spray_S(A, compose_inverse(v, phi)), phi);
}

PeriodicField eulerian_velocity(const GeodesicState& s) { return compose_inverse(s.v, s.phi); }

namespace {

struct Pair {
  PeriodicField f;
  PeriodicField v;
};

Pair axpy(const Pair& y, double h, const Pair& k) { return {y.f + h * k.f, y.v + h * k.v}; }

double max_diff(const Pair& a, const Pair& b) {
  return std::max(coeff_distance(a.f, b.f), coeff_distance(a.v, b.v));
}

Pair rk4_pair(const SprayFn& spray, const Pair& y, double h) {
  auto rhs = [&](const Pair& p) { return Pair{p.v, spray(Diffeo(p.f), p.v)}; };
  const Pair k1 = rhs(y);
  const Pair k2 = rhs(axpy(y, 0.5 * h, k1));
  const Pair k3 = rhs(axpy(y, 0.5 * h, k2));
  const Pair k4 = rhs(axpy(y, h, k3));
  Pair out = y;
  out.f += (h / 6.0) * (k1.f + 2.0 * k2.f + 2.0 * k3.f + k4.f);
  out.v += (h / 6.0) * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
  if (!out.f.is_finite() || !out.v.is_finite()) throw NotADiffeomorphism("state became non-finite");
  Diffeo check(out.f);
  return out;
}

template <class Y, class Step, class Dist>
Y adaptive_step(const Step& step, const Dist& dist, const Y& y, double h, double tol, int depth) {
  const Y full = step(y, h);
  const Y half = step(step(y, 0.5 * h), 0.5 * h);
  if (dist(full, half) <= tol || depth >= 12) return half;
  const Y mid = adaptive_step(step, dist, y, 0.5 * h, tol, depth + 1);
  return adaptive_step(step, dist, mid, 0.5 * h, tol, depth + 1);
}

long long step_count(const IntegratorOptions& opt) {
  if (!(opt.dt > 0.0) || !std::isfinite(opt.dt)) throw ConfigurationError("integrator: dt must be positive");
  if (!(opt.T >= 0.0) || !std::isfinite(opt.T)) throw ConfigurationError("integrator: T must be >= 0");
  if (opt.T == 0.0) return 0;
  return std::max(1LL, std::llround(std::ceil(opt.T / opt.dt - 1e-9)));
}

}  // namespace

Trajectory<GeodesicState> integrate_spray(const SprayFn& spray, GeodesicState state0,
                                          const IntegratorOptions& opt, const StepHook& hook) {
  const long long n = step_count(opt);
  const double h = n > 0 ? opt.T / static_cast<double>(n) : 0.0;
  Trajectory<GeodesicState> traj;
  const double t0 = state0.t;
  traj.states.push_back(state0);
  traj.final_time = t0;
  GeodesicState cur = std::move(state0);
  auto step = [&](const Pair& y, double hh) { return rk4_pair(spray, y, hh); };
  for (long long i = 1; i <= n; ++i) {
    try {
      Pair y{cur.phi.displacement(), cur.v};
      y = opt.adaptive ? adaptive_step(step, max_diff, y, h, opt.adaptive_tol, 0) : step(y, h);
      GeodesicState next{Diffeo(y.f), y.v, t0 + static_cast<double>(i) * h};
      if (hook) hook(next);
      cur = std::move(next);
    } catch (const NotADiffeomorphism& e) {
      traj.status = RunStatus::blow_up;
      traj.message = std::string("left the diffeomorphism chart: ") + e.what();
      break;
    } catch (const RangeViolation& e) {
      traj.status = RunStatus::blow_up;
      traj.message = e.what();
      break;
    }
    traj.final_time = cur.t;
    if (opt.snapshot_every > 0 && i % opt.snapshot_every == 0 && i != n) traj.states.push_back(cur);
  }
  if (traj.states.back().t != cur.t) traj.states.push_back(cur);
  return traj;
}

Trajectory<GeodesicState> integrate_lagrangian(const MultiplierSymbol& A, GeodesicState state0,
                                               const IntegratorOptions& opt) {
  SprayFn spray = [&A](const Diffeo& phi, const PeriodicField& v) { return lagrangian_spray(A, phi, v); };
  return integrate_spray(spray, std::move(state0), opt);
}

Trajectory<EulerState> integrate_field(const MultiplierSymbol& A, const EulerRhs& rhs,
                                       const PeriodicField& u0, const IntegratorOptions& opt) {
  const long long n = step_count(opt);
  const double h = n > 0 ? opt.T / static_cast<double>(n) : 0.0;
  Trajectory<EulerState> traj;
  traj.states.push_back({u0, apply(A, u0), 0.0});
  PeriodicField u = u0;
  double t = 0.0;
  auto step = [&](const PeriodicField& y, double hh) {
    const PeriodicField k1 = rhs(y);
    const PeriodicField k2 = rhs(y + (0.5 * hh) * k1);
    const PeriodicField k3 = rhs(y + (0.5 * hh) * k2);
    const PeriodicField k4 = rhs(y + hh * k3);
    PeriodicField out = y + (hh / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!out.is_finite() || out.max_abs_coeff() > 1e100)
      throw InternalConsistencyError("state overflowed");
    return out;
  };
  auto dist = [](const PeriodicField& a, const PeriodicField& b) { return coeff_distance(a, b); };
  for (long long i = 1; i <= n; ++i) {
    try {
      u = opt.adaptive ? adaptive_step(step, dist, u, h, opt.adaptive_tol, 0) : step(u, h);
    } catch (const InternalConsistencyError& e) {
      traj.status = RunStatus::blow_up;
      traj.message = e.what();
      break;
    } catch (const RangeViolation& e) {
      traj.status = RunStatus::blow_up;
      traj.message = e.what();
      break;
    }
    t = static_cast<double>(i) * h;
    traj.final_time = t;
    if (opt.snapshot_every > 0 && i % opt.snapshot_every == 0 && i != n)
      traj.states.push_back({u, apply(A, u), t});
  }
  if (traj.states.back().t != t)
    traj.states.push_back({u, apply(A, u), t});
  return traj;
}

Trajectory<EulerState> integrate_euler(const MultiplierSymbol& A, const PeriodicField& u0,
                                       const IntegratorOptions& opt) {
  EulerRhs rhs = [&A](const PeriodicField& u) { return euler_rhs(A, u); };
  return integrate_field(A, rhs, u0, opt);
}

Diagnostics diagnostics(const MultiplierSymbol& A, const GeodesicState& s) {
  Diagnostics d{0.0, PeriodicField(s.v.grid()), 0.0, 0.0};
  const PeriodicField u = eulerian_velocity(s);
  const PeriodicField m = apply(A, u);
  d.energy = 0.5 * metric_inner(A, s.phi, s.v, s.v);
  const std::vector<double> warped = s.phi.samples();
  const std::vector<double> jac = s.phi.jacobian();
  std::vector<double> vals(warped.size());
  for (size_t j = 0; j < warped.size(); ++j) vals[j] = m.value_at(warped[j]) * jac[j] * jac[j];
  d.noether_field = analyze(s.v.grid(), vals);
  d.mean_momentum = m.coeff(0).real();
  return d;
}

double noether_drift(const PeriodicField& field, const PeriodicField& reference) {
  return sup_norm(field - reference);
}

}  // namespace diffs1
