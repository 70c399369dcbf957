#include "diffs1/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "diffs1/diffeo.hpp"
#include "diffs1/errors.hpp"
#include "diffs1/expmap.hpp"
#include "diffs1/geodesic.hpp"
#include "diffs1/homogeneous.hpp"
#include "diffs1/multi_symbol.hpp"
#include "diffs1/multiplier.hpp"

namespace diffs1 {

PeriodicField random_field(GridSpec grid, std::mt19937_64& rng, int kmax) {
  std::normal_distribution<double> g(0.0, 1.0);
  PeriodicField u(grid);
  u.set_mode(0, g(rng));
  for (int k = 1; k <= std::min(kmax, grid.band()); ++k) {
    const double re = g(rng);
    const double im = g(rng);
    u.set_mode(k, cplx(re, im) / ((1.0 + k) * (1.0 + k)));
  }
  return u;
}

PeriodicField random_field_l2(GridSpec grid, std::mt19937_64& rng, int kmax, double l2) {
  PeriodicField u = random_field(grid, rng, kmax);
  return (l2 / l2_norm(u)) * u;
}

namespace {

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << v;
  return s.str();
}

std::string num(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

Check upper(std::string name, double value, double threshold, std::string detail = {}) {
  return {std::move(name), value, threshold, true, std::isfinite(value) && value <= threshold, std::move(detail)};
}

Check lower(std::string name, double value, double threshold, std::string detail = {}) {
  return {std::move(name), value, threshold, false, std::isfinite(value) && value > threshold, std::move(detail)};
}

double rel(const PeriodicField& a, const PeriodicField& b) {
  const double d = l2_norm(a - b);
  const double s = l2_norm(b);
  return s > 0.0 ? d / s : d;
}

// ---------------------------------------------------------------- multi-symbol

void suite_multi_symbol(SuiteResult& res, std::mt19937_64& rng) {
  struct Entry {
    std::string label;
    MultiSymbolTable table;
    long long failures = 0;
    double worst_rel = 0.0;
    double worst_abs_near_zero = 0.0;
  };
  std::vector<Entry> entries;
  entries.push_back({"k^2", MultiSymbolTable(symbols::hs())});
  entries.push_back({"|k|", MultiSymbolTable(symbols::clm())});
  entries.push_back({"1+k^2", MultiSymbolTable(symbols::ch())});
  entries.push_back({"(1+k^2)^(3/4)", MultiSymbolTable(symbols::lambda_2s(0.375))});
  entries.push_back({"|k|(k^2-1)", MultiSymbolTable(symbols::wp())});

  const auto t0 = std::chrono::steady_clock::now();
  long long tuples = 0;
  auto check_tuple = [&](int n, const std::vector<int>& modes) {
    ++tuples;
    const SymbolCombination comb = recursive_combination(n, modes);
    for (Entry& e : entries) {
      const cplx r = evaluate(e.table, comb);
      const cplx c = p_n_closed(e.table, n, modes);
      const double err = std::abs(r - c);
      const double scale = std::abs(c);
      if (!(err <= 1e-12 * scale || err <= 1e-9)) ++e.failures;
      if (scale >= 1.0) {
        e.worst_rel = std::max(e.worst_rel, err / scale);
      } else {
        e.worst_abs_near_zero = std::max(e.worst_abs_near_zero, err);
      }
    }
  };

  constexpr int M = 8;
  std::vector<int> modes;
  for (int n = 1; n <= 4; ++n) {
    modes.assign(static_cast<size_t>(n + 1), -M);
    while (true) {
      check_tuple(n, modes);
      size_t j = 0;
      while (j < modes.size() && ++modes[j] > M) modes[j++] = -M;
      if (j == modes.size()) break;
    }
  }
  const long long exhaustive = tuples;

  // n = 5: every multiset of directions (p_5 is symmetric in m_1..m_5) ...
  modes.assign(6, -M);
  for (int m0 = -M; m0 <= M; ++m0) {
    std::vector<int> d(5, -M);
    while (true) {
      modes[0] = m0;
      std::copy(d.begin(), d.end(), modes.begin() + 1);
      check_tuple(5, modes);
      int j = 4;
      while (j >= 0 && d[static_cast<size_t>(j)] == M) --j;
      if (j < 0) break;
      const int v = d[static_cast<size_t>(j)] + 1;
      for (int i = j; i < 5; ++i) d[static_cast<size_t>(i)] = v;
    }
  }
  // ... plus unsorted random tuples.
  std::uniform_int_distribution<int> pick(-M, M);
  for (int i = 0; i < 20000; ++i) {
    for (int& m : modes) m = pick(rng);
    check_tuple(5, modes);
  }

  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (const Entry& e : entries) {
    res.checks.push_back(upper("closed = recursive, p0 = " + e.label + " (failing tuples)",
                               static_cast<double>(e.failures), 0.0,
                               "max rel err " + fmt(e.worst_rel) + " where |p_n| >= 1, max abs err " +
                                   fmt(e.worst_abs_near_zero) + " elsewhere"));
  }
  res.checks.push_back(upper("tuples compared", 0.0, 0.0,
                             std::to_string(exhaustive) + " exhaustive (n <= 4), " +
                                 std::to_string(tuples - exhaustive) + " for n = 5"));
  res.checks.push_back(upper("runtime [s]", seconds, 30.0));
}

// ------------------------------------------------------------------ derivative

void suite_derivative(SuiteResult& res, std::mt19937_64& rng) {
  const auto t0 = std::chrono::steady_clock::now();
  const GridSpec grid(64);
  const double eps = 1e-5;
  const std::vector<std::pair<std::string, MultiplierSymbol>> ops = {
      {"ch", symbols::ch()}, {"lambda_2s(0.75)", symbols::lambda_2s(0.75)}, {"clm", symbols::clm()}};
  for (const auto& [label, A] : ops) {
    const MultiSymbolTable t(A);
    double worst = 0.0;
    for (int draw = 0; draw < 5; ++draw) {
      const PeriodicField v = random_field(grid, rng, 8);
      const PeriodicField dphi = random_field_l2(grid, rng, 8, 0.3);
      const Diffeo plus(eps * dphi);
      const Diffeo minus(-eps * dphi);
      const PeriodicField fd =
          (0.5 / eps) * (conjugate_apply(A, plus, v) - conjugate_apply(A, minus, v));
      const std::vector<PeriodicField> args = {v, dphi};
      worst = std::max(worst, rel(fd, apply_P_n(t, 1, args)));
    }
    res.checks.push_back(upper("d/dphi A_phi v vs P_1(v, dphi), A = " + label, worst, 1e-6));
  }
  res.checks.push_back(
      upper("runtime [s]", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 10.0));
}

// ------------------------------------------------------------ CH reference run

struct ChReference {
  Trajectory<GeodesicState> lagrangian;
  Trajectory<EulerState> eulerian;
  double seconds = 0.0;
};

PeriodicField ch_initial(GridSpec grid) {
  return PeriodicField::harmonic(grid, 1, 0.2, 0.0) + PeriodicField::harmonic(grid, 2, 0.0, 0.1);
}

const ChReference& ch_reference() {
  static const ChReference ref = [] {
    const auto t0 = std::chrono::steady_clock::now();
    const GridSpec grid(128);
    const MultiplierSymbol A = symbols::ch();
    IntegratorOptions opt;
    opt.dt = 1e-3;
    opt.T = 1.0;
    opt.snapshot_every = 50;
    const PeriodicField u0 = ch_initial(grid);
    ChReference r{integrate_lagrangian(A, GeodesicState{Diffeo::identity(grid), u0, 0.0}, opt),
                  integrate_euler(A, u0, opt), 0.0};
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
  }();
  return ref;
}

void suite_lagrangian_eulerian(SuiteResult& res, std::mt19937_64&) {
  const ChReference& ref = ch_reference();
  const bool complete = ref.lagrangian.status == RunStatus::completed &&
                        ref.eulerian.status == RunStatus::completed;
  res.checks.push_back(upper("both CH runs reach T = 1", complete ? 0.0 : 1.0, 0.0,
                             ref.lagrangian.message + ref.eulerian.message));
  if (!complete) return;
  const double err = l2_norm(eulerian_velocity(ref.lagrangian.back()) - ref.eulerian.back().u);
  res.checks.push_back(upper("||v o phi^-1 - u_euler||_L2 at t = 1", err, 1e-4));
  res.checks.push_back(upper("runtime of both CH runs [s]", ref.seconds, 60.0));
}

// ---------------------------------------------------------------- conservation

double mu_drift(const Trajectory<EulerState>& traj) {
  double d = 0.0;
  const double m0 = traj.states.front().m.coeff(0).real();
  for (const auto& s : traj.states) d = std::max(d, two_pi * std::abs(s.m.coeff(0).real() - m0));
  return d;
}

void suite_conservation(SuiteResult& res, std::mt19937_64&) {
  const ChReference& ref = ch_reference();
  const MultiplierSymbol A = symbols::ch();
  if (ref.lagrangian.status != RunStatus::completed) {
    res.checks.push_back(upper("CH run reaches T = 1", 1.0, 0.0, ref.lagrangian.message));
    return;
  }
  const Diagnostics d0 = diagnostics(A, ref.lagrangian.states.front());
  double energy = 0.0, noether = 0.0;
  for (const auto& s : ref.lagrangian.states) {
    const Diagnostics d = diagnostics(A, s);
    energy = std::max(energy, std::abs(d.energy - d0.energy) / d0.energy);
    noether = std::max(noether, noether_drift(d.noether_field, d0.noether_field));
  }
  res.checks.push_back(upper("CH energy relative drift", energy, 1e-6));
  res.checks.push_back(upper("CH Noether field sup drift", noether, 1e-5));

  const GridSpec grid(128);
  IntegratorOptions opt;
  opt.dt = 1e-3;
  opt.T = 1.0;
  opt.snapshot_every = 50;
  for (double r : {1.0, 2.0}) {
    const auto traj = integrate_euler(symbols::frac(r), ch_initial(grid), opt);
    const bool ok = traj.status == RunStatus::completed;
    res.checks.push_back(upper("frac(r=" + num(r) + ") mu drift |int m(t) - int m(0)|",
                               ok ? mu_drift(traj) : INFINITY, 1e-10, traj.message));
  }
}

// ------------------------------------------------------------------- residuals

void suite_residuals(SuiteResult& res, std::mt19937_64& rng) {
  const GridSpec grid(128);
  const Constraint c = Constraint::fix1(grid);
  const MultiplierSymbol H = symbols::hilbert();
  auto D = [](const PeriodicField& f) { return differentiate(f); };
  double hs = 0.0, clm = 0.0, muhs = 0.0, muclm = 0.0;
  for (int draw = 0; draw < 5; ++draw) {
    {
      const PeriodicField u = project_to_fixed(random_field(grid, rng, 20), c);
      const PeriodicField ut = constrained_euler_rhs(symbols::hs(), u, c);
      const PeriodicField r = D(D(ut)) + 2.0 * multiply(D(u), D(D(u))) + multiply(u, D(D(D(u))));
      hs = std::max(hs, l2_norm(r));
    }
    {
      const PeriodicField u = project_to_fixed(random_field(grid, rng, 20), c);
      const PeriodicField ut = constrained_euler_rhs(symbols::clm(), u, c);
      const PeriodicField r =
          apply(H, D(ut)) + multiply(u, apply(H, D(D(u)))) + 2.0 * multiply(D(u), apply(H, D(u)));
      clm = std::max(clm, l2_norm(r));
    }
    {
      const PeriodicField u = random_field(grid, rng, 20);
      const PeriodicField ut = euler_rhs(symbols::frac(2.0), u);
      const double mu = u.coeff(0).real();
      const PeriodicField r = D(D(ut)) + multiply(u, D(D(D(u)))) + 2.0 * multiply(D(u), D(D(u))) -
                              (2.0 * mu) * D(u);
      muhs = std::max(muhs, l2_norm(r));
    }
    {
      const PeriodicField u = random_field(grid, rng, 20);
      const PeriodicField ut = euler_rhs(symbols::frac(1.0), u);
      const double mu = u.coeff(0).real();
      const PeriodicField r = apply(H, D(ut)) + multiply(u, apply(H, D(D(u)))) + (2.0 * mu) * D(u) +
                              2.0 * multiply(D(u), apply(H, D(u)));
      muclm = std::max(muclm, l2_norm(r));
    }
  }
  res.checks.push_back(upper("Hunter-Saxton residual (hs, fix1)", hs, 1e-8));
  res.checks.push_back(upper("Constantin-Lax-Majda residual (clm, fix1)", clm, 1e-8));
  res.checks.push_back(upper("mu-Hunter-Saxton residual (frac r=2)", muhs, 1e-8));
  res.checks.push_back(upper("generalized CLM residual (frac r=1)", muclm, 1e-8));
}

// ------------------------------------------------------------------- structure

void suite_structure(SuiteResult& res, std::mt19937_64& rng) {
  const GridSpec grid(64);
  const std::vector<std::pair<std::string, MultiplierSymbol>> ops = {
      {"ch", symbols::ch()}, {"lambda_2s(0.75)", symbols::lambda_2s(0.75)}};
  for (const auto& [label, A] : ops) {
    double e1 = 0.0, e2 = 0.0, e3 = 0.0;
    for (int draw = 0; draw < 20; ++draw) {
      const PeriodicField u = random_field(grid, rng, 10);
      const PeriodicField rhs = euler_rhs(A, u);
      const PeriodicField B = christoffel_B(A, u, u);
      e1 = std::max(e1, rel(-B, rhs));
      e2 = std::max(e2, rel(-ad_transpose(A, u, u), rhs));
      const PeriodicField S = spray_S(A, u);
      e3 = std::max(e3, rel(product(u, differentiate(u)) - B, S));
    }
    res.checks.push_back(upper("euler_rhs = -B(u,u), A = " + label, e1, 1e-11));
    res.checks.push_back(upper("euler_rhs = -ad^T_u u, A = " + label, e2, 1e-11));
    res.checks.push_back(upper("S(u) = u u_x - B(u,u), A = " + label, e3, 1e-11));
  }

  const MultiplierSymbol A = symbols::ch();
  IntegratorOptions opt;
  opt.dt = 1e-3;
  opt.T = 0.1;
  opt.snapshot_every = 1;
  const auto traj = integrate_euler(A, random_field_l2(grid, rng, 6, 0.3), opt);
  const PeriodicField xi0 = random_field(grid, rng, 10), xi1 = random_field(grid, rng, 10);
  const PeriodicField eta0 = random_field(grid, rng, 10), eta1 = random_field(grid, rng, 10);
  auto inner = [&](const PeriodicField& a, const PeriodicField& b) { return inner_l2(apply(A, a), b); };
  auto norm = [&](const PeriodicField& a) { return std::sqrt(inner(a, a)); };
  double worst = 0.0;
  const auto& st = traj.states;
  for (size_t i = 1; i + 1 < st.size(); i += 10) {
    const double t = st[i].t, tm = st[i - 1].t, tp = st[i + 1].t;
    const PeriodicField xi = xi0 + t * xi1, eta = eta0 + t * eta1;
    const double fd = (inner(xi0 + tp * xi1, eta0 + tp * eta1) - inner(xi0 + tm * xi1, eta0 + tm * eta1)) /
                      (tp - tm);
    const PeriodicField& u = st[i].u;
    const double rhs = inner(covariant_derivative(A, u, xi, xi1), eta) +
                       inner(xi, covariant_derivative(A, u, eta, eta1));
    const double scale = norm(xi1) * norm(eta) + norm(xi) * norm(eta1);
    worst = std::max(worst, std::abs(fd - rhs) / scale);
  }
  res.checks.push_back(upper("metric compatibility of the covariant derivative", worst, 1e-6));
}

// ----------------------------------------------------------------- equivariance

void suite_equivariance(SuiteResult& res, std::mt19937_64& rng) {
  const GridSpec grid(64);
  const std::vector<std::pair<std::string, PeriodicField>> dirs = {
      {"1", PeriodicField::constant(grid, 1.0)},
      {"cos", PeriodicField::harmonic(grid, 1, 1.0, 0.0)},
      {"sin", PeriodicField::harmonic(grid, 1, 0.0, 1.0)}};
  std::vector<PeriodicField> us;
  for (int i = 0; i < 10; ++i) us.push_back(random_field_l2(grid, rng, 20, 1.0));
  for (const auto& [label, w] : dirs) {
    double worst = 0.0;
    for (const auto& u : us) worst = std::max(worst, verify_equivariance(symbols::wp(), w, u));
    res.checks.push_back(upper("wp equivariance defect, w = " + label, worst, 1e-10));
  }
  const PeriodicField cosx = PeriodicField::harmonic(grid, 1, 1.0, 0.0);
  double least = verify_equivariance(symbols::ch(), cosx, PeriodicField::harmonic(grid, 2, 0.0, 1.0));
  res.checks.push_back(lower("ch equivariance defect, w = cos, u = sin 2x (negative control)", least, 0.1));
  for (const auto& u : us) least = std::min(least, verify_equivariance(symbols::ch(), cosx, u));
  res.checks.push_back(lower("ch equivariance defect, w = cos, random u (negative control)", least, 0.1));
}

// ---------------------------------------------------------------------- expmap

void suite_expmap(SuiteResult& res, std::mt19937_64& rng) {
  const GridSpec grid(32);
  const double dt = 1e-2;
  const long long steps = 100;
  LogOptions lopt;
  lopt.dt = dt;

  for (double s : {0.5, 1.0}) {
    const MultiplierSymbol A = symbols::lambda_2s(s);
    auto scaled = [&](double norm) {
      PeriodicField v = random_field(grid, rng, 8);
      return (norm / sobolev_norm(v, s)) * v;
    };
    double worst = 0.0;
    int failed = 0;
    for (double norm : {0.05, 0.03}) {
      const PeriodicField v = scaled(norm);
      const LogResult lr = log_map(A, exp_id(A, v, dt), PeriodicField(grid), 20, 1e-13, lopt);
      if (!lr.converged) ++failed;
      worst = std::max(worst, sobolev_norm(lr.v - v, s));
    }
    res.checks.push_back(upper("log(exp v) - v in H^s, s = " + num(s), failed ? INFINITY : worst, 1e-8));

    double scaling = 0.0;
    for (int draw = 0; draw < 3; ++draw) {
      const PeriodicField v = scaled(0.05);
      for (double sigma : {0.25, 0.5, 2.0, 0.7}) {
        const Diffeo a = geodesic_flow(A, sigma * v, 1.0, steps);
        const Diffeo b = geodesic_flow(A, v, sigma, steps);
        scaling = std::max(scaling, sup_norm(a.displacement() - b.displacement()));
      }
    }
    res.checks.push_back(upper("exp(sigma v) = flow_sigma(v), s = " + num(s), scaling, 1e-8));

    {
      const PeriodicField v0 = scaled(0.05);
      IntegratorOptions opt;
      opt.dt = dt;
      opt.T = 1.0;
      opt.snapshot_every = 1;
      const auto traj = integrate_lagrangian(A, GeodesicState{Diffeo::identity(grid), v0, 0.0}, opt);
      std::vector<Diffeo> path;
      std::vector<PeriodicField> vel;
      for (const auto& st : traj.states) {
        path.push_back(st.phi);
        vel.push_back(st.v);
      }
      const double L = path_length(A, path, vel);
      res.checks.push_back(upper("geodesic length - rho, s = " + num(s), std::abs(L - 0.05), 1e-6));
    }

    double slack = INFINITY;
    constexpr int points = 21;
    for (int p = 0; p < 20; ++p) {
      const PeriodicField va = scaled(0.01 + 0.03 * std::uniform_real_distribution<double>(0, 1)(rng));
      const PeriodicField vb = scaled(0.01 + 0.03 * std::uniform_real_distribution<double>(0, 1)(rng));
      const PeriodicField bend = scaled(0.01);
      auto gamma = [&](double t) {
        return exp_id(A, (1.0 - t) * va + t * vb + std::sin(std::numbers::pi * t) * bend, dt);
      };
      std::vector<Diffeo> path;
      for (int i = 0; i < points; ++i) path.push_back(gamma(static_cast<double>(i) / (points - 1)));
      std::vector<PeriodicField> vel;
      const double h = 1e-4;
      for (int i = 0; i < points; ++i) {
        const double t = static_cast<double>(i) / (points - 1);
        vel.push_back((0.5 / h) * (gamma(t + h).displacement() - gamma(t - h).displacement()));
      }
      const double L = path_length(A, path, vel);
      slack = std::min(slack, L - std::abs(sobolev_norm(vb, s) - sobolev_norm(va, s)));
    }
    res.checks.push_back(lower("min over 20 paths of L - |rho_b - rho_a|, s = " + num(s), slack, -1e-6));
  }
}

// ---------------------------------------------------------------- symbol-check

void suite_symbol_check(SuiteResult& res, std::mt19937_64&) {
  const std::vector<std::pair<std::string, MultiplierSymbol>> ops = {
      {"lambda_2s(0.5)", symbols::lambda_2s(0.5)}, {"lambda_2s(1)", symbols::lambda_2s(1.0)},
      {"lambda_2s(1.5)", symbols::lambda_2s(1.5)}, {"hs", symbols::hs()},
      {"clm", symbols::clm()}, {"wp", symbols::wp()}};
  for (const auto& [label, A] : ops) {
    const SymbolConditionReport rep = symbol_condition_check(A, 4, 32.0);
    double worst = 0.0;
    for (const auto& row : rep.per_n)
      worst = std::max(worst, (row.sup_ratio - row.sup_ratio_half) / std::max(row.sup_ratio, 1e-300));
    std::string notes;
    for (const auto& n : rep.notes) notes += n + "; ";
    res.checks.push_back(upper("symbol condition, n_max = 4, " + label + " (sup change over doubling)",
                               rep.overall_pass ? worst : std::max(worst, 1.0), 0.01, notes));
  }
  bool refused = false;
  try {
    symbol_condition_check(symbols::frac(0.5), 4, 32.0);
  } catch (const UnsupportedOrder&) {
    refused = true;
  }
  res.checks.push_back(upper("checker refuses order r = 0.5", refused ? 0.0 : 1.0, 0.0));
  const OrderBound ob = order_bound_check(symbols::hs().with_order(1.0), 64);
  res.checks.push_back(upper("order bound for k^2 declared r = 1 fails (negative control)", ob.pass ? 1.0 : 0.0,
                             0.0, "C_est = " + fmt(ob.c_est)));
}

// ----------------------------------------------------------------- homogeneous

void suite_homogeneous(SuiteResult& res, std::mt19937_64& rng) {
  const GridSpec grid(64);
  struct Case {
    std::string label;
    MultiplierSymbol A;
    Constraint c;
  };
  const std::vector<Case> cases = {{"hs, fix1", symbols::hs(), Constraint::fix1(grid)},
                                   {"clm, fix1", symbols::clm(), Constraint::fix1(grid)},
                                   {"wp, fix3", symbols::wp(), Constraint::fix3(grid)}};
  for (const auto& cs : cases) {
    double left = 0.0, right = 0.0;
    for (int draw = 0; draw < 10; ++draw) {
      PeriodicField m = random_field(grid, rng, 30);
      for (int k : cs.c.kernel_modes())
        if (k >= 0) m.set_mode(k, 0.0);
      left = std::max(left, rel(apply(cs.A, constrained_invert(cs.A, m, cs.c)), m));
      const PeriodicField u = project_to_fixed(random_field(grid, rng, 30), cs.c);
      right = std::max(right, rel(constrained_invert(cs.A, apply(cs.A, u), cs.c), u));
    }
    res.checks.push_back(upper("A o A^-1 = id on the hatted space, " + cs.label, left, 1e-11));
    res.checks.push_back(upper("A^-1 o A = id on the constrained space, " + cs.label, right, 1e-11));
  }

  IntegratorOptions opt;
  opt.dt = 1e-3;
  opt.T = 0.5;
  opt.snapshot_every = 50;
  const std::vector<std::pair<Case, PeriodicField>> runs = {
      {cases[0], project_to_fixed(PeriodicField::harmonic(grid, 1, 0.0, 0.5) +
                                      PeriodicField::harmonic(grid, 2, 0.1, 0.0), cases[0].c)},
      {cases[2], project_to_fixed(PeriodicField::harmonic(grid, 2, 0.05, 0.03) +
                                      PeriodicField::harmonic(grid, 3, 0.0, 0.02), cases[2].c)}};
  for (const auto& [cs, u0] : runs) {
    const ConstrainedRun run = integrate_constrained(cs.A, cs.c, u0, opt);
    const bool ok = run.trajectory.status == RunStatus::completed;
    double final_drift = 0.0;
    for (const auto& s : run.trajectory.states)
      final_drift = std::max({final_drift, cs.c.violation(s.phi.displacement()), cs.c.violation(s.v)});
    res.checks.push_back(upper("constraint drift over T = 0.5, " + cs.label,
                               ok ? std::max(final_drift, run.max_drift) : INFINITY, 1e-9,
                               std::to_string(run.reprojections) + " re-projections " + run.trajectory.message));
    const double e0 = diagnostics(cs.A, run.trajectory.states.front()).energy;
    double e = 0.0;
    for (const auto& s : run.trajectory.states)
      e = std::max(e, std::abs(diagnostics(cs.A, s).energy - e0) / e0);
    res.checks.push_back(upper("energy relative drift over T = 0.5, " + cs.label, e, 1e-6));
  }
}

using SuiteFn = void (*)(SuiteResult&, std::mt19937_64&);

const std::map<std::string, SuiteFn>& registry() {
  static const std::map<std::string, SuiteFn> r = {
      {"multi-symbol", suite_multi_symbol},
      {"derivative", suite_derivative},
      {"lagrangian-eulerian", suite_lagrangian_eulerian},
      {"conservation", suite_conservation},
      {"residuals", suite_residuals},
      {"structure", suite_structure},
      {"equivariance", suite_equivariance},
      {"expmap", suite_expmap},
      {"symbol-check", suite_symbol_check},
      {"homogeneous", suite_homogeneous},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "multi-symbol", "derivative", "lagrangian-eulerian", "conservation", "residuals",
      "structure",    "equivariance", "expmap",            "symbol-check", "homogeneous"};
  return names;
}

SuiteResult run_suite(const std::string& name, const VerifyOptions& opt) {
  const auto it = registry().find(name);
  if (it == registry().end()) throw ConfigurationError("unknown suite '" + name + "'");
  SuiteResult res;
  res.suite = name;
  res.seed = opt.seed;
  std::seed_seq seq{opt.seed, static_cast<std::uint64_t>(std::hash<std::string>{}(name))};
  std::mt19937_64 rng(seq);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    it->second(res, rng);
  } catch (const Error& e) {
    res.checks.push_back(upper("suite raised an error", 1.0, 0.0, e.what()));
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  res.pass = !res.checks.empty() &&
             std::all_of(res.checks.begin(), res.checks.end(), [](const Check& c) { return c.pass; });
  return res;
}

}  // namespace diffs1
