// diffs1: command-line front end.
//
//   diffs1 simulate     --scenario s.json [--out DIR]
//   diffs1 check-symbol (--scenario s.json | --operator NAME [--param k=v]... [--table F]) [--nmax N] [--ximax X]
//   diffs1 verify       [--suite NAME|all] [--seed N] [--out DIR]
//   diffs1 expmap       --scenario s.json [--out DIR]
//   diffs1 logmap       --scenario s.json [--out DIR]
//
// Exit codes: 0 success, 1 verification failure, 2 configuration error,
// 3 blow-up or non-convergence.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "diffs1/errors.hpp"
#include "diffs1/expmap.hpp"
#include "diffs1/verify.hpp"
#include "scenario.hpp"

namespace fs = std::filesystem;
using namespace diffs1;
using namespace diffs1::cli;

namespace {

json grid_json(GridSpec g) { return {{"n_points", g.n_points()}, {"band", g.band()}}; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool wants(const Scenario& sc, const char* format) {
  if (!sc.raw.contains("outputs") || !sc.raw["outputs"].contains("formats")) return true;
  for (const json& f : sc.raw["outputs"]["formats"])
    if (f == format) return true;
  return false;
}

const OperatorSpec& need_operator(const Scenario& sc) {
  if (!sc.op) throw ConfigurationError("scenario: missing 'operator'");
  return *sc.op;
}

// ------------------------------------------------------------------- simulate

struct Row {
  double t, energy, energy_drift, noether_drift, mu_drift, constraint_drift;
};

int cmd_simulate(const std::string& scenario_path, const std::string& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const Scenario sc = load_scenario(scenario_path);
  const OperatorSpec& op = need_operator(sc);
  if (!sc.raw.contains("initial_condition")) throw ConfigurationError("scenario: missing 'initial_condition'");
  PeriodicField u0 = parse_field(sc.raw["initial_condition"], sc.grid);
  if (sc.constraint) u0 = project_to_fixed(u0, *sc.constraint);
  const fs::path dir = output_dir(out, &sc.raw, fs::path(scenario_path).stem().string());
  fs::create_directories(dir);

  Trajectory<GeodesicState> traj;
  double reported_constraint_drift = 0.0;
  int reprojections = 0;
  try {
    if (sc.constraint) {
      ConstrainedRun run = integrate_constrained(op.symbol, *sc.constraint, u0, sc.integrator);
      traj = std::move(run.trajectory);
      reported_constraint_drift = run.max_drift;
      reprojections = run.reprojections;
    } else {
      traj = integrate_lagrangian(op.symbol, GeodesicState{Diffeo::identity(sc.grid), u0, 0.0}, sc.integrator);
    }
  } catch (const ConstraintDriftError& e) {
    traj.states.push_back(GeodesicState{Diffeo::identity(sc.grid), u0, 0.0});
    traj.status = RunStatus::blow_up;
    traj.message = e.what();
  }

  std::vector<Row> rows;
  json snapshots = json::array();
  const Diagnostics d0 = diagnostics(op.symbol, traj.states.front());
  const double m0 = two_pi * d0.mean_momentum;
  for (size_t i = 0; i < traj.states.size(); ++i) {
    const GeodesicState& s = traj.states[i];
    const PeriodicField u = eulerian_velocity(s);
    const PeriodicField m = apply(op.symbol, u);
    const Diagnostics d = diagnostics(op.symbol, s);
    double cdrift = 0.0;
    if (sc.constraint)
      cdrift = std::max(sc.constraint->violation(s.phi.displacement()), sc.constraint->violation(s.v));
    rows.push_back({s.t, d.energy,
                    d0.energy > 0.0 ? std::abs(d.energy - d0.energy) / d0.energy : std::abs(d.energy - d0.energy),
                    noether_drift(d.noether_field, d0.noether_field), std::abs(two_pi * d.mean_momentum - m0),
                    cdrift});

    char stem[32];
    std::snprintf(stem, sizeof stem, "snapshot_%06zu", i);
    snapshots.push_back(std::string(stem));
    const Snapshot snap{s.t, u, s.phi.displacement(), s.v, m};
    if (wants(sc, "csv")) write_text(dir / (std::string(stem) + ".csv"), snapshot_csv(snap));
    if (wants(sc, "json")) write_text(dir / (std::string(stem) + ".json"), snapshot_sidecar(snap, op.echo).dump(2) + "\n");
  }

  std::ostringstream diag;
  diag << "t,energy,energy_drift,noether_drift,mu_drift,constraint_drift\n";
  Row worst{0, 0, 0, 0, 0, reported_constraint_drift};
  for (const Row& r : rows) {
    diag << num(r.t) << ',' << num(r.energy) << ',' << num(r.energy_drift) << ',' << num(r.noether_drift) << ','
         << num(r.mu_drift) << ',' << num(r.constraint_drift) << '\n';
    worst.energy_drift = std::max(worst.energy_drift, r.energy_drift);
    worst.noether_drift = std::max(worst.noether_drift, r.noether_drift);
    worst.mu_drift = std::max(worst.mu_drift, r.mu_drift);
    worst.constraint_drift = std::max(worst.constraint_drift, r.constraint_drift);
  }
  write_text(dir / "diagnostics.csv", diag.str());

  const bool blow_up = traj.status == RunStatus::blow_up;
  const double final_time = traj.states.back().t;
  json report = {{"scenario", sc.raw},
                 {"convention", kConvention},
                 {"trajectory",
                  {{"T", sc.integrator.T},
                   {"final_time", final_time},
                   {"blow_up", blow_up},
                   {"blow_up_time", blow_up ? json(traj.final_time) : json(nullptr)},
                   {"message", traj.message},
                   {"snapshots", snapshots}}},
                 {"diagnostics",
                  {{"energy_drift", worst.energy_drift},
                   {"noether_drift", worst.noether_drift},
                   {"mu_drift", worst.mu_drift},
                   {"constraint_drift", worst.constraint_drift},
                   {"reprojections", reprojections}}},
                 {"wall_clock_seconds", seconds_since(t0)}};
  write_text(dir / "report.json", report.dump(2) + "\n");

  std::printf("%s: t = %s of %s, energy drift %.3e, noether drift %.3e, mu drift %.3e", op.label.c_str(),
              num(final_time).c_str(), num(sc.integrator.T).c_str(), worst.energy_drift, worst.noether_drift,
              worst.mu_drift);
  if (sc.constraint) std::printf(", constraint drift %.3e", worst.constraint_drift);
  std::printf("\noutputs in %s\n", dir.string().c_str());
  if (blow_up) {
    std::fprintf(stderr, "blow-up at t = %s: %s\n", num(traj.final_time).c_str(), traj.message.c_str());
    return dynamical_failure;
  }
  return ok;
}

// --------------------------------------------------------------- check-symbol

int cmd_check_symbol(const std::string& scenario_path, const std::string& name,
                     const std::vector<std::string>& params, const std::string& table, double order, int nmax,
                     double ximax, const std::string& out) {
  json opj;
  fs::path base = fs::current_path();
  if (!scenario_path.empty()) {
    const Scenario sc = load_scenario(scenario_path);
    if (!sc.raw.contains("operator")) throw ConfigurationError("scenario: missing 'operator'");
    opj = sc.raw["operator"];
    base = fs::path(scenario_path).parent_path();
  } else if (!table.empty()) {
    opj = {{"table", table}};
  } else if (!name.empty()) {
    opj = {{"name", name}};
    for (const std::string& p : params) {
      const auto eq = p.find('=');
      if (eq == std::string::npos) throw ConfigurationError("--param expects key=value, got '" + p + "'");
      double v = 0.0;
      try {
        v = std::stod(p.substr(eq + 1));
      } catch (const std::exception&) {
        throw ConfigurationError("--param " + p + ": value is not a number");
      }
      opj["params"][p.substr(0, eq)] = v;
    }
  } else {
    throw ConfigurationError("check-symbol needs --scenario, --operator or --table");
  }
  if (!std::isnan(order)) opj["order"] = order;
  if (nmax < 1 || nmax > 12) throw ConfigurationError("--nmax must lie in [1, 12]");
  if (!(ximax > 0.0)) throw ConfigurationError("--ximax must be positive");
  const OperatorSpec op = parse_operator(opj, base);

  SymbolConditionReport rep;
  try {
    rep = symbol_condition_check(op.symbol, nmax, ximax);
  } catch (const UnsupportedOrder& e) {
    std::fprintf(stderr, "unsupported order: %s\n", e.what());
    return configuration_error;
  }
  const int kmax = 64;
  const OrderBound ob = order_bound_check(op.symbol, kmax);
  json rows = json::array();
  for (const auto& r : rep.per_n)
    rows.push_back({{"n", r.n}, {"sup", r.sup_ratio}, {"sup_half_range", r.sup_ratio_half}, {"pass", r.pass}});
  const bool pass = rep.overall_pass && ob.pass;
  const json report = {{"operator", op.echo},
                       {"order", op.symbol.order()},
                       {"n_max", nmax},
                       {"xi_max", ximax},
                       {"symbol_condition", {{"per_n", rows}, {"pass", rep.overall_pass}, {"notes", rep.notes}}},
                       {"order_bound", {{"k_max", kmax}, {"c_est", ob.c_est}, {"pass", ob.pass}}},
                       {"pass", pass}};
  const fs::path dir = output_dir(out, nullptr, "check-symbol");
  fs::create_directories(dir);
  write_text(dir / "check_symbol.json", report.dump(2) + "\n");
  for (const auto& r : rep.per_n)
    std::printf("n = %d: sup |f_n^(n)(xi)| / (1+xi^2)^((r-1)/2) = %.6g (half range %.6g) %s\n", r.n, r.sup_ratio,
                r.sup_ratio_half, r.pass ? "ok" : "FAIL");
  for (const auto& note : rep.notes) std::printf("note: %s\n", note.c_str());
  std::printf("order bound: C_est = %.6g %s\n", ob.c_est, ob.pass ? "ok" : "FAIL");
  std::printf("%s\n", pass ? "PASS" : "FAIL");
  return pass ? ok : verification_failed;
}

// --------------------------------------------------------------------- verify

int cmd_verify(const std::string& suite, std::uint64_t seed, const std::string& out) {
  std::vector<std::string> names;
  if (suite == "all") {
    names = suite_names();
  } else {
    const auto& all = suite_names();
    if (std::find(all.begin(), all.end(), suite) == all.end())
      throw ConfigurationError("unknown suite '" + suite + "'");
    names = {suite};
  }
  VerifyOptions opt;
  opt.seed = seed;
  json suites = json::array();
  bool all_pass = true;
  for (const auto& name : names) {
    const SuiteResult r = run_suite(name, opt);
    all_pass = all_pass && r.pass;
    std::printf("[%s] %-20s %.1f s\n", r.pass ? "PASS" : "FAIL", name.c_str(), r.seconds);
    json checks = json::array();
    for (const auto& c : r.checks) {
      if (!c.pass)
        std::printf("       failing property: %s (%.3e %s %.1e) %s\n", c.name.c_str(), c.value,
                    c.upper_bound ? "<=" : ">", c.threshold, c.detail.c_str());
      checks.push_back({{"name", c.name},
                        {"value", std::isfinite(c.value) ? json(c.value) : json(nullptr)},
                        {"threshold", c.threshold},
                        {"bound", c.upper_bound ? "upper" : "lower"},
                        {"pass", c.pass},
                        {"detail", c.detail}});
    }
    std::fflush(stdout);
    suites.push_back({{"suite", name}, {"pass", r.pass}, {"seconds", r.seconds}, {"checks", checks}});
  }
  const fs::path dir = output_dir(out, nullptr, "verify");
  fs::create_directories(dir);
  write_text(dir / "verify.json", json({{"seed", seed}, {"pass", all_pass}, {"suites", suites}}).dump(2) + "\n");
  return all_pass ? ok : verification_failed;
}

// ------------------------------------------------------------- expmap, logmap

void write_curve(const fs::path& dir, const std::string& stem, const std::vector<std::string>& columns,
                 const std::vector<std::vector<double>>& data) {
  std::ostringstream csv;
  for (size_t c = 0; c < columns.size(); ++c) csv << (c ? "," : "") << columns[c];
  csv << '\n';
  for (size_t j = 0; j < data[0].size(); ++j) {
    for (size_t c = 0; c < data.size(); ++c) csv << (c ? "," : "") << num(data[c][j]);
    csv << '\n';
  }
  write_text(dir / (stem + ".csv"), csv.str());
}

double exp_dt(const Scenario& sc, const char* section) {
  double dt = 1e-2;
  if (sc.raw.contains(section) && sc.raw[section].contains("dt")) {
    if (!sc.raw[section]["dt"].is_number()) throw ConfigurationError(std::string(section) + ".dt: expected a number");
    dt = sc.raw[section]["dt"].get<double>();
  }
  if (!(dt > 0.0 && dt <= 1.0)) throw ConfigurationError(std::string(section) + ".dt: must lie in (0, 1]");
  return dt;
}

int cmd_expmap(const std::string& scenario_path, const std::string& out) {
  const Scenario sc = load_scenario(scenario_path);
  const OperatorSpec& op = need_operator(sc);
  if (!sc.raw.contains("initial_condition")) throw ConfigurationError("scenario: missing 'initial_condition'");
  if (sc.raw.contains("exp")) {
    for (const auto& [key, value] : sc.raw["exp"].items())
      if (key != "dt") throw ConfigurationError("exp: unknown key '" + key + "'");
  }
  const PeriodicField v0 = parse_field(sc.raw["initial_condition"], sc.grid);
  const double dt = exp_dt(sc, "exp");
  Diffeo phi = Diffeo::identity(sc.grid);
  try {
    phi = exp_id(op.symbol, v0, dt);
  } catch (const OutsideDomain& e) {
    std::fprintf(stderr, "outside the domain of exp: %s\n", e.what());
    return dynamical_failure;
  }
  const fs::path dir = output_dir(out, &sc.raw, fs::path(scenario_path).stem().string());
  fs::create_directories(dir);
  write_curve(dir, "diffeo", {"x", "phi"}, {sc.grid.nodes(), phi.samples()});
  const json side = {{"kind", "diffeo"},
                     {"grid", grid_json(sc.grid)},
                     {"operator", op.echo},
                     {"convention", kConvention},
                     {"exp_dt", dt},
                     {"velocity", coefficients_json(v0)},
                     {"phi_minus_id", coefficients_json(phi.displacement())}};
  write_text(dir / "diffeo.json", side.dump(2) + "\n");
  std::printf("exp(v): min phi_x = %.6g, outputs in %s\n", phi.min_jacobian(), dir.string().c_str());
  return ok;
}

Diffeo load_target(const Scenario& sc) {
  if (!sc.raw.contains("target")) throw ConfigurationError("scenario: missing 'target'");
  const json& t = sc.raw["target"];
  if (!t.is_object() || t.size() != 1)
    throw ConfigurationError("target: give exactly one of 'file', 'rotation', 'coefficients'");
  if (t.contains("rotation")) {
    if (!t["rotation"].is_number()) throw ConfigurationError("target.rotation: expected a number");
    return Diffeo::rotation(sc.grid, t["rotation"].get<double>());
  }
  if (t.contains("coefficients")) return Diffeo(field_from_coefficients(t["coefficients"], sc.grid));
  if (!t.contains("file") || !t["file"].is_string())
    throw ConfigurationError("target: give exactly one of 'file', 'rotation', 'coefficients'");
  fs::path p = t["file"].get<std::string>();
  if (p.is_relative()) p = sc.source.parent_path() / p;
  std::ifstream in(p);
  if (!in) throw ConfigurationError("target.file: cannot open " + p.string());
  json side;
  try {
    side = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigurationError("target.file: " + std::string(e.what()));
  }
  if (!side.contains("phi_minus_id") || !side.contains("grid"))
    throw ConfigurationError("target.file: not a diffeo file written by expmap");
  if (side["grid"]["n_points"] != sc.grid.n_points())
    throw ConfigurationError("target.file: grid differs from the scenario grid");
  return Diffeo(field_from_coefficients(side["phi_minus_id"], sc.grid));
}

int cmd_logmap(const std::string& scenario_path, const std::string& out) {
  const Scenario sc = load_scenario(scenario_path);
  const OperatorSpec& op = need_operator(sc);
  LogOptions lo;
  lo.dt = exp_dt(sc, "log");
  int max_iter = 20;
  double tol = 1e-12;
  double s = std::nan("");
  if (sc.raw.contains("log")) {
    const json& l = sc.raw["log"];
    for (const auto& [key, value] : l.items()) {
      if (key == "dt") continue;
      if (!value.is_number()) throw ConfigurationError("log." + key + ": expected a number");
      if (key == "k_newton") lo.k_newton = value.get<int>();
      else if (key == "fd_step") lo.fd_step = value.get<double>();
      else if (key == "max_iter") max_iter = value.get<int>();
      else if (key == "tol") tol = value.get<double>();
      else if (key == "sobolev_s") s = value.get<double>();
      else throw ConfigurationError("log: unknown key '" + key + "'");
    }
  }
  if (lo.k_newton < 0 || max_iter < 0 || !(tol > 0.0) || !(lo.fd_step > 0.0))
    throw ConfigurationError("log: k_newton, max_iter >= 0 and tol, fd_step > 0 required");
  const Diffeo target = load_target(sc);
  const PeriodicField guess = sc.raw.contains("initial_condition")
                                  ? parse_field(sc.raw["initial_condition"], sc.grid)
                                  : target.displacement();
  const LogResult lr = log_map(op.symbol, target, guess, max_iter, tol, lo);

  const fs::path dir = output_dir(out, &sc.raw, fs::path(scenario_path).stem().string());
  fs::create_directories(dir);
  write_curve(dir, "velocity", {"x", "v"}, {sc.grid.nodes(), lr.v.samples()});
  json side = {{"kind", "velocity"},
               {"grid", grid_json(sc.grid)},
               {"operator", op.echo},
               {"convention", kConvention},
               {"converged", lr.converged},
               {"iterations", lr.iterations},
               {"residual", std::isfinite(lr.residual) ? json(lr.residual) : json(nullptr)},
               {"velocity", coefficients_json(lr.v)}};
  if (!std::isnan(s)) side["sobolev_norm"] = {{"s", s}, {"rho", sobolev_norm(lr.v, s)}};
  write_text(dir / "velocity.json", side.dump(2) + "\n");
  std::printf("log: %s after %d iterations, residual %.3e, outputs in %s\n",
              lr.converged ? "converged" : "NOT converged", lr.iterations, lr.residual, dir.string().c_str());
  return lr.converged ? ok : dynamical_failure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geodesic flows of right-invariant Sobolev metrics on the circle diffeomorphism group"};
  app.require_subcommand(1);
  std::string scenario, out, suite = "all", op_name, table;
  std::vector<std::string> params;
  std::uint64_t seed = VerifyOptions{}.seed;
  int nmax = 4;
  double ximax = 32.0, order = std::nan("");

  auto* sim = app.add_subcommand("simulate", "integrate a scenario and write snapshots, diagnostics, report");
  sim->add_option("--scenario", scenario, "scenario JSON file")->required();
  sim->add_option("--out", out, "output directory");

  auto* chk = app.add_subcommand("check-symbol", "check the symbol conditions of an operator");
  chk->add_option("--scenario", scenario, "scenario JSON file (its 'operator' section is used)");
  chk->add_option("--operator", op_name, "built-in operator name");
  chk->add_option("--param", params, "operator parameter key=value");
  chk->add_option("--table", table, "symbol table file");
  chk->add_option("--order", order, "override the declared order");
  chk->add_option("--nmax", nmax, "highest n checked")->capture_default_str();
  chk->add_option("--ximax", ximax, "sampled range [-ximax, ximax]")->capture_default_str();
  chk->add_option("--out", out, "output directory");

  auto* ver = app.add_subcommand("verify", "run property suites");
  ver->add_option("--suite", suite, "suite name or 'all'")->capture_default_str();
  ver->add_option("--seed", seed, "random seed")->capture_default_str();
  ver->add_option("--out", out, "output directory");

  auto* exm = app.add_subcommand("expmap", "time-one map of the geodesic from the identity");
  exm->add_option("--scenario", scenario, "scenario JSON file")->required();
  exm->add_option("--out", out, "output directory");

  auto* lgm = app.add_subcommand("logmap", "initial velocity of the geodesic reaching a target");
  lgm->add_option("--scenario", scenario, "scenario JSON file")->required();
  lgm->add_option("--out", out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : configuration_error;
  }

  try {
    if (*sim) return cmd_simulate(scenario, out);
    if (*chk) return cmd_check_symbol(scenario, op_name, params, table, order, nmax, ximax, out);
    if (*ver) return cmd_verify(suite, seed, out);
    if (*exm) return cmd_expmap(scenario, out);
    if (*lgm) return cmd_logmap(scenario, out);
  } catch (const Error& e) {
    const bool dynamical = dynamic_cast<const OutsideDomain*>(&e) || dynamic_cast<const OutsideNormalNeighborhood*>(&e) ||
                           dynamic_cast<const ConstraintDriftError*>(&e) || dynamic_cast<const RangeViolation*>(&e) ||
                           dynamic_cast<const InternalConsistencyError*>(&e);
    std::fprintf(stderr, "%s: %s\n", dynamical ? "error" : "configuration error", e.what());
    return dynamical ? dynamical_failure : configuration_error;
  } catch (const fs::filesystem_error& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return configuration_error;
  }
  return configuration_error;
}
