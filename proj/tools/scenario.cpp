#include "scenario.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "diffs1/errors.hpp"

namespace diffs1::cli {

namespace fs = std::filesystem;

namespace {

void only_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigurationError(where + ": expected an object");
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw ConfigurationError(where + ": unknown key '" + key + "'");
}

double number(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ConfigurationError(where + ": missing '" + key + "'");
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigurationError(where + "." + key + ": expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigurationError(where + "." + key + ": not finite");
  return d;
}

double number_or(const json& j, const std::string& key, double fallback, const std::string& where) {
  return j.contains(key) ? number(j, key, where) : fallback;
}

int integer(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ConfigurationError(where + ": missing '" + key + "'");
  const json& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigurationError(where + "." + key + ": expected an integer");
  return v.get<int>();
}

}  // namespace

std::string num(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

OperatorSpec parse_operator(const json& j, const fs::path& base_dir) {
  only_keys(j, "operator", {"name", "params", "table", "order"});
  OperatorSpec spec{"", j, symbols::identity()};
  if (j.contains("table")) {
    if (!j["table"].is_string()) throw ConfigurationError("operator.table: expected a path");
    fs::path p = j["table"].get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    if (!fs::exists(p)) throw ConfigurationError("operator.table: file not found: " + p.string());
    spec.symbol = symbols::from_table_file(p.string());
  } else {
    if (!j.contains("name") || !j["name"].is_string())
      throw ConfigurationError("operator: need 'name' or 'table'");
    std::map<std::string, double> params;
    if (j.contains("params")) {
      if (!j["params"].is_object()) throw ConfigurationError("operator.params: expected an object");
      for (const auto& [key, value] : j["params"].items()) params[key] = number(j["params"], key, "operator.params");
    }
    spec.symbol = symbols::by_name(j["name"].get<std::string>(), params);
  }
  if (j.contains("order")) spec.symbol = spec.symbol.with_order(number(j, "order", "operator"));
  spec.label = spec.symbol.name();
  return spec;
}

PeriodicField field_from_coefficients(const json& coeffs, GridSpec grid) {
  if (!coeffs.is_array()) throw ConfigurationError("coefficients: expected [[k, re, im], ...]");
  PeriodicField u(grid);
  std::set<int> seen;
  for (const json& row : coeffs) {
    if (!row.is_array() || row.size() != 3 || !row[0].is_number_integer() || !row[1].is_number() ||
        !row[2].is_number())
      throw ConfigurationError("coefficients: each entry must be [k, re, im] with integer k");
    const int k = row[0].get<int>();
    if (k < 0) throw ConfigurationError("coefficients: give k >= 0 only (the field is real)");
    if (k > grid.band())
      throw ConfigurationError("coefficients: mode " + std::to_string(k) + " exceeds the band K = " +
                               std::to_string(grid.band()));
    if (!seen.insert(k).second) throw ConfigurationError("coefficients: mode " + std::to_string(k) + " repeated");
    const double re = row[1].get<double>(), im = row[2].get<double>();
    if (!std::isfinite(re) || !std::isfinite(im)) throw ConfigurationError("coefficients: not finite");
    if (k == 0 && im != 0.0) throw ConfigurationError("coefficients: mode 0 must be real");
    u.set_mode(k, cplx(re, im));
  }
  return u;
}

json coefficients_json(const PeriodicField& u) {
  json out = json::array();
  for (int k = 0; k <= u.band(); ++k) out.push_back({k, u.coeff(k).real(), u.coeff(k).imag()});
  return out;
}

PeriodicField parse_field(const json& j, GridSpec grid) {
  only_keys(j, "field", {"preset", "coefficients", "scale", "k", "cos", "sin"});
  PeriodicField u(grid);
  if (j.contains("coefficients")) {
    if (j.contains("preset")) throw ConfigurationError("field: give either 'preset' or 'coefficients'");
    u = field_from_coefficients(j["coefficients"], grid);
  } else {
    if (!j.contains("preset") || !j["preset"].is_string())
      throw ConfigurationError("field: need 'preset' or 'coefficients'");
    const std::string preset = j["preset"].get<std::string>();
    if (preset == "zero") {
    } else if (preset == "ch_reference") {
      u = PeriodicField::harmonic(grid, 1, 0.2, 0.0) + PeriodicField::harmonic(grid, 2, 0.0, 0.1);
    } else if (preset == "harmonic") {
      const int k = integer(j, "k", "field");
      if (k < 0 || k > grid.band()) throw ConfigurationError("field.k: outside the band");
      u = PeriodicField::harmonic(grid, k, number_or(j, "cos", 0.0, "field"), number_or(j, "sin", 0.0, "field"));
    } else {
      throw ConfigurationError("field: unknown preset '" + preset + "' (zero, ch_reference, harmonic)");
    }
  }
  return number_or(j, "scale", 1.0, "field") * u;
}

Scenario parse_scenario(const json& j, const fs::path& base_dir) {
  only_keys(j, "scenario",
            {"description", "operator", "grid", "constraint", "initial_condition", "integrator", "outputs", "exp",
             "log", "target"});
  Scenario sc;
  sc.raw = j;
  if (j.contains("grid")) {
    only_keys(j["grid"], "grid", {"n_points"});
    const int n = integer(j["grid"], "n_points", "grid");
    if (n > (1 << 16)) throw ConfigurationError("grid.n_points: at most 65536");
    sc.grid = GridSpec(n);
  }
  if (j.contains("operator")) sc.op = parse_operator(j["operator"], base_dir);
  if (j.contains("constraint")) {
    const json& c = j["constraint"];
    only_keys(c, "constraint", {"kind", "points"});
    const std::string kind = c.value("kind", "none");
    std::vector<double> pts;
    if (c.contains("points")) {
      if (!c["points"].is_array()) throw ConfigurationError("constraint.points: expected an array");
      for (const json& p : c["points"]) {
        if (!p.is_number()) throw ConfigurationError("constraint.points: expected numbers");
        pts.push_back(p.get<double>());
      }
    }
    if (kind == "fix1") {
      if (pts.size() > 1) throw ConfigurationError("constraint fix1 takes one point");
      sc.constraint = Constraint::fix1(sc.grid, pts.empty() ? 0.0 : pts[0]);
    } else if (kind == "fix3") {
      sc.constraint = Constraint::fix3(sc.grid, pts);
    } else if (kind != "none") {
      throw ConfigurationError("constraint.kind: expected none, fix1 or fix3");
    } else if (!pts.empty()) {
      throw ConfigurationError("constraint: points given for kind none");
    }
  }
  if (j.contains("integrator")) {
    const json& in = j["integrator"];
    only_keys(in, "integrator", {"dt", "T", "adaptive", "adaptive_tol", "snapshot_every"});
    sc.integrator.dt = number_or(in, "dt", sc.integrator.dt, "integrator");
    sc.integrator.T = number_or(in, "T", sc.integrator.T, "integrator");
    if (in.contains("adaptive")) {
      if (!in["adaptive"].is_boolean()) throw ConfigurationError("integrator.adaptive: expected true/false");
      sc.integrator.adaptive = in["adaptive"].get<bool>();
    }
    sc.integrator.adaptive_tol = number_or(in, "adaptive_tol", sc.integrator.adaptive_tol, "integrator");
    sc.integrator.snapshot_every = in.contains("snapshot_every") ? integer(in, "snapshot_every", "integrator") : 100;
  } else {
    sc.integrator.snapshot_every = 100;
  }
  if (!(sc.integrator.dt > 0.0)) throw ConfigurationError("integrator.dt: must be positive");
  if (!(sc.integrator.T > 0.0)) throw ConfigurationError("integrator.T: must be positive");
  if (sc.integrator.T / sc.integrator.dt > 1e8) throw ConfigurationError("integrator: more than 1e8 steps");
  if (sc.integrator.snapshot_every < 0) throw ConfigurationError("integrator.snapshot_every: must be >= 0");
  if (!(sc.integrator.adaptive_tol > 0.0)) throw ConfigurationError("integrator.adaptive_tol: must be positive");
  if (j.contains("outputs")) {
    only_keys(j["outputs"], "outputs", {"directory", "formats"});
    if (j["outputs"].contains("formats")) {
      for (const json& f : j["outputs"]["formats"])
        if (!f.is_string() || (f != "csv" && f != "json"))
          throw ConfigurationError("outputs.formats: entries must be \"csv\" or \"json\"");
    }
  }
  return sc;
}

Scenario load_scenario(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open scenario file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigurationError("scenario " + path.string() + ": " + e.what());
  }
  Scenario sc = parse_scenario(j, path.parent_path());
  sc.source = path;
  return sc;
}

fs::path output_dir(const std::string& cli_out, const json* scenario, const std::string& stem) {
  if (!cli_out.empty()) return cli_out;
  if (scenario && scenario->contains("outputs") && (*scenario)["outputs"].contains("directory"))
    return (*scenario)["outputs"]["directory"].get<std::string>();
  if (const char* root = std::getenv("DIFFS1_OUT"); root && *root) return fs::path(root) / stem;
  return fs::path("diffs1_out") / stem;
}

std::string snapshot_csv(const Snapshot& s) {
  const GridSpec grid = s.u.grid();
  const auto x = grid.nodes();
  const auto u = s.u.samples(), f = s.phi_minus_id.samples(), v = s.v.samples(), m = s.m.samples();
  std::ostringstream csv;
  csv << "x,u,phi,v,m\n";
  for (size_t j = 0; j < x.size(); ++j)
    csv << num(x[j]) << ',' << num(u[j]) << ',' << num(x[j] + f[j]) << ',' << num(v[j]) << ',' << num(m[j]) << '\n';
  return csv.str();
}

json snapshot_sidecar(const Snapshot& s, const json& operator_echo) {
  const GridSpec grid = s.u.grid();
  return {{"time", s.time},
          {"grid", {{"n_points", grid.n_points()}, {"band", grid.band()}}},
          {"operator", operator_echo},
          {"convention", kConvention},
          {"columns", {"x", "u", "phi", "v", "m"}},
          {"coefficients",
           {{"u", coefficients_json(s.u)},
            {"phi_minus_id", coefficients_json(s.phi_minus_id)},
            {"v", coefficients_json(s.v)},
            {"m", coefficients_json(s.m)}}}};
}

Snapshot read_snapshot_sidecar(const json& j) {
  try {
    const GridSpec grid(j.at("grid").at("n_points").get<int>());
    const json& c = j.at("coefficients");
    return {j.at("time").get<double>(), field_from_coefficients(c.at("u"), grid),
            field_from_coefficients(c.at("phi_minus_id"), grid), field_from_coefficients(c.at("v"), grid),
            field_from_coefficients(c.at("m"), grid)};
  } catch (const json::exception& e) {
    throw ConfigurationError(std::string("snapshot sidecar: ") + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigurationError("cannot write " + path.string());
  out << text;
}

}  // namespace diffs1::cli
