#pragma once

// Scenario files (JSON) and field/diffeo serialization for the command-line tool.

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "diffs1/geodesic.hpp"
#include "diffs1/homogeneous.hpp"

namespace diffs1::cli {

using nlohmann::json;

enum ExitCode : int { ok = 0, verification_failed = 1, configuration_error = 2, dynamical_failure = 3 };

struct OperatorSpec {
  std::string label;
  json echo;
  MultiplierSymbol symbol;
};

struct Scenario {
  std::filesystem::path source;
  json raw;
  GridSpec grid{64};
  std::optional<OperatorSpec> op;
  std::optional<Constraint> constraint;
  IntegratorOptions integrator;
};

/// Reads and validates the common sections; throws ConfigurationError.
Scenario load_scenario(const std::filesystem::path& path);
Scenario parse_scenario(const json& j, const std::filesystem::path& base_dir);

OperatorSpec parse_operator(const json& j, const std::filesystem::path& base_dir);

/// {"preset": "zero" | "ch_reference" | "harmonic", ...} or {"coefficients": [[k, re, im], ...]},
/// optionally with "scale".
PeriodicField parse_field(const json& j, GridSpec grid);

/// [[k, re, im], ...] for k = 0..K.
json coefficients_json(const PeriodicField& u);
PeriodicField field_from_coefficients(const json& coeffs, GridSpec grid);

/// Output directory: --out, else the scenario's outputs.directory, else
/// $DIFFS1_OUT/<stem>, else ./diffs1_out/<stem>.
std::filesystem::path output_dir(const std::string& cli_out, const json* scenario, const std::string& stem);

struct Snapshot {
  double time = 0.0;
  PeriodicField u, phi_minus_id, v, m;
};

inline constexpr const char* kConvention = "period 2π, factor i";

/// Columns x,u,phi,v,m at the grid nodes, shortest round-trip decimal.
std::string snapshot_csv(const Snapshot& s);
/// Metadata plus the Fourier coefficients the CSV columns are synthesized from.
json snapshot_sidecar(const Snapshot& s, const json& operator_echo);
/// Inverse of snapshot_sidecar; throws ConfigurationError on malformed input.
Snapshot read_snapshot_sidecar(const json& j);

void write_text(const std::filesystem::path& path, const std::string& text);

/// Deterministic shortest round-trip formatting of a double.
std::string num(double v);

}  // namespace diffs1::cli
