#pragma once

// Property suites that exercise the library against its internal oracles.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "diffs1/spectral.hpp"

namespace diffs1 {

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  /// true: pass iff value <= threshold; false: pass iff value > threshold.
  bool upper_bound = true;
  bool pass = false;
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  std::uint64_t seed = 0;
  double seconds = 0.0;
  bool pass = false;
  std::vector<Check> checks;
};

struct VerifyOptions {
  std::uint64_t seed = 20240917;
};

/// Names accepted by run_suite, in execution order of "all".
const std::vector<std::string>& suite_names();

/// Throws ConfigurationError for an unknown name.
SuiteResult run_suite(const std::string& name, const VerifyOptions& opt = {});

/// Real field with c_0 ~ N(0,1) and c_k ~ (N(0,1) + i N(0,1)) / (1+k)^2 for 1 <= k <= kmax.
PeriodicField random_field(GridSpec grid, std::mt19937_64& rng, int kmax);

/// random_field scaled to the given L2 norm.
PeriodicField random_field_l2(GridSpec grid, std::mt19937_64& rng, int kmax, double l2);

}  // namespace diffs1
