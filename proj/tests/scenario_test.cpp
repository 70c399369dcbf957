#include <doctest.h>

#include <charconv>
#include <random>
#include <sstream>

#include "diffs1/errors.hpp"
#include "diffs1/verify.hpp"
#include "scenario.hpp"

using namespace diffs1;
using namespace diffs1::cli;

TEST_CASE("scenario parsing") {
  const json ok = json::parse(R"({
    "operator": {"name": "lambda_2s", "params": {"s": 0.75}},
    "grid": {"n_points": 64},
    "constraint": {"kind": "fix3"},
    "initial_condition": {"coefficients": [[2, 0.1, 0.0], [3, 0.0, -0.05]]},
    "integrator": {"dt": 0.01, "T": 0.5, "snapshot_every": 5}
  })");
  const Scenario sc = parse_scenario(ok, ".");
  CHECK(sc.grid.n_points() == 64);
  REQUIRE(sc.op.has_value());
  CHECK(sc.op->symbol.at(1).real() == doctest::Approx(std::pow(2.0, 0.75)));
  REQUIRE(sc.constraint.has_value());
  CHECK(sc.constraint->kind() == Constraint::Kind::fix3);
  CHECK(sc.integrator.snapshot_every == 5);
  const PeriodicField u = parse_field(ok["initial_condition"], sc.grid);
  CHECK(u.coeff(3) == cplx(0.0, -0.05));

  auto bad = [&](const char* patch) {
    json j = ok;
    j.merge_patch(json::parse(patch));
    CHECK_THROWS_AS(parse_scenario(j, "."), ConfigurationError);
  };
  bad(R"({"grid": {"n_points": 63}})");
  bad(R"({"integrator": {"dt": -1}})");
  bad(R"({"integrator": {"dtt": 1}})");
  bad(R"({"operator": {"name": "nope"}})");
  bad(R"({"operator": {"name": "lambda_2s", "params": null}})");
  bad(R"({"constraint": {"kind": "fix2"}})");
  bad(R"({"surprise": 1})");
  bad(R"({"operator": {"table": "does/not/exist.txt", "name": null, "params": null}})");
  CHECK_THROWS_AS(parse_field(json::parse(R"({"coefficients": [[40, 1, 0]]})"), GridSpec(64)), ConfigurationError);
  CHECK_THROWS_AS(parse_field(json::parse(R"({"coefficients": [[0, 1, 1]]})"), GridSpec(64)), ConfigurationError);
  CHECK_THROWS_AS(parse_field(json::parse(R"({"preset": "warp"})"), GridSpec(64)), ConfigurationError);
}

TEST_CASE("snapshot files reproduce their samples exactly") {
  const GridSpec g(32);
  std::mt19937_64 rng(41);
  const Snapshot s{0.125, random_field(g, rng, 10), random_field_l2(g, rng, 6, 0.1), random_field(g, rng, 10),
                   random_field(g, rng, 10)};
  const std::string csv = snapshot_csv(s);
  const json side = json::parse(snapshot_sidecar(s, json{{"name", "ch"}}).dump());
  CHECK(side["convention"] == "period 2π, factor i");
  const Snapshot back = read_snapshot_sidecar(side);
  CHECK(back.time == 0.125);
  CHECK(snapshot_csv(back) == csv);

  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "x,u,phi,v,m");
  const auto u = back.u.samples();
  int j = 0;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    const auto comma2 = line.find(',', comma + 1);
    double val = 0.0;
    std::from_chars(line.data() + comma + 1, line.data() + comma2, val);
    CHECK(val == u[static_cast<size_t>(j++)]);
  }
  CHECK(j == g.n_points());
}
