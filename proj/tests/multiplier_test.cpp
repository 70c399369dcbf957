#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "diffs1/errors.hpp"
#include "diffs1/multiplier.hpp"

using namespace diffs1;

TEST_CASE("apply on harmonics") {
  const GridSpec g(32);
  const auto c = PeriodicField::harmonic(g, 1, 1.0, 0.0);
  CHECK(l2_norm(apply(symbols::ch(), c) - 2.0 * c) < 1e-15);
  CHECK(apply(symbols::hs(), PeriodicField::constant(g, 4.0)).max_abs_coeff() == 0.0);
  const auto s3 = PeriodicField::harmonic(g, 3, 0.0, 1.0);
  CHECK(l2_norm(apply(symbols::clm(), s3) - 3.0 * s3) < 1e-15);
  // hilbert o D = |k|
  CHECK(l2_norm(apply(symbols::hilbert(), differentiate(s3)) - apply(symbols::clm(), s3)) < 1e-15);
  CHECK(l2_norm(apply(symbols::hilbert(), c) - PeriodicField::harmonic(g, 1, 0.0, 1.0)) < 1e-15);
}

TEST_CASE("built-in symbol values") {
  CHECK(symbols::wp().at(2) == cplx(6.0, 0.0));
  CHECK(symbols::wp().at(-1) == cplx(0.0, 0.0));
  CHECK(symbols::lambda_2s(0.5).at(3).real() == doctest::Approx(std::sqrt(10.0)));
  CHECK(symbols::frac(1.5).at(0).real() == 1.0);
  CHECK(symbols::frac(1.5).at(4).real() == doctest::Approx(8.0));
  CHECK(symbols::frac(2.0).at_real(0.0).real() == doctest::Approx(1.0));
  CHECK(symbols::frac(2.0).at_real(1.5).real() == doctest::Approx(2.25));
  CHECK(symbols::hs().kernel_modes() == std::set<int>{0});
  CHECK(symbols::wp().kernel_modes() == std::set<int>{-1, 0, 1});
  CHECK(symbols::by_name("lambda_2s", {{"s", 1.0}}).at(2).real() == 5.0);
  CHECK_THROWS_AS(symbols::by_name("lambda_2s"), ConfigurationError);
  CHECK_THROWS_AS(symbols::by_name("nope"), ConfigurationError);
  CHECK_FALSE(symbols::hilbert().is_real());
}

TEST_CASE("invert_on_range") {
  const GridSpec g(32);
  const auto c = PeriodicField::harmonic(g, 1, 1.0, 0.0);
  CHECK(l2_norm(invert_on_range(symbols::ch(), 2.0 * c) - c) < 1e-15);
  CHECK(l2_norm(invert_on_range(symbols::hs(), c) - c) < 1e-15);
  CHECK_THROWS_AS(invert_on_range(symbols::hs(), PeriodicField::constant(g, 1.0)), RangeViolation);
  try {
    invert_on_range(symbols::wp(), PeriodicField::harmonic(g, 1, 0.0, 1.0) + PeriodicField::harmonic(g, 2, 1.0, 0.0));
    FAIL("expected RangeViolation");
  } catch (const RangeViolation& e) {
    CHECK(std::abs(e.mode()) == 1);
  }
}

TEST_CASE("order bound") {
  const OrderBound a = order_bound_check(symbols::lambda_2s(1.0), 64);
  CHECK(a.pass);
  CHECK(a.c_est == doctest::Approx(1.0));
  const OrderBound b = order_bound_check(symbols::clm(), 64);
  CHECK(b.pass);
  CHECK(b.c_est <= 1.0);
  CHECK_FALSE(order_bound_check(symbols::hs().with_order(1.0), 64).pass);
  CHECK(order_bound_check(symbols::hs(), 64).pass);
}

TEST_CASE("symbol condition checker") {
  const auto lam = symbol_condition_check(symbols::lambda_2s(1.0), 4, 32.0);
  CHECK(lam.overall_pass);
  CHECK(lam.per_n.size() == 4);
  // f_n = xi^{n-1} (1 + xi^2) = xi^{n-1} + xi^{n+1}: f_n^(n)(xi) = (n+1)! xi
  for (int n = 1; n <= 4; ++n) {
    double fact = 1.0;
    for (int j = 2; j <= n + 1; ++j) fact *= j;
    CHECK(symbol_fn_derivative(symbols::lambda_2s(1.0), n, 2.5) == doctest::Approx(fact * 2.5).epsilon(1e-6));
    CHECK(symbol_fn_derivative(symbols::hs(), n, -1.75) == doctest::Approx(fact * -1.75).epsilon(1e-6));
  }
  const auto hs = symbol_condition_check(symbols::hs(), 3, 32.0);
  CHECK(hs.overall_pass);
  const auto wp = symbol_condition_check(symbols::wp(), 3, 32.0);
  CHECK(wp.overall_pass);
  CHECK_FALSE(wp.notes.empty());
  CHECK_THROWS_AS(symbol_condition_check(symbols::frac(0.5), 4, 32.0), UnsupportedOrder);
  CHECK_THROWS_AS(symbol_condition_check(symbols::hilbert(), 2, 8.0), UnsupportedOrder);
}

TEST_CASE("table symbols") {
  const auto path = std::filesystem::temp_directory_path() / "diffs1_table_test.txt";
  {
    std::ofstream f(path);
    f << "# k^2 + 1\nname tab\norder 2\nextension linear\n";
    for (int k = 0; k <= 6; ++k) f << k << ' ' << (1 + k * k) << '\n';
  }
  const auto t = symbols::from_table_file(path.string());
  CHECK(t.name() == "tab");
  CHECK(t.order() == 2.0);
  for (int k = -6; k <= 6; ++k) CHECK(t.at(k).real() == doctest::Approx(1.0 + k * k));
  // tail c (1+k^2)^{r/2} matched at k = 6 reproduces 1 + k^2 exactly
  CHECK(t.at(10).real() == doctest::Approx(101.0));
  CHECK(t.at_real(2.5).real() == doctest::Approx(0.5 * (5.0 + 10.0)));
  std::filesystem::remove(path);
  CHECK_THROWS_AS(symbols::from_table_file("/nonexistent/table"), ConfigurationError);
  CHECK_THROWS_AS(symbols::from_table("x", 2.0, {1.0}, false), ConfigurationError);
}

TEST_CASE("multipliers commute with D and rotations; inversion on the range") {
  const GridSpec g(64);
  std::mt19937_64 rng(18);
  std::uniform_real_distribution<double> u01(0.5, 2.0);
  std::normal_distribution<double> n01;
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> tab;
    for (int k = 0; k <= 40; ++k) tab.push_back(u01(rng));
    const auto P = symbols::from_table("random", 0.0, tab, trial % 2 == 0);
    PeriodicField u(g);
    u.set_mode(0, n01(rng));
    for (int k = 1; k <= g.band(); ++k) u.set_mode(k, cplx(n01(rng), n01(rng)));
    CHECK(l2_norm(differentiate(apply(P, u)) - apply(P, differentiate(u))) <= 1e-12 * l2_norm(differentiate(u)));
    CHECK(coeff_distance(rotate(apply(P, u), 0.7), apply(P, rotate(u, 0.7))) <= 1e-14 * u.max_abs_coeff() * 4.0);
    for (const auto& A : {symbols::ch(), symbols::wp(), symbols::clm(), P}) {
      PeriodicField w = u;
      for (int k : A.kernel_modes())
        if (k >= 0) w.set_mode(k, 0.0);
      CHECK(l2_norm(invert_on_range(A, apply(A, w)) - w) <= 1e-12 * l2_norm(w));
    }
  }
}
