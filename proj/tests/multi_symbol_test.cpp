#include <doctest.h>

#include <algorithm>
#include <random>

#include "diffs1/diffeo.hpp"
#include "diffs1/errors.hpp"
#include "diffs1/multi_symbol.hpp"
#include "diffs1/verify.hpp"

using namespace diffs1;

TEST_CASE("hand-evaluated multi-symbols of k^2") {
  const MultiSymbolTable t(symbols::hs());
  const int a[] = {1, 1};
  CHECK(std::abs(p_n_recursive(t, 1, a) - cplx(0.0, -3.0)) < 1e-14);
  CHECK(std::abs(p_n_closed(t, 1, a) - cplx(0.0, -3.0)) < 1e-14);
  const int b[] = {1, 1, 1};
  CHECK(std::abs(p_n_recursive(t, 2, b) - cplx(-12.0, 0.0)) < 1e-14);
  CHECK(std::abs(p_n_closed(t, 2, b) - cplx(-12.0, 0.0)) < 1e-14);
}

TEST_CASE("constant directions give zero") {
  for (const auto& P : {symbols::hs(), symbols::ch(), symbols::lambda_2s(0.3), symbols::wp()}) {
    const MultiSymbolTable t(P);
    for (int m0 = -5; m0 <= 5; ++m0) {
      const int a[] = {m0, 0};
      CHECK(p_n_recursive(t, 1, a) == cplx(0.0, 0.0));
      CHECK(p_n_closed(t, 1, a) == cplx(0.0, 0.0));
      const int b[] = {m0, 0, 0};
      CHECK(p_n_closed(t, 2, b) == cplx(0.0, 0.0));
      CHECK(p_n_recursive(t, 2, b) == cplx(0.0, 0.0));
    }
  }
}

TEST_CASE("recursion and closed form agree as integer combinations") {
  std::vector<int> m;
  for (int n = 1; n <= 3; ++n) {
    m.assign(static_cast<size_t>(n + 1), -4);
    while (true) {
      REQUIRE(recursive_combination(n, m) == closed_combination(n, m));
      size_t j = 0;
      while (j < m.size() && ++m[j] > 4) m[j++] = -4;
      if (j == m.size()) break;
    }
  }
  const MultiSymbolTable t(symbols::ch());
  const int c[] = {2, 1, -1};
  CHECK(p_n_closed(t, 2, c) == p_n_recursive(t, 2, c));
}

TEST_CASE("closed form is symmetric in the directions") {
  const MultiSymbolTable t(symbols::lambda_2s(0.375));
  std::vector<int> m = {3, -2, 5, 1};
  const cplx ref = p_n_closed(t, 3, m);
  std::sort(m.begin() + 1, m.end());
  do {
    CHECK(std::abs(p_n_closed(t, 3, m) - ref) <= 1e-12 * std::abs(ref));
  } while (std::next_permutation(m.begin() + 1, m.end()));
}

TEST_CASE("apply_P_n") {
  const GridSpec g(64);
  std::mt19937_64 rng(11);
  const MultiSymbolTable t(symbols::hs());
  const PeriodicField u = random_field(g, rng, 8);
  const std::vector<PeriodicField> one = {u};
  CHECK(l2_norm(apply_P_n(t, 0, one) - apply(symbols::hs(), u)) < 1e-13);
  const std::vector<PeriodicField> with_const = {u, PeriodicField::constant(g, 2.0)};
  CHECK(l2_norm(apply_P_n(t, 1, with_const)) < 1e-13);

  // P_1(u0, u1) = u1 P(D u0) - P(u1 D u0)
  for (const auto& P : {symbols::hs(), symbols::ch(), symbols::lambda_2s(0.75)}) {
    const MultiSymbolTable tp(P);
    const PeriodicField c = PeriodicField::harmonic(g, 1, 1.0, 0.0);
    const PeriodicField u0 = random_field(g, rng, 10), u1 = random_field(g, rng, 10);
    for (const auto& [a, b] : {std::pair{c, c}, std::pair{u0, u1}}) {
      const PeriodicField oracle = multiply(b, apply(P, differentiate(a))) - apply(P, multiply(b, differentiate(a)));
      const std::vector<PeriodicField> args = {a, b};
      CHECK(l2_norm(apply_P_n(tp, 1, args) - oracle) <= 1e-12 * l2_norm(oracle));
    }
  }
  const std::vector<PeriodicField> wide = {PeriodicField::harmonic(g, 20, 1.0, 0.0), u};
  CHECK_THROWS_AS(apply_P_n(t, 1, wide), ResolutionError);
  CHECK_THROWS_AS(apply_P_n(t, 2, wide), ConfigurationError);
}

TEST_CASE("second multi-symbol is the second derivative of the conjugated operator") {
  const GridSpec g(64);
  std::mt19937_64 rng(5);
  for (const auto& A : {symbols::ch(), symbols::lambda_2s(0.75)}) {
    const MultiSymbolTable t(A);
    const PeriodicField v = random_field(g, rng, 6);
    const PeriodicField d = random_field_l2(g, rng, 6, 0.3);
    const double eps = 1e-3;
    const PeriodicField fd = (1.0 / (eps * eps)) * (conjugate_apply(A, Diffeo(eps * d), v) - 2.0 * apply(A, v) +
                                                    conjugate_apply(A, Diffeo(-eps * d), v));
    const std::vector<PeriodicField> args = {v, d, d};
    const PeriodicField p2 = apply_P_n(t, 2, args);
    CHECK(l2_norm(fd - p2) <= 1e-4 * l2_norm(p2));
  }
}

TEST_CASE("apply_P_n is symmetric in its directions") {
  const GridSpec g(64);
  std::mt19937_64 rng(19);
  const MultiSymbolTable t(symbols::lambda_2s(0.75));
  const PeriodicField u0 = random_field(g, rng, 7), a = random_field(g, rng, 7), b = random_field(g, rng, 7);
  const std::vector<PeriodicField> x = {u0, a, b}, y = {u0, b, a};
  const PeriodicField p = apply_P_n(t, 2, x);
  CHECK(l2_norm(p - apply_P_n(t, 2, y)) <= 1e-12 * l2_norm(p));
}

TEST_CASE("operator-level recursion of the multilinear operators") {
  // P_{n+1}(u_0..u_{n+1}) = [u_{n+1} D, P_n(., u_1..u_n)] u_0 - sum_k P_n(u_0, .., u_{n+1} D u_k, .., u_n)
  const GridSpec g(128);
  std::mt19937_64 rng(20);
  for (const auto& A : {symbols::ch(), symbols::lambda_2s(0.375), symbols::wp()}) {
    const MultiSymbolTable t(A);
    for (int n = 0; n <= 2; ++n) {
      std::vector<PeriodicField> us;
      for (int j = 0; j <= n + 1; ++j) us.push_back(random_field(g, rng, 5));
      const PeriodicField& last = us.back();
      const std::vector<PeriodicField> base(us.begin(), us.end() - 1);
      // exact products of two 5-banded fields; round-off above |k| = 10 dropped
      auto transport = [&](const PeriodicField& u) { return multiply(last, differentiate(u)).truncated(10); };
      PeriodicField oracle = multiply(last, differentiate(apply_P_n(t, n, base)));
      for (int k = 0; k <= n; ++k) {
        std::vector<PeriodicField> args = base;
        args[static_cast<size_t>(k)] = transport(base[static_cast<size_t>(k)]);
        oracle = oracle - apply_P_n(t, n, args);
      }
      const PeriodicField direct = apply_P_n(t, n + 1, us);
      CHECK(l2_norm(direct - oracle) <= 1e-10 * l2_norm(oracle));
    }
  }
}

TEST_CASE("boundedness of P_n from H^q to H^{q-r} (regression envelope)") {
  const GridSpec g(96);
  std::mt19937_64 rng(24);
  const double q = 3.0;
  const MultiSymbolTable t(symbols::ch());
  for (int n = 1; n <= 2; ++n) {
    double worst = 0.0;
    for (int draw = 0; draw < 50; ++draw) {
      std::vector<PeriodicField> us;
      double denom = 1.0;
      for (int j = 0; j <= n; ++j) {
        us.push_back(random_field(g, rng, 47 / (n + 1) / 2));
        denom *= sobolev_norm(us.back(), q);
      }
      worst = std::max(worst, sobolev_norm(apply_P_n(t, n, us), q - 2.0) / denom);
    }
    MESSAGE("n = " << n << ": max ||P_n||_{H^1} / prod ||u_j||_{H^3} = " << worst);
    CHECK(worst < 10.0);
  }
}
