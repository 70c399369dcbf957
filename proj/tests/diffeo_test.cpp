#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "diffs1/diffeo.hpp"
#include "diffs1/errors.hpp"
#include "diffs1/verify.hpp"

using namespace diffs1;

TEST_CASE("compose_field") {
  const GridSpec g(64);
  std::mt19937_64 rng(1);
  const PeriodicField v = random_field(g, rng, 12);
  CHECK(coeff_distance(compose_field(v, Diffeo::identity(g)), v) <= 1e-13);
  const double s = 0.37;
  CHECK(coeff_distance(compose_field(v, Diffeo::rotation(g, s)), rotate(v, s)) <= 1e-13);

  const PeriodicField c = PeriodicField::harmonic(g, 1, 1.0, 0.0);
  const Diffeo phi(PeriodicField::harmonic(g, 1, 0.0, 0.1));
  const PeriodicField w = compose_field(c, phi);
  // 4x-resolution oracle: evaluate cos(x + 0.1 sin x) directly on a fine grid.
  for (int j = 0; j < 4 * g.n_points(); ++j) {
    const double x = two_pi * j / (4.0 * g.n_points());
    CHECK(std::abs(w.value_at(x) - std::cos(x + 0.1 * std::sin(x))) <= 1e-10);
  }
}

TEST_CASE("diffeomorphism guard") {
  const GridSpec g(32);
  CHECK_NOTHROW(Diffeo(PeriodicField::harmonic(g, 1, 0.0, 0.9)));
  CHECK_THROWS_AS(Diffeo(PeriodicField::harmonic(g, 1, 0.0, 1.1)), NotADiffeomorphism);
  CHECK(min_jacobian_of(PeriodicField::harmonic(g, 2, 0.25, 0.0)) == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("invert_diffeo") {
  const GridSpec g(64);
  CHECK(invert_diffeo(Diffeo::identity(g)).displacement().max_abs_coeff() <= 1e-14);
  const Diffeo r = invert_diffeo(Diffeo::rotation(g, 0.4));
  CHECK(coeff_distance(r.displacement(), PeriodicField::constant(g, -0.4)) <= 1e-12);

  const Diffeo phi(PeriodicField::harmonic(g, 1, 0.0, 0.2));
  const Diffeo inv = invert_diffeo(phi);
  double worst = 0.0;
  for (double x : g.nodes()) worst = std::max(worst, std::abs(phi(inv(x)) - x));
  CHECK(worst <= 1e-10);
  const auto pre = inverse_at_nodes(phi);
  for (int j = 0; j < g.n_points(); ++j) CHECK(std::abs(phi(pre[static_cast<size_t>(j)]) - g.node(j)) <= 1e-12);
}

TEST_CASE("compose and compose_inverse") {
  const GridSpec g(64);
  const Diffeo phi(PeriodicField::harmonic(g, 1, 0.0, 0.2));
  const Diffeo psi(PeriodicField::harmonic(g, 2, 0.05, 0.0));
  const Diffeo pp = compose(phi, psi);
  for (double x : {0.2, 1.7, 4.0}) CHECK(pp(x) == doctest::Approx(phi(psi(x))).epsilon(1e-12));

  std::mt19937_64 rng(2);
  const PeriodicField v = random_field(g, rng, 8);
  const PeriodicField back = compose_field(compose_inverse(v, phi), phi);
  CHECK(coeff_distance(back, v) <= 1e-10);
  const PeriodicField col = compose_inverse(v, phi, InverseComposition::collocation);
  CHECK(coeff_distance(col, compose_inverse(v, phi)) <= 1e-8);
}

TEST_CASE("conjugate_apply and metric_inner") {
  const GridSpec g(64);
  std::mt19937_64 rng(4);
  const auto A = symbols::ch();
  const PeriodicField v = random_field(g, rng, 10);
  CHECK(l2_norm(conjugate_apply(A, Diffeo::identity(g), v) - apply(A, v)) <= 1e-12 * l2_norm(apply(A, v)));
  CHECK(l2_norm(conjugate_apply(A, Diffeo::rotation(g, 1.1), v) - apply(A, v)) <= 1e-11 * l2_norm(apply(A, v)));

  const PeriodicField c = PeriodicField::harmonic(g, 1, 1.0, 0.0);
  CHECK(metric_inner(A, Diffeo::identity(g), c, c) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(metric_inner(A, Diffeo::identity(g), c, c) == doctest::Approx(std::pow(sobolev_norm(c, 1.0), 2)));

  const Diffeo phi(random_field_l2(g, rng, 4, 0.1));
  const PeriodicField a = random_field(g, rng, 6), b = random_field(g, rng, 6);
  CHECK(metric_inner(A, phi, a, b) == doctest::Approx(metric_inner(A, phi, b, a)).epsilon(1e-10));
  // right invariance
  const double lhs = metric_inner(A, phi, compose_field(a, phi), compose_field(b, phi));
  CHECK(std::abs(lhs - metric_inner(A, Diffeo::identity(g), a, b)) <= 1e-8);
}

TEST_CASE("inversion is an involution; positivity; composition bounds") {
  const GridSpec g(256);
  std::mt19937_64 rng(25);
  const auto A = symbols::ch();
  for (int i = 0; i < 5; ++i) {
    const Diffeo phi(random_field_l2(g, rng, 5, 0.1));
    CHECK(sup_norm(invert_diffeo(invert_diffeo(phi)).displacement() - phi.displacement()) <= 1e-9);
    const PeriodicField xi = random_field(g, rng, 8);
    CHECK(metric_inner(A, phi, xi, xi) > 0.0);

    // Change of variables: ||v o phi||_{L2}^2 <= ||1/phi_x||_inf ||v||^2 and
    // ||(v o phi)_x||^2 <= ||phi_x||_inf ||v_x||^2.
    const auto jac = phi.jacobian();
    const double jmax = *std::max_element(jac.begin(), jac.end());
    const double jinv = 1.0 / phi.min_jacobian();
    for (int draw = 0; draw < 50; ++draw) {
      const PeriodicField v = random_field(g, rng, 6);
      const PeriodicField w = compose_field(v, phi);
      CHECK(sobolev_norm(w, 0.0) <= std::sqrt(jinv) * sobolev_norm(v, 0.0) * (1.0 + 1e-8));
      CHECK(sobolev_norm(w, 1.0) <= std::sqrt(std::max(jinv, jmax)) * sobolev_norm(v, 1.0) * (1.0 + 1e-8));
    }
  }
}
