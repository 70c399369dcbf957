#include <doctest.h>

#include <cmath>
#include <random>

#include "diffs1/geodesic.hpp"
#include "diffs1/verify.hpp"

using namespace diffs1;

namespace {

// (1 - D^2) u_t = -3 u u_x + 2 u_x u_xx + u u_xxx, solved for u_t.
PeriodicField ch_form_rhs(const PeriodicField& u) {
  const PeriodicField ux = differentiate(u), uxx = differentiate(ux), uxxx = differentiate(uxx);
  const PeriodicField r = -3.0 * multiply(u, ux) + 2.0 * multiply(ux, uxx) + multiply(u, uxxx);
  return invert_on_range(symbols::ch(), r);
}

}  // namespace

TEST_CASE("ad_transpose") {
  const GridSpec g(64);
  std::mt19937_64 rng(7);
  const PeriodicField v = random_field(g, rng, 10);
  CHECK(ad_transpose(symbols::ch(), PeriodicField(g), v).max_abs_coeff() == 0.0);

  const PeriodicField u = random_field(g, rng, 10);
  const PeriodicField id_oracle = 2.0 * multiply(v, differentiate(u)) + multiply(differentiate(v), u);
  CHECK(l2_norm(ad_transpose(symbols::identity(), u, v) - id_oracle) <= 1e-13 * l2_norm(id_oracle));

  const PeriodicField c = PeriodicField::harmonic(g, 1, 1.0, 0.0);
  // 2 (2 cos)(-sin) + (-2 sin) cos = -3 sin 2x, divided by 1 + 2^2
  CHECK(l2_norm(ad_transpose(symbols::ch(), c, c) - PeriodicField::harmonic(g, 2, 0.0, -0.6)) <= 1e-15);
}

TEST_CASE("christoffel_B") {
  const GridSpec g(64);
  std::mt19937_64 rng(8);
  const auto A = symbols::ch();
  const PeriodicField u = random_field(g, rng, 10), v = random_field(g, rng, 10);
  CHECK(l2_norm(christoffel_B(A, u, u) - ad_transpose(A, u, u)) == 0.0);
  CHECK(l2_norm(christoffel_B(A, u, v) - christoffel_B(A, v, u)) == 0.0);

  const PeriodicField c = PeriodicField::harmonic(g, 1, 1.0, 0.0), s = PeriodicField::harmonic(g, 1, 0.0, 1.0);
  auto term = [&](const PeriodicField& a, const PeriodicField& b) {
    const PeriodicField Ab = apply(A, b);
    return invert_on_range(A, 2.0 * multiply(Ab, differentiate(a)) + multiply(differentiate(Ab), a));
  };
  const PeriodicField oracle = 0.5 * (term(c, s) + term(s, c));
  CHECK(l2_norm(christoffel_B(A, c, s) - oracle) <= 1e-12);
}

TEST_CASE("covariant derivative") {
  const GridSpec g(64);
  std::mt19937_64 rng(9);
  const auto A = symbols::lambda_2s(0.75);
  const PeriodicField w = random_field(g, rng, 10), u = random_field(g, rng, 10);
  CHECK(covariant_derivative(A, PeriodicField(g), w, PeriodicField(g)).max_abs_coeff() <= 1e-15);
  CHECK(covariant_derivative(A, u, u, -christoffel_B(A, u, u)).max_abs_coeff() <= 1e-14);
}

TEST_CASE("Euler right-hand side and spray") {
  const GridSpec g(64);
  const auto A = symbols::ch();
  CHECK(euler_rhs(A, PeriodicField::constant(g, 0.7)).max_abs_coeff() == 0.0);
  CHECK(spray_S(A, PeriodicField::constant(g, 0.7)).max_abs_coeff() == 0.0);

  const PeriodicField c = PeriodicField::harmonic(g, 1, 1.0, 0.0);
  CHECK(l2_norm(euler_rhs(A, c) - ch_form_rhs(c)) <= 1e-15);
  CHECK(l2_norm(euler_rhs(A, c) - PeriodicField::harmonic(g, 2, 0.0, 0.6)) <= 1e-15);
  // at phi = id the spray is u_t + u u_x
  CHECK(l2_norm(spray_S(A, c) - (ch_form_rhs(c) + multiply(c, differentiate(c)))) <= 1e-15);

  std::mt19937_64 rng(10);
  for (int i = 0; i < 5; ++i) {
    const PeriodicField u = random_field(g, rng, 10);
    const PeriodicField o = ch_form_rhs(u);
    CHECK(l2_norm(euler_rhs(A, u) - o) <= 1e-12 * l2_norm(o));
    CHECK(l2_norm(spray_S(A, u) - (multiply(u, differentiate(u)) - christoffel_B(A, u, u))) <= 1e-11 * l2_norm(spray_S(A, u)));
    CHECK(l2_norm(lagrangian_spray(A, Diffeo::identity(g), u) - spray_S(A, u)) <= 1e-12 * l2_norm(spray_S(A, u)));
  }
}

TEST_CASE("Lagrangian integration") {
  const GridSpec g(64);
  const auto A = symbols::ch();
  IntegratorOptions opt;
  opt.dt = 1e-2;
  opt.T = 0.3;
  const auto still = integrate_lagrangian(A, GeodesicState{Diffeo::identity(g), PeriodicField(g), 0.0}, opt);
  CHECK(still.status == RunStatus::completed);
  CHECK(still.back().phi.displacement().max_abs_coeff() == 0.0);
  CHECK(still.back().v.max_abs_coeff() == 0.0);

  opt.dt = 1e-3;
  opt.T = 0.5;
  const PeriodicField v0 = PeriodicField::harmonic(g, 1, 0.2, 0.0);
  const auto fwd = integrate_lagrangian(A, GeodesicState{Diffeo::identity(g), v0, 0.0}, opt);
  REQUIRE(fwd.status == RunStatus::completed);
  CHECK(fwd.back().t == doctest::Approx(0.5));
  const auto bwd = integrate_lagrangian(A, GeodesicState{fwd.back().phi, -fwd.back().v, 0.0}, opt);
  REQUIRE(bwd.status == RunStatus::completed);
  CHECK(coeff_distance(bwd.back().phi.displacement(), PeriodicField(g)) <= 1e-8);
  CHECK(coeff_distance(bwd.back().v, -v0) <= 1e-8);

  // Eulerian reconstruction agrees with the Eulerian integrator
  const auto eu = integrate_euler(A, v0, opt);
  CHECK(l2_norm(eulerian_velocity(fwd.back()) - eu.back().u) <= 1e-9);
}

TEST_CASE("Eulerian integration") {
  const GridSpec g(64);
  IntegratorOptions opt;
  opt.dt = 1e-2;
  opt.T = 1.0;
  CHECK(integrate_euler(symbols::ch(), PeriodicField(g), opt).back().u.max_abs_coeff() == 0.0);

  // Around the constant state 1, CH linearizes to (1 + k^2) w_t = -i k (3 + k^2) w.
  const double eps = 1e-6;
  const PeriodicField u0 = PeriodicField::constant(g, 1.0) + eps * (PeriodicField::harmonic(g, 1, 1.0, 0.0) +
                                                                     PeriodicField::harmonic(g, 2, 0.0, 1.0));
  const auto run = integrate_euler(symbols::ch(), u0, opt);
  const double t = run.back().t;
  PeriodicField lin = PeriodicField::constant(g, 1.0);
  lin.set_mode(1, 0.5 * eps * std::exp(cplx(0.0, -2.0 * t)));
  lin.set_mode(2, cplx(0.0, -0.5) * eps * std::exp(cplx(0.0, -2.0 * 7.0 / 5.0 * t)));
  CHECK(l2_norm(run.back().u - lin) <= 1e-3 * eps);

  opt.snapshot_every = 10;
  for (double r : {1.0, 2.0}) {
    std::mt19937_64 rng(12);
    const auto fr = integrate_euler(symbols::frac(r), random_field_l2(g, rng, 8, 0.3), opt);
    REQUIRE(fr.status == RunStatus::completed);
    for (const auto& s : fr.states) CHECK(std::abs(s.m.coeff(0).real() - fr.states[0].m.coeff(0).real()) <= 1e-11);
  }
}

TEST_CASE("diagnostics") {
  const GridSpec g(64);
  const auto A = symbols::ch();
  const Diagnostics z = diagnostics(A, GeodesicState{Diffeo::identity(g), PeriodicField(g), 0.0});
  CHECK(z.energy == 0.0);
  CHECK(z.noether_field.max_abs_coeff() == 0.0);
  std::mt19937_64 rng(13);
  const PeriodicField v = random_field(g, rng, 8);
  const Diagnostics d = diagnostics(A, GeodesicState{Diffeo::identity(g), v, 0.0});
  CHECK(coeff_distance(d.noether_field, apply(A, v)) <= 1e-12);
  CHECK(d.energy == doctest::Approx(0.5 * inner_l2(apply(A, v), v)).epsilon(1e-13));
  CHECK(noether_drift(d.noether_field, d.noether_field) == 0.0);
}

TEST_CASE("blow-up is reported, not thrown") {
  const GridSpec g(32);
  IntegratorOptions opt;
  opt.dt = 1e-2;
  opt.T = 10.0;
  const auto run = integrate_lagrangian(symbols::identity(), GeodesicState{Diffeo::identity(g),
                                                                           PeriodicField::harmonic(g, 1, 0.0, 1.0), 0.0},
                                        opt);
  CHECK(run.status == RunStatus::blow_up);
  CHECK(run.final_time < 10.0);
  CHECK_FALSE(run.message.empty());
}

TEST_CASE("the spray is right-invariant under rotations") {
  const GridSpec g(128);
  const auto A = symbols::lambda_2s(0.75);
  std::mt19937_64 rng(26);
  const Diffeo phi0(random_field_l2(g, rng, 4, 0.1));
  const PeriodicField v0 = random_field_l2(g, rng, 6, 0.2);
  const double s = 0.9;
  IntegratorOptions opt;
  opt.dt = 1e-2;
  opt.T = 0.5;
  const auto a = integrate_lagrangian(A, GeodesicState{phi0, v0, 0.0}, opt);
  const Diffeo phi0s(rotate(phi0.displacement(), s) + PeriodicField::constant(g, s));
  const auto b = integrate_lagrangian(A, GeodesicState{phi0s, rotate(v0, s), 0.0}, opt);
  const PeriodicField expect_f = rotate(a.back().phi.displacement(), s) + PeriodicField::constant(g, s);
  CHECK(coeff_distance(b.back().phi.displacement(), expect_f) <= 1e-10);
  CHECK(coeff_distance(b.back().v, rotate(a.back().v, s)) <= 1e-10);
}
