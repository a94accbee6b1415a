#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "nlslab/functionals.hpp"
#include "nlslab/waves.hpp"
#include "support.hpp"

using namespace nlslab;

namespace {

// Independent quadrature of the scalar energy of (phi, 0):
// (1/2) int phi'^2 - (1/4) int phi^4.
double energy_oracle(double omega) {
  const double L = 40.0 / std::sqrt(omega);
  const double kin = oracle::simpson([omega](double x) { return std::pow(oracle::phi_prime(omega, x), 2); }, -L, L);
  const double quart = oracle::simpson([omega](double x) { return std::pow(oracle::phi(omega, x), 4); }, -L, L);
  return 0.5 * kin - 0.25 * quart;
}

}  // namespace

TEST_CASE("energy of simple states") {
  auto g = fixtures::default_grid();
  const Params p = fixtures::params(1.0, 1.0, 1.0);
  CHECK(energy(FieldPair(g), p) == 0.0);
  const double e = energy(phi_vec(p, g), p);
  CHECK(std::abs(energy_oracle(1.0) + 2.0 / 3.0) < 1e-12);
  CHECK(std::abs(e - energy_oracle(1.0)) < 1e-9);
  // psi_vec with kappa2 == kappa1 carries the same energy.
  CHECK(energy(psi_vec(p, g), p) == doctest::Approx(e).epsilon(1e-14));
}

TEST_CASE("rotations between components preserve the energy when all constants agree") {
  auto g = fixtures::default_grid();
  const Params p = fixtures::params(1.0, 1.0, 1.0);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    FieldPair u = fixtures::random_even_pair(seed, g);
    // The coherent interaction is rotation-invariant for real-phased pairs.
    for (auto& z : u.u1) z = z.real();
    for (auto& z : u.u2) z = z.real();
    const double e0 = energy(u, p);
    CHECK(std::abs(energy(rotate_components(u, 0.7), p) - e0) < 1e-12 * std::max(1.0, std::abs(e0)));
  }
}

TEST_CASE("energy rejects non-finite samples") {
  auto g = fixtures::default_grid();
  FieldPair u = phi_vec(Params{}, g);
  u.u1[10] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(energy(u, Params{}), std::domain_error);
}

TEST_CASE("charge") {
  auto g = fixtures::default_grid();
  const Params p = fixtures::params(1.0, 1.0, 1.0);
  CHECK(charge(phi_vec(p, g)) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(charge(phi_vec(p, g) + psi_vec(p, g)) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(charge(FieldPair(g)) == 0.0);
  const FieldPair u = fixtures::random_even_pair(3, g);
  CHECK(charge(std::polar(1.0, 1.3) * u) == doctest::Approx(charge(u)).epsilon(1e-14));
}

TEST_CASE("action") {
  auto g = fixtures::default_grid();
  const Params p = fixtures::params(1.0, 1.0, 1.0);
  CHECK(action(phi_vec(p, g), p) == doctest::Approx(4.0 / 3.0).epsilon(1e-9));
  CHECK(action(FieldPair(g), p) == 0.0);

  // Quartic along psi on the degenerate line.
  const Params q = fixtures::params(1.0, 2.0, 1.0);
  const double nu1 = nu_closed_form(q).nu1;
  const double l = 0.3;
  const double expected = action(phi_vec(q, g), q) + nu1 * std::pow(l, 4) / 24.0;
  CHECK(std::abs(action(phi_vec(q, g) + l * psi_vec(q, g), q) - expected) < 1e-10);
}

TEST_CASE("action is gauge invariant") {
  auto g = fixtures::default_grid();
  const Params p = fixtures::params(1.3, 0.7, 0.4);
  const FieldPair u = fixtures::random_even_pair(5, g);
  for (double theta : {0.3, 1.9, -2.5}) {
    CHECK(std::abs(action(std::polar(1.0, theta) * u, p) - action(u, p)) < 1e-12 * std::abs(action(u, p)) + 1e-14);
  }
}

TEST_CASE("gradient vanishes at the standing wave") {
  auto g = fixtures::default_grid();
  for (const Params& p : {fixtures::params(1.0, 1.0, 1.0), fixtures::params(2.0, 0.5, 0.3),
                          fixtures::params(1.0, 1.0, 1.0, 1.0, Coupling::Incoherent)}) {
    CHECK(norm_h(action_gradient(phi_vec(p, g), p)) < 1e-9);
  }
  const FieldPair zero = action_gradient(FieldPair(g), fixtures::params(1.0, 1.0, 1.0));
  CHECK(max_abs(zero) == 0.0);
}

TEST_CASE("gradient along psi on the degenerate line") {
  auto g = fixtures::default_grid();
  const Params p = fixtures::params(1.0, 1.5, 1.0);
  const double nu1 = nu_closed_form(p).nu1;
  const double l = 0.2;
  const FieldPair psi = psi_vec(p, g);
  const double pairing = inner_h(action_gradient(phi_vec(p, g) + l * psi, p), psi);
  CHECK(std::abs(pairing - nu1 * std::pow(l, 3) / 6.0) < 1e-8);
}

TEST_CASE("gradient agrees with finite differences of the action") {
  auto g = fixtures::default_grid();
  for (Coupling c : {Coupling::Coherent, Coupling::Incoherent}) {
    const Params p = fixtures::params(1.2, 0.8, 0.6, 1.0, c);
    const FieldPair u = fixtures::random_even_pair(21, g);
    const FieldPair v = fixtures::random_even_pair(22, g);
    const double slope = inner_h(action_gradient(u, p), v);
    auto err = [&](double e) {
      return std::abs((action(u + e * v, p) - action(u - e * v, p)) / (2 * e) - slope);
    };
    // The centred quotient is exact up to e^2 for a quartic functional.
    const double e1 = err(1e-2), e2 = err(5e-3);
    CHECK(e1 < 1e-3 * std::abs(slope) + 1e-9);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
  }
}

TEST_CASE("directional derivatives at the standing wave") {
  auto g = fixtures::default_grid();
  const Params p = fixtures::params(1.0, 1.0, 1.0);
  const FieldPair phi = phi_vec(p, g);
  const FieldPair psi = psi_vec(p, g);

  const FieldPair d_psi[] = {psi};
  const FieldPair d_phi[] = {phi};
  CHECK(std::abs(directional_derivative(phi, d_psi, p, 2).value) < 1e-7);
  CHECK(directional_derivative(phi, d_phi, p, 2).value == doctest::Approx(-32.0 / 3.0).epsilon(1e-7));
  CHECK(directional_derivative(phi, d_psi, p, 4).value == doctest::Approx(-32.0).epsilon(1e-6));
  CHECK(std::abs(directional_derivative(phi, d_psi, p, 3).value) < 1e-8);

  const FieldPair mixed[] = {psi, phi};
  // <S'''(phi)(psi, psi), phi> = -2 gamma int phi^4 = -32/3.
  const auto d3 = directional_derivative(phi, mixed, p, 3);
  CHECK(d3.value == doctest::Approx(-32.0 / 3.0).epsilon(1e-6));
  CHECK(d3.error < 1e-5);

  CHECK_THROWS_AS(directional_derivative(phi, d_psi, p, 5), std::invalid_argument);
  CHECK_THROWS_AS(directional_derivative(phi, std::span<const FieldPair>{}, p, 2), std::invalid_argument);
}

TEST_CASE("nu closed forms") {
  const auto a = nu_closed_form(fixtures::params(1.0, 2.0, 1.0));
  CHECK(a.nu0 == doctest::Approx(-4.0 / 3.0).epsilon(1e-14));
  CHECK(a.nu1 == doctest::Approx(-64.0).epsilon(1e-14));
  CHECK(nu_closed_form(fixtures::params(1.0, 1.0, 1.0)).nu0 == 0.0);
  CHECK(nu_closed_form(fixtures::params(1.0, 0.5, 1.0)).nu0 > 0.0);
  for (double k2 : {0.25, 0.5, 1.0, 3.0}) CHECK(nu_closed_form(fixtures::params(1.0, k2, 1.0)).nu1 < 0.0);
  CHECK_THROWS_AS(nu_closed_form(fixtures::params(1.0, 2.0, 2.0)), std::domain_error);
  CHECK(on_degenerate_line(fixtures::params(2.0, 1.0, 2.0)));
  CHECK_FALSE(on_degenerate_line(fixtures::params(2.0, 1.0, 2.1)));
}

TEST_CASE("nu from the definitions matches the closed forms") {
  auto g = fixtures::default_grid();
  for (double k2 : {0.5, 2.0}) {
    CAPTURE(k2);
    const Params p = fixtures::params(1.0, k2, 1.0);
    const auto closed = nu_closed_form(p);
    const auto defn = nu_from_definition(p, g);
    CHECK(std::abs(defn.nu1 - closed.nu1) < 1e-5 * std::abs(closed.nu1));
    CHECK(std::abs(defn.nu0 - closed.nu0) < 1e-5 * std::abs(closed.nu1));
  }
  // kappa1 != 1 scales both coefficients by 1 / kappa1^2.
  const Params p = fixtures::params(2.0, 1.0, 2.0);
  const auto closed = nu_closed_form(p);
  const auto defn = nu_from_definition(p, g);
  CHECK(defn.nu0 == doctest::Approx(closed.nu0).epsilon(1e-5));
  CHECK(closed.nu0 == doctest::Approx(16.0 / 3.0 / 16.0).epsilon(1e-14));
}

TEST_CASE("quartic identity") {
  auto g = fixtures::default_grid();
  const Params p = fixtures::params(1.0, 2.0, 1.0);
  const double lambdas[] = {0.0, 0.5, 1.5};
  const auto rep = verify_quartic_identity(lambdas, p, g);
  REQUIRE(rep.rows.size() == 3);
  CHECK(rep.rows[0].action_defect == 0.0);
  CHECK(rep.rows[1].action_defect < 1e-9);
  CHECK(rep.rows[2].action_defect < 1e-8);
  CHECK(rep.max_gradient_defect() < 1e-8);
  CHECK_THROWS(verify_quartic_identity(lambdas, fixtures::params(1.0, 2.0, 1.5), g));
}

TEST_CASE("expansion orders") {
  auto g = fixtures::default_grid();
  for (double k2 : {0.5, 2.0}) {
    CAPTURE(k2);
    const auto rep = verify_expansion_orders(fixtures::params(1.0, k2, 1.0), g);
    CHECK(rep.checks.size() == 13);
    for (const auto& c : rep.checks) {
      CAPTURE(c.name);
      CAPTURE(c.variant);
      CAPTURE(c.fitted_order);
      CHECK(c.passed);
      CHECK(c.lambdas.size() == 4);
      if (c.variant == "w=0" && c.name != "S0" && c.name != "Q1") CHECK(c.exact);
    }
    CHECK(rep.all_passed());
  }
}

TEST_CASE("loglog_slope") {
  const double x[] = {0.2, 0.1, 0.05};
  const double y[] = {3 * std::pow(0.2, 5), 3 * std::pow(0.1, 5), 3 * std::pow(0.05, 5)};
  CHECK(loglog_slope(x, y) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK_THROWS(loglog_slope(std::span<const double>(x, 1), std::span<const double>(y, 1)));
}
