#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nlslab/functionals.hpp"
#include "nlslab/modulation.hpp"
#include "nlslab/waves.hpp"
#include "support.hpp"

using namespace nlslab;

TEST_CASE("soliton samples the closed form") {
  auto g = make_grid(1024, 40.0);
  const SolitonProfile p = soliton(1.0, g);
  CHECK(p.samples[g->origin_index()] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(p.samples[0] < 1e-15);
  for (int j = 0; j < g->n(); j += 37) CHECK(std::abs(p.samples[j] - oracle::phi(1.0, g->points()[j])) < 1e-15);

  auto g4 = make_grid(1024, default_half_length(4.0));
  CHECK(soliton(4.0, g4).samples[g4->origin_index()] == doctest::Approx(2.0 * std::sqrt(2.0)));
  CHECK_THROWS(soliton(0.0, g));
  CHECK_THROWS(soliton(-1.0, g));
}

TEST_CASE("soliton residual is spectrally small") {
  for (double omega : {0.5, 1.0, 2.0, 4.0}) {
    CAPTURE(omega);
    auto g = make_grid(1024, default_half_length(omega));
    CHECK(residual(soliton(omega, g)) < 1e-9);
  }
}

TEST_CASE("residual of a rescaled profile matches the analytic defect") {
  // -(2phi)'' + (2phi) - (2phi)^3 = -6 phi^3, and int phi^6 = (128/15) at omega = 1.
  auto g = make_grid(1024, 40.0);
  SolitonProfile p = soliton(1.0, g);
  for (double& s : p.samples) s *= 2.0;
  const double expected = 6.0 * std::sqrt(oracle::simpson([](double x) { return std::pow(oracle::phi(1, x), 6); }, -40, 40));
  CHECK(std::abs(expected - 6.0 * std::sqrt(128.0 / 15.0)) < 1e-10);
  CHECK(residual(p) == doctest::Approx(expected).epsilon(1e-8));

  SolitonProfile zero = p;
  std::fill(zero.samples.begin(), zero.samples.end(), 0.0);
  CHECK(residual(zero) == 0.0);
}

TEST_CASE("soliton_l4_closed_form against quadrature") {
  for (double omega : {0.5, 1.0, 3.0}) {
    const double q = oracle::simpson([omega](double x) { return std::pow(oracle::phi(omega, x), 4); }, -80, 80);
    CHECK(soliton_l4_closed_form(omega) == doctest::Approx(q).epsilon(1e-11));
    CHECK(soliton_l4_closed_form(omega) == doctest::Approx(oracle::l4_fourth(omega)).epsilon(1e-15));
  }
}

TEST_CASE("phi_vec and psi_vec") {
  auto g = fixtures::default_grid();
  const Params p = fixtures::params(1.0, 1.0, 1.0);
  const FieldPair phi = phi_vec(p, g);
  const FieldPair psi = psi_vec(p, g);
  CHECK(charge(phi) == doctest::Approx(2.0).epsilon(1e-12));
  for (int j = 0; j < g->n(); ++j) {
    CHECK(phi.u2[j] == cplx{});
    CHECK(psi.u1[j] == cplx{});
    CHECK(phi.u1[j] == psi.u2[j]);
  }
  CHECK(inner_h(phi, psi) == 0.0);
  CHECK(inner_h(kI * phi, psi) == 0.0);
  CHECK(inner_h(phi, phi) == doctest::Approx(inner_h(psi, psi)).epsilon(1e-15));

  const Params p4 = fixtures::params(4.0, 1.0, 4.0);
  const FieldPair phi4 = phi_vec(p4, g);
  CHECK(std::abs(phi4.u1[g->origin_index()] - phi.u1[g->origin_index()] / 2.0) < 1e-15);
  CHECK(charge(phi4) == doctest::Approx(0.5).epsilon(1e-12));

  // gamma / kappa1 == 2: the H norms still agree.
  const Params p2 = fixtures::params(1.0, 1.0, 2.0);
  CHECK(inner_h(phi_vec(p2, g), phi_vec(p2, g)) == doctest::Approx(inner_h(psi_vec(p2, g), psi_vec(p2, g))));
}

TEST_CASE("charge_shift") {
  CHECK(charge_shift(0.0) == 0.0);
  CHECK(charge_shift(0.6) == doctest::Approx(-0.2).epsilon(1e-15));
  // Second-order behaviour: -lambda^2 / 2 + O(lambda^4).
  CHECK(std::abs(charge_shift(1e-3) + 0.5e-6) < 1e-12);
}

TEST_CASE("unstable_seed") {
  auto g = fixtures::default_grid();
  const Params p = fixtures::params(1.0, 0.5, 1.0);
  const FieldPair phi = phi_vec(p, g);
  const FieldPair psi = psi_vec(p, g);

  const FieldPair s0 = unstable_seed(0.0, p, g);
  CHECK(s0.u1 == phi.u1);
  CHECK(s0.u2 == phi.u2);

  for (double l : {-0.2, -0.1, -0.05, 0.05, 0.1, 0.2}) {
    CAPTURE(l);
    const FieldPair s = unstable_seed(l, p, g);
    CHECK(std::abs(charge(s) - charge(phi)) < 1e-12);
    CHECK(inner_h(s, psi) / inner_h(psi, psi) == doctest::Approx(l).epsilon(1e-13));
    CHECK(inner_h(s, phi) / inner_h(phi, phi) == doctest::Approx(std::sqrt(1 - l * l)).epsilon(1e-13));
    CHECK(parity_defect(s) == 0.0);
  }
  CHECK_THROWS_AS(unstable_seed(1.0, p, g), std::invalid_argument);
  CHECK_THROWS_AS(unstable_seed(-1.5, p, g), std::invalid_argument);
}

TEST_CASE("generic_perturbation") {
  auto g = fixtures::default_grid();
  const Params p = fixtures::params(1.0, 1.5, 0.5);
  const FieldPair phi = phi_vec(p, g);

  const FieldPair zero = generic_perturbation(0.0, 7, p, g);
  CHECK(zero.u1 == phi.u1);
  CHECK(zero.u2 == phi.u2);

  const FieldPair a = generic_perturbation(1e-3, 7, p, g);
  const FieldPair b = generic_perturbation(1e-3, 7, p, g);
  const FieldPair c = generic_perturbation(1e-3, 8, p, g);
  CHECK(a.u1 == b.u1);
  CHECK(a.u2 == b.u2);
  CHECK(norm_h(a - c) > 1e-5);

  CHECK(std::abs(charge(a) - charge(phi)) < 1e-12);
  CHECK(parity_defect(a) < 1e-13);
  const double d = orbital_distance_x(a, p);
  CHECK(d > 0.5e-3);
  CHECK(d < 2e-3);

  // Both components and both real / imaginary parts are excited.
  const FieldPair diff = a - phi;
  double re2 = 0, im2 = 0, im1 = 0;
  for (int j = 0; j < g->n(); ++j) {
    re2 += std::abs(diff.u2[j].real());
    im2 += std::abs(diff.u2[j].imag());
    im1 += std::abs(diff.u1[j].imag());
  }
  CHECK(re2 > 0);
  CHECK(im2 > 0);
  CHECK(im1 > 0);
}
