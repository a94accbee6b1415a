#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nlslab/fft.hpp"
#include "nlslab/field.hpp"
#include "nlslab/waves.hpp"
#include "support.hpp"

using namespace nlslab;

namespace {

const double kPi = std::numbers::pi;

CVec sample(const Grid& g, double (*f)(double, double), double param) {
  CVec out(g.n());
  for (int j = 0; j < g.n(); ++j) out[j] = f(param, g.points()[j]);
  return out;
}

}  // namespace

TEST_CASE("make_grid layout") {
  auto g = make_grid(16, 8.0);
  CHECK(g->dx() == doctest::Approx(1.0));
  CHECK(g->points()[8] == 0.0);
  CHECK(g->points()[0] == -8.0);
  CHECK(make_grid(1024, 40.0)->dx() == 0.078125);

  auto h = make_grid(512, 13.7);
  CHECK(std::abs(h->dx() * h->n() - 2.0 * 13.7) <= 4e-15);
  CHECK(h->points()[h->origin_index()] == 0.0);
}

TEST_CASE("make_grid rejects bad sizes") {
  CHECK_THROWS_AS(make_grid(1000, 40.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(8, 40.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(64, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(64, -1.0), std::invalid_argument);
}

TEST_CASE("wavenumbers follow the signed transform layout") {
  auto g = make_grid(16, 8.0);
  const auto k = g->wavenumbers();
  CHECK(k[0] == 0.0);
  CHECK(k[1] == doctest::Approx(kPi / 8));
  CHECK(k[8] == doctest::Approx(-8 * kPi / 8));
  CHECK(k[15] == doctest::Approx(-kPi / 8));
}

TEST_CASE("inner_h on the soliton pair") {
  auto g = fixtures::default_grid();
  const Params p;
  const FieldPair phi = phi_vec(p, g);
  const FieldPair psi = psi_vec(p, g);
  const double oracle = oracle::simpson([](double x) { return std::pow(oracle::phi(1, x), 2); }, -40, 40);
  CHECK(std::abs(oracle - 4.0) < 1e-12);
  CHECK(std::abs(inner_h(phi, phi) - oracle) < 1e-10);
  CHECK(std::abs(inner_h(phi, kI * phi)) < 1e-15);
  CHECK(inner_h(phi, psi) == 0.0);
}

TEST_CASE("inner_x on the soliton pair") {
  auto g = fixtures::default_grid();
  const Params p;
  const FieldPair phi = phi_vec(p, g);
  const double oracle =
      4.0 + oracle::simpson([](double x) { return std::pow(oracle::phi_prime(1, x), 2); }, -40, 40);
  CHECK(std::abs(oracle - 16.0 / 3.0) < 1e-12);
  CHECK(std::abs(inner_x(phi, phi) - oracle) < 1e-8);
  CHECK(inner_x(FieldPair(g), fixtures::random_even_pair(3, g)) == 0.0);
  CHECK(inner_x(psi_vec(p, g), psi_vec(p, g)) == doctest::Approx(inner_x(phi, phi)).epsilon(1e-15));
}

TEST_CASE("spectral_derivative") {
  auto g = fixtures::default_grid();
  const double L = g->half_length();
  CVec s(g->n()), c(g->n()), one(g->n(), cplx{3.0, -1.0});
  for (int j = 0; j < g->n(); ++j) {
    s[j] = std::sin(kPi * g->points()[j] / L);
    c[j] = kPi / L * std::cos(kPi * g->points()[j] / L);
  }
  const CVec ds = spectral_derivative(std::span<const cplx>(s), *g);
  const CVec dc = spectral_derivative(std::span<const cplx>(one), *g);
  double err = 0, zero = 0;
  for (int j = 0; j < g->n(); ++j) {
    err = std::max(err, std::abs(ds[j] - c[j]));
    zero = std::max(zero, std::abs(dc[j]));
  }
  CHECK(err < 1e-12);
  CHECK(zero < 1e-12);

  const CVec f = sample(*g, oracle::phi, 1.0);
  const CVec df = spectral_derivative(std::span<const cplx>(f), *g);
  double e2 = 0;
  for (int j = 0; j < g->n(); ++j) e2 = std::max(e2, std::abs(df[j] - oracle::phi_prime(1.0, g->points()[j])));
  CHECK(e2 < 1e-9);

  CVec short_f(10);
  CHECK_THROWS_AS(spectral_derivative(std::span<const cplx>(short_f), *g), GridMismatch);
}

TEST_CASE("complex_pairing") {
  auto g = fixtures::default_grid();
  const FieldPair phi = phi_vec(Params{}, g);
  const cplx z = complex_pairing(kI * phi, phi);
  CHECK(std::abs(z.real()) < 1e-15);
  CHECK(z.imag() == doctest::Approx(inner_h(phi, phi)).epsilon(1e-14));

  const FieldPair u = fixtures::random_even_pair(11, g);
  const cplx self = complex_pairing(u, u);
  CHECK(self.real() > 0.0);
  CHECK(std::abs(self.imag()) < 1e-14 * self.real());

  const cplx rot = std::polar(1.0, kPi / 4);
  CHECK(std::abs(complex_pairing(rot * phi, phi) - 4.0 * rot) < 1e-10);
}

TEST_CASE("sign convention for imaginary directions") {
  auto g = fixtures::default_grid();
  const FieldPair a = fixtures::random_even_pair(1, g);
  const FieldPair b = fixtures::random_even_pair(2, g);
  CHECK(inner_h(a, kI * b) == doctest::Approx(complex_pairing(a, b).imag()).epsilon(1e-13));
}

TEST_CASE("inner products are symmetric, bilinear and positive") {
  auto g = fixtures::default_grid();
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const FieldPair a = fixtures::random_even_pair(seed, g);
    const FieldPair b = fixtures::random_even_pair(seed + 100, g);
    const FieldPair c = fixtures::random_even_pair(seed + 200, g);
    CHECK(inner_h(a, b) == doctest::Approx(inner_h(b, a)).epsilon(1e-14));
    CHECK(inner_x(a, b) == doctest::Approx(inner_x(b, a)).epsilon(1e-13));
    const double lhs = inner_h(2.5 * a - 0.5 * c, b);
    const double rhs = 2.5 * inner_h(a, b) - 0.5 * inner_h(c, b);
    CHECK(std::abs(lhs - rhs) < 1e-12);
    const double lhs_x = inner_x(2.5 * a - 0.5 * c, b);
    const double rhs_x = 2.5 * inner_x(a, b) - 0.5 * inner_x(c, b);
    CHECK(std::abs(lhs_x - rhs_x) < 1e-11);
    CHECK(inner_h(a, a) > 0.0);
    CHECK(inner_x(a, a) > inner_h(a, a));
    CHECK(complex_pairing(a, b).real() == inner_h(a, b));
  }
}

TEST_CASE("Parseval") {
  auto g = fixtures::default_grid();
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const FieldPair a = fixtures::random_even_pair(seed, g);
    const double phys = inner_h(a, a);
    CHECK(std::abs(norm_h_squared_spectral(a) - phys) <= 1e-12 * phys);
  }
}

TEST_CASE("first derivative twice equals the second derivative on smooth fields") {
  auto g = fixtures::default_grid();
  const FieldPair a = fixtures::random_even_pair(9, g);
  const CVec d1 = spectral_derivative(std::span<const cplx>(a.u1), *g);
  const CVec dd = spectral_derivative(std::span<const cplx>(d1), *g);
  const CVec d2 = spectral_second_derivative(std::span<const cplx>(a.u1), *g);
  double err = 0, scale = 0;
  for (int j = 0; j < g->n(); ++j) {
    err = std::max(err, std::abs(dd[j] - d2[j]));
    scale = std::max(scale, std::abs(d2[j]));
  }
  CHECK(err <= 1e-10 * scale);
}

TEST_CASE("dirichlet_form is the quadratic form of the second derivative") {
  auto g = fixtures::default_grid();
  const FieldPair a = fixtures::random_even_pair(4, g);
  const CVec d2 = spectral_second_derivative(std::span<const cplx>(a.u1), *g);
  cplx s{};
  for (int j = 0; j < g->n(); ++j) s += -d2[j] * std::conj(a.u1[j]);
  const double form = dirichlet_form(std::span<const cplx>(a.u1), *g);
  CHECK(form == doctest::Approx(s.real() * g->dx()).epsilon(1e-12));
  const FieldPair d = derivative(a);
  CHECK(form == doctest::Approx(norm_h_squared_spectral(FieldPair(g, d.u1, CVec(g->n())))).epsilon(1e-10));
}

TEST_CASE("grid mismatch is rejected") {
  auto g1 = make_grid(64, 10.0);
  auto g2 = make_grid(64, 12.0);
  FieldPair a(g1), b(g2);
  CHECK_THROWS_AS(inner_h(a, b), GridMismatch);
  CHECK_THROWS_AS(inner_x(a, b), GridMismatch);
  CHECK_THROWS_AS(complex_pairing(a, b), GridMismatch);
  CHECK_THROWS_AS(FieldPair(g1, CVec(63), CVec(64)), GridMismatch);
  // Equal layouts on distinct objects are the same grid.
  FieldPair c(make_grid(64, 10.0));
  CHECK(inner_h(a, c) == 0.0);
}

TEST_CASE("parity helpers") {
  auto g = make_grid(64, 10.0);
  FieldPair a(g);
  for (int j = 0; j < g->n(); ++j) a.u1[j] = g->points()[j];
  CHECK(parity_defect(a) > 1.0);
  CHECK(parity_defect(symmetrized(a)) == 0.0);
  const FieldPair e = fixtures::random_even_pair(1, g);
  CHECK(parity_defect(e) < 1e-15);
}

TEST_CASE("project_out removes non-orthogonal directions") {
  auto g = fixtures::default_grid();
  const FieldPair phi = phi_vec(Params{}, g);
  const FieldPair mixed = phi + 0.3 * psi_vec(Params{}, g);
  const FieldPair v = fixtures::random_even_pair(5, g);
  const FieldPair dirs[] = {phi, mixed, kI * phi};
  const FieldPair w = project_out(v, dirs);
  for (const auto& d : dirs) CHECK(std::abs(inner_h(w, d)) < 1e-12);
}

TEST_CASE("fft plans are shared and round trip") {
  const Fft& a = Fft::get(128);
  const Fft& b = Fft::get(128);
  CHECK(&a == &b);
  CVec in(128), hat(128), back(128);
  for (int j = 0; j < 128; ++j) in[j] = cplx{std::sin(0.3 * j), std::cos(0.7 * j)};
  a.forward(in.data(), hat.data());
  a.inverse(hat.data(), back.data());
  double err = 0;
  for (int j = 0; j < 128; ++j) err = std::max(err, std::abs(back[j] - in[j]));
  CHECK(err < 1e-14);
}
