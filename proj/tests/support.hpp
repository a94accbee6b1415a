// Test-side oracles and fixtures. Nothing here calls the library's quadrature
// or transforms: closed forms and the Simpson integrals below are computed
// from the analytic profile directly.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <random>

#include "nlslab/field.hpp"
#include "nlslab/params.hpp"

namespace oracle {

inline double sech(double x) { return 1.0 / std::cosh(x); }

inline double phi(double omega, double x) { return std::sqrt(2.0 * omega) * sech(std::sqrt(omega) * x); }

inline double phi_prime(double omega, double x) {
  const double s = std::sqrt(omega);
  return -std::sqrt(2.0 * omega) * s * sech(s * x) * std::tanh(s * x);
}

// Composite Simpson rule on [a, b] with 2m panels, in long double.
inline double simpson(const std::function<double(double)>& f, double a, double b, int m = 200000) {
  const long double h = (static_cast<long double>(b) - a) / (2 * m);
  long double s = f(a) + f(b);
  for (int i = 1; i < 2 * m; ++i) s += (i % 2 ? 4.0L : 2.0L) * f(static_cast<double>(a + i * h));
  return static_cast<double>(s * h / 3.0L);
}

// int phi^2 = 4 sqrt(omega), int phi'^2 = (4/3) omega^{3/2}, int phi^4 = (16/3) omega^{3/2}.
inline double l2_squared(double omega) { return 4.0 * std::sqrt(omega); }
inline double h1_seminorm_squared(double omega) { return 4.0 / 3.0 * std::pow(omega, 1.5); }
inline double l4_fourth(double omega) { return 16.0 / 3.0 * std::pow(omega, 1.5); }

// Lowest level of -d^2/dx^2 + omega - 2 a omega sech^2(sqrt(omega) x):
// omega (1 - s^2) with s (s + 1) = 2a.
inline double poschl_teller_ground(double a, double omega) {
  const double s = 0.5 * (-1.0 + std::sqrt(1.0 + 8.0 * a));
  return omega * (1.0 - s * s);
}

}  // namespace oracle

namespace fixtures {

using nlslab::cplx;

inline nlslab::GridPtr default_grid() { return nlslab::make_grid(1024, 40.0); }

// Smooth even pair: sums of centred Gaussians with random complex weights.
inline nlslab::FieldPair random_even_pair(std::uint64_t seed, const nlslab::GridPtr& grid,
                                          double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_real_distribution<double> width(0.5, 3.0);
  nlslab::FieldPair u(grid);
  const auto x = grid->points();
  for (int term = 0; term < 3; ++term) {
    const cplx a{coef(rng), coef(rng)};
    const cplx b{coef(rng), coef(rng)};
    const double wa = width(rng), wb = width(rng);
    for (int j = 0; j < grid->n(); ++j) {
      u.u1[j] += scale * a * std::exp(-x[j] * x[j] / (wa * wa));
      u.u2[j] += scale * b * std::exp(-x[j] * x[j] / (wb * wb));
    }
  }
  return u;
}

inline nlslab::Params params(double kappa1, double kappa2, double gamma, double omega = 1.0,
                             nlslab::Coupling c = nlslab::Coupling::Coherent) {
  nlslab::Params p;
  p.kappa1 = kappa1;
  p.kappa2 = kappa2;
  p.gamma = gamma;
  p.omega = omega;
  p.coupling = c;
  return p;
}

}  // namespace fixtures
