#include "nlslab/waves.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace nlslab {

namespace {

void require_omega(double omega) {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw std::invalid_argument("omega must be positive");
}

FieldPair scaled_profile_pair(const Params& params, const GridPtr& grid, bool second_slot) {
  params.validate();
  const SolitonProfile p = soliton(params.omega, grid);
  const double s = 1.0 / std::sqrt(params.kappa1);
  FieldPair out(grid);
  CVec& slot = second_slot ? out.u2 : out.u1;
  for (int j = 0; j < grid->n(); ++j) slot[j] = s * p.samples[j];
  return out;
}

}  // namespace

double soliton_value(double omega, double x) {
  const double a = std::abs(std::sqrt(omega) * x);
  // sech(a) = 2 e^{-a} / (1 + e^{-2a}) stays finite for large a.
  const double e = std::exp(-a);
  return std::sqrt(2.0 * omega) * 2.0 * e / (1.0 + e * e);
}

SolitonProfile soliton(double omega, GridPtr grid) {
  require_omega(omega);
  if (!grid) throw std::invalid_argument("soliton needs a grid");
  SolitonProfile p{omega, grid, RVec(grid->n())};
  const auto x = grid->points();
  for (int j = 0; j < grid->n(); ++j) p.samples[j] = soliton_value(omega, x[j]);
  return p;
}

double residual(const SolitonProfile& p) {
  const Grid& g = *p.grid;
  const RVec d2 = spectral_second_derivative(std::span<const double>(p.samples), g);
  double s = 0.0;
  for (int j = 0; j < g.n(); ++j) {
    const double f = p.samples[j];
    const double r = -d2[j] + p.omega * f - f * f * f;
    s += r * r;
  }
  return std::sqrt(s * g.dx());
}

double soliton_l4_closed_form(double omega) {
  require_omega(omega);
  return 16.0 / 3.0 * std::pow(omega, 1.5);
}

FieldPair phi_vec(const Params& params, GridPtr grid) {
  return scaled_profile_pair(params, grid, false);
}

FieldPair psi_vec(const Params& params, GridPtr grid) {
  return scaled_profile_pair(params, grid, true);
}

double charge_shift(double lambda) {
  if (!(std::abs(lambda) < 1.0)) throw std::invalid_argument("|lambda| must be < 1");
  return std::sqrt(1.0 - lambda * lambda) - 1.0;
}

FieldPair unstable_seed(double lambda, const Params& params, GridPtr grid) {
  const double sigma = charge_shift(lambda);
  const FieldPair phi = phi_vec(params, grid);
  return (1.0 + sigma) * phi + lambda * psi_vec(params, grid);
}

FieldPair generic_perturbation(double eps, std::uint64_t seed, const Params& params, GridPtr grid) {
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw std::invalid_argument("eps must be >= 0");
  FieldPair phi = phi_vec(params, grid);
  if (eps == 0.0) return phi;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  FieldPair p(grid);
  const auto x = grid->points();
  const double L = grid->half_length();
  for (int m = 0; m < kGenericModes; ++m) {
    const cplx c1{coef(rng), coef(rng)};
    const cplx c2{coef(rng), coef(rng)};
    for (int j = 0; j < grid->n(); ++j) {
      const double mode = std::cos(std::numbers::pi * m * x[j] / L);
      p.u1[j] += c1 * mode;
      p.u2[j] += c2 * mode;
    }
  }
  p *= cplx{eps / norm_x(p), 0.0};

  FieldPair u = phi + p;
  const double scale = norm_h(phi) / norm_h(u);
  return scale * u;
}

}  // namespace nlslab
