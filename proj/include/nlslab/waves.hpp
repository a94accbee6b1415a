// Closed-form standing-wave profiles and the special initial data built on
// them.
#pragma once

#include <cstdint>

#include "nlslab/field.hpp"
#include "nlslab/params.hpp"

namespace nlslab {

// Samples of sqrt(2 omega) sech(sqrt(omega) x), the positive even solution of
// -phi'' + omega phi - phi^3 = 0.
struct SolitonProfile {
  double omega = 1.0;
  GridPtr grid;
  RVec samples;
};

double soliton_value(double omega, double x);
SolitonProfile soliton(double omega, GridPtr grid);

// L2 norm of -phi'' + omega phi - phi^3 with a spectral second derivative.
double residual(const SolitonProfile& p);

// int phi_omega^4 dx = (16/3) omega^{3/2}.
double soliton_l4_closed_form(double omega);

// (phi / sqrt(kappa1), 0)
FieldPair phi_vec(const Params& params, GridPtr grid);
// (0, phi / sqrt(kappa1)); same H norm as phi_vec and H-orthogonal to it and
// to i phi_vec.
FieldPair psi_vec(const Params& params, GridPtr grid);

// sqrt(1 - lambda^2) - 1
double charge_shift(double lambda);

// phi_vec + lambda psi_vec + charge_shift(lambda) phi_vec. Carries exactly the
// charge of phi_vec. Requires |lambda| < 1.
FieldPair unstable_seed(double lambda, const Params& params, GridPtr grid);

// phi_vec plus an even perturbation of X-norm eps built from the first
// kGenericModes cosine modes with seeded random complex coefficients in both
// components, then rescaled so the charge equals Q(phi_vec).
inline constexpr int kGenericModes = 8;
FieldPair generic_perturbation(double eps, std::uint64_t seed, const Params& params, GridPtr grid);

}  // namespace nlslab
