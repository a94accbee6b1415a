// Conserved functionals, the action S = E + omega Q, its gradient, high-order
// directional derivatives, and the quartic expansion identities that hold on
// the degenerate line gamma == kappa1.
#pragma once

#include <span>
#include <string>
#include <vector>

#include "nlslab/field.hpp"
#include "nlslab/params.hpp"

namespace nlslab {

// E(u) = sum_j (1/2 |u_j'|^2 - kappa_j/4 |u_j|^4) minus the interaction
// (gamma/2) Re int u1^2 conj(u2)^2 (coherent) or (gamma/2) int |u1|^2 |u2|^2
// (incoherent). Throws std::domain_error on non-finite samples.
double energy(const FieldPair& u, const Params& params);
double charge(const FieldPair& u);
double action(const FieldPair& u, const Params& params);

// E'(u) as an H-gradient; i u_t = E'(u) is the evolution equation.
FieldPair energy_gradient(const FieldPair& u, const Params& params);
// S'(u) = E'(u) + omega u.
FieldPair action_gradient(const FieldPair& u, const Params& params);

// R(chi) u = (cos chi u1 - sin chi u2, sin chi u1 + cos chi u2).
FieldPair rotate_components(const FieldPair& u, double chi);

struct DerivativeEstimate {
  double value = 0.0;
  double error = 0.0;  // Richardson correction |D(h) - D(h/2)| / (2^p - 1)
};

// <S^(order)(u)(d, ..., d), d'> by central differences of the action along
// u + lambda d (+ eta d'). One direction puts d in every slot; two directions
// put dirs[0] in the first order-1 slots and dirs[1] in the last. The action
// is a quartic polynomial along any line, so the five-point stencils are
// exact up to rounding.
DerivativeEstimate directional_derivative(const FieldPair& u, std::span<const FieldPair> dirs,
                                          const Params& params, int order);

struct NuCoefficients {
  double nu0 = 0.0;
  double nu1 = 0.0;
};

// Closed forms for gamma == kappa1:
//   nu1 = -(6 kappa2 / kappa1^2) int phi^4
//   nu0 = ((kappa1 - kappa2) / (4 kappa1^2)) int phi^4
// Throws std::domain_error off the degenerate line.
NuCoefficients nu_closed_form(const Params& params);

// nu1 = <S''''(phi)(psi,psi,psi),psi> and
// nu0 = <S''phi,phi>/8 - <S'''(psi,psi),phi>/4 + nu1/24, evaluated with
// directional_derivative on the given grid.
NuCoefficients nu_from_definition(const Params& params, GridPtr grid);

bool on_degenerate_line(const Params& params);

struct QuarticIdentityRow {
  double lambda = 0.0;
  double action_defect = 0.0;    // |S(phi + l psi) - S(phi) - nu1 l^4 / 24|
  double gradient_defect = 0.0;  // |<S'(phi + l psi), psi> - nu1 l^3 / 6|
};

struct QuarticIdentityReport {
  NuCoefficients nu;
  std::vector<QuarticIdentityRow> rows;
  double max_action_defect() const;
  double max_gradient_defect() const;
};

QuarticIdentityReport verify_quartic_identity(std::span<const double> lambdas, const Params& params,
                                              GridPtr grid);
QuarticIdentityReport verify_quartic_identity(std::span<const double> lambdas, const Params& params);

enum class RemainderKind { LittleO, BigO };

struct ExpansionCheck {
  std::string name;
  std::string variant;  // "w=0" or "w=lambda^2 w0"
  RemainderKind kind = RemainderKind::LittleO;
  double claimed_order = 0.0;
  std::vector<double> lambdas;
  std::vector<double> remainders;
  double fitted_order = 0.0;  // +inf when every remainder sits at rounding level
  bool exact = false;
  bool passed = false;
};

struct ExpansionReport {
  std::vector<ExpansionCheck> checks;
  bool all_passed() const;
};

inline constexpr double kExpansionLambdas[] = {0.2, 0.1, 0.05, 0.025};

// Remainders of the quartic-order expansions around phi_vec along psi_vec,
// with and without a fixed W-direction scaled by lambda^2. The log-log slope
// is fitted over the three smallest lambdas. A little-o remainder passes when
// the slope exceeds the claimed order by 0.5, a big-O remainder when it is at
// least the claimed order minus 0.5.
ExpansionReport verify_expansion_orders(const Params& params, GridPtr grid);
ExpansionReport verify_expansion_orders(const Params& params);

// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace nlslab
