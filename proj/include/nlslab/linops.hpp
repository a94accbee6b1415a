// Linearized operators L_a = -d^2/dx^2 + omega - a phi_omega^2 on the even
// subspace, the Hessian S''(phi_vec) assembled from four L_a blocks, and
// constrained Rayleigh minima.
//
// Even grid functions are expanded in the cosine basis
//   c_m(x) = N_m cos(pi m x / L),  m = 0 .. n/2,
// which is orthonormal for the rectangle-rule H product and diagonalises the
// spectral second derivative, so L_a becomes diag(k_m^2 + omega) minus a
// dense potential block.
#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "nlslab/field.hpp"
#include "nlslab/params.hpp"

namespace nlslab {

class EvenBasis {
 public:
  explicit EvenBasis(GridPtr grid);

  int size() const { return static_cast<int>(k_.size()); }
  const GridPtr& grid() const { return grid_; }
  // Column m holds c_m sampled on the grid.
  const Eigen::MatrixXd& samples() const { return samples_; }
  double wavenumber(int m) const { return k_[m]; }

  // H-coefficients (f, c_m)_H; exact for even f, the odd part is discarded.
  Eigen::VectorXd coefficients(std::span<const double> f) const;
  RVec synthesize(const Eigen::VectorXd& coeffs) const;

  // diag of the discrete X-Gram matrix: 1 + k_m^2, and 1 at the Nyquist mode
  // whose spectral first derivative vanishes.
  Eigen::VectorXd x_gram() const;

 private:
  GridPtr grid_;
  RVec k_;
  Eigen::MatrixXd samples_;
};

struct OperatorMatrix {
  double a = 0.0;
  double omega = 0.0;
  int size = 0;
  GridPtr grid;
  Eigen::MatrixXd entries;  // symmetric, in the EvenBasis coordinates
};

OperatorMatrix build_La(double a, double omega, GridPtr grid);

struct SpectralReport {
  std::vector<double> eigenvalues;  // ascending
  std::vector<RVec> eigenvectors;   // grid functions, unit H-norm
  std::vector<double> residuals;    // ||A v - mu B v|| / ||v|| per pair
  std::string constraint_description;
};

// k smallest eigenpairs of a dense symmetric solve. Throws std::runtime_error
// if the eigensolver fails and std::invalid_argument if k is out of range.
SpectralReport lowest_eigenpairs(const OperatorMatrix& opm, int k);

// <L_a v, v> = int (v'^2 + omega v^2 - a phi^2 v^2). Throws
// std::invalid_argument when v has parity defect above 1e-10.
double quadratic_form_La(double a, std::span<const double> v, double omega, const Grid& grid);

// <S''(phi_vec) v, v> as the four-block sum
//   <L_3 Re v1> + <L_1 Im v1> + <L_{g} Re v2> + <L_{-g} Im v2>,  g = gamma/kappa1
// (incoherent coupling: both v2 blocks use L_{g}).
double hessian_form(const FieldPair& v, const Params& params);

enum class Metric { H, X };

// Smallest value of <L_a v, v> / ||v||^2 over even v that are H-orthogonal to
// every constraint. Throws std::invalid_argument when the constraint Gram
// matrix has condition number above 1e12.
double constrained_min_rayleigh_La(double a, double omega, GridPtr grid,
                                   std::span<const RVec> constraints, Metric metric = Metric::X);

// Smallest hessian_form(w) / ||w||_X^2 over even pairs w H-orthogonal to the
// constraints. The Hessian is block diagonal over (Re u1, Im u1, Re u2,
// Im u2); constraints that each live in a single block are handled block by
// block, otherwise the coupled problem is solved.
double constrained_min_rayleigh(const Params& params, std::span<const FieldPair> constraints,
                                GridPtr grid);
double constrained_min_rayleigh(const Params& params, std::span<const FieldPair> constraints);

inline constexpr double kMaxConstraintCondition = 1e12;

}  // namespace nlslab
