// Periodic grids, complex field pairs and the discrete H / X inner products.
//
// The line is replaced by the periodic box [-L, L) sampled at n points
// x_j = -L + j dx. Integrals use the rectangle rule, derivatives are spectral.
// The real inner product on pairs is
//
//   (a, b)_H = Re sum_j sum_c a_c(x_j) conj(b_c(x_j)) dx
//   (a, b)_X = (a, b)_H + (a', b')_H
//
// and the sign convention (a, i b)_H = Im complex_pairing(a, b) is used by
// every module that pairs against an imaginary direction.
#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace nlslab {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;
using RVec = std::vector<double>;

inline constexpr cplx kI{0.0, 1.0};

class GridMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class Grid {
 public:
  Grid(int n, double half_length);

  int n() const { return n_; }
  double half_length() const { return half_length_; }
  double dx() const { return dx_; }
  std::span<const double> points() const { return points_; }
  std::span<const double> wavenumbers() const { return wavenumbers_; }

  // Index of the sample at -x_j (x_0 = -L wraps onto itself).
  int mirror(int j) const { return (n_ - j) % n_; }
  int origin_index() const { return n_ / 2; }

  bool same_as(const Grid& other) const {
    return this == &other || (n_ == other.n_ && half_length_ == other.half_length_);
  }

 private:
  int n_;
  double half_length_;
  double dx_;
  RVec points_;
  RVec wavenumbers_;
};

using GridPtr = std::shared_ptr<const Grid>;

// n must be a power of two >= 16 and half_length > 0.
GridPtr make_grid(int n, double half_length);

// Box half-length 40/sqrt(omega): the soliton tail sech(sqrt(omega) L) is
// below double precision at the wrap point.
double default_half_length(double omega);

struct FieldPair {
  GridPtr grid;
  CVec u1;
  CVec u2;

  FieldPair() = default;
  explicit FieldPair(GridPtr g);
  FieldPair(GridPtr g, CVec first, CVec second);

  std::size_t size() const { return u1.size(); }

  FieldPair& operator+=(const FieldPair& other);
  FieldPair& operator-=(const FieldPair& other);
  FieldPair& operator*=(cplx s);
};

FieldPair operator+(FieldPair a, const FieldPair& b);
FieldPair operator-(FieldPair a, const FieldPair& b);
FieldPair operator*(cplx s, FieldPair a);
FieldPair operator*(double s, FieldPair a);

// Throws GridMismatch unless both fields live on the same grid with
// consistent lengths.
void require_same_grid(const FieldPair& a, const FieldPair& b);
void require_valid(const FieldPair& a);

double inner_h(const FieldPair& a, const FieldPair& b);
double inner_x(const FieldPair& a, const FieldPair& b);
cplx complex_pairing(const FieldPair& a, const FieldPair& b);
// sum_c int (a_c conj(b_c) + a_c' conj(b_c')) dx; its argument minimises the
// X-distance over phase rotations.
cplx complex_pairing_x(const FieldPair& a, const FieldPair& b);

double norm_h(const FieldPair& a);
double norm_x(const FieldPair& a);

// Inverse transform of (i k) times the transform; the Nyquist mode is zeroed.
CVec spectral_derivative(std::span<const cplx> f, const Grid& grid);
// Inverse transform of (-k^2) times the transform.
CVec spectral_second_derivative(std::span<const cplx> f, const Grid& grid);
RVec spectral_derivative(std::span<const double> f, const Grid& grid);
RVec spectral_second_derivative(std::span<const double> f, const Grid& grid);

FieldPair derivative(const FieldPair& a);

// (f, -f'')_{L2} = sum_m k_m^2 |hat f_m|^2 dx / n, the quadratic form of the
// spectral second derivative (the Nyquist mode keeps its k^2).
double dirichlet_form(std::span<const cplx> f, const Grid& grid);
double dirichlet_form(std::span<const double> f, const Grid& grid);

// Parseval form of (a, a)_H computed from transform coefficients.
double norm_h_squared_spectral(const FieldPair& a);

// max_j |u(x_j) - u(-x_j)| over both components.
double parity_defect(const FieldPair& a);
FieldPair symmetrized(const FieldPair& a);

double max_abs(const FieldPair& a);
bool all_finite(const FieldPair& a);

// (u1, u2) -> (u2, u1); maps phi_vec onto psi_vec.
FieldPair swap_components(const FieldPair& a);

// Complex pair from two real grid functions.
FieldPair from_real(GridPtr grid, std::span<const double> first, std::span<const double> second);

// Removes the H-components of v along each direction (Gram-Schmidt, so the
// directions need not be orthogonal).
FieldPair project_out(const FieldPair& v, std::span<const FieldPair> directions);

// Rectangle-rule integral of a real grid function.
double integrate(std::span<const double> f, const Grid& grid);

}  // namespace nlslab
