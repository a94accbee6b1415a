#include "nlslab/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "nlslab/fft.hpp"

namespace nlslab {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void require_length(std::size_t len, const Grid& grid) {
  if (len != static_cast<std::size_t>(grid.n())) {
    throw GridMismatch("array length " + std::to_string(len) + " does not match grid size " +
                       std::to_string(grid.n()));
  }
}

// Multiplies the transform of f by mult(k, m) and transforms back.
template <class Multiplier>
CVec fourier_multiply(std::span<const cplx> f, const Grid& grid, Multiplier mult) {
  require_length(f.size(), grid);
  const int n = grid.n();
  const Fft& fft = Fft::get(n);
  CVec hat(n), out(n);
  fft.forward(f.data(), hat.data());
  const auto k = grid.wavenumbers();
  for (int m = 0; m < n; ++m) hat[m] *= mult(k[m], m);
  fft.inverse(hat.data(), out.data());
  return out;
}

CVec to_complex(std::span<const double> f) { return CVec(f.begin(), f.end()); }

RVec real_part(const CVec& f) {
  RVec out(f.size());
  std::transform(f.begin(), f.end(), out.begin(), [](cplx z) { return z.real(); });
  return out;
}

cplx raw_pairing(const CVec& a, const CVec& b) {
  cplx s{0.0, 0.0};
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * std::conj(b[j]);
  return s;
}

}  // namespace

Grid::Grid(int n, double half_length) : n_(n), half_length_(half_length) {
  if (n < 16 || !is_power_of_two(n)) {
    throw std::invalid_argument("grid size " + std::to_string(n) +
                                " is not a power of two >= 16");
  }
  if (!(half_length > 0.0) || !std::isfinite(half_length)) {
    throw std::invalid_argument("grid half-length must be positive");
  }
  dx_ = 2.0 * half_length / n;
  points_.resize(n);
  wavenumbers_.resize(n);
  for (int j = 0; j < n; ++j) {
    points_[j] = -half_length + j * dx_;
    const int m = j < n / 2 ? j : j - n;
    wavenumbers_[j] = std::numbers::pi * m / half_length;
  }
  // Exact zero at the centre, independent of rounding in -L + (n/2) dx.
  points_[n / 2] = 0.0;
}

GridPtr make_grid(int n, double half_length) { return std::make_shared<const Grid>(n, half_length); }

double default_half_length(double omega) {
  if (!(omega > 0.0)) throw std::invalid_argument("omega must be positive");
  return 40.0 / std::sqrt(omega);
}

FieldPair::FieldPair(GridPtr g) : grid(std::move(g)) {
  if (!grid) throw std::invalid_argument("field pair needs a grid");
  u1.assign(grid->n(), cplx{});
  u2.assign(grid->n(), cplx{});
}

FieldPair::FieldPair(GridPtr g, CVec first, CVec second)
    : grid(std::move(g)), u1(std::move(first)), u2(std::move(second)) {
  if (!grid) throw std::invalid_argument("field pair needs a grid");
  require_length(u1.size(), *grid);
  require_length(u2.size(), *grid);
}

FieldPair& FieldPair::operator+=(const FieldPair& other) {
  require_same_grid(*this, other);
  for (std::size_t j = 0; j < u1.size(); ++j) {
    u1[j] += other.u1[j];
    u2[j] += other.u2[j];
  }
  return *this;
}

FieldPair& FieldPair::operator-=(const FieldPair& other) {
  require_same_grid(*this, other);
  for (std::size_t j = 0; j < u1.size(); ++j) {
    u1[j] -= other.u1[j];
    u2[j] -= other.u2[j];
  }
  return *this;
}

FieldPair& FieldPair::operator*=(cplx s) {
  for (auto& z : u1) z *= s;
  for (auto& z : u2) z *= s;
  return *this;
}

FieldPair operator+(FieldPair a, const FieldPair& b) { return a += b; }
FieldPair operator-(FieldPair a, const FieldPair& b) { return a -= b; }
FieldPair operator*(cplx s, FieldPair a) { return a *= s; }
FieldPair operator*(double s, FieldPair a) { return a *= cplx{s, 0.0}; }

void require_valid(const FieldPair& a) {
  if (!a.grid) throw std::invalid_argument("field pair has no grid");
  require_length(a.u1.size(), *a.grid);
  require_length(a.u2.size(), *a.grid);
}

void require_same_grid(const FieldPair& a, const FieldPair& b) {
  require_valid(a);
  require_valid(b);
  if (!a.grid->same_as(*b.grid)) throw GridMismatch("field pairs live on different grids");
}

cplx complex_pairing(const FieldPair& a, const FieldPair& b) {
  require_same_grid(a, b);
  return (raw_pairing(a.u1, b.u1) + raw_pairing(a.u2, b.u2)) * a.grid->dx();
}

double inner_h(const FieldPair& a, const FieldPair& b) { return complex_pairing(a, b).real(); }

cplx complex_pairing_x(const FieldPair& a, const FieldPair& b) {
  return complex_pairing(a, b) + complex_pairing(derivative(a), derivative(b));
}

double inner_x(const FieldPair& a, const FieldPair& b) { return complex_pairing_x(a, b).real(); }

double norm_h(const FieldPair& a) { return std::sqrt(std::max(0.0, inner_h(a, a))); }
double norm_x(const FieldPair& a) { return std::sqrt(std::max(0.0, inner_x(a, a))); }

CVec spectral_derivative(std::span<const cplx> f, const Grid& grid) {
  const int nyquist = grid.n() / 2;
  return fourier_multiply(f, grid, [nyquist](double k, int m) {
    return m == nyquist ? cplx{} : cplx{0.0, k};
  });
}

CVec spectral_second_derivative(std::span<const cplx> f, const Grid& grid) {
  return fourier_multiply(f, grid, [](double k, int) { return cplx{-k * k, 0.0}; });
}

RVec spectral_derivative(std::span<const double> f, const Grid& grid) {
  const CVec z = to_complex(f);
  return real_part(spectral_derivative(std::span<const cplx>(z), grid));
}

RVec spectral_second_derivative(std::span<const double> f, const Grid& grid) {
  const CVec z = to_complex(f);
  return real_part(spectral_second_derivative(std::span<const cplx>(z), grid));
}

FieldPair derivative(const FieldPair& a) {
  require_valid(a);
  return FieldPair(a.grid, spectral_derivative(std::span<const cplx>(a.u1), *a.grid),
                   spectral_derivative(std::span<const cplx>(a.u2), *a.grid));
}

double dirichlet_form(std::span<const cplx> f, const Grid& grid) {
  require_length(f.size(), grid);
  const int n = grid.n();
  CVec hat(n);
  Fft::get(n).forward(f.data(), hat.data());
  const auto k = grid.wavenumbers();
  double s = 0.0;
  for (int m = 0; m < n; ++m) s += k[m] * k[m] * std::norm(hat[m]);
  return s * grid.dx() / n;
}

double dirichlet_form(std::span<const double> f, const Grid& grid) {
  const CVec z = to_complex(f);
  return dirichlet_form(std::span<const cplx>(z), grid);
}

double norm_h_squared_spectral(const FieldPair& a) {
  require_valid(a);
  const int n = a.grid->n();
  const Fft& fft = Fft::get(n);
  CVec hat(n);
  double s = 0.0;
  for (const CVec* c : {&a.u1, &a.u2}) {
    fft.forward(c->data(), hat.data());
    for (const auto& z : hat) s += std::norm(z);
  }
  // Parseval: sum |f_j|^2 = (1/n) sum |hat_m|^2.
  return s * a.grid->dx() / n;
}

double parity_defect(const FieldPair& a) {
  require_valid(a);
  double d = 0.0;
  for (int j = 0; j < a.grid->n(); ++j) {
    const int r = a.grid->mirror(j);
    d = std::max({d, std::abs(a.u1[j] - a.u1[r]), std::abs(a.u2[j] - a.u2[r])});
  }
  return d;
}

FieldPair symmetrized(const FieldPair& a) {
  require_valid(a);
  FieldPair out(a.grid);
  for (int j = 0; j < a.grid->n(); ++j) {
    const int r = a.grid->mirror(j);
    out.u1[j] = 0.5 * (a.u1[j] + a.u1[r]);
    out.u2[j] = 0.5 * (a.u2[j] + a.u2[r]);
  }
  return out;
}

double max_abs(const FieldPair& a) {
  double m = 0.0;
  for (const auto& z : a.u1) m = std::max(m, std::abs(z));
  for (const auto& z : a.u2) m = std::max(m, std::abs(z));
  return m;
}

bool all_finite(const FieldPair& a) {
  auto finite = [](cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); };
  return std::all_of(a.u1.begin(), a.u1.end(), finite) &&
         std::all_of(a.u2.begin(), a.u2.end(), finite);
}

FieldPair swap_components(const FieldPair& a) {
  require_valid(a);
  return FieldPair(a.grid, a.u2, a.u1);
}

FieldPair from_real(GridPtr grid, std::span<const double> first, std::span<const double> second) {
  return FieldPair(grid, to_complex(first), to_complex(second));
}

FieldPair project_out(const FieldPair& v, std::span<const FieldPair> directions) {
  std::vector<FieldPair> basis;
  for (const auto& d : directions) {
    FieldPair b = d;
    for (const auto& e : basis) b -= inner_h(b, e) * e;
    const double nb = norm_h(b);
    if (nb == 0.0) continue;
    basis.push_back((1.0 / nb) * b);
  }
  FieldPair out = v;
  for (const auto& e : basis) out -= inner_h(out, e) * e;
  return out;
}

double integrate(std::span<const double> f, const Grid& grid) {
  require_length(f.size(), grid);
  double s = 0.0;
  for (double v : f) s += v;
  return s * grid.dx();
}

}  // namespace nlslab
