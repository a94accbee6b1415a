#include "nlslab/linops.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "nlslab/waves.hpp"

namespace nlslab {

namespace {

constexpr double kParityTolerance = 1e-10;

Eigen::VectorXd potential_weights(double omega, const Grid& grid, const GridPtr& ptr) {
  const SolitonProfile p = soliton(omega, ptr);
  Eigen::VectorXd w(grid.n());
  for (int j = 0; j < grid.n(); ++j) w[j] = p.samples[j] * p.samples[j] * grid.dx();
  return w;
}

// Throws when the constraint columns are (numerically) dependent.
void require_well_conditioned(const Eigen::MatrixXd& b) {
  if (b.cols() == 0) return;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b.transpose() * b, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > kMaxConstraintCondition) {
    throw std::invalid_argument("constraint Gram matrix is degenerate");
  }
}

// min of v^T A v / v^T G v over v with B^T v = 0, G = diag(g).
double projected_min(const Eigen::MatrixXd& a, const Eigen::VectorXd& g, const Eigen::MatrixXd& b) {
  const Eigen::Index m = a.rows();
  const Eigen::Index r = b.cols();
  if (r >= m) throw std::invalid_argument("too many constraints for the basis size");
  Eigen::MatrixXd z;
  if (r == 0) {
    z = Eigen::MatrixXd::Identity(m, m);
  } else {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(b);
    const Eigen::MatrixXd q = qr.householderQ();
    z = q.rightCols(m - r);
  }
  const Eigen::MatrixXd az = z.transpose() * a * z;
  const Eigen::MatrixXd gz = z.transpose() * g.asDiagonal() * z;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(az, gz, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("generalized eigensolve failed");
  return es.eigenvalues().minCoeff();
}

RVec real_slot(const CVec& v, bool imaginary) {
  RVec out(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) out[j] = imaginary ? v[j].imag() : v[j].real();
  return out;
}

std::array<double, 4> block_coefficients(const Params& params) {
  const double g = params.gamma / params.kappa1;
  const double im2 = params.coupling == Coupling::Coherent ? -g : g;
  return {3.0, 1.0, g, im2};
}

}  // namespace

EvenBasis::EvenBasis(GridPtr grid) : grid_(std::move(grid)) {
  if (!grid_) throw std::invalid_argument("basis needs a grid");
  const int n = grid_->n();
  const int modes = n / 2 + 1;
  const double length = grid_->half_length();
  k_.resize(modes);
  samples_.resize(n, modes);
  for (int m = 0; m < modes; ++m) {
    k_[m] = std::numbers::pi * m / length;
    const bool edge = m == 0 || m == n / 2;
    const double norm = 1.0 / std::sqrt(edge ? 2.0 * length : length);
    for (int j = 0; j < n; ++j) {
      // x_j / L = (2j - n) / n; reduce the integer phase mod 2n before scaling.
      const long long phase = (static_cast<long long>(m) * (2 * j - n)) % (2LL * n);
      samples_(j, m) = norm * std::cos(std::numbers::pi * static_cast<double>(phase) / n);
    }
  }
}

Eigen::VectorXd EvenBasis::coefficients(std::span<const double> f) const {
  if (f.size() != static_cast<std::size_t>(grid_->n())) throw GridMismatch("length mismatch");
  const Eigen::Map<const Eigen::VectorXd> fv(f.data(), static_cast<Eigen::Index>(f.size()));
  return samples_.transpose() * fv * grid_->dx();
}

RVec EvenBasis::synthesize(const Eigen::VectorXd& coeffs) const {
  const Eigen::VectorXd v = samples_ * coeffs;
  return RVec(v.data(), v.data() + v.size());
}

Eigen::VectorXd EvenBasis::x_gram() const {
  Eigen::VectorXd g(size());
  for (int m = 0; m < size(); ++m) g[m] = 1.0 + k_[m] * k_[m];
  g[size() - 1] = 1.0;
  return g;
}

OperatorMatrix build_La(double a, double omega, GridPtr grid) {
  if (!(omega > 0.0)) throw std::invalid_argument("omega must be positive");
  const EvenBasis basis(grid);
  const int m = basis.size();
  OperatorMatrix opm{a, omega, m, grid, Eigen::MatrixXd::Zero(m, m)};
  if (a != 0.0) {
    const Eigen::VectorXd w = potential_weights(omega, *grid, grid);
    const Eigen::MatrixXd& s = basis.samples();
    opm.entries.noalias() = -a * (s.transpose() * w.asDiagonal() * s);
    // Symmetric by construction; remove rounding asymmetry.
    opm.entries = 0.5 * (opm.entries + opm.entries.transpose()).eval();
  }
  for (int i = 0; i < m; ++i) {
    const double k = basis.wavenumber(i);
    opm.entries(i, i) += k * k + omega;
  }
  return opm;
}

SpectralReport lowest_eigenpairs(const OperatorMatrix& opm, int k) {
  if (k < 1 || k > opm.size) throw std::invalid_argument("k must be in 1..size");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(opm.entries);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
  const EvenBasis basis(opm.grid);
  SpectralReport report;
  report.constraint_description = "even subspace, H metric";
  for (int i = 0; i < k; ++i) {
    Eigen::VectorXd v = es.eigenvectors().col(i);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v[arg] < 0) v = -v;
    const double mu = es.eigenvalues()[i];
    report.eigenvalues.push_back(mu);
    report.residuals.push_back((opm.entries * v - mu * v).norm() / v.norm());
    report.eigenvectors.push_back(basis.synthesize(v));
  }
  return report;
}

double quadratic_form_La(double a, std::span<const double> v, double omega, const Grid& grid) {
  if (v.size() != static_cast<std::size_t>(grid.n())) throw GridMismatch("length mismatch");
  double defect = 0.0;
  for (int j = 0; j < grid.n(); ++j) defect = std::max(defect, std::abs(v[j] - v[grid.mirror(j)]));
  if (defect > kParityTolerance) throw std::invalid_argument("quadratic form needs an even function");
  const auto x = grid.points();
  double mass = 0.0, potential = 0.0;
  for (int j = 0; j < grid.n(); ++j) {
    const double phi = soliton_value(omega, x[j]);
    mass += v[j] * v[j];
    potential += phi * phi * v[j] * v[j];
  }
  return dirichlet_form(v, grid) + (omega * mass - a * potential) * grid.dx();
}

double hessian_form(const FieldPair& v, const Params& params) {
  require_valid(v);
  params.validate();
  const auto a = block_coefficients(params);
  const Grid& g = *v.grid;
  return quadratic_form_La(a[0], real_slot(v.u1, false), params.omega, g) +
         quadratic_form_La(a[1], real_slot(v.u1, true), params.omega, g) +
         quadratic_form_La(a[2], real_slot(v.u2, false), params.omega, g) +
         quadratic_form_La(a[3], real_slot(v.u2, true), params.omega, g);
}

double constrained_min_rayleigh_La(double a, double omega, GridPtr grid,
                                   std::span<const RVec> constraints, Metric metric) {
  const OperatorMatrix opm = build_La(a, omega, grid);
  const EvenBasis basis(grid);
  Eigen::MatrixXd b(basis.size(), static_cast<Eigen::Index>(constraints.size()));
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    b.col(static_cast<Eigen::Index>(i)) = basis.coefficients(constraints[i]);
  }
  require_well_conditioned(b);
  const Eigen::VectorXd g =
      metric == Metric::X ? basis.x_gram() : Eigen::VectorXd::Ones(basis.size());
  return projected_min(opm.entries, g, b);
}

double constrained_min_rayleigh(const Params& params, std::span<const FieldPair> constraints,
                                GridPtr grid) {
  params.validate();
  const EvenBasis basis(grid);
  const int m = basis.size();
  const auto coeffs = block_coefficients(params);

  // Constraint coefficients per block: (Re u1, Im u1, Re u2, Im u2).
  const int r = static_cast<int>(constraints.size());
  Eigen::MatrixXd full(4 * m, r);
  std::vector<int> home(r, -1);
  bool separable = true;
  for (int i = 0; i < r; ++i) {
    const FieldPair& c = constraints[i];
    if (!c.grid || !c.grid->same_as(*grid)) throw GridMismatch("constraint on a different grid");
    require_valid(c);
    const RVec parts[4] = {real_slot(c.u1, false), real_slot(c.u1, true), real_slot(c.u2, false),
                           real_slot(c.u2, true)};
    double total = 0.0;
    std::array<double, 4> block_norm{};
    for (int blk = 0; blk < 4; ++blk) {
      full.block(blk * m, i, m, 1) = basis.coefficients(parts[blk]);
      block_norm[blk] = full.block(blk * m, i, m, 1).norm();
      total = std::max(total, block_norm[blk]);
    }
    int supported = 0;
    for (int blk = 0; blk < 4; ++blk) {
      if (block_norm[blk] > 1e-14 * total) {
        ++supported;
        home[i] = blk;
      }
    }
    if (supported != 1) separable = false;
  }
  require_well_conditioned(full);

  const Eigen::VectorXd gram = basis.x_gram();
  if (separable) {
    double best = std::numeric_limits<double>::infinity();
    for (int blk = 0; blk < 4; ++blk) {
      std::vector<int> cols;
      for (int i = 0; i < r; ++i)
        if (home[i] == blk) cols.push_back(i);
      Eigen::MatrixXd b(m, static_cast<Eigen::Index>(cols.size()));
      for (std::size_t c = 0; c < cols.size(); ++c) {
        b.col(static_cast<Eigen::Index>(c)) = full.block(blk * m, cols[c], m, 1);
      }
      const OperatorMatrix opm = build_La(coeffs[blk], params.omega, grid);
      best = std::min(best, projected_min(opm.entries, gram, b));
    }
    return best;
  }

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(4 * m, 4 * m);
  Eigen::VectorXd g(4 * m);
  for (int blk = 0; blk < 4; ++blk) {
    a.block(blk * m, blk * m, m, m) = build_La(coeffs[blk], params.omega, grid).entries;
    g.segment(blk * m, m) = gram;
  }
  return projected_min(a, g, full);
}

double constrained_min_rayleigh(const Params& params, std::span<const FieldPair> constraints) {
  return constrained_min_rayleigh(params, constraints,
                                  make_grid(1024, default_half_length(params.omega)));
}

}  // namespace nlslab
