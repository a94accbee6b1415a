#include "nlslab/modulation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nlslab/functionals.hpp"
#include "nlslab/waves.hpp"

namespace nlslab {

namespace {

cplx unit_phase(double theta) { return std::polar(1.0, theta); }

void require_in_tube(const FieldPair& u, const OrbitFrame& frame) {
  const double d = orbital_distance_x(u, frame);
  if (!(d <= frame.tube_radius())) {
    throw TubeError("state is outside the modulation tube (orbital distance " + std::to_string(d) +
                    ")");
  }
}

struct Aligned {
  double alpha;
  FieldPair m;
};

Aligned align(const FieldPair& u, const OrbitFrame& frame) {
  require_in_tube(u, frame);
  const double alpha = optimal_phase(u, frame.phi);
  return {alpha, unit_phase(-alpha) * u};
}

}  // namespace

OrbitFrame::OrbitFrame(FieldPair reference) : phi(std::move(reference)) {
  require_valid(phi);
  psi = swap_components(phi);
  phi_h2 = inner_h(phi, phi);
  psi_h2 = inner_h(psi, psi);
  phi_x = norm_x(phi);
  if (!(phi_h2 > 0.0)) throw std::invalid_argument("reference wave must be nonzero");
}

OrbitFrame OrbitFrame::from_params(const Params& params, GridPtr grid) {
  return OrbitFrame(phi_vec(params, std::move(grid)));
}

double optimal_phase(const FieldPair& u, const FieldPair& reference) {
  const cplx z = complex_pairing(u, reference);
  if (std::abs(z) < 1e-12 * norm_h(u) * norm_h(reference) || std::abs(z) == 0.0) {
    throw TubeError("degenerate phase pairing with the reference wave");
  }
  return std::arg(z);
}

double orbital_distance_x(const FieldPair& u, const OrbitFrame& frame) {
  const cplx z = complex_pairing_x(u, frame.phi);
  const double theta = z == cplx{} ? 0.0 : std::arg(z);
  return norm_x(u - unit_phase(theta) * frame.phi);
}

double orbital_distance_x(const FieldPair& u, const Params& params) {
  return orbital_distance_x(u, OrbitFrame::from_params(params, u.grid));
}

FieldPair aligned_state(const FieldPair& u, const OrbitFrame& frame) { return align(u, frame).m; }

FieldPair aligned_state(const FieldPair& u, const Params& params) {
  return aligned_state(u, OrbitFrame::from_params(params, u.grid));
}

double a_functional(const FieldPair& u, const OrbitFrame& frame) {
  return inner_h(kI * align(u, frame).m, frame.psi);
}

double a_functional(const FieldPair& u, const Params& params) {
  return a_functional(u, OrbitFrame::from_params(params, u.grid));
}

FieldPair q_field(const FieldPair& u, const OrbitFrame& frame) {
  const Aligned a = align(u, frame);
  const double ratio = inner_h(a.m, frame.psi) / inner_h(a.m, frame.phi);
  return unit_phase(a.alpha) * (frame.psi - ratio * frame.phi);
}

double p_functional(const FieldPair& u, const Params& params, const OrbitFrame& frame) {
  const Aligned a = align(u, frame);
  const double denom = inner_h(a.m, frame.phi);
  if (denom == 0.0) throw TubeError("(M(u), phi)_H vanishes");
  const FieldPair g = action_gradient(a.m, params);
  return inner_h(g, frame.psi) - inner_h(a.m, frame.psi) / denom * inner_h(g, frame.phi);
}

double p_functional(const FieldPair& u, const Params& params) {
  return p_functional(u, params, OrbitFrame::from_params(params, u.grid));
}

double p_functional_direct(const FieldPair& u, const Params& params, const OrbitFrame& frame) {
  return inner_h(energy_gradient(u, params), q_field(u, frame));
}

FieldPair Decomposition::reconstruct(const OrbitFrame& frame) const {
  return unit_phase(alpha) * ((1.0 + mu) * frame.phi + lambda * frame.psi + w);
}

Decomposition decompose(const FieldPair& u, const OrbitFrame& frame) {
  const Aligned a = align(u, frame);
  const FieldPair v = a.m - frame.phi;
  Decomposition d;
  d.alpha = a.alpha;
  d.lambda = inner_h(v, frame.psi) / frame.psi_h2;
  d.mu = inner_h(v, frame.phi) / frame.phi_h2;
  d.w = v - d.lambda * frame.psi - d.mu * frame.phi;
  return d;
}

Decomposition decompose(const FieldPair& u, const Params& params) {
  return decompose(u, OrbitFrame::from_params(params, u.grid));
}

DadtReport verify_dA_dt(const RunRecord& record, int stride) {
  if (stride < 1) throw std::invalid_argument("stride must be >= 1");
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < record.size(); i += static_cast<std::size_t>(stride)) idx.push_back(i);
  if (idx.size() < 3) throw std::invalid_argument("record too short for a centred difference");

  const double h = record.times[idx[1]] - record.times[idx[0]];
  for (std::size_t i = 1; i < idx.size(); ++i) {
    const double gap = record.times[idx[i]] - record.times[idx[i - 1]];
    if (std::abs(gap - h) > 1e-9 * h) throw std::invalid_argument("record spacing is not uniform");
  }

  DadtReport report{h, 0.0, 0};
  for (std::size_t i = 1; i + 1 < idx.size(); ++i) {
    const double a_prev = record.a_series[idx[i - 1]];
    const double a_next = record.a_series[idx[i + 1]];
    const double p = record.p_series[idx[i]];
    if (std::isnan(a_prev) || std::isnan(a_next) || std::isnan(p)) continue;
    report.max_defect = std::max(report.max_defect, std::abs((a_next - a_prev) / (2.0 * h) - p));
    ++report.points;
  }
  return report;
}

EnergyPinReport verify_energy_pin(const FieldPair& u, const Params& params) {
  const OrbitFrame frame = OrbitFrame::from_params(params, u.grid);
  if (std::abs(charge(u) - charge(frame.phi)) > 1e-10) {
    throw std::invalid_argument("energy pin needs Q(u) == Q(phi)");
  }
  EnergyPinReport r;
  r.energy = energy(u, params);
  r.energy_wave = energy(frame.phi, params);
  r.lambda = inner_h(aligned_state(u, frame), frame.psi) / frame.psi_h2;
  r.p = p_functional(u, params, frame);
  r.margin = r.energy - 0.5 * r.lambda * r.p - r.energy_wave;
  r.holds = r.margin >= -kEnergyPinTolerance;
  return r;
}

}  // namespace nlslab
