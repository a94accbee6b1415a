// Phase modulation around the orbit {e^{i theta} phi_vec}: the H-optimal phase
// alpha(u), the aligned state M(u) = e^{-i alpha} u, the pair
//   A(u) = (i M(u), psi)_H,   P(u) = <S'(u), q(u)>,
// and the decomposition M(u) - phi = lambda psi + mu phi + w with w in W.
// psi is always swap_components(phi), so a frame is fixed by its reference.
#pragma once

#include <stdexcept>

#include "nlslab/dynamics.hpp"
#include "nlslab/field.hpp"
#include "nlslab/params.hpp"

namespace nlslab {

// Raised for states outside the modulation tube or with a degenerate pairing.
class TubeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct OrbitFrame {
  FieldPair phi;
  FieldPair psi;
  double phi_h2 = 0.0;  // ||phi||_H^2
  double psi_h2 = 0.0;
  double phi_x = 0.0;   // ||phi||_X

  explicit OrbitFrame(FieldPair reference);
  static OrbitFrame from_params(const Params& params, GridPtr grid);

  // Tube radius 0.5 ||phi||_X in the X orbital distance.
  double tube_radius() const { return 0.5 * phi_x; }
};

// arg (u, reference) pairing. Throws TubeError when
// |pairing| < 1e-12 ||u||_H ||reference||_H.
double optimal_phase(const FieldPair& u, const FieldPair& reference);

// inf_theta ||u - e^{i theta} phi||_X, minimised in closed form at the
// argument of the X pairing.
double orbital_distance_x(const FieldPair& u, const OrbitFrame& frame);
double orbital_distance_x(const FieldPair& u, const Params& params);

// The functions below throw TubeError when orbital_distance_x exceeds the
// tube radius.
FieldPair aligned_state(const FieldPair& u, const OrbitFrame& frame);
FieldPair aligned_state(const FieldPair& u, const Params& params);

double a_functional(const FieldPair& u, const OrbitFrame& frame);
double a_functional(const FieldPair& u, const Params& params);

// q(u) = e^{i alpha} (psi - ((M, psi)_H / (M, phi)_H) phi).
FieldPair q_field(const FieldPair& u, const OrbitFrame& frame);

// P through the aligned representation
//   <S'(M), psi> - ((M, psi)_H / (M, phi)_H) <S'(M), phi>.
double p_functional(const FieldPair& u, const Params& params, const OrbitFrame& frame);
double p_functional(const FieldPair& u, const Params& params);
// P = <E'(u), q(u)> evaluated directly.
double p_functional_direct(const FieldPair& u, const Params& params, const OrbitFrame& frame);

struct Decomposition {
  double lambda = 0.0;
  double mu = 0.0;
  FieldPair w;
  double alpha = 0.0;

  // e^{i alpha} (phi + lambda psi + mu phi + w)
  FieldPair reconstruct(const OrbitFrame& frame) const;
};

Decomposition decompose(const FieldPair& u, const OrbitFrame& frame);
Decomposition decompose(const FieldPair& u, const Params& params);

struct DadtReport {
  double spacing = 0.0;     // sample spacing h used for the centred difference
  double max_defect = 0.0;  // max |(A_{i+1} - A_{i-1}) / 2h - P_i|
  std::size_t points = 0;   // interior samples compared
};

// Compares a centred difference of the A series with the P series, using
// every stride-th sample. Samples with NaN entries are skipped. Throws
// std::invalid_argument when fewer than three samples remain or the spacing
// is not uniform.
DadtReport verify_dA_dt(const RunRecord& record, int stride = 1);

struct EnergyPinReport {
  double energy = 0.0;       // E(u)
  double energy_wave = 0.0;  // E(phi)
  double lambda = 0.0;       // (M, psi)_H / ||psi||_H^2
  double p = 0.0;
  double margin = 0.0;       // E(u) - (lambda / 2) P(u) - E(phi)
  bool holds = false;        // margin >= -1e-9
};

// Throws std::invalid_argument when |Q(u) - Q(phi)| > 1e-10.
EnergyPinReport verify_energy_pin(const FieldPair& u, const Params& params);

inline constexpr double kEnergyPinTolerance = 1e-9;

}  // namespace nlslab
