// Strang split-step integration of i u_t = E'(u):
//   kinetic half step  u_hat <- exp(-i k^2 dt/2) u_hat   (exact, unitary)
//   nonlinear step     pointwise ODE over dt
//   kinetic half step
// Consecutive half steps between diagnostic samples are merged.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nlslab/field.hpp"
#include "nlslab/params.hpp"

namespace nlslab {

class BlowupError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EvolveConfig {
  double dt = 5e-4;
  double t_end = 1.0;
  int sample_every = 1;
  double blowup_threshold = 1e6;
  bool symmetrize = false;
  // Stop once the orbital distance exceeds this value (needs a reference).
  std::optional<double> stop_distance;

  // dt in (0, 0.1], t_end >= dt, sample_every >= 1, threshold > 0.
  void validate() const;
};

enum class Termination { Completed, Blowup, DistanceReached };

std::string_view to_string(Termination t);

struct RunRecord {
  std::vector<double> times;
  std::vector<double> energy_drift;  // (E(t) - E(0)) / |E(0)|, absolute if E(0) == 0
  std::vector<double> charge_drift;
  std::vector<double> orbital_distance_x;  // NaN without a reference
  std::vector<double> a_series;            // NaN without a reference or outside the tube
  std::vector<double> p_series;
  FieldPair final_state;
  bool terminated_early = false;
  Termination termination = Termination::Completed;
  std::string reason;
  // Largest pointwise change of |u1|^2 + |u2|^2 across one coherent
  // nonlinear substep; that sum is invariant under the exact substep flow.
  double max_substep_norm_drift = 0.0;
  double dt = 0.0;

  std::size_t size() const { return times.size(); }
};

// Pointwise flow of i u_t = -N(u) over dt. Incoherent coupling and points
// with one vanishing component are exact phase rotations; the coherent
// coupling otherwise takes one classical RK4 step.
FieldPair nonlinear_substep(const FieldPair& u, double dt, const Params& params);

// Exact free flow u_hat <- exp(-i k^2 dt) u_hat.
FieldPair kinetic_substep(const FieldPair& u, double dt);

// One Strang step. Throws BlowupError when max |u| exceeds the threshold or a
// sample is not finite.
FieldPair step(const FieldPair& u, double dt, const Params& params,
               double blowup_threshold = 1e6);

// Reusable workspace for one trajectory: cached kinetic phases and scratch.
class SplitStepper {
 public:
  SplitStepper(GridPtr grid, double dt, const Params& params);

  // Advances `steps` full Strang steps in place with merged kinetic halves.
  // Throws BlowupError after the step in which the state leaves the bound.
  void advance(FieldPair& u, long steps, double blowup_threshold);
  double max_substep_norm_drift() const { return norm_drift_; }

 private:
  void kinetic(FieldPair& u, const CVec& phase);
  void nonlinear(FieldPair& u);

  GridPtr grid_;
  double dt_;
  Params params_;
  CVec half_phase_;
  CVec full_phase_;
  CVec scratch_;
  double norm_drift_ = 0.0;
};

// Integrates to t_end, sampling every sample_every steps (t = 0 included).
// With a reference wave, also records the X orbital distance and the A / P
// series relative to it. Blowup ends the record early instead of throwing.
RunRecord evolve(const FieldPair& u0, const EvolveConfig& cfg, const Params& params,
                 const std::optional<FieldPair>& reference = std::nullopt);

}  // namespace nlslab
