#include "nlslab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlslab/fft.hpp"
#include "nlslab/functionals.hpp"
#include "nlslab/modulation.hpp"

namespace nlslab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

CVec kinetic_phase(const Grid& grid, double tau) {
  const auto k = grid.wavenumbers();
  CVec phase(grid.n());
  for (int m = 0; m < grid.n(); ++m) phase[m] = std::polar(1.0, -k[m] * k[m] * tau);
  return phase;
}

struct PointRhs {
  double k1, k2, g;
  // d/dt (a, b) for i u_t = -N(u), coherent coupling.
  void operator()(cplx a, cplx b, cplx& da, cplx& db) const {
    da = kI * (k1 * std::norm(a) * a + g * std::conj(a) * b * b);
    db = kI * (k2 * std::norm(b) * b + g * std::conj(b) * a * a);
  }
};

// Returns the change of |a|^2 + |b|^2 over the step.
double coherent_point(cplx& a, cplx& b, double dt, const Params& p) {
  if (b == cplx{}) {
    a *= std::polar(1.0, p.kappa1 * std::norm(a) * dt);
    return 0.0;
  }
  if (a == cplx{}) {
    b *= std::polar(1.0, p.kappa2 * std::norm(b) * dt);
    return 0.0;
  }
  const PointRhs f{p.kappa1, p.kappa2, p.gamma};
  const double before = std::norm(a) + std::norm(b);
  cplx ka1, kb1, ka2, kb2, ka3, kb3, ka4, kb4;
  f(a, b, ka1, kb1);
  f(a + 0.5 * dt * ka1, b + 0.5 * dt * kb1, ka2, kb2);
  f(a + 0.5 * dt * ka2, b + 0.5 * dt * kb2, ka3, kb3);
  f(a + dt * ka3, b + dt * kb3, ka4, kb4);
  a += dt / 6.0 * (ka1 + 2.0 * ka2 + 2.0 * ka3 + ka4);
  b += dt / 6.0 * (kb1 + 2.0 * kb2 + 2.0 * kb3 + kb4);
  return std::abs(std::norm(a) + std::norm(b) - before);
}

void incoherent_point(cplx& a, cplx& b, double dt, const Params& p) {
  const double na = std::norm(a), nb = std::norm(b);
  a *= std::polar(1.0, (p.kappa1 * na + p.gamma * nb) * dt);
  b *= std::polar(1.0, (p.kappa2 * nb + p.gamma * na) * dt);
}

// Applies the pointwise flow in place and returns the largest norm change.
double nonlinear_in_place(FieldPair& u, double dt, const Params& p) {
  double drift = 0.0;
  if (p.coupling == Coupling::Incoherent) {
    for (std::size_t j = 0; j < u.size(); ++j) incoherent_point(u.u1[j], u.u2[j], dt, p);
  } else {
    for (std::size_t j = 0; j < u.size(); ++j) {
      drift = std::max(drift, coherent_point(u.u1[j], u.u2[j], dt, p));
    }
  }
  return drift;
}

void check_bounded(const FieldPair& u, double threshold) {
  const double limit = threshold * threshold;
  auto bad = [limit](cplx z) {
    const double s = std::norm(z);
    return !(s <= limit);  // also catches NaN
  };
  if (std::any_of(u.u1.begin(), u.u1.end(), bad) || std::any_of(u.u2.begin(), u.u2.end(), bad)) {
    throw BlowupError("field left the bound " + std::to_string(threshold));
  }
}

double relative_drift(double value, double initial) {
  const double diff = value - initial;
  return initial == 0.0 ? diff : diff / std::abs(initial);
}

}  // namespace

void EvolveConfig::validate() const {
  if (!(dt > 0.0) || dt > 0.1) throw std::invalid_argument("dt must lie in (0, 0.1]");
  if (!(t_end >= dt) || !std::isfinite(t_end)) throw std::invalid_argument("t_end must be >= dt");
  if (sample_every < 1) throw std::invalid_argument("sample_every must be >= 1");
  if (!(blowup_threshold > 0.0)) throw std::invalid_argument("blowup_threshold must be positive");
  if (stop_distance && !(*stop_distance > 0.0)) {
    throw std::invalid_argument("stop_distance must be positive");
  }
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::Completed: return "completed";
    case Termination::Blowup: return "blowup";
    case Termination::DistanceReached: return "distance_reached";
  }
  return "unknown";
}

FieldPair nonlinear_substep(const FieldPair& u, double dt, const Params& params) {
  require_valid(u);
  FieldPair out = u;
  nonlinear_in_place(out, dt, params);
  return out;
}

FieldPair kinetic_substep(const FieldPair& u, double dt) {
  require_valid(u);
  const Grid& g = *u.grid;
  const CVec phase = kinetic_phase(g, dt);
  const Fft& fft = Fft::get(g.n());
  FieldPair out(u.grid);
  CVec hat(g.n());
  for (auto [in, dst] : {std::pair{&u.u1, &out.u1}, std::pair{&u.u2, &out.u2}}) {
    fft.forward(in->data(), hat.data());
    for (int m = 0; m < g.n(); ++m) hat[m] *= phase[m];
    fft.inverse(hat.data(), dst->data());
  }
  return out;
}

FieldPair step(const FieldPair& u, double dt, const Params& params, double blowup_threshold) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  FieldPair out = kinetic_substep(u, 0.5 * dt);
  nonlinear_in_place(out, dt, params);
  out = kinetic_substep(out, 0.5 * dt);
  check_bounded(out, blowup_threshold);
  return out;
}

SplitStepper::SplitStepper(GridPtr grid, double dt, const Params& params)
    : grid_(std::move(grid)),
      dt_(dt),
      params_(params),
      half_phase_(kinetic_phase(*grid_, 0.5 * dt)),
      full_phase_(kinetic_phase(*grid_, dt)),
      scratch_(grid_->n()) {
  params_.validate();
}

void SplitStepper::kinetic(FieldPair& u, const CVec& phase) {
  const Fft& fft = Fft::get(grid_->n());
  for (CVec* c : {&u.u1, &u.u2}) {
    fft.forward(c->data(), scratch_.data());
    for (std::size_t m = 0; m < scratch_.size(); ++m) scratch_[m] *= phase[m];
    fft.inverse(scratch_.data(), c->data());
  }
}

void SplitStepper::nonlinear(FieldPair& u) {
  norm_drift_ = std::max(norm_drift_, nonlinear_in_place(u, dt_, params_));
}

void SplitStepper::advance(FieldPair& u, long steps, double blowup_threshold) {
  if (steps <= 0) return;
  kinetic(u, half_phase_);
  for (long s = 0; s < steps; ++s) {
    nonlinear(u);
    kinetic(u, s + 1 == steps ? half_phase_ : full_phase_);
    // The bound is checked on the intermediate state; the kinetic flow is
    // unitary, so a runaway amplitude shows up within one step either way.
    check_bounded(u, blowup_threshold);
  }
}

RunRecord evolve(const FieldPair& u0, const EvolveConfig& cfg, const Params& params,
                 const std::optional<FieldPair>& reference) {
  cfg.validate();
  params.validate();
  require_valid(u0);
  if (reference) require_same_grid(u0, *reference);
  if (cfg.stop_distance && !reference) {
    throw std::invalid_argument("stop_distance needs a reference wave");
  }

  const std::optional<OrbitFrame> frame =
      reference ? std::optional<OrbitFrame>(OrbitFrame(*reference)) : std::nullopt;
  const double e0 = energy(u0, params);
  const double q0 = charge(u0);
  const long total_steps = std::lround(cfg.t_end / cfg.dt);

  RunRecord rec;
  rec.dt = cfg.dt;
  FieldPair u = u0;
  bool stop = false;
  auto sample = [&](long step_index) {
    if (cfg.symmetrize) u = symmetrized(u);
    rec.times.push_back(step_index * cfg.dt);
    rec.energy_drift.push_back(relative_drift(energy(u, params), e0));
    rec.charge_drift.push_back(relative_drift(charge(u), q0));
    double dist = kNaN, a = kNaN, p = kNaN;
    if (frame) {
      dist = orbital_distance_x(u, *frame);
      if (dist <= frame->tube_radius()) {
        try {
          a = a_functional(u, *frame);
          p = p_functional(u, params, *frame);
        } catch (const TubeError&) {
          a = p = kNaN;
        }
      }
      if (cfg.stop_distance && dist > *cfg.stop_distance) stop = true;
    }
    rec.orbital_distance_x.push_back(dist);
    rec.a_series.push_back(a);
    rec.p_series.push_back(p);
  };

  SplitStepper stepper(u0.grid, cfg.dt, params);
  sample(0);
  long done = 0;
  while (done < total_steps && !stop) {
    const long chunk = std::min<long>(cfg.sample_every, total_steps - done);
    try {
      stepper.advance(u, chunk, cfg.blowup_threshold);
    } catch (const BlowupError& e) {
      rec.terminated_early = true;
      rec.termination = Termination::Blowup;
      rec.reason = std::string(e.what()) + " near t=" + std::to_string((done + chunk) * cfg.dt);
      break;
    }
    done += chunk;
    sample(done);
  }
  if (stop) {
    rec.terminated_early = true;
    rec.termination = Termination::DistanceReached;
    rec.reason = "orbital distance exceeded " + std::to_string(*cfg.stop_distance);
  }
  rec.max_substep_norm_drift = stepper.max_substep_norm_drift();
  rec.final_state = std::move(u);
  return rec;
}

}  // namespace nlslab
