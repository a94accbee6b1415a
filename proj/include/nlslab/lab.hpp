// Run and sweep orchestration behind the command-line tool: JSON configs,
// stability classification, the sweep worker pool, and CSV / JSON writers.
#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nlslab/dynamics.hpp"
#include "nlslab/functionals.hpp"
#include "nlslab/params.hpp"

namespace nlslab {

// Malformed or invalid configuration (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitBlowup = 3,
  kExitProperty = 4,
};

// How a run is seeded: generic_perturbation(eps, seed) or unstable_seed(eps).
enum class InitialKind { Perturbation, UnstableSeed };

std::string_view to_string(InitialKind k);

struct Numerics {
  int n = 1024;
  std::optional<double> half_length;  // default_half_length(omega) when unset
  double dt = 5e-4;
  double sample_interval = 0.1;  // time between diagnostic samples

  GridPtr make(double omega) const;
  int sample_every() const;
};

struct RunConfig {
  Params params;
  InitialKind initial = InitialKind::Perturbation;
  double eps = 0.0;
  std::uint64_t seed = 1;
  double t_end = 50.0;
  bool symmetrize = false;
  Numerics numerics;
};

struct SweepConfig {
  double kappa1 = 1.0;
  // Optional extra axis; when nonempty it replaces the single kappa1.
  std::vector<double> kappa1_values;
  double omega = 1.0;
  std::vector<double> gamma_values;
  std::vector<double> kappa2_values;
  double eps = 1e-2;
  double t_end = 50.0;
  double stable_factor = 10.0;
  double unstable_threshold = 0.3;
  Coupling coupling = Coupling::Coherent;
  std::uint64_t seed = 1;
  InitialKind initial = InitialKind::Perturbation;
  // Ends a cell as soon as the unstable threshold is crossed.
  bool stop_on_unstable = true;
  Numerics numerics;

  // Nonempty arrays, positive values, unstable_threshold > stable_factor eps.
  void validate() const;
};

struct SpectralConfig {
  std::vector<double> a_values;
  double omega = 1.0;
  int eigen_count = 4;
  Numerics numerics;
};

struct ExpansionConfig {
  Params params;
  std::vector<double> lambdas{0.1, 0.5, 1.5};
  Numerics numerics;
};

// Parsers reject unknown keys, wrong types and invalid values with
// ConfigError. Missing keys take the defaults above except where noted in
// the README (sweep: gamma_values, kappa2_values, t_end, eps are required).
RunConfig parse_run_config(std::string_view json_text);
SweepConfig parse_sweep_config(std::string_view json_text);
SpectralConfig parse_spectral_config(std::string_view json_text);
ExpansionConfig parse_expansion_config(std::string_view json_text);

std::string read_text_file(const std::string& path);

enum class Verdict { Stable, Unstable, Undecided };

std::string_view to_string(Verdict v);

struct Classification {
  Verdict verdict = Verdict::Undecided;
  double max_distance = 0.0;
  std::optional<double> first_crossing_time;
};

// Unstable once the distance exceeds unstable_threshold (or the run blew
// up), Stable when it stayed below stable_factor eps through a completed
// run, Undecided otherwise.
Classification classify(const RunRecord& record, double eps, double stable_factor,
                        double unstable_threshold);

// Verdict predicted by the stability analysis: "stable", "unstable" or "open" for
// gamma == kappa1 == kappa2; incoherent coupling is always "stable".
std::string_view theory_verdict(double gamma, double kappa1, double kappa2, Coupling coupling);

FieldPair initial_state(InitialKind kind, double eps, std::uint64_t seed, const Params& params,
                        GridPtr grid);

struct SweepRow {
  double kappa1 = 0.0;
  double gamma = 0.0;
  double kappa2 = 0.0;
  Classification result;
  double energy_drift = 0.0;  // max |relative drift| over samples
  double charge_drift = 0.0;
  std::string theory;
  std::string termination;
  std::string status = "ok";  // error text when the cell failed
};

// Runs every (kappa1, gamma, kappa2) cell on `workers` threads. Rows come
// back sorted by (kappa1, gamma, kappa2) and do not depend on the worker
// count.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg, int workers);

// --workers if positive, else LAB_WORKERS if set and positive, else the
// hardware concurrency (at least 1).
int resolve_workers(int requested);

RunRecord run_single(const RunConfig& cfg);

// Writers. CSV files start with a single '#' comment line carrying the
// timestamp when `stamp` is set; everything after it is deterministic.
void write_run_csv(std::ostream& os, const RunRecord& record, bool stamp = true);
void write_run_json(std::ostream& os, const RunConfig& cfg, const RunRecord& record);
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows, bool stamp = true);

struct SpectralEntry {
  double a = 0.0;
  std::vector<double> eigenvalues;
  std::vector<double> residuals;
  double phi_form = 0.0;           // <L_a phi, phi>
  double orthogonal_min = 0.0;     // min Rayleigh quotient over v H-orthogonal to phi
  double kernel_similarity = 0.0;  // |cos| between lowest eigenvector and phi
  std::vector<std::string> verdicts;
  bool consistent = true;  // every property expected for this a holds
};

std::vector<SpectralEntry> spectral_entries(const SpectralConfig& cfg);
void write_spectral_json(std::ostream& os, const SpectralConfig& cfg,
                         const std::vector<SpectralEntry>& entries);

struct ExpansionOutcome {
  NuCoefficients closed;
  NuCoefficients from_definition;
  QuarticIdentityReport quartic;
  ExpansionReport orders;
  bool passed = false;
};

// Throws ConfigError off the degenerate line.
ExpansionOutcome run_expansion_check(const ExpansionConfig& cfg);
void write_expansion_json(std::ostream& os, const ExpansionConfig& cfg, const ExpansionOutcome& out);

inline constexpr double kQuarticTolerance = 1e-9;
// Spectral values within this band of zero count as zero in verdicts.
inline constexpr double kSpectralZero = 1e-8;
inline constexpr double kNuRelativeTolerance = 1e-5;

}  // namespace nlslab
