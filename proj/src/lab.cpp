#include "nlslab/lab.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <limits>
#include <json.hpp>
#include <set>
#include <sstream>
#include <thread>

#include "nlslab/linops.hpp"
#include "nlslab/modulation.hpp"
#include "nlslab/waves.hpp"

namespace nlslab {

using nlohmann::json;

namespace {

// Reads typed fields from one JSON object and rejects keys nobody asked for.
class ObjectReader {
 public:
  explicit ObjectReader(std::string_view text) {
    try {
      obj_ = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    if (!obj_.is_object()) throw ConfigError("config must be a JSON object");
  }

  template <class T>
  std::optional<T> optional(const std::string& key) {
    known_.insert(key);
    auto it = obj_.find(key);
    if (it == obj_.end()) return std::nullopt;
    try {
      return it->get<T>();
    } catch (const json::exception&) {
      throw ConfigError("field '" + key + "' has the wrong type");
    }
  }

  template <class T>
  T required(const std::string& key) {
    auto v = optional<T>(key);
    if (!v) throw ConfigError("missing required field '" + key + "'");
    return *v;
  }

  template <class T>
  void read(const std::string& key, T& target) {
    if (auto v = optional<T>(key)) target = *v;
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!known_.count(it.key())) throw ConfigError("unknown key '" + it.key() + "'");
    }
  }

 private:
  json obj_;
  std::set<std::string> known_;
};

void read_numerics(ObjectReader& r, Numerics& num) {
  r.read("n", num.n);
  if (auto l = r.optional<double>("half_length")) num.half_length = *l;
  r.read("dt", num.dt);
  r.read("sample_interval", num.sample_interval);
  if (num.n < 16 || (num.n & (num.n - 1)) != 0) throw ConfigError("n must be a power of two >= 16");
  if (num.half_length && !(*num.half_length > 0.0)) throw ConfigError("half_length must be positive");
  if (!(num.dt > 0.0) || num.dt > 0.1) throw ConfigError("dt must lie in (0, 0.1]");
  if (!(num.sample_interval >= num.dt)) throw ConfigError("sample_interval must be >= dt");
}

Coupling read_coupling(ObjectReader& r) {
  const auto s = r.optional<std::string>("coupling");
  if (!s) return Coupling::Coherent;
  try {
    return coupling_from_string(*s);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

InitialKind read_initial(ObjectReader& r) {
  const auto s = r.optional<std::string>("initial");
  if (!s || *s == "perturbation") return InitialKind::Perturbation;
  if (*s == "unstable_seed") return InitialKind::UnstableSeed;
  throw ConfigError("initial must be 'perturbation' or 'unstable_seed'");
}

void validate_params(const Params& p) {
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

json interleaved(const CVec& v) {
  json arr = json::array();
  for (const cplx& z : v) {
    arr.push_back(z.real());
    arr.push_back(z.imag());
  }
  return arr;
}

json params_json(const Params& p) {
  return {{"kappa1", p.kappa1}, {"kappa2", p.kappa2}, {"gamma", p.gamma},
          {"omega", p.omega},   {"coupling", std::string(to_string(p.coupling))}};
}

json numerics_json(const Numerics& num, double omega) {
  return {{"n", num.n},
          {"half_length", num.half_length.value_or(default_half_length(omega))},
          {"dt", num.dt},
          {"sample_interval", num.sample_interval}};
}

double max_abs_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v)
    if (!std::isnan(x)) m = std::max(m, std::abs(x));
  return m;
}

std::string csv_quoted(const std::string& text) {
  std::string out = "\"";
  for (char ch : text) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

// JSON has no infinity; exact remainders report a null order.
json order_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::string_view to_string(InitialKind k) {
  return k == InitialKind::Perturbation ? "perturbation" : "unstable_seed";
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Stable: return "Stable";
    case Verdict::Unstable: return "Unstable";
    case Verdict::Undecided: return "Undecided";
  }
  return "Undecided";
}

GridPtr Numerics::make(double omega) const {
  return make_grid(n, half_length.value_or(default_half_length(omega)));
}

int Numerics::sample_every() const {
  return std::max(1, static_cast<int>(std::lround(sample_interval / dt)));
}

void SweepConfig::validate() const {
  if (gamma_values.empty() || kappa2_values.empty()) {
    throw ConfigError("gamma_values and kappa2_values must be nonempty");
  }
  for (double g : gamma_values)
    if (!(g > 0.0)) throw ConfigError("gamma values must be positive");
  for (double k : kappa2_values)
    if (!(k > 0.0)) throw ConfigError("kappa2 values must be positive");
  if (!(kappa1 > 0.0) || !(omega > 0.0)) throw ConfigError("kappa1 and omega must be positive");
  for (double k : kappa1_values)
    if (!(k > 0.0)) throw ConfigError("kappa1 values must be positive");
  if (!(eps > 0.0)) throw ConfigError("eps must be positive");
  if (initial == InitialKind::UnstableSeed && !(eps < 1.0)) {
    throw ConfigError("unstable_seed needs eps < 1");
  }
  if (!(t_end >= numerics.dt)) throw ConfigError("t_end must be >= dt");
  if (!(stable_factor > 0.0)) throw ConfigError("stable_factor must be positive");
  if (!(unstable_threshold > stable_factor * eps)) {
    throw ConfigError("unstable_threshold must exceed stable_factor * eps");
  }
}

RunConfig parse_run_config(std::string_view text) {
  ObjectReader r(text);
  RunConfig c;
  r.read("kappa1", c.params.kappa1);
  r.read("kappa2", c.params.kappa2);
  r.read("gamma", c.params.gamma);
  r.read("omega", c.params.omega);
  c.params.coupling = read_coupling(r);
  c.initial = read_initial(r);
  r.read("eps", c.eps);
  r.read("seed", c.seed);
  r.read("t_end", c.t_end);
  r.read("symmetrize", c.symmetrize);
  read_numerics(r, c.numerics);
  r.finish();
  validate_params(c.params);
  if (!(c.eps >= 0.0)) throw ConfigError("eps must be >= 0");
  if (c.initial == InitialKind::UnstableSeed && !(c.eps < 1.0)) {
    throw ConfigError("unstable_seed needs eps < 1");
  }
  if (!(c.t_end >= c.numerics.dt)) throw ConfigError("t_end must be >= dt");
  return c;
}

SweepConfig parse_sweep_config(std::string_view text) {
  ObjectReader r(text);
  SweepConfig c;
  r.read("kappa1", c.kappa1);
  r.read("kappa1_values", c.kappa1_values);
  r.read("omega", c.omega);
  c.gamma_values = r.required<std::vector<double>>("gamma_values");
  c.kappa2_values = r.required<std::vector<double>>("kappa2_values");
  c.eps = r.required<double>("eps");
  c.t_end = r.required<double>("t_end");
  r.read("stable_factor", c.stable_factor);
  r.read("unstable_threshold", c.unstable_threshold);
  c.coupling = read_coupling(r);
  r.read("seed", c.seed);
  c.initial = read_initial(r);
  r.read("stop_on_unstable", c.stop_on_unstable);
  read_numerics(r, c.numerics);
  r.finish();
  c.validate();
  return c;
}

SpectralConfig parse_spectral_config(std::string_view text) {
  ObjectReader r(text);
  SpectralConfig c;
  c.a_values = r.required<std::vector<double>>("a_values");
  r.read("omega", c.omega);
  r.read("eigen_count", c.eigen_count);
  read_numerics(r, c.numerics);
  r.finish();
  if (c.a_values.empty()) throw ConfigError("a_values must be nonempty");
  if (!(c.omega > 0.0)) throw ConfigError("omega must be positive");
  if (c.eigen_count < 1 || c.eigen_count > c.numerics.n / 2 + 1) {
    throw ConfigError("eigen_count out of range");
  }
  return c;
}

ExpansionConfig parse_expansion_config(std::string_view text) {
  ObjectReader r(text);
  ExpansionConfig c;
  r.read("kappa1", c.params.kappa1);
  r.read("kappa2", c.params.kappa2);
  r.read("gamma", c.params.gamma);
  r.read("omega", c.params.omega);
  r.read("lambdas", c.lambdas);
  read_numerics(r, c.numerics);
  r.finish();
  validate_params(c.params);
  if (!on_degenerate_line(c.params)) throw ConfigError("expansion check needs gamma == kappa1");
  return c;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Classification classify(const RunRecord& record, double eps, double stable_factor,
                        double unstable_threshold) {
  Classification c;
  for (std::size_t i = 0; i < record.size(); ++i) {
    const double d = record.orbital_distance_x[i];
    if (std::isnan(d)) continue;
    c.max_distance = std::max(c.max_distance, d);
    if (!c.first_crossing_time && d > unstable_threshold) c.first_crossing_time = record.times[i];
  }
  if (record.termination == Termination::Blowup) {
    c.max_distance = std::numeric_limits<double>::infinity();
    if (!c.first_crossing_time && !record.times.empty()) c.first_crossing_time = record.times.back();
  }
  if (c.first_crossing_time) {
    c.verdict = Verdict::Unstable;
  } else if (record.termination == Termination::Completed && c.max_distance < stable_factor * eps) {
    c.verdict = Verdict::Stable;
  } else {
    c.verdict = Verdict::Undecided;
  }
  return c;
}

std::string_view theory_verdict(double gamma, double kappa1, double kappa2, Coupling coupling) {
  if (coupling == Coupling::Incoherent) return "stable";
  if (gamma < kappa1) return "stable";
  if (gamma > kappa1) return "unstable";
  if (kappa2 < kappa1) return "stable";
  if (kappa2 > kappa1) return "unstable";
  return "open";
}

FieldPair initial_state(InitialKind kind, double eps, std::uint64_t seed, const Params& params,
                        GridPtr grid) {
  return kind == InitialKind::UnstableSeed ? unstable_seed(eps, params, grid)
                                           : generic_perturbation(eps, seed, params, grid);
}

RunRecord run_single(const RunConfig& cfg) {
  const GridPtr grid = cfg.numerics.make(cfg.params.omega);
  const FieldPair u0 = initial_state(cfg.initial, cfg.eps, cfg.seed, cfg.params, grid);
  EvolveConfig ec;
  ec.dt = cfg.numerics.dt;
  ec.t_end = cfg.t_end;
  ec.sample_every = cfg.numerics.sample_every();
  ec.symmetrize = cfg.symmetrize;
  return evolve(u0, ec, cfg.params, phi_vec(cfg.params, grid));
}

namespace {

struct Cell {
  double kappa1, gamma, kappa2;
};

SweepRow run_cell(const SweepConfig& cfg, const Cell& cell) {
  SweepRow row;
  row.kappa1 = cell.kappa1;
  row.gamma = cell.gamma;
  row.kappa2 = cell.kappa2;
  row.theory = theory_verdict(cell.gamma, cell.kappa1, cell.kappa2, cfg.coupling);
  try {
    const Params p{cell.kappa1, cell.kappa2, cell.gamma, cfg.omega, cfg.coupling};
    const GridPtr grid = cfg.numerics.make(cfg.omega);
    const FieldPair u0 = initial_state(cfg.initial, cfg.eps, cfg.seed, p, grid);
    EvolveConfig ec;
    ec.dt = cfg.numerics.dt;
    ec.t_end = cfg.t_end;
    ec.sample_every = cfg.numerics.sample_every();
    if (cfg.stop_on_unstable) ec.stop_distance = cfg.unstable_threshold;
    const RunRecord rec = evolve(u0, ec, p, phi_vec(p, grid));
    row.result = classify(rec, cfg.eps, cfg.stable_factor, cfg.unstable_threshold);
    row.energy_drift = max_abs_of(rec.energy_drift);
    row.charge_drift = max_abs_of(rec.charge_drift);
    row.termination = to_string(rec.termination);
  } catch (const std::exception& e) {
    row.status = std::string("error: ") + e.what();
    row.termination = "failed";
    row.result.verdict = Verdict::Undecided;
  }
  return row;
}

}  // namespace

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("LAB_WORKERS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg, int workers) {
  cfg.validate();
  auto sorted = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  const auto k1s = sorted(cfg.kappa1_values.empty() ? std::vector<double>{cfg.kappa1}
                                                     : cfg.kappa1_values);
  const auto gammas = sorted(cfg.gamma_values);
  const auto k2s = sorted(cfg.kappa2_values);
  std::vector<Cell> cells;
  for (double k1 : k1s)
    for (double g : gammas)
      for (double k2 : k2s) cells.push_back({k1, g, k2});

  std::vector<SweepRow> rows(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      rows[i] = run_cell(cfg, cells[i]);
    }
  };
  const int count = std::clamp(workers, 1, static_cast<int>(std::max<std::size_t>(1, cells.size())));
  std::vector<std::jthread> pool;
  for (int t = 1; t < count; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  return rows;
}

void write_run_csv(std::ostream& os, const RunRecord& record, bool stamp) {
  if (stamp) os << "# nlslab single-run " << timestamp() << '\n';
  os << "t,E_drift,Q_drift,dist_X,A,P\n";
  for (std::size_t i = 0; i < record.size(); ++i) {
    os << fmt(record.times[i]) << ',' << fmt(record.energy_drift[i]) << ','
       << fmt(record.charge_drift[i]) << ',' << fmt(record.orbital_distance_x[i]) << ','
       << fmt(record.a_series[i]) << ',' << fmt(record.p_series[i]) << '\n';
  }
}

void write_run_json(std::ostream& os, const RunConfig& cfg, const RunRecord& record) {
  json j;
  j["params"] = params_json(cfg.params);
  j["initial"] = std::string(to_string(cfg.initial));
  j["eps"] = cfg.eps;
  j["seed"] = cfg.seed;
  j["t_end"] = cfg.t_end;
  j["numerics"] = numerics_json(cfg.numerics, cfg.params.omega);
  j["samples"] = record.size();
  j["termination"] = std::string(to_string(record.termination));
  j["terminated_early"] = record.terminated_early;
  j["reason"] = record.reason;
  j["max_abs_energy_drift"] = max_abs_of(record.energy_drift);
  j["max_abs_charge_drift"] = max_abs_of(record.charge_drift);
  j["max_distance_x"] = max_abs_of(record.orbital_distance_x);
  j["max_substep_norm_drift"] = record.max_substep_norm_drift;
  j["final_state"] = {{"layout", "interleaved re/im"},
                      {"u1", interleaved(record.final_state.u1)},
                      {"u2", interleaved(record.final_state.u2)}};
  os << j.dump(2) << '\n';
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows, bool stamp) {
  if (stamp) os << "# nlslab sweep " << timestamp() << '\n';
  os << "kappa1,gamma,kappa2,verdict,max_distance,first_crossing_time,energy_drift,charge_drift,"
        "theory,termination,status\n";
  for (const auto& r : rows) {
    os << fmt(r.kappa1) << ',' << fmt(r.gamma) << ',' << fmt(r.kappa2) << ',' << to_string(r.result.verdict) << ','
       << fmt(r.result.max_distance) << ','
       << (r.result.first_crossing_time ? fmt(*r.result.first_crossing_time) : std::string()) << ','
       << fmt(r.energy_drift) << ',' << fmt(r.charge_drift) << ',' << r.theory << ','
       << r.termination << ',' << csv_quoted(r.status) << '\n';
  }
}

std::vector<SpectralEntry> spectral_entries(const SpectralConfig& cfg) {
  const GridPtr grid = cfg.numerics.make(cfg.omega);
  const SolitonProfile phi = soliton(cfg.omega, grid);
  const RVec constraints[] = {phi.samples};
  double phi_norm2 = 0.0;
  for (double v : phi.samples) phi_norm2 += v * v;

  std::vector<SpectralEntry> out;
  for (double a : cfg.a_values) {
    SpectralEntry e;
    e.a = a;
    const SpectralReport rep = lowest_eigenpairs(build_La(a, cfg.omega, grid), cfg.eigen_count);
    e.eigenvalues = rep.eigenvalues;
    e.residuals = rep.residuals;
    e.phi_form = quadratic_form_La(a, phi.samples, cfg.omega, *grid);
    e.orthogonal_min = constrained_min_rayleigh_La(a, cfg.omega, grid, constraints);
    const RVec& v = rep.eigenvectors.front();
    double dot = 0.0, vv = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      dot += v[j] * phi.samples[j];
      vv += v[j] * v[j];
    }
    e.kernel_similarity = std::abs(dot) / std::sqrt(vv * phi_norm2);

    const double lowest = e.eigenvalues.front();
    if (lowest > kSpectralZero) e.verdicts.push_back("coercive");
    if (a < 1.0 && !(lowest > kSpectralZero)) e.consistent = false;
    if (std::abs(a - 1.0) < 1e-12) {
      const bool kernel = std::abs(lowest) < 1e-6 && e.kernel_similarity > 0.9999;
      if (kernel) e.verdicts.push_back("kernel-at-phi");
      e.consistent = e.consistent && kernel;
    }
    if (e.phi_form < -kSpectralZero) e.verdicts.push_back("negative-direction-phi");
    if (a > 1.0 && !(e.phi_form < -kSpectralZero)) e.consistent = false;
    if (e.orthogonal_min > kSpectralZero) e.verdicts.push_back("positive-orthogonal-to-phi");
    if (a >= 1.0 && a <= 3.0 && !(e.orthogonal_min > kSpectralZero)) e.consistent = false;
    out.push_back(std::move(e));
  }
  return out;
}

void write_spectral_json(std::ostream& os, const SpectralConfig& cfg,
                         const std::vector<SpectralEntry>& entries) {
  json j;
  j["omega"] = cfg.omega;
  j["numerics"] = numerics_json(cfg.numerics, cfg.omega);
  j["n"] = cfg.numerics.n;
  json list = json::array();
  for (const auto& e : entries) {
    list.push_back({{"a", e.a},
                    {"omega", cfg.omega},
                    {"n", cfg.numerics.n},
                    {"eigenvalues", e.eigenvalues},
                    {"residuals", e.residuals},
                    {"constraint_tags", json::array({"even"})},
                    {"phi_form", e.phi_form},
                    {"orthogonal_to_phi_min", e.orthogonal_min},
                    {"orthogonal_to_phi_constraint_tags", json::array({"even", "perp-phi"})},
                    {"kernel_similarity", e.kernel_similarity},
                    {"verdicts", e.verdicts},
                    {"consistent", e.consistent}});
  }
  j["operators"] = list;
  os << j.dump(2) << '\n';
}

ExpansionOutcome run_expansion_check(const ExpansionConfig& cfg) {
  if (!on_degenerate_line(cfg.params)) throw ConfigError("expansion check needs gamma == kappa1");
  const GridPtr grid = cfg.numerics.make(cfg.params.omega);
  ExpansionOutcome out;
  out.closed = nu_closed_form(cfg.params);
  out.from_definition = nu_from_definition(cfg.params, grid);
  out.quartic = verify_quartic_identity(cfg.lambdas, cfg.params, grid);
  out.orders = verify_expansion_orders(cfg.params, grid);

  // nu0 vanishes for kappa1 == kappa2; compare it on the scale of nu1.
  const double scale = std::abs(out.closed.nu1);
  const bool nu_ok =
      std::abs(out.from_definition.nu1 - out.closed.nu1) <= kNuRelativeTolerance * scale &&
      std::abs(out.from_definition.nu0 - out.closed.nu0) <=
          kNuRelativeTolerance * std::max(std::abs(out.closed.nu0), 1e-3 * scale);
  out.passed = nu_ok && out.quartic.max_action_defect() < kQuarticTolerance &&
               out.quartic.max_gradient_defect() < kQuarticTolerance && out.orders.all_passed();
  return out;
}

void write_expansion_json(std::ostream& os, const ExpansionConfig& cfg, const ExpansionOutcome& out) {
  json j;
  j["params"] = params_json(cfg.params);
  j["numerics"] = numerics_json(cfg.numerics, cfg.params.omega);
  j["nu_closed_form"] = {{"nu0", out.closed.nu0}, {"nu1", out.closed.nu1}};
  j["nu_from_definition"] = {{"nu0", out.from_definition.nu0}, {"nu1", out.from_definition.nu1}};
  json rows = json::array();
  for (const auto& r : out.quartic.rows) {
    rows.push_back({{"lambda", r.lambda},
                    {"action_defect", r.action_defect},
                    {"gradient_defect", r.gradient_defect}});
  }
  j["quartic_identity"] = {{"tolerance", kQuarticTolerance}, {"rows", rows}};
  json checks = json::array();
  for (const auto& c : out.orders.checks) {
    checks.push_back({{"name", c.name},
                      {"variant", c.variant},
                      {"kind", c.kind == RemainderKind::LittleO ? "little-o" : "big-O"},
                      {"claimed_order", c.claimed_order},
                      {"lambdas", c.lambdas},
                      {"remainders", c.remainders},
                      {"fitted_order", order_json(c.fitted_order)},
                      {"exact", c.exact},
                      {"passed", c.passed}});
  }
  j["expansion_orders"] = checks;
  j["passed"] = out.passed;
  os << j.dump(2) << '\n';
}

}  // namespace nlslab
