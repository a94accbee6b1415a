// nlslab command-line tool. Exit codes: 0 success, 2 config error, 3 blowup,
// 4 property-check failure, 1 anything else (I/O, internal error).
#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "nlslab/lab.hpp"

namespace {

using namespace nlslab;

struct CommonOptions {
  std::string config;
  std::string out;
  int workers = 0;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "JSON config file")->required();
  cmd->add_option("--out", o.out, "output path")->required();
  cmd->add_option("--workers", o.workers, "worker threads (default: LAB_WORKERS or all cores)")
      ->check(CLI::NonNegativeNumber);
}

std::ofstream open_output(const std::string& path) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write '" + path + "'");
  return os;
}

std::string sibling_json(const std::string& path) {
  std::filesystem::path p(path);
  p.replace_extension(".json");
  if (p.string() == path) p += ".meta.json";
  return p.string();
}

int cmd_spectral(const CommonOptions& o) {
  const SpectralConfig cfg = parse_spectral_config(read_text_file(o.config));
  const auto entries = spectral_entries(cfg);
  auto os = open_output(o.out);
  write_spectral_json(os, cfg, entries);
  bool ok = true;
  for (const auto& e : entries) {
    std::cout << "a=" << e.a << " lowest=" << e.eigenvalues.front() << " verdicts:";
    for (const auto& v : e.verdicts) std::cout << ' ' << v;
    std::cout << (e.consistent ? "" : "  [INCONSISTENT]") << '\n';
    ok = ok && e.consistent;
  }
  return ok ? kExitOk : kExitProperty;
}

int cmd_single(const CommonOptions& o) {
  const RunConfig cfg = parse_run_config(read_text_file(o.config));
  const RunRecord rec = run_single(cfg);
  {
    auto os = open_output(o.out);
    write_run_csv(os, rec);
  }
  auto js = open_output(sibling_json(o.out));
  write_run_json(js, cfg, rec);
  std::cout << "samples=" << rec.size() << " termination=" << to_string(rec.termination) << '\n';
  if (rec.termination == Termination::Blowup) {
    std::cerr << rec.reason << '\n';
    return kExitBlowup;
  }
  return kExitOk;
}

int cmd_sweep(const CommonOptions& o, bool check_theory) {
  const SweepConfig cfg = parse_sweep_config(read_text_file(o.config));
  const int workers = resolve_workers(o.workers);
  const auto rows = run_sweep(cfg, workers);
  auto os = open_output(o.out);
  write_sweep_csv(os, rows);
  int mismatches = 0;
  for (const auto& r : rows) {
    const std::string verdict(to_string(r.result.verdict));
    const bool decided_theory = r.theory == "stable" || r.theory == "unstable";
    const bool agrees = (r.theory == "stable" && verdict == "Stable") ||
                        (r.theory == "unstable" && verdict == "Unstable");
    if (decided_theory && !agrees) ++mismatches;
    std::cout << "kappa1=" << r.kappa1 << " gamma=" << r.gamma << " kappa2=" << r.kappa2 << ' '
              << verdict << " (theory: " << r.theory << ")\n";
  }
  return check_theory && mismatches > 0 ? kExitProperty : kExitOk;
}

int cmd_expansion(const CommonOptions& o) {
  const ExpansionConfig cfg = parse_expansion_config(read_text_file(o.config));
  const ExpansionOutcome out = run_expansion_check(cfg);
  auto os = open_output(o.out);
  write_expansion_json(os, cfg, out);
  std::cout << "nu0=" << out.closed.nu0 << " nu1=" << out.closed.nu1
            << " quartic_defect=" << out.quartic.max_action_defect()
            << " passed=" << (out.passed ? "yes" : "no") << '\n';
  return out.passed ? kExitOk : kExitProperty;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coupled cubic NLS stability laboratory"};
  app.require_subcommand(1);
  CommonOptions spectral, single, sweep, expansion;
  bool check_theory = false;
  auto* c_spec = app.add_subcommand("spectral-report", "Spectra of L_a on the even subspace");
  add_common(c_spec, spectral);
  auto* c_single = app.add_subcommand("single-run", "Evolve one configuration");
  add_common(c_single, single);
  auto* c_sweep = app.add_subcommand("sweep", "Stability phase diagram over (gamma, kappa2)");
  add_common(c_sweep, sweep);
  c_sweep->add_flag("--check-theory", check_theory,
                    "exit 4 when a verdict contradicts a decided theory cell");
  auto* c_exp = app.add_subcommand("expansion-check", "Quartic identity and expansion orders");
  add_common(c_exp, expansion);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*c_spec) return cmd_spectral(spectral);
    if (*c_single) return cmd_single(single);
    if (*c_sweep) return cmd_sweep(sweep, check_theory);
    if (*c_exp) return cmd_expansion(expansion);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitConfig;
}
