// Command-line driver: evolve, scf, selftest, resume.
//
// Exit codes: 0 success, 1 selftest failure or unexpected error, 2 config
// error, 3 numerical abort, 4 I/O error.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "bdf/dynamics.hpp"
#include "bdf/io/config.hpp"
#include "bdf/io/observables.hpp"
#include "bdf/io/selftest.hpp"
#include "bdf/io/snapshot.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace bdf;

namespace {

constexpr int kExitSelftest = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

constexpr const char* kOutputEnv = "BDF_OUTPUT_DIR";

struct Setup {
  io::SimulationConfig config;
  LatticePtr lattice;
  ExternalSource source;
  fs::path out_dir;
};

Setup prepare(const fs::path& config_path) {
  Setup s;
  s.config = io::load_config(config_path);
  for (const auto& w : s.config.warnings) std::cerr << "warning: " << w << '\n';
  s.lattice = MomentumLattice::build(s.config.lattice.spacing, s.config.lattice.cutoff);
  const auto& src = s.config.source;
  s.source = build_gaussian_source(src.charge, src.width, src.alpha, s.lattice);

  const char* env = std::getenv(kOutputEnv);
  s.out_dir = (env && *env) ? fs::path(env) : fs::path(s.config.output.directory);
  std::error_code ec;
  fs::create_directories(s.out_dir, ec);
  if (ec) throw io::IoError("cannot create output directory " + s.out_dir.string() + ": " + ec.message());
  return s;
}

json record_json(const ObservableRecord& r) {
  return {{"t", r.t},
          {"step_index", r.step_index},
          {"charge", r.charge},
          {"energy", r.energy},
          {"hs_norm_Q", r.hs_norm_q},
          {"coulomb_norm_rho_minus_n", r.coulomb_norm_rho_minus_n},
          {"idempotence_residual", r.idempotence_residual},
          {"commutator_norm", r.commutator_norm}};
}

json setup_json(const Setup& s) {
  return {{"lattice",
           {{"spacing", s.lattice->spacing()},
            {"cutoff", s.lattice->cutoff()},
            {"points", s.lattice->size()}}},
          {"source",
           {{"charge", s.config.source.charge},
            {"width", s.config.source.width},
            {"alpha", s.config.source.alpha}}}};
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw io::IoError("cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw io::IoError("error writing " + path.string());
}

fs::path snapshot_name(const fs::path& dir, std::int64_t step) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "snapshot_%08lld.bdfk", static_cast<long long>(step));
  return dir / buf;
}

EvolutionState initial_state(const Setup& s) {
  const auto& init = s.config.initial;
  switch (init.mode) {
    case io::InitialMode::vacuum:
      return make_state(vacuum_projector(s.lattice));
    case io::InitialMode::charged_free:
      return build_initial_state(init.electrons, s.source, InitialOrbitals::free_orbitals);
    case io::InitialMode::charged_scf:
      return build_initial_state(init.electrons, s.source, InitialOrbitals::scf_orbitals,
                                 s.config.scf_settings());
    case io::InitialMode::snapshot:
      return io::read_snapshot(init.snapshot_path, s.lattice);
  }
  throw std::logic_error("unhandled initial mode");
}

// Runs `steps` steps, streaming observables to `csv_name` and snapshots into
// the output directory.
int evolve_from(const Setup& s, EvolutionState state, std::int64_t steps, const std::string& csv_name) {
  const auto& ev = s.config.evolve;
  io::CsvObservableWriter csv(s.out_dir / csv_name);
  RunOptions opt;
  opt.integrator = ev.integrator;
  opt.record_interval = ev.record_interval;
  opt.idempotence_hard_limit = ev.idempotence_hard_limit;
  const std::int64_t snap_every = s.config.output.snapshot_interval;
  opt.on_step = [&](const EvolutionState& st) {
    if (snap_every > 0 && st.step_index % snap_every == 0) io::write_snapshot(st, snapshot_name(s.out_dir, st.step_index));
  };

  std::optional<ObservableRecord> last;
  const auto t0 = std::chrono::steady_clock::now();
  const EvolutionState final_state = run(std::move(state), *ev.dt, steps, s.source,
                                         [&](const ObservableRecord& r) {
                                           csv.write(r);
                                           last = r;
                                         },
                                         opt);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  io::write_snapshot(final_state, s.out_dir / "final.bdfk");

  json summary = setup_json(s);
  summary["dt"] = *ev.dt;
  summary["steps"] = steps;
  summary["integrator"] = ev.integrator == Integrator::unitary ? "unitary" : "rk4";
  summary["final_step_index"] = final_state.step_index;
  summary["final_time"] = final_state.t;
  summary["wall_seconds"] = seconds;
  if (last) summary["last_record"] = record_json(*last);
  write_json(s.out_dir / "run_summary.json", summary);

  std::cout << "advanced " << steps << " steps to t = " << final_state.t << " in " << seconds << " s\n"
            << "observables: " << csv.path().string() << '\n';
  return 0;
}

int cmd_evolve(const fs::path& config_path) {
  const Setup s = prepare(config_path);
  io::require_evolve(s.config);
  return evolve_from(s, initial_state(s), *s.config.evolve.steps, "observables.csv");
}

int cmd_resume(const fs::path& snapshot_path, const fs::path& config_path) {
  const Setup s = prepare(config_path);
  io::require_evolve(s.config);
  EvolutionState state = io::read_snapshot(snapshot_path, s.lattice);
  const std::int64_t remaining = std::max<std::int64_t>(0, *s.config.evolve.steps - state.step_index);
  const std::string csv = "observables_resume_" + std::to_string(state.step_index) + ".csv";
  std::cout << "resuming at step " << state.step_index << " (t = " << state.t << "), " << remaining
            << " steps remaining\n";
  return evolve_from(s, std::move(state), remaining, csv);
}

int cmd_scf(const fs::path& config_path) {
  const Setup s = prepare(config_path);
  const ScfSettings settings = s.config.scf_settings();
  const ScfResult r = s.config.scf.target_charge
                          ? charge_target_solve(s.source, *s.config.scf.target_charge, settings)
                          : scf_solve(s.source, settings);

  json report = setup_json(s);
  report["converged"] = r.converged;
  report["iterations"] = r.iterations;
  report["residual"] = r.residual;
  report["commutator_norm"] = r.commutator_norm;
  report["energy"] = r.energy;
  report["charge"] = r.charge;
  report["gap"] = r.gap;
  report["chemical_potential"] = r.chemical_potential;
  report["residual_history"] = r.residual_history;
  report["charge_history"] = r.charge_history;
  write_json(s.out_dir / "scf_report.json", report);
  io::write_snapshot(make_state(r.P), s.out_dir / "scf.bdfk");

  std::cout << (r.converged ? "converged" : "did not converge") << " after " << r.iterations
            << " iterations: residual " << r.residual << ", charge " << r.charge << ", energy " << r.energy
            << ", commutator " << r.commutator_norm << '\n';
  if (!r.converged) {
    std::cerr << "error: SCF iteration did not reach tol " << settings.tol << '\n';
    return kExitNumerical;
  }
  return 0;
}

int cmd_selftest(const std::optional<fs::path>& config_path) {
  io::SelftestOptions opt;
  if (config_path) {
    const io::SimulationConfig c = io::load_config(*config_path);
    for (const auto& w : c.warnings) std::cerr << "warning: " << w << '\n';
    opt = io::selftest_options(c);
  }
  const io::SelftestReport report = io::run_selftest(opt);
  report.print(std::cout);
  return report.passed() ? 0 : kExitSelftest;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bogoliubov-Dirac-Fock mean-field dynamics on a momentum lattice"};
  app.require_subcommand(1);

  std::string config, snapshot;
  std::optional<std::string> selftest_config;

  auto* evolve = app.add_subcommand("evolve", "time-evolve the configured initial state");
  evolve->add_option("config", config, "configuration file")->required();
  auto* scf = app.add_subcommand("scf", "solve for a stationary state");
  scf->add_option("config", config, "configuration file")->required();
  auto* selftest = app.add_subcommand("selftest", "run the invariant checks on a small lattice");
  selftest->add_option("config", selftest_config, "optional configuration (lattice and source)");
  auto* resume = app.add_subcommand("resume", "continue a run from a snapshot");
  resume->add_option("snapshot", snapshot, "snapshot file")->required();
  resume->add_option("config", config, "configuration file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*evolve) return cmd_evolve(config);
    if (*scf) return cmd_scf(config);
    if (*selftest) return cmd_selftest(selftest_config ? std::optional<fs::path>(*selftest_config) : std::nullopt);
    if (*resume) return cmd_resume(snapshot, config);
  } catch (const io::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const io::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const NumericalError& e) {
    std::cerr << "numerical abort: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
