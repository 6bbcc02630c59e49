#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bdf/dynamics.hpp"

namespace bdf::io {

/// Invalid or incomplete configuration. `key_path()` names the offending key
/// as "section.key", spelled the way the document spelled it.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key_path, const std::string& message);
  const std::string& key_path() const { return key_path_; }

 private:
  std::string key_path_;
};

/// File could not be read or written, or a snapshot is malformed.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class InitialMode { vacuum, charged_free, charged_scf, snapshot };

struct SimulationConfig {
  struct Lattice {
    double spacing = 0.0;
    double cutoff = 0.0;
  } lattice;

  struct Source {
    double charge = 0.0;  // Z
    double width = 1.0;
    double alpha = 0.05;
  } source;

  struct Initial {
    InitialMode mode = InitialMode::vacuum;
    int electrons = 0;
    std::string snapshot_path;
  } initial;

  struct Evolve {
    std::optional<double> dt;
    std::optional<std::int64_t> steps;
    std::int64_t record_interval = 1;
    Integrator integrator = Integrator::unitary;
    double idempotence_hard_limit = 1e-6;
  } evolve;

  struct Scf {
    double chemical_potential = 0.0;
    std::optional<int> target_charge;
    double tol = 1e-11;
    int max_iter = 200;
    double damping = 1.0;
  } scf;

  struct Output {
    std::string directory = "bdf_output";
    std::int64_t snapshot_interval = 0;
  } output;

  /// Non-fatal findings, e.g. alpha >= 4/pi.
  std::vector<std::string> warnings;

  ScfSettings scf_settings() const;
};

/// Parses an INI-style document:
///
///   [lattice]  spacing (h), cutoff (Λ)                       required
///   [source]   charge (Z), width, alpha (α)
///   [initial]  mode = vacuum|charged_free|charged_scf|snapshot, electrons (N),
///              snapshot_path
///   [evolve]   dt (Δt), steps, record_interval, integrator = unitary|rk4,
///              idempotence_hard_limit
///   [scf]      chemical_potential (λ), target_charge, tol, max_iter, damping (θ)
///   [output]   directory, snapshot_interval
///
/// Symbols in parentheses are accepted as key aliases. `dt` and `steps` become
/// required as soon as an [evolve] section is present. Unknown sections and
/// keys are errors. Lines starting with '#' or ';' are comments.
SimulationConfig parse_config(std::string_view text);

/// Reads and parses a file; IoError if it cannot be read.
SimulationConfig load_config(const std::filesystem::path& path);

/// Throws ConfigError unless the evolve section provides dt and steps.
void require_evolve(const SimulationConfig& config);

}  // namespace bdf::io
