#pragma once

#include <filesystem>
#include <fstream>
#include <span>
#include <string_view>

#include "bdf/dynamics.hpp"

namespace bdf::io {

inline constexpr std::string_view kObservablesHeader =
    "t,charge,energy,hs_norm_Q,coulomb_norm_rho_minus_n,idempotence_residual,commutator_norm";

/// Streams records to CSV, one row per record, flushed after each row so a
/// crashed run leaves a readable prefix.
class CsvObservableWriter {
 public:
  explicit CsvObservableWriter(const std::filesystem::path& path);

  void write(const ObservableRecord& record);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

/// printf %.17g, which round-trips every double.
std::string format_double(double v);

void emit_observables(std::span<const ObservableRecord> records, const std::filesystem::path& path);

}  // namespace bdf::io
