#include "bdf/io/observables.hpp"

#include <cstdio>

#include "bdf/io/config.hpp"

namespace bdf::io {

std::string format_double(double v) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

CsvObservableWriter::CsvObservableWriter(const std::filesystem::path& path)
    : path_(path), out_(path, std::ios::trunc) {
  if (!out_) throw IoError("cannot open " + path.string() + " for writing");
  out_ << kObservablesHeader << '\n';
  out_.flush();
  if (!out_) throw IoError("error writing " + path.string());
}

void CsvObservableWriter::write(const ObservableRecord& r) {
  out_ << format_double(r.t) << ',' << format_double(r.charge) << ',' << format_double(r.energy) << ','
       << format_double(r.hs_norm_q) << ',' << format_double(r.coulomb_norm_rho_minus_n) << ','
       << format_double(r.idempotence_residual) << ',' << format_double(r.commutator_norm) << '\n';
  out_.flush();
  if (!out_) throw IoError("error writing " + path_.string());
}

void emit_observables(std::span<const ObservableRecord> records, const std::filesystem::path& path) {
  CsvObservableWriter w(path);
  for (const auto& r : records) w.write(r);
}

}  // namespace bdf::io
