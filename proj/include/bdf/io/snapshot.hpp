#pragma once

#include <array>
#include <cstdint>
#include <filesystem>

#include "bdf/dynamics.hpp"
#include "bdf/io/config.hpp"

namespace bdf::io {

inline constexpr std::array<char, 4> kSnapshotMagic{'B', 'D', 'F', 'K'};
inline constexpr std::uint32_t kSnapshotVersion = 1;

/// Fixed 56-byte little-endian header:
///   magic[4] version:u32 h:f64 cutoff:f64 M:u64 step:i64 t:f64 crc32:u64
/// The CRC-32 covers the payload only.
struct SnapshotHeader {
  std::uint32_t version = kSnapshotVersion;
  double spacing = 0.0;
  double cutoff = 0.0;
  std::uint64_t points = 0;
  std::int64_t step_index = 0;
  double t = 0.0;
  std::uint64_t checksum = 0;
};

inline constexpr std::size_t kSnapshotHeaderBytes = 56;

/// Payload size for M lattice points: M^2 blocks of 16 complex entries.
std::uint64_t snapshot_payload_bytes(std::uint64_t points);

/// Stores P(t) as lattice-basis matrix elements, ordered (p, q, 4x4 row-major)
/// with interleaved (re, im) f64 values. Writes through a temporary file and
/// renames it into place.
void write_snapshot(const EvolutionState& state, const std::filesystem::path& path);

SnapshotHeader read_snapshot_header(const std::filesystem::path& path);

/// Refuses snapshots whose (h, cutoff, M) differ from `lattice`, whose payload
/// is truncated, or whose checksum does not match. All failures are IoError.
EvolutionState read_snapshot(const std::filesystem::path& path, const LatticePtr& lattice);

}  // namespace bdf::io
