#include "bdf/io/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

#include <zlib.h>

namespace bdf::io {

namespace {

void put_u64(unsigned char* out, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) out[b] = static_cast<unsigned char>(v >> (8 * b));
}

void put_u32(unsigned char* out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out[b] = static_cast<unsigned char>(v >> (8 * b));
}

std::uint64_t get_u64(const unsigned char* in) {
  std::uint64_t v = 0;
  for (int b = 7; b >= 0; --b) v = (v << 8) | in[b];
  return v;
}

std::uint32_t get_u32(const unsigned char* in) {
  std::uint32_t v = 0;
  for (int b = 3; b >= 0; --b) v = (v << 8) | in[b];
  return v;
}

void put_f64(unsigned char* out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }
double get_f64(const unsigned char* in) { return std::bit_cast<double>(get_u64(in)); }

std::uint32_t crc32_of(const std::vector<unsigned char>& data) {
  uLong crc = crc32(0L, Z_NULL, 0);
  std::size_t offset = 0;
  // zlib takes uInt lengths.
  constexpr std::size_t chunk = 1u << 30;
  while (offset < data.size()) {
    const std::size_t n = std::min(chunk, data.size() - offset);
    crc = crc32(crc, data.data() + offset, static_cast<uInt>(n));
    offset += n;
  }
  return static_cast<std::uint32_t>(crc);
}

std::string describe(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

SnapshotHeader decode_header(const unsigned char* buf, const std::filesystem::path& path) {
  if (std::memcmp(buf, kSnapshotMagic.data(), 4) != 0) {
    throw IoError("snapshot " + path.string() + ": bad magic bytes, not a BDFK file");
  }
  SnapshotHeader h;
  h.version = get_u32(buf + 4);
  h.spacing = get_f64(buf + 8);
  h.cutoff = get_f64(buf + 16);
  h.points = get_u64(buf + 24);
  h.step_index = static_cast<std::int64_t>(get_u64(buf + 32));
  h.t = get_f64(buf + 40);
  h.checksum = get_u64(buf + 48);
  if (h.version != kSnapshotVersion) {
    throw IoError("snapshot " + path.string() + ": unsupported format version " + std::to_string(h.version));
  }
  return h;
}

}  // namespace

std::uint64_t snapshot_payload_bytes(std::uint64_t points) { return points * points * 16 * 16; }

void write_snapshot(const EvolutionState& state, const std::filesystem::path& path) {
  const auto& lat = *state.P.lattice();
  const std::size_t m = lat.size();
  std::vector<unsigned char> payload(snapshot_payload_bytes(m));
  unsigned char* out = payload.data();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const auto blk = state.P.block(i, j);
      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
          put_f64(out, blk(a, b).real());
          put_f64(out + 8, blk(a, b).imag());
          out += 16;
        }
      }
    }
  }

  std::array<unsigned char, kSnapshotHeaderBytes> header{};
  std::memcpy(header.data(), kSnapshotMagic.data(), 4);
  put_u32(header.data() + 4, kSnapshotVersion);
  put_f64(header.data() + 8, lat.spacing());
  put_f64(header.data() + 16, lat.cutoff());
  put_u64(header.data() + 24, m);
  put_u64(header.data() + 32, static_cast<std::uint64_t>(state.step_index));
  put_f64(header.data() + 40, state.t);
  put_u64(header.data() + 48, crc32_of(payload));

  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + tmp.string() + " for writing");
    f.write(reinterpret_cast<const char*>(header.data()), static_cast<std::streamsize>(header.size()));
    f.write(reinterpret_cast<const char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
    f.flush();
    if (!f) throw IoError("error writing snapshot " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move snapshot into place at " + path.string() + ": " + ec.message());
}

SnapshotHeader read_snapshot_header(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open snapshot " + path.string());
  std::array<unsigned char, kSnapshotHeaderBytes> buf{};
  f.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (f.gcount() != static_cast<std::streamsize>(buf.size())) {
    throw IoError("snapshot " + path.string() + " is truncated: header incomplete");
  }
  return decode_header(buf.data(), path);
}

EvolutionState read_snapshot(const std::filesystem::path& path, const LatticePtr& lattice) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open snapshot " + path.string());
  std::array<unsigned char, kSnapshotHeaderBytes> buf{};
  f.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (f.gcount() != static_cast<std::streamsize>(buf.size())) {
    throw IoError("snapshot " + path.string() + " is truncated: header incomplete");
  }
  const SnapshotHeader h = decode_header(buf.data(), path);

  if (h.spacing != lattice->spacing()) {
    throw IoError("snapshot " + path.string() + " has spacing h = " + describe(h.spacing) +
                  " but the configured lattice has h = " + describe(lattice->spacing()));
  }
  if (h.cutoff != lattice->cutoff()) {
    throw IoError("snapshot " + path.string() + " has cutoff = " + describe(h.cutoff) +
                  " but the configured lattice has cutoff = " + describe(lattice->cutoff()));
  }
  if (h.points != lattice->size()) {
    throw IoError("snapshot " + path.string() + " has M = " + std::to_string(h.points) +
                  " points but the configured lattice has " + std::to_string(lattice->size()));
  }

  const std::uint64_t expected = snapshot_payload_bytes(h.points);
  std::vector<unsigned char> payload(expected);
  f.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(expected));
  if (static_cast<std::uint64_t>(f.gcount()) != expected) {
    throw IoError("snapshot " + path.string() + " is truncated: expected " + std::to_string(expected) +
                  " payload bytes, found " + std::to_string(f.gcount()));
  }
  if (f.peek() != std::char_traits<char>::eof()) {
    throw IoError("snapshot " + path.string() + " has trailing bytes after the payload");
  }
  const std::uint32_t crc = crc32_of(payload);
  if (crc != h.checksum) {
    throw IoError("snapshot " + path.string() + " failed checksum verification (stored " +
                  std::to_string(h.checksum) + ", computed " + std::to_string(crc) + ")");
  }

  KernelOperator p(lattice);
  const unsigned char* in = payload.data();
  const std::size_t m = lattice->size();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      auto blk = p.block(i, j);
      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
          blk(a, b) = cplx(get_f64(in), get_f64(in + 8));
          in += 16;
        }
      }
    }
  }
  return make_state(std::move(p), h.t, h.step_index);
}

}  // namespace bdf::io
