#pragma once

#include <cmath>
#include <complex>
#include <filesystem>
#include <string>

#include <gtest/gtest.h>

#include "bdf/checks.hpp"
#include "bdf/lattice.hpp"

namespace bdf::testing {

inline LatticePtr small_lattice() { return MomentumLattice::build(1.0, 1.5); }

// Independent of the library: plain arithmetic on integer coordinates.
inline Eigen::Vector3d to_point(const IntVec3& n, double h) { return h * Eigen::Vector3d(n[0], n[1], n[2]); }

inline IntVec3 minus(const IntVec3& a, const IntVec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

inline bool in_ball(const IntVec3& n, double h, double cutoff) {
  return to_point(n, h).norm() <= cutoff * (1.0 + 1e-10);
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    std::string name = "bdf_test_" + tag;
    if (info) name += std::string("_") + info->test_suite_name() + "_" + info->name();
    path_ = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace bdf::testing
