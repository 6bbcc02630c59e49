#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Core>

namespace bdf {

using IntVec3 = std::array<int, 3>;

/// Cubic momentum grid h*Z^3 cut to the closed ball |p| <= cutoff, together
/// with the lattice of pairwise differences k = p - q used for densities.
///
/// Points are ordered lexicographically by integer coordinates. The lattice is
/// immutable once built and is shared by every operator living on it.
class MomentumLattice {
 public:
  /// Throws std::invalid_argument for non-positive spacing or negative cutoff.
  static std::shared_ptr<const MomentumLattice> build(double spacing, double cutoff);

  double spacing() const { return spacing_; }
  double cutoff() const { return cutoff_; }

  /// Riemann-sum weight h^3 used for every momentum integral.
  double weight() const { return spacing_ * spacing_ * spacing_; }

  std::size_t size() const { return coords_.size(); }
  std::size_t spinor_dim() const { return 4 * coords_.size(); }

  const IntVec3& coords(std::size_t i) const { return coords_[i]; }
  Eigen::Vector3d point(std::size_t i) const;
  std::optional<std::size_t> index_of(const IntVec3& n) const;
  std::size_t origin() const { return origin_; }

  // Difference lattice.
  std::size_t diff_size() const { return diff_coords_.size(); }
  const IntVec3& diff_coords(std::size_t d) const { return diff_coords_[d]; }
  Eigen::Vector3d diff_point(std::size_t d) const;
  std::optional<std::size_t> diff_index_of(const IntVec3& k) const;
  std::size_t diff_zero() const { return diff_zero_; }
  std::size_t diff_negation(std::size_t d) const { return diff_neg_[d]; }

  /// Index of p_i - p_j in the difference lattice.
  std::size_t diff_index(std::size_t i, std::size_t j) const {
    return pair_diff_[i * size() + j];
  }

  /// Point pairs (i, j) grouped by their difference p_i - p_j. Within a group
  /// pairs appear in lexicographic (i, j) order.
  struct PairIndex {
    std::uint32_t i;
    std::uint32_t j;
  };
  const std::vector<PairIndex>& pairs() const { return pairs_; }
  std::size_t pairs_begin(std::size_t d) const { return pair_offsets_[d]; }
  std::size_t pairs_end(std::size_t d) const { return pair_offsets_[d + 1]; }

  bool same_as(const MomentumLattice& other) const;

 private:
  MomentumLattice() = default;

  double spacing_ = 0.0;
  double cutoff_ = 0.0;
  int radius_ = 0;  // max |n_i| on the point grid

  std::vector<IntVec3> coords_;
  std::vector<std::int32_t> point_table_;  // (2r+1)^3 box, -1 where absent
  std::size_t origin_ = 0;

  std::vector<IntVec3> diff_coords_;
  std::vector<std::int32_t> diff_table_;  // (4r+1)^3 box
  std::vector<std::size_t> diff_neg_;
  std::size_t diff_zero_ = 0;

  std::vector<std::size_t> pair_diff_;
  std::vector<PairIndex> pairs_;
  std::vector<std::size_t> pair_offsets_;
};

using LatticePtr = std::shared_ptr<const MomentumLattice>;

}  // namespace bdf
