#include "bdf/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bdf {

namespace {

// Relative slack when testing |p| <= cutoff so that cutoffs sitting exactly on
// a lattice shell (the usual case) include that shell.
constexpr double kShellSlack = 1e-10;

std::size_t box_offset(const IntVec3& n, int r) {
  const std::size_t w = static_cast<std::size_t>(2 * r + 1);
  return (static_cast<std::size_t>(n[0] + r) * w + static_cast<std::size_t>(n[1] + r)) * w +
         static_cast<std::size_t>(n[2] + r);
}

bool in_box(const IntVec3& n, int r) {
  return std::abs(n[0]) <= r && std::abs(n[1]) <= r && std::abs(n[2]) <= r;
}

}  // namespace

std::shared_ptr<const MomentumLattice> MomentumLattice::build(double spacing, double cutoff) {
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw std::invalid_argument("lattice spacing must be positive and finite, got " +
                                std::to_string(spacing));
  }
  if (!(cutoff >= 0.0) || !std::isfinite(cutoff)) {
    throw std::invalid_argument("lattice cutoff must be non-negative and finite, got " +
                                std::to_string(cutoff));
  }

  auto lat = std::shared_ptr<MomentumLattice>(new MomentumLattice());
  lat->spacing_ = spacing;
  lat->cutoff_ = cutoff;

  const double ratio = cutoff / spacing;
  const double r2_max = ratio * ratio * (1.0 + kShellSlack);
  const int r = static_cast<int>(std::floor(ratio * (1.0 + kShellSlack)));
  lat->radius_ = r;

  const std::size_t w = static_cast<std::size_t>(2 * r + 1);
  lat->point_table_.assign(w * w * w, -1);
  for (int x = -r; x <= r; ++x) {
    for (int y = -r; y <= r; ++y) {
      for (int z = -r; z <= r; ++z) {
        const double n2 = static_cast<double>(x * x + y * y + z * z);
        if (n2 <= r2_max) {
          const IntVec3 n{x, y, z};
          lat->point_table_[box_offset(n, r)] = static_cast<std::int32_t>(lat->coords_.size());
          lat->coords_.push_back(n);
        }
      }
    }
  }
  lat->origin_ = static_cast<std::size_t>(lat->point_table_[box_offset({0, 0, 0}, r)]);

  // Difference lattice: every k = p - q, in lexicographic order.
  const int r2 = 2 * r;
  const std::size_t w2 = static_cast<std::size_t>(2 * r2 + 1);
  std::vector<char> present(w2 * w2 * w2, 0);
  const std::size_t m = lat->coords_.size();
  for (const auto& p : lat->coords_) {
    for (const auto& q : lat->coords_) {
      present[box_offset({p[0] - q[0], p[1] - q[1], p[2] - q[2]}, r2)] = 1;
    }
  }
  lat->diff_table_.assign(w2 * w2 * w2, -1);
  for (int x = -r2; x <= r2; ++x) {
    for (int y = -r2; y <= r2; ++y) {
      for (int z = -r2; z <= r2; ++z) {
        const IntVec3 k{x, y, z};
        if (present[box_offset(k, r2)]) {
          lat->diff_table_[box_offset(k, r2)] = static_cast<std::int32_t>(lat->diff_coords_.size());
          lat->diff_coords_.push_back(k);
        }
      }
    }
  }
  lat->diff_zero_ = static_cast<std::size_t>(lat->diff_table_[box_offset({0, 0, 0}, r2)]);
  lat->diff_neg_.resize(lat->diff_coords_.size());
  for (std::size_t d = 0; d < lat->diff_coords_.size(); ++d) {
    const auto& k = lat->diff_coords_[d];
    lat->diff_neg_[d] = static_cast<std::size_t>(lat->diff_table_[box_offset({-k[0], -k[1], -k[2]}, r2)]);
  }

  lat->pair_diff_.resize(m * m);
  std::vector<std::size_t> counts(lat->diff_coords_.size() + 1, 0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const auto& p = lat->coords_[i];
      const auto& q = lat->coords_[j];
      const auto d = static_cast<std::size_t>(
          lat->diff_table_[box_offset({p[0] - q[0], p[1] - q[1], p[2] - q[2]}, r2)]);
      lat->pair_diff_[i * m + j] = d;
      ++counts[d + 1];
    }
  }
  lat->pair_offsets_.resize(counts.size());
  lat->pair_offsets_[0] = 0;
  for (std::size_t d = 0; d + 1 < counts.size(); ++d) {
    lat->pair_offsets_[d + 1] = lat->pair_offsets_[d] + counts[d + 1];
  }
  lat->pairs_.resize(m * m);
  std::vector<std::size_t> cursor(lat->pair_offsets_.begin(), lat->pair_offsets_.end() - 1);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t d = lat->pair_diff_[i * m + j];
      lat->pairs_[cursor[d]++] = {static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)};
    }
  }
  return lat;
}

Eigen::Vector3d MomentumLattice::point(std::size_t i) const {
  const auto& n = coords_[i];
  return {spacing_ * n[0], spacing_ * n[1], spacing_ * n[2]};
}

Eigen::Vector3d MomentumLattice::diff_point(std::size_t d) const {
  const auto& k = diff_coords_[d];
  return {spacing_ * k[0], spacing_ * k[1], spacing_ * k[2]};
}

std::optional<std::size_t> MomentumLattice::index_of(const IntVec3& n) const {
  if (!in_box(n, radius_)) return std::nullopt;
  const auto v = point_table_[box_offset(n, radius_)];
  if (v < 0) return std::nullopt;
  return static_cast<std::size_t>(v);
}

std::optional<std::size_t> MomentumLattice::diff_index_of(const IntVec3& k) const {
  if (!in_box(k, 2 * radius_)) return std::nullopt;
  const auto v = diff_table_[box_offset(k, 2 * radius_)];
  if (v < 0) return std::nullopt;
  return static_cast<std::size_t>(v);
}

bool MomentumLattice::same_as(const MomentumLattice& other) const {
  return this == &other ||
         (spacing_ == other.spacing_ && cutoff_ == other.cutoff_ && coords_ == other.coords_);
}

}  // namespace bdf
