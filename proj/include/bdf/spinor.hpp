#pragma once

#include <array>
#include <complex>

#include <Eigen/Core>

namespace bdf {

using cplx = std::complex<double>;
using SpinorMatrix = Eigen::Matrix4cd;

// Dirac matrices in the standard (Dirac) representation, beta = diag(1, 1, -1, -1).
const std::array<SpinorMatrix, 3>& dirac_alpha();
const SpinorMatrix& dirac_beta();

/// E(p) = sqrt(1 + |p|^2), natural units.
inline double dispersion(double p_norm) { return std::sqrt(1.0 + p_norm * p_norm); }
inline double dispersion(const Eigen::Vector3d& p) { return dispersion(p.norm()); }

/// Momentum symbol alpha.p + beta of the free Dirac operator.
SpinorMatrix dirac_symbol(const Eigen::Vector3d& p);

/// Negative-energy projector (1 - (alpha.p + beta)/E(p)) / 2.
SpinorMatrix free_projector(const Eigen::Vector3d& p);

/// |alpha.p + beta| = E(p) * I.
inline SpinorMatrix dirac_symbol_abs(const Eigen::Vector3d& p) {
  return dispersion(p) * SpinorMatrix::Identity();
}

}  // namespace bdf
