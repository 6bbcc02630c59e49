#pragma once

// Hot loops of the kernel algebra. Each kernel exists twice:
//
//   serial::  straightforward loops kept as the reference implementation;
//   omp::     OpenMP-parallel version used in production.
//
// Every output entry of an omp:: kernel is produced by exactly one thread with
// a fixed summation order, so results do not depend on the thread count.
//
// All matrices use the lattice-basis convention of KernelOperator
// (entries h^3 * kernel).

#include <vector>

#include <Eigen/Core>

#include "bdf/lattice.hpp"

namespace bdf::kernels {

/// 4 pi / |k|^2 on the difference lattice, 0 at k = 0.
std::vector<double> coulomb_weights(const MomentumLattice& lattice);

namespace serial {

Eigen::VectorXcd density(const MomentumLattice& lattice, const Eigen::MatrixXcd& q);

Eigen::MatrixXcd direct_potential(const MomentumLattice& lattice, const Eigen::VectorXcd& rho,
                                  double alpha);

/// Naive double loop over (p, q) with an inner sum over momentum transfers k.
Eigen::MatrixXcd exchange(const MomentumLattice& lattice, const Eigen::MatrixXcd& q, double alpha);

}  // namespace serial

namespace omp {

/// Parallel over difference vectors k; each k sums its pair list in order.
Eigen::VectorXcd density(const MomentumLattice& lattice, const Eigen::MatrixXcd& q);

/// Parallel over columns.
Eigen::MatrixXcd direct_potential(const MomentumLattice& lattice, const Eigen::VectorXcd& rho,
                                  double alpha);

/// Per-diagonal convolution: for fixed d = p - q the kernel is a convolution
/// of the diagonal s -> Q(s, s - d) against 4 pi/|k|^2. Parallel over d.
Eigen::MatrixXcd exchange(const MomentumLattice& lattice, const Eigen::MatrixXcd& q, double alpha);

}  // namespace omp

}  // namespace bdf::kernels
