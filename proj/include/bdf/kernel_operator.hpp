#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Core>

#include "bdf/lattice.hpp"
#include "bdf/spinor.hpp"

namespace bdf {

/// Hilbert-Schmidt operator on the cutoff space, stored as a dense
/// (4M x 4M) block matrix over lattice point pairs.
///
/// The stored entries are matrix elements in the orthonormal basis of
/// normalized lattice delta functions, i.e. h^3 * A(p, q) for the momentum
/// kernel A(p, q). With this convention operator products, traces and
/// Hilbert-Schmidt norms are plain matrix operations; `kernel_block` and
/// `set_kernel_block` convert to and from kernel values.
///
/// Row/column index of spinor component a at lattice point i is 4*i + a.
class KernelOperator {
 public:
  using Matrix = Eigen::MatrixXcd;

  KernelOperator() = default;
  explicit KernelOperator(LatticePtr lattice);
  KernelOperator(LatticePtr lattice, Matrix matrix);

  static KernelOperator zero(const LatticePtr& lattice) { return KernelOperator(lattice); }

  const LatticePtr& lattice() const { return lattice_; }
  const Matrix& matrix() const { return matrix_; }
  Matrix& matrix() { return matrix_; }
  Eigen::Index dim() const { return matrix_.rows(); }

  auto block(std::size_t i, std::size_t j) const {
    return matrix_.block<4, 4>(4 * static_cast<Eigen::Index>(i), 4 * static_cast<Eigen::Index>(j));
  }
  auto block(std::size_t i, std::size_t j) {
    return matrix_.block<4, 4>(4 * static_cast<Eigen::Index>(i), 4 * static_cast<Eigen::Index>(j));
  }

  SpinorMatrix kernel_block(std::size_t i, std::size_t j) const;
  void set_kernel_block(std::size_t i, std::size_t j, const SpinorMatrix& value);

  /// ||A - A^*||_HS; zero for Hermitian operators.
  double hermiticity_defect() const;

  /// True when every off-diagonal (p != q) block is exactly zero.
  bool is_block_diagonal() const;

  KernelOperator adjoint() const { return {lattice_, matrix_.adjoint()}; }

  KernelOperator& operator+=(const KernelOperator& other);
  KernelOperator& operator-=(const KernelOperator& other);
  KernelOperator& operator*=(std::complex<double> s) {
    matrix_ *= s;
    return *this;
  }

  friend KernelOperator operator+(KernelOperator a, const KernelOperator& b) { return a += b; }
  friend KernelOperator operator-(KernelOperator a, const KernelOperator& b) { return a -= b; }
  friend KernelOperator operator*(std::complex<double> s, KernelOperator a) { return a *= s; }
  friend KernelOperator operator*(const KernelOperator& a, const KernelOperator& b);

 private:
  LatticePtr lattice_;
  Matrix matrix_;
};

/// Throws std::invalid_argument unless both operands live on the same lattice.
void require_same_lattice(const MomentumLattice& a, const MomentumLattice& b);

/// Block-diagonal kernel of the free Dirac operator D^0.
KernelOperator free_dirac_operator(const LatticePtr& lattice);
/// |D^0| = E(p) on each block.
KernelOperator free_dirac_abs(const LatticePtr& lattice);
/// Free vacuum P^0 = chi_(-inf,0)(D^0).
KernelOperator vacuum_projector(const LatticePtr& lattice);

}  // namespace bdf
