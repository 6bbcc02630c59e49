#include "bdf/kernel_operator.hpp"

#include <stdexcept>
#include <string>

namespace bdf {

KernelOperator::KernelOperator(LatticePtr lattice) : lattice_(std::move(lattice)) {
  const auto n = static_cast<Eigen::Index>(lattice_->spinor_dim());
  matrix_ = Matrix::Zero(n, n);
}

KernelOperator::KernelOperator(LatticePtr lattice, Matrix matrix)
    : lattice_(std::move(lattice)), matrix_(std::move(matrix)) {
  const auto n = static_cast<Eigen::Index>(lattice_->spinor_dim());
  if (matrix_.rows() != n || matrix_.cols() != n) {
    throw std::invalid_argument("kernel matrix is " + std::to_string(matrix_.rows()) + "x" +
                                std::to_string(matrix_.cols()) + ", lattice needs " +
                                std::to_string(n) + "x" + std::to_string(n));
  }
}

SpinorMatrix KernelOperator::kernel_block(std::size_t i, std::size_t j) const {
  return block(i, j) / lattice_->weight();
}

void KernelOperator::set_kernel_block(std::size_t i, std::size_t j, const SpinorMatrix& value) {
  block(i, j) = value * lattice_->weight();
}

double KernelOperator::hermiticity_defect() const { return (matrix_ - matrix_.adjoint()).norm(); }

bool KernelOperator::is_block_diagonal() const {
  const std::size_t m = lattice_->size();
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      if (i != j && !block(i, j).isZero(0.0)) return false;
    }
  }
  return true;
}

KernelOperator& KernelOperator::operator+=(const KernelOperator& other) {
  require_same_lattice(*lattice_, *other.lattice_);
  matrix_ += other.matrix_;
  return *this;
}

KernelOperator& KernelOperator::operator-=(const KernelOperator& other) {
  require_same_lattice(*lattice_, *other.lattice_);
  matrix_ -= other.matrix_;
  return *this;
}

KernelOperator operator*(const KernelOperator& a, const KernelOperator& b) {
  require_same_lattice(*a.lattice_, *b.lattice_);
  KernelOperator::Matrix c = a.matrix_ * b.matrix_;
  return {a.lattice_, std::move(c)};
}

void require_same_lattice(const MomentumLattice& a, const MomentumLattice& b) {
  if (!a.same_as(b)) {
    throw std::invalid_argument("lattice mismatch: (h=" + std::to_string(a.spacing()) +
                                ", cutoff=" + std::to_string(a.cutoff()) + ") vs (h=" +
                                std::to_string(b.spacing()) + ", cutoff=" +
                                std::to_string(b.cutoff()) + ")");
  }
}

namespace {

template <typename BlockFn>
KernelOperator diagonal_operator(const LatticePtr& lattice, BlockFn&& fn) {
  KernelOperator op(lattice);
  for (std::size_t i = 0; i < lattice->size(); ++i) op.block(i, i) = fn(lattice->point(i));
  return op;
}

}  // namespace

// A diagonal kernel delta(p - q) B(p) has lattice-basis matrix element B(p):
// the h^3 of the basis normalization cancels the 1/h^3 of the discrete delta.
KernelOperator free_dirac_operator(const LatticePtr& lattice) {
  return diagonal_operator(lattice, [](const Eigen::Vector3d& p) { return dirac_symbol(p); });
}

KernelOperator free_dirac_abs(const LatticePtr& lattice) {
  return diagonal_operator(lattice, [](const Eigen::Vector3d& p) { return dirac_symbol_abs(p); });
}

KernelOperator vacuum_projector(const LatticePtr& lattice) {
  return diagonal_operator(lattice, [](const Eigen::Vector3d& p) { return free_projector(p); });
}

}  // namespace bdf
