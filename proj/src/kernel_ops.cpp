#include "bdf/kernel_ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "bdf/kernels.hpp"

namespace bdf {

ChargeDensity::ChargeDensity(LatticePtr lattice)
    : lattice_(std::move(lattice)),
      values_(Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(lattice_->diff_size()))) {}

ChargeDensity::ChargeDensity(LatticePtr lattice, Eigen::VectorXcd values)
    : lattice_(std::move(lattice)), values_(std::move(values)) {
  if (values_.size() != static_cast<Eigen::Index>(lattice_->diff_size())) {
    throw std::invalid_argument("density size does not match the difference lattice");
  }
}

double ChargeDensity::conjugate_symmetry_defect() const {
  double worst = 0.0;
  for (std::size_t d = 0; d < lattice_->diff_size(); ++d) {
    const auto nd = lattice_->diff_negation(d);
    worst = std::max(worst, std::abs((*this)[nd] - std::conj((*this)[d])));
  }
  return worst;
}

ChargeDensity& ChargeDensity::operator+=(const ChargeDensity& other) {
  require_same_lattice(*lattice_, *other.lattice_);
  values_ += other.values_;
  return *this;
}

ChargeDensity& ChargeDensity::operator-=(const ChargeDensity& other) {
  require_same_lattice(*lattice_, *other.lattice_);
  values_ -= other.values_;
  return *this;
}

std::complex<double> hs_inner(const KernelOperator& a, const KernelOperator& b) {
  require_same_lattice(*a.lattice(), *b.lattice());
  return a.matrix().conjugate().cwiseProduct(b.matrix()).sum();
}

double hs_norm(const KernelOperator& a) { return a.matrix().norm(); }

std::complex<double> trace(const KernelOperator& a) { return a.matrix().trace(); }

KernelOperator commutator(const KernelOperator& a, const KernelOperator& b) {
  require_same_lattice(*a.lattice(), *b.lattice());
  KernelOperator::Matrix c = a.matrix() * b.matrix();
  c.noalias() -= b.matrix() * a.matrix();
  return {a.lattice(), std::move(c)};
}

P0Blocks p0_blocks(const KernelOperator& a) {
  const auto& lat = a.lattice();
  const std::size_t m = lat->size();
  std::vector<SpinorMatrix> minus(m), plus(m);
  for (std::size_t i = 0; i < m; ++i) {
    minus[i] = free_projector(lat->point(i));
    plus[i] = SpinorMatrix::Identity() - minus[i];
  }
  P0Blocks out{KernelOperator(lat), KernelOperator(lat), KernelOperator(lat), KernelOperator(lat)};
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      const SpinorMatrix blk = a.block(i, j);
      const SpinorMatrix left_plus = plus[i] * blk;
      const SpinorMatrix left_minus = minus[i] * blk;
      out.pp.block(i, j) = left_plus * plus[j];
      out.pm.block(i, j) = left_plus * minus[j];
      out.mm.block(i, j) = left_minus * minus[j];
      out.mp.block(i, j) = left_minus * plus[j];
    }
  }
  return out;
}

double p0_trace(const KernelOperator& a) {
  const auto& lat = a.lattice();
  double acc = 0.0;
  for (std::size_t i = 0; i < lat->size(); ++i) {
    const SpinorMatrix minus = free_projector(lat->point(i));
    const SpinorMatrix plus = SpinorMatrix::Identity() - minus;
    const SpinorMatrix blk = a.block(i, i);
    acc += (plus * blk * plus).trace().real() + (minus * blk * minus).trace().real();
  }
  return acc;
}

double p0_trace_free(const KernelOperator& a) {
  const auto& lat = a.lattice();
  double acc = 0.0;
  for (std::size_t i = 0; i < lat->size(); ++i) {
    const Eigen::Vector3d p = lat->point(i);
    const SpinorMatrix minus = free_projector(p);
    const SpinorMatrix plus = SpinorMatrix::Identity() - minus;
    const SpinorMatrix blk = dirac_symbol(p) * a.block(i, i);
    acc += (plus * blk * plus).trace().real() + (minus * blk * minus).trace().real();
  }
  return acc;
}

ChargeDensity density(const KernelOperator& q) {
  return {q.lattice(), kernels::omp::density(*q.lattice(), q.matrix())};
}

double coulomb_norm(const ChargeDensity& rho) {
  const auto& lat = *rho.lattice();
  double acc = 0.0;
  for (std::size_t d = 0; d < lat.diff_size(); ++d) {
    if (d == lat.diff_zero()) continue;
    acc += std::norm(rho[d]) / lat.diff_point(d).squaredNorm();
  }
  return std::sqrt(acc * lat.weight());
}

std::complex<double> coulomb_pairing(const ChargeDensity& f, const ChargeDensity& g) {
  require_same_lattice(*f.lattice(), *g.lattice());
  const auto& lat = *f.lattice();
  const auto w = kernels::coulomb_weights(lat);
  std::complex<double> acc = 0.0;
  for (std::size_t d = 0; d < lat.diff_size(); ++d) acc += std::conj(f[d]) * g[d] * w[d];
  return acc * lat.weight();
}

KernelOperator direct_potential(const ChargeDensity& rho, double alpha) {
  return {rho.lattice(), kernels::omp::direct_potential(*rho.lattice(), rho.values(), alpha)};
}

KernelOperator exchange_operator(const KernelOperator& q, double alpha) {
  return {q.lattice(), kernels::omp::exchange(*q.lattice(), q.matrix(), alpha)};
}

KernelOperator exchange_operator_naive(const KernelOperator& q, double alpha) {
  return {q.lattice(), kernels::serial::exchange(*q.lattice(), q.matrix(), alpha)};
}

}  // namespace bdf
