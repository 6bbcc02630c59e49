#pragma once

#include <complex>

#include <Eigen/Core>

#include "bdf/kernel_operator.hpp"
#include "bdf/lattice.hpp"

namespace bdf {

/// Fourier amplitudes rho^(k) of a charge density, sampled on the difference
/// lattice.
class ChargeDensity {
 public:
  ChargeDensity() = default;
  explicit ChargeDensity(LatticePtr lattice);
  ChargeDensity(LatticePtr lattice, Eigen::VectorXcd values);

  const LatticePtr& lattice() const { return lattice_; }
  const Eigen::VectorXcd& values() const { return values_; }
  Eigen::VectorXcd& values() { return values_; }
  std::complex<double> operator[](std::size_t d) const {
    return values_[static_cast<Eigen::Index>(d)];
  }

  /// max_k |rho(-k) - conj(rho(k))|; zero for densities that are real in
  /// position space.
  double conjugate_symmetry_defect() const;

  ChargeDensity& operator+=(const ChargeDensity& other);
  ChargeDensity& operator-=(const ChargeDensity& other);
  friend ChargeDensity operator+(ChargeDensity a, const ChargeDensity& b) { return a += b; }
  friend ChargeDensity operator-(ChargeDensity a, const ChargeDensity& b) { return a -= b; }

 private:
  LatticePtr lattice_;
  Eigen::VectorXcd values_;
};

/// tr(A^* B).
std::complex<double> hs_inner(const KernelOperator& a, const KernelOperator& b);
double hs_norm(const KernelOperator& a);

/// Plain trace tr(A) = sum_p Tr A(p, p) h^3.
std::complex<double> trace(const KernelOperator& a);

KernelOperator commutator(const KernelOperator& a, const KernelOperator& b);

/// Blocks of A relative to the vacuum splitting; "+" is the range of 1 - P^0.
struct P0Blocks {
  KernelOperator pp;  // (1-P0) A (1-P0)
  KernelOperator mm;  // P0 A P0
  KernelOperator pm;  // (1-P0) A P0
  KernelOperator mp;  // P0 A (1-P0)
};

P0Blocks p0_blocks(const KernelOperator& a);

/// tr A^{++} + tr A^{--}, real part. Equal to the plain trace at finite size.
double p0_trace(const KernelOperator& a);

/// p0_trace(D^0 A), evaluated block-by-block without forming D^0 A.
double p0_trace_free(const KernelOperator& a);

ChargeDensity density(const KernelOperator& q);

double coulomb_norm(const ChargeDensity& rho);

/// 4 pi sum_{k != 0} conj(f(k)) g(k) / |k|^2 h^3. Real whenever both inputs
/// are conjugate-symmetric.
std::complex<double> coulomb_pairing(const ChargeDensity& f, const ChargeDensity& g);

/// Multiplication operator alpha * rho * 1/|x| restricted to the cutoff space.
KernelOperator direct_potential(const ChargeDensity& rho, double alpha);

/// Exchange operator alpha * Q(x, y)/|x - y| (per-diagonal convolution path).
KernelOperator exchange_operator(const KernelOperator& q, double alpha);

/// Same operator through the naive double loop; kept as an independent oracle.
KernelOperator exchange_operator_naive(const KernelOperator& q, double alpha);

}  // namespace bdf
