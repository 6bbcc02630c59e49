#include "bdf/linalg.hpp"

#include <cmath>
#include <complex>

#include <lapacke.h>

namespace bdf {

HermitianEigen eigh(const Eigen::MatrixXcd& a, double hermiticity_tol) {
  if (a.rows() != a.cols()) throw NumericalError("eigh: matrix is not square");
  const double defect = (a - a.adjoint()).norm();
  if (defect > hermiticity_tol * std::max(1.0, a.norm())) {
    throw NumericalError("eigh: input is not Hermitian (||A - A*|| = " + std::to_string(defect) + ")");
  }
  HermitianEigen out;
  out.vectors = 0.5 * (a + a.adjoint());
  out.values.resize(a.rows());
  const auto n = static_cast<lapack_int>(a.rows());
  const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n,
                                         reinterpret_cast<lapack_complex_double*>(out.vectors.data()),
                                         n, out.values.data());
  if (info != 0) {
    throw NumericalError("eigh: zheevd failed with info = " + std::to_string(info));
  }
  return out;
}

Eigen::MatrixXcd propagator_increment(const HermitianEigen& eig, double tau) {
  // exp(ix) - 1 = 2i sin(x/2) exp(ix/2)
  const Eigen::VectorXcd phases = (eig.values * (-tau)).unaryExpr([](double x) {
    return std::complex<double>(0.0, 2.0 * std::sin(0.5 * x)) * std::polar(1.0, 0.5 * x);
  });
  Eigen::MatrixXcd w = (eig.vectors * phases.asDiagonal()) * eig.vectors.adjoint();
  // One Newton-Schulz step towards the unitary polar factor of I + W. The
  // eigenvectors are orthonormal only to ~n eps, which otherwise shows up as a
  // slow systematic drift of the trace over many steps.
  const Eigen::MatrixXcd defect = -(w + w.adjoint() + w.adjoint() * w);  // I - U*U
  w += 0.5 * defect + 0.5 * (w * defect);
  return w;
}

Eigen::MatrixXcd propagator(const HermitianEigen& eig, double tau) {
  Eigen::MatrixXcd u = propagator_increment(eig, tau);
  u.diagonal().array() += 1.0;
  return u;
}

}  // namespace bdf
