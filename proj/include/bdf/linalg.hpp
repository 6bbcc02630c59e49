#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace bdf {

/// Raised when a numerical routine cannot produce a trustworthy result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct HermitianEigen {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXcd vectors; // columns are orthonormal eigenvectors
};

/// Dense Hermitian eigendecomposition (LAPACK zheevd). The input must be
/// Hermitian to within `hermiticity_tol * ||a||_F`; anything else indicates a
/// corrupted operator and raises NumericalError.
HermitianEigen eigh(const Eigen::MatrixXcd& a, double hermiticity_tol = 1e-10);

/// W = exp(-i tau H) - I, formed without cancellation against the identity
/// and corrected so that I + W is unitary to round-off in W rather than in I.
Eigen::MatrixXcd propagator_increment(const HermitianEigen& eig, double tau);

/// exp(-i tau H) for Hermitian H with eigendecomposition `eig`.
Eigen::MatrixXcd propagator(const HermitianEigen& eig, double tau);

}  // namespace bdf
