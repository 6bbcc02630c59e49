#pragma once

#include <optional>
#include <vector>

#include "bdf/linalg.hpp"
#include "bdf/mean_field.hpp"

namespace bdf {

struct ScfSettings {
  int max_iter = 200;
  double tol = 1e-11;          // ||P_{n+1} - P_n||_HS
  double damping = 1.0;        // theta in (0, 1]: Q_in <- theta Q_out + (1 - theta) Q_in
  double chemical_potential = 0.0;
  /// Minimum distance between the chemical potential and the spectrum.
  /// Non-positive selects the default 1e-10 * E(cutoff).
  double gap_tol = 0.0;
};

/// Validates settings; throws std::invalid_argument.
void validate(const ScfSettings& settings);

struct ScfResult {
  KernelOperator P;
  int iterations = 0;
  double residual = 0.0;          // last ||P_{n+1} - P_n||_HS
  double commutator_norm = 0.0;   // ||[D_Q, P]||_HS at the result
  double energy = 0.0;
  double charge = 0.0;            // tr_P0(P - P^0)
  double gap = 0.0;               // distance from lambda to the spectrum of D_Q
  double chemical_potential = 0.0;
  bool converged = false;
  std::vector<double> residual_history;
  std::vector<double> charge_history;  // charge of every iterate
};

/// The chemical potential sits within gap_tol of an eigenvalue, so the filling
/// is ambiguous.
class SpectralGapError : public NumericalError {
 public:
  SpectralGapError(double chemical_potential, double eigenvalue);
  double chemical_potential() const { return chemical_potential_; }
  double eigenvalue() const { return eigenvalue_; }

 private:
  double chemical_potential_;
  double eigenvalue_;
};

/// The requested charge sector cannot be realized on this lattice.
class ChargeSectorError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

double default_gap_tol(const MomentumLattice& lattice);

/// chi_(-inf, lambda)(D).
KernelOperator spectral_projector(const KernelOperator& d, double lambda, double gap_tol);

/// Fixed-point iteration P_{n+1} = chi_(-inf, lambda)(D_{Q_n}) with linear
/// mixing of the mean-field input. Starts from P^0 unless `start` is given.
/// Non-convergence is reported through `converged`, not thrown.
ScfResult scf_solve(const ExternalSource& src, const ScfSettings& settings,
                    const std::optional<KernelOperator>& start = std::nullopt);

/// Stationary state with tr_P0(Q) = N. At every iterate the chemical
/// potential is placed mid-gap between the (2M+N)-th and (2M+N+1)-th
/// eigenvalues of the mean-field operator (aufbau filling); the final value is
/// returned in `chemical_potential`.
ScfResult charge_target_solve(const ExternalSource& src, int electrons, const ScfSettings& settings);

}  // namespace bdf
