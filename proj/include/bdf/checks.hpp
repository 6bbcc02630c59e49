#pragma once

#include <cstddef>
#include <random>

#include "bdf/mean_field.hpp"

// Property checks shared by the selftest, the unit tests and the acceptance
// runner. Each returns the measured quantity; callers own the thresholds.
namespace bdf::checks {

using Rng = std::mt19937_64;

/// Hermitian operator with independent normal entries (real and imaginary
/// parts of variance scale^2 / 2) before symmetrization.
KernelOperator random_hermitian(const LatticePtr& lattice, Rng& rng, double scale = 1.0);

/// Density with rho(-k) = conj(rho(k)) and O(1) normal modes.
ChargeDensity random_density(const LatticePtr& lattice, Rng& rng);

/// U P^0 U^* with U = exp(-i strength H), H = random_hermitian.
KernelOperator random_projector_near_vacuum(const LatticePtr& lattice, Rng& rng, double strength);

/// max over the Clifford relations {a_i, a_j} = 2 delta_ij, {a_i, b} = 0, b^2 = 1.
double dirac_algebra_residual();

/// max over lattice points of ||P^2 - P||, ||P - P^*||, |Tr P - 2| and
/// ||D P - P D|| for P = P^0(p).
double free_projector_residual(const MomentumLattice& lattice);

struct PineqSweep {
  double max_ratio = 0.0;
  std::size_t pairs = 0;
};

/// max over p != q of Tr(P^0(p) P^0_perp(q)) * 2 E((p+q)/2)^2 / |p-q|^2.
PineqSweep pineq_sweep(const MomentumLattice& lattice);

double max_abs(const ChargeDensity& rho);

/// Max modulus of the densities of [phi_rho, Q], [phi_rho, P^0] and [R_Q, Q],
/// with phi_rho the Coulomb potential of rho and R_Q the unit-coupling
/// exchange operator.
struct VanishingDensities {
  double phi_q = 0.0;
  double phi_p0 = 0.0;
  double exchange_q = 0.0;
};
VanishingDensities vanishing_densities(const KernelOperator& q, const ChargeDensity& rho);

/// Identities for Q = P - P^0 with P a projector.
struct ProjectorIdentities {
  double blocks_residual = 0.0;       // ||Q^2 - (Q^{++} - Q^{--})||_HS
  double p0_trace_free = 0.0;         // tr_P0(D^0 Q)
  double abs_kinetic = 0.0;           // tr(|D^0| Q^2)
  double kinetic_relative_error = 0.0;
  double hs_norm_sq = 0.0;            // ||Q||_HS^2
};
ProjectorIdentities projector_identities(const KernelOperator& q);

struct GradientCheck {
  double finite_difference = 0.0;
  double analytic = 0.0;              // tr_P0(D_Q h)
  double relative_error = 0.0;
};

/// Central difference of the energy along `direction` against the mean-field
/// pairing. The energy is quadratic in Q, so the difference is exact up to
/// round-off for any step.
GradientCheck gradient_check(const KernelOperator& q, const KernelOperator& direction,
                             const ExternalSource& src, double step = 1e-3);

/// ||naive - per-diagonal|| / ||per-diagonal|| for the exchange operator.
double exchange_paths_relative_difference(const KernelOperator& q, double alpha);

/// Lattice constants of the two potential bounds, measured as the worst ratio
/// over random samples:
///   ||phi_rho||_op <= kappa E(cutoff) ||rho||_C  and  ||R_Q||_HS <= C ||Q||_HS  (alpha = 1).
struct PotentialConstants {
  double direct_kappa = 0.0;
  double exchange_hs = 0.0;
};

PotentialConstants potential_constants(const LatticePtr& lattice, Rng& rng, int samples);

}  // namespace bdf::checks
