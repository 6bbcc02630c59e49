#pragma once

#include <functional>
#include <numbers>

#include "bdf/kernel_ops.hpp"

namespace bdf {

/// Coupling above which the energy is no longer known to be coercive.
inline constexpr double kCoercivityCouplingLimit = 4.0 / std::numbers::pi;

/// Fixed external charge n with coupling alpha; phi = -alpha n * 1/|x|.
struct ExternalSource {
  ChargeDensity n;
  double alpha = 0.0;
  double total_charge = 0.0;  // Z, the position-space integral of n
};

/// n^(k) = Z (2 pi)^{-3/2} exp(-width^2 |k|^2 / 2); a normalized Gaussian of
/// total charge Z in position space. Throws std::invalid_argument when
/// width <= 0 or alpha < 0.
ExternalSource build_gaussian_source(double total_charge, double width, double alpha,
                                     const LatticePtr& lattice);

/// Source with n = 0.
ExternalSource empty_source(const LatticePtr& lattice, double alpha);

struct MeanFieldOperator {
  KernelOperator D;  // D^0 + V
  KernelOperator V;  // alpha (rho_Q - n) * 1/|x| - alpha R_Q
};

/// D_Q and V_Q for the state Q = P - P^0.
MeanFieldOperator assemble(const KernelOperator& q, const ExternalSource& src);

/// Signature shared by `assemble` and test doubles that perturb it.
using Assembler = std::function<MeanFieldOperator(const KernelOperator&, const ExternalSource&)>;

struct EnergyTerms {
  double kinetic = 0.0;    // tr_P0(D^0 Q)
  double external = 0.0;   // -alpha D(rho_Q, n)
  double direct = 0.0;     // alpha/2 D(rho_Q, rho_Q)
  double exchange = 0.0;   // -alpha/2 tr(Q R_Q)
  double total() const { return kinetic + external + direct + exchange; }
  /// Largest imaginary part dropped while forming the real terms.
  double max_imaginary = 0.0;
};

EnergyTerms energy_terms(const KernelOperator& q, const ExternalSource& src);

/// BDF energy of Q.
double bdf_energy(const KernelOperator& q, const ExternalSource& src);

/// Both sides of the coercivity inequality
///   E(Q) + alpha/2 D(n, n) >= (1 - alpha pi/4) tr_P0(D^0 Q) + alpha/2 D(rho_Q - n, rho_Q - n)
/// and the lower bound ||Q||_HS^2 <= tr(|D^0| Q^2) <= tr_P0(D^0 Q).
struct CoercivityReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;          // lhs - rhs
  double kinetic = 0.0;        // tr_P0(D^0 Q)
  double abs_kinetic = 0.0;    // tr(|D^0| Q^2)
  double hs_norm_sq = 0.0;     // ||Q||_HS^2
  double projector_residual = 0.0;  // ||Q^2 - (Q^{++} - Q^{--})||_HS
};

CoercivityReport coercivity_report(const KernelOperator& q, const ExternalSource& src);

/// Upper bound on ||Q(t)||_HS^2 implied by energy conservation and coercivity:
///   (E(Q_I) + alpha/2 D(n, n)) / (1 - alpha pi/4).
/// Only meaningful for alpha < 4/pi.
double coercivity_norm_bound(double initial_energy, const ExternalSource& src);

}  // namespace bdf
