#pragma once

#include <cstdint>
#include <functional>

#include "bdf/linalg.hpp"
#include "bdf/mean_field.hpp"
#include "bdf/scf.hpp"

namespace bdf {

/// P(t) is the state of record; Q = P - P^0 is recomputed from it on every
/// construction so the two never drift apart.
struct EvolutionState {
  double t = 0.0;
  KernelOperator P;
  KernelOperator Q;
  std::int64_t step_index = 0;
};

EvolutionState make_state(KernelOperator p, double t = 0.0, std::int64_t step_index = 0);

/// Per-record scalars. The first seven fields are the CSV columns.
struct ObservableRecord {
  double t = 0.0;
  double charge = 0.0;                     // tr_P0(Q)
  double energy = 0.0;                     // BDF energy
  double hs_norm_q = 0.0;                  // ||Q||_HS
  double coulomb_norm_rho_minus_n = 0.0;   // ||rho_Q - n||_C
  double idempotence_residual = 0.0;       // ||P^2 - P||_HS
  double commutator_norm = 0.0;            // ||[D_Q, P]||_HS

  std::int64_t step_index = 0;
  double cubic_trace = 0.0;                // tr(Q^3)
  double blocks_residual = 0.0;            // ||Q^2 - (Q^{++} - Q^{--})||_HS
  double hermiticity_defect = 0.0;         // ||Q - Q^*||_HS
};

ObservableRecord measure(const EvolutionState& state, const ExternalSource& src,
                         const Assembler& assembler = assemble);

/// F(Q) = [D_Q, Q] + [V_Q, P^0] = [D_Q, Q + P^0], so that i dQ/dt = F(Q).
KernelOperator rhs(const KernelOperator& q, const ExternalSource& src,
                   const Assembler& assembler = assemble);

/// exp(-i tau H) P exp(i tau H). Block-diagonal H is exponentiated block by
/// block; otherwise through a dense eigendecomposition.
KernelOperator conjugate_by_propagator(const KernelOperator& p, const KernelOperator& h, double tau);

/// Exponential midpoint predictor-corrector:
///   P_half = e^{-i dt/2 D(Q_t)} P e^{+i dt/2 D(Q_t)},
///   P_next = e^{-i dt D(Q_half)} P e^{+i dt D(Q_half)}.
/// Second order; preserves Hermiticity, idempotence and spectrum.
EvolutionState step_unitary(const EvolutionState& state, double dt, const ExternalSource& src,
                            const Assembler& assembler = assemble);

/// Classical RK4 on dQ/dt = -i F(Q). Reference integrator; does not keep P a
/// projector.
EvolutionState step_rk4(const EvolutionState& state, double dt, const ExternalSource& src,
                        const Assembler& assembler = assemble);

enum class Integrator { unitary, rk4 };
enum class InitialOrbitals { free_orbitals, scf_orbitals };

/// P_I = sea + sum_j |psi_j><psi_j| with N positive-energy orbitals.
///
/// free_orbitals: sea = P^0, psi_j the free positive-energy spinors ordered by
/// E(p), then lattice index, then spin.
/// scf_orbitals: sea = SCF vacuum P (lambda = 0), psi_j the lowest positive
/// eigenvectors of its mean-field operator.
///
/// Throws ChargeSectorError when N exceeds the available positive states.
EvolutionState build_initial_state(int electrons, const ExternalSource& src, InitialOrbitals mode,
                                   const ScfSettings& scf = {});

/// Idempotence residual beyond the configured hard limit.
class NumericalAbort : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

using ObservableSink = std::function<void(const ObservableRecord&)>;

struct RunOptions {
  Integrator integrator = Integrator::unitary;
  std::int64_t record_interval = 1;
  double idempotence_hard_limit = 1e-6;
  Assembler assembler = assemble;
  /// Called after every completed step (snapshots, progress).
  std::function<void(const EvolutionState&)> on_step;
};

/// Advances `n_steps` steps. Emits a record for the starting state and after
/// every step whose global step index is a multiple of `record_interval`.
EvolutionState run(EvolutionState state, double dt, std::int64_t n_steps, const ExternalSource& src,
                   const ObservableSink& sink, const RunOptions& options = {});

}  // namespace bdf
