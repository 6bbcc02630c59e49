#include "bdf/dynamics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace bdf {

namespace {

KernelOperator hermitian_part(KernelOperator a) {
  a.matrix() = 0.5 * (a.matrix() + a.matrix().adjoint()).eval();
  return a;
}

}  // namespace

EvolutionState make_state(KernelOperator p, double t, std::int64_t step_index) {
  KernelOperator q = p - vacuum_projector(p.lattice());
  return {t, std::move(p), std::move(q), step_index};
}

ObservableRecord measure(const EvolutionState& state, const ExternalSource& src,
                         const Assembler& assembler) {
  const KernelOperator& p = state.P;
  const KernelOperator& q = state.Q;

  ObservableRecord r;
  r.t = state.t;
  r.step_index = state.step_index;
  r.charge = p0_trace(q);
  r.energy = bdf_energy(q, src);
  r.hs_norm_q = hs_norm(q);
  r.coulomb_norm_rho_minus_n = coulomb_norm(density(q) - src.n);

  Eigen::MatrixXcd scratch = p.matrix() * p.matrix();
  r.idempotence_residual = (scratch - p.matrix()).norm();

  // [D, P] = DP - (DP)^* for Hermitian D and P.
  const MeanFieldOperator mf = assembler(q, src);
  scratch.noalias() = mf.D.matrix() * p.matrix();
  r.commutator_norm = (scratch - scratch.adjoint()).norm();

  const KernelOperator q2 = q * q;
  r.cubic_trace = q2.matrix().cwiseProduct(q.matrix().transpose()).sum().real();
  const P0Blocks b = p0_blocks(q);
  r.blocks_residual = hs_norm(q2 - (b.pp - b.mm));
  r.hermiticity_defect = q.hermiticity_defect();
  return r;
}

KernelOperator rhs(const KernelOperator& q, const ExternalSource& src, const Assembler& assembler) {
  const MeanFieldOperator mf = assembler(q, src);
  return commutator(mf.D, q + vacuum_projector(q.lattice()));
}

KernelOperator conjugate_by_propagator(const KernelOperator& p, const KernelOperator& h, double tau) {
  require_same_lattice(*p.lattice(), *h.lattice());
  const auto& lat = p.lattice();
  KernelOperator out(lat);
  if (h.is_block_diagonal()) {
    const std::size_t m = lat->size();
    std::vector<SpinorMatrix> u(m);
    for (std::size_t i = 0; i < m; ++i) {
      Eigen::SelfAdjointEigenSolver<SpinorMatrix> es(SpinorMatrix(h.block(i, i)));
      const Eigen::Vector4cd phases =
          (es.eigenvalues() * (-tau)).unaryExpr([](double x) { return std::polar(1.0, x); });
      u[i] = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    }
    for (std::size_t j = 0; j < m; ++j) {
      const SpinorMatrix uj_adj = u[j].adjoint();
      for (std::size_t i = 0; i < m; ++i) out.block(i, j) = u[i] * p.block(i, j) * uj_adj;
    }
    // exp(-i tau D^0(p)) commutes with P^0(p); keep such blocks exact instead
    // of letting eigensolver round-off accumulate into a free vacuum.
    for (std::size_t i = 0; i < m; ++i) {
      const Eigen::Vector3d k = lat->point(i);
      if (h.block(i, i) == dirac_symbol(k) && p.block(i, i) == free_projector(k)) out.block(i, i) = p.block(i, i);
    }
    return hermitian_part(std::move(out));
  }
  // U P U* = P + W P + (W P)* + W P W* with U = I + W. Only the O(tau) part
  // goes through the products, so their round-off scales with ||W||.
  const Eigen::MatrixXcd w = propagator_increment(eigh(h.matrix()), tau);
  const Eigen::MatrixXcd wp = w * p.matrix();
  out.matrix().noalias() = wp * w.adjoint();
  out.matrix() += wp + wp.adjoint();
  out.matrix() += p.matrix();
  return hermitian_part(std::move(out));
}

EvolutionState step_unitary(const EvolutionState& state, double dt, const ExternalSource& src,
                            const Assembler& assembler) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  const MeanFieldOperator predictor = assembler(state.Q, src);
  const EvolutionState half =
      make_state(conjugate_by_propagator(state.P, predictor.D, 0.5 * dt), state.t + 0.5 * dt);
  const MeanFieldOperator corrector = assembler(half.Q, src);
  return make_state(conjugate_by_propagator(state.P, corrector.D, dt), state.t + dt,
                    state.step_index + 1);
}

EvolutionState step_rk4(const EvolutionState& state, double dt, const ExternalSource& src,
                        const Assembler& assembler) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  const std::complex<double> minus_i(0.0, -1.0);
  const auto deriv = [&](const KernelOperator& q) { return minus_i * rhs(q, src, assembler); };

  const KernelOperator& q = state.Q;
  const KernelOperator k1 = deriv(q);
  const KernelOperator k2 = deriv(q + (0.5 * dt) * k1);
  const KernelOperator k3 = deriv(q + (0.5 * dt) * k2);
  const KernelOperator k4 = deriv(q + dt * k3);
  KernelOperator q_next = q;
  q_next.matrix() += (dt / 6.0) * (k1.matrix() + 2.0 * k2.matrix() + 2.0 * k3.matrix() + k4.matrix());
  KernelOperator p_next = hermitian_part(q_next + vacuum_projector(q.lattice()));
  return make_state(std::move(p_next), state.t + dt, state.step_index + 1);
}

EvolutionState build_initial_state(int electrons, const ExternalSource& src, InitialOrbitals mode,
                                   const ScfSettings& scf) {
  if (electrons < 0) throw std::invalid_argument("electron count must be non-negative");
  const auto& lat = src.n.lattice();
  const auto m = lat->size();
  const auto positive_states = static_cast<int>(2 * m);
  if (electrons >= positive_states) {
    throw ChargeSectorError("requested " + std::to_string(electrons) +
                            " electrons but the lattice holds only " +
                            std::to_string(positive_states) + " positive-energy states");
  }

  KernelOperator p(lat);
  if (mode == InitialOrbitals::free_orbitals) {
    p = vacuum_projector(lat);
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return lat->point(a).squaredNorm() < lat->point(b).squaredNorm();
    });
    int placed = 0;
    for (std::size_t idx = 0; idx < m && placed < electrons; ++idx) {
      const std::size_t i = order[idx];
      const SpinorMatrix plus = SpinorMatrix::Identity() - free_projector(lat->point(i));
      for (int s = 0; s < 2 && placed < electrons; ++s, ++placed) {
        // Upper-spin components project to orthogonal positive-energy spinors.
        const Eigen::Vector4cd u = plus.col(s).normalized();
        p.block(i, i) += u * u.adjoint();
      }
    }
  } else {
    ScfSettings vacuum = scf;
    vacuum.chemical_potential = 0.0;
    const ScfResult sea = scf_solve(src, vacuum);
    if (!sea.converged) {
      throw NumericalError("SCF vacuum did not converge (residual " + std::to_string(sea.residual) + ")");
    }
    p = sea.P;
    if (electrons > 0) {
      const HermitianEigen eig = eigh(assemble(sea.P - vacuum_projector(lat), src).D.matrix());
      Eigen::Index first = 0;
      while (first < eig.values.size() && eig.values[first] <= 0.0) ++first;
      if (first + electrons > eig.values.size()) {
        throw ChargeSectorError("not enough positive-energy SCF orbitals");
      }
      const auto v = eig.vectors.middleCols(first, electrons);
      p.matrix() += v * v.adjoint();
    }
  }
  return make_state(hermitian_part(std::move(p)));
}

EvolutionState run(EvolutionState state, double dt, std::int64_t n_steps, const ExternalSource& src,
                   const ObservableSink& sink, const RunOptions& options) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (n_steps < 0) throw std::invalid_argument("step count must be non-negative");
  if (options.record_interval < 1) throw std::invalid_argument("record interval must be at least 1");

  const auto check = [&](double residual, const EvolutionState& s) {
    if (!(residual <= options.idempotence_hard_limit)) {
      throw NumericalAbort("idempotence residual " + std::to_string(residual) + " at step " +
                           std::to_string(s.step_index) + " exceeds hard limit " +
                           std::to_string(options.idempotence_hard_limit));
    }
  };

  if (sink) sink(measure(state, src, options.assembler));
  for (std::int64_t n = 0; n < n_steps; ++n) {
    state = options.integrator == Integrator::unitary
                ? step_unitary(state, dt, src, options.assembler)
                : step_rk4(state, dt, src, options.assembler);
    if (sink && state.step_index % options.record_interval == 0) {
      const ObservableRecord rec = measure(state, src, options.assembler);
      check(rec.idempotence_residual, state);
      sink(rec);
    } else {
      const Eigen::MatrixXcd p2 = state.P.matrix() * state.P.matrix();
      check((p2 - state.P.matrix()).norm(), state);
    }
    if (options.on_step) options.on_step(state);
  }
  return state;
}

}  // namespace bdf
