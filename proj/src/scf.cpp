#include "bdf/scf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

namespace bdf {

namespace {

std::string gap_message(double lambda, double eigenvalue) {
  std::ostringstream os;
  os.precision(17);
  os << "chemical potential " << lambda << " is within gap tolerance of eigenvalue " << eigenvalue;
  return os.str();
}

double effective_gap_tol(const ScfSettings& s, const MomentumLattice& lat) {
  return s.gap_tol > 0.0 ? s.gap_tol : default_gap_tol(lat);
}

// Projector onto the first `count` eigenvectors.
KernelOperator lowest_states_projector(const LatticePtr& lat, const HermitianEigen& eig,
                                       Eigen::Index count) {
  const auto v = eig.vectors.leftCols(count);
  KernelOperator p(lat);
  p.matrix().noalias() = v * v.adjoint();
  p.matrix() = 0.5 * (p.matrix() + p.matrix().adjoint()).eval();
  return p;
}

double distance_to_spectrum(const Eigen::VectorXd& values, double lambda) {
  return (values.array() - lambda).abs().minCoeff();
}

struct Finalized {
  double commutator_norm;
  double energy;
  double charge;
};

Finalized finalize(const KernelOperator& p, const ExternalSource& src, KernelOperator* d_out) {
  const KernelOperator p0 = vacuum_projector(p.lattice());
  const KernelOperator q = p - p0;
  MeanFieldOperator mf = assemble(q, src);
  Finalized f{hs_norm(commutator(mf.D, p)), bdf_energy(q, src), p0_trace(q)};
  if (d_out) *d_out = std::move(mf.D);
  return f;
}

}  // namespace

SpectralGapError::SpectralGapError(double chemical_potential, double eigenvalue)
    : NumericalError(gap_message(chemical_potential, eigenvalue)),
      chemical_potential_(chemical_potential),
      eigenvalue_(eigenvalue) {}

void validate(const ScfSettings& s) {
  if (s.max_iter < 1) throw std::invalid_argument("scf.max_iter must be at least 1");
  if (!(s.tol > 0.0)) throw std::invalid_argument("scf.tol must be positive");
  if (!(s.damping > 0.0 && s.damping <= 1.0)) {
    throw std::invalid_argument("scf.damping must lie in (0, 1]");
  }
}

double default_gap_tol(const MomentumLattice& lattice) {
  return 1e-10 * dispersion(lattice.cutoff());
}

KernelOperator spectral_projector(const KernelOperator& d, double lambda, double gap_tol) {
  const auto& lat = d.lattice();
  if (d.is_block_diagonal()) {
    // Translation-invariant operator: diagonalize each 4x4 block.
    KernelOperator p(lat);
    for (std::size_t i = 0; i < lat->size(); ++i) {
      Eigen::SelfAdjointEigenSolver<SpinorMatrix> es(SpinorMatrix(d.block(i, i)));
      const auto& ev = es.eigenvalues();
      for (int a = 0; a < 4; ++a) {
        if (std::abs(ev[a] - lambda) <= gap_tol) throw SpectralGapError(lambda, ev[a]);
      }
      SpinorMatrix blk = SpinorMatrix::Zero();
      for (int a = 0; a < 4; ++a) {
        if (ev[a] < lambda) blk += es.eigenvectors().col(a) * es.eigenvectors().col(a).adjoint();
      }
      p.block(i, i) = blk;
    }
    return p;
  }
  const HermitianEigen eig = eigh(d.matrix());
  Eigen::Index count = 0;
  double nearest = std::numeric_limits<double>::infinity();
  double nearest_value = 0.0;
  for (Eigen::Index a = 0; a < eig.values.size(); ++a) {
    if (eig.values[a] < lambda) ++count;
    const double dist = std::abs(eig.values[a] - lambda);
    if (dist < nearest) {
      nearest = dist;
      nearest_value = eig.values[a];
    }
  }
  if (nearest <= gap_tol) throw SpectralGapError(lambda, nearest_value);
  return lowest_states_projector(lat, eig, count);
}

ScfResult scf_solve(const ExternalSource& src, const ScfSettings& settings,
                    const std::optional<KernelOperator>& start) {
  validate(settings);
  const auto& lat = src.n.lattice();
  const KernelOperator p0 = vacuum_projector(lat);
  const double gap_tol = effective_gap_tol(settings, *lat);
  const double lambda = settings.chemical_potential;

  ScfResult res;
  res.chemical_potential = lambda;
  KernelOperator p = start ? *start : p0;
  require_same_lattice(*p.lattice(), *lat);
  KernelOperator q_in = p - p0;

  for (int it = 1; it <= settings.max_iter; ++it) {
    const MeanFieldOperator mf = assemble(q_in, src);
    KernelOperator p_next = spectral_projector(mf.D, lambda, gap_tol);
    KernelOperator q_out = p_next - p0;
    res.charge_history.push_back(p0_trace(q_out));
    res.residual = hs_norm(p_next - p);
    res.residual_history.push_back(res.residual);
    res.iterations = it;
    p = std::move(p_next);
    if (settings.damping == 1.0) {
      q_in = std::move(q_out);
    } else {
      q_in.matrix() = settings.damping * q_out.matrix() + (1.0 - settings.damping) * q_in.matrix();
    }
    if (res.residual <= settings.tol) {
      res.converged = true;
      break;
    }
  }

  KernelOperator d(lat);
  const Finalized f = finalize(p, src, &d);
  res.commutator_norm = f.commutator_norm;
  res.energy = f.energy;
  res.charge = f.charge;
  res.gap = distance_to_spectrum(eigh(d.matrix()).values, lambda);
  res.P = std::move(p);
  return res;
}

ScfResult charge_target_solve(const ExternalSource& src, int electrons, const ScfSettings& settings) {
  validate(settings);
  if (electrons < 0) throw std::invalid_argument("target charge must be non-negative");
  const auto& lat = src.n.lattice();
  const KernelOperator p0 = vacuum_projector(lat);
  const double gap_tol = effective_gap_tol(settings, *lat);
  const auto dim = static_cast<Eigen::Index>(lat->spinor_dim());
  const Eigen::Index filled = static_cast<Eigen::Index>(2 * lat->size()) + electrons;
  if (filled >= dim) {
    throw ChargeSectorError("charge " + std::to_string(electrons) + " needs " +
                            std::to_string(filled) + " filled states but the lattice has only " +
                            std::to_string(dim) + "; an empty conduction band leaves no gap");
  }

  ScfResult res;
  // Aufbau start in the external field alone; a degenerate level at the Fermi
  // edge is split by picking one member, and must open up self-consistently.
  HermitianEigen eig = eigh(assemble(KernelOperator(lat), src).D.matrix());
  KernelOperator p = lowest_states_projector(lat, eig, filled);
  KernelOperator q_in = p - p0;

  for (int it = 1; it <= settings.max_iter; ++it) {
    eig = eigh(assemble(q_in, src).D.matrix());
    const double below = eig.values[filled - 1];
    const double above = eig.values[filled];
    const double lambda = 0.5 * (below + above);
    if (0.5 * (above - below) <= gap_tol) throw SpectralGapError(lambda, above);
    res.chemical_potential = lambda;

    KernelOperator p_next = lowest_states_projector(lat, eig, filled);
    KernelOperator q_out = p_next - p0;
    res.charge_history.push_back(p0_trace(q_out));
    res.residual = hs_norm(p_next - p);
    res.residual_history.push_back(res.residual);
    res.iterations = it;
    p = std::move(p_next);
    if (settings.damping == 1.0) {
      q_in = std::move(q_out);
    } else {
      q_in.matrix() = settings.damping * q_out.matrix() + (1.0 - settings.damping) * q_in.matrix();
    }
    if (res.residual <= settings.tol) {
      res.converged = true;
      break;
    }
  }

  KernelOperator d(lat);
  const Finalized f = finalize(p, src, &d);
  res.commutator_norm = f.commutator_norm;
  res.energy = f.energy;
  res.charge = f.charge;
  res.gap = distance_to_spectrum(eigh(d.matrix()).values, res.chemical_potential);
  if (std::abs(res.charge - electrons) > 1e-6) {
    throw ChargeSectorError("charge-constrained solve ended with charge " +
                            std::to_string(res.charge) + ", expected " + std::to_string(electrons));
  }
  res.P = std::move(p);
  return res;
}

}  // namespace bdf
