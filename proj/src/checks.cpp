#include "bdf/checks.hpp"

#include <algorithm>
#include <cmath>

#include "bdf/kernel_ops.hpp"
#include "bdf/linalg.hpp"

namespace bdf::checks {

KernelOperator random_hermitian(const LatticePtr& lattice, Rng& rng, double scale) {
  std::normal_distribution<double> normal(0.0, scale * std::sqrt(0.5));
  const auto n = static_cast<Eigen::Index>(lattice->spinor_dim());
  Eigen::MatrixXcd a(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double re = normal(rng);
      a(i, j) = cplx(re, normal(rng));
    }
  }
  return KernelOperator(lattice, 0.5 * (a + a.adjoint()));
}

ChargeDensity random_density(const LatticePtr& lattice, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ChargeDensity rho(lattice);
  for (std::size_t d = 0; d < lattice->diff_size(); ++d) {
    const std::size_t neg = lattice->diff_negation(d);
    if (neg < d) continue;
    if (neg == d) {
      rho.values()[static_cast<Eigen::Index>(d)] = normal(rng);
    } else {
      const double re = normal(rng);
      const cplx v(re, normal(rng));
      rho.values()[static_cast<Eigen::Index>(d)] = v;
      rho.values()[static_cast<Eigen::Index>(neg)] = std::conj(v);
    }
  }
  return rho;
}

KernelOperator random_projector_near_vacuum(const LatticePtr& lattice, Rng& rng, double strength) {
  const KernelOperator h = random_hermitian(lattice, rng);
  const Eigen::MatrixXcd u = propagator(eigh(h.matrix()), strength);
  const KernelOperator p0 = vacuum_projector(lattice);
  KernelOperator p(lattice, u * p0.matrix() * u.adjoint());
  p.matrix() = 0.5 * (p.matrix() + p.matrix().adjoint()).eval();
  return p;
}

double dirac_algebra_residual() {
  const auto& a = dirac_alpha();
  const SpinorMatrix& b = dirac_beta();
  const SpinorMatrix id = SpinorMatrix::Identity();
  double r = (b * b - id).cwiseAbs().maxCoeff();
  for (int i = 0; i < 3; ++i) {
    r = std::max(r, (a[i] * b + b * a[i]).cwiseAbs().maxCoeff());
    for (int j = 0; j < 3; ++j) {
      const SpinorMatrix expected = (i == j ? 2.0 : 0.0) * id;
      r = std::max(r, (a[i] * a[j] + a[j] * a[i] - expected).cwiseAbs().maxCoeff());
    }
  }
  return r;
}

double free_projector_residual(const MomentumLattice& lattice) {
  double r = 0.0;
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const Eigen::Vector3d p = lattice.point(i);
    const SpinorMatrix pr = free_projector(p);
    const SpinorMatrix d = dirac_symbol(p);
    r = std::max({r, (pr * pr - pr).norm(), (pr - pr.adjoint()).norm(), std::abs(pr.trace() - 2.0),
                  (d * pr - pr * d).norm()});
  }
  return r;
}

PineqSweep pineq_sweep(const MomentumLattice& lattice) {
  PineqSweep s;
  const std::size_t m = lattice.size();
  std::vector<SpinorMatrix> proj(m);
  for (std::size_t i = 0; i < m; ++i) proj[i] = free_projector(lattice.point(i));
  for (std::size_t i = 0; i < m; ++i) {
    const Eigen::Vector3d p = lattice.point(i);
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      const Eigen::Vector3d q = lattice.point(j);
      const SpinorMatrix perp = SpinorMatrix::Identity() - proj[j];
      const double overlap = (proj[i] * perp).trace().real();
      const double mid = dispersion(0.5 * (p + q));
      const double ratio = overlap * 2.0 * mid * mid / (p - q).squaredNorm();
      s.max_ratio = std::max(s.max_ratio, ratio);
      ++s.pairs;
    }
  }
  return s;
}

double max_abs(const ChargeDensity& rho) {
  return rho.values().size() == 0 ? 0.0 : rho.values().cwiseAbs().maxCoeff();
}

VanishingDensities vanishing_densities(const KernelOperator& q, const ChargeDensity& rho) {
  const KernelOperator phi = direct_potential(rho, 1.0);
  const KernelOperator r = exchange_operator(q, 1.0);
  VanishingDensities v;
  v.phi_q = max_abs(density(commutator(phi, q)));
  v.phi_p0 = max_abs(density(commutator(phi, vacuum_projector(q.lattice()))));
  v.exchange_q = max_abs(density(commutator(r, q)));
  return v;
}

ProjectorIdentities projector_identities(const KernelOperator& q) {
  ProjectorIdentities out;
  const KernelOperator q2 = q * q;
  const P0Blocks b = p0_blocks(q);
  out.blocks_residual = hs_norm(q2 - (b.pp - b.mm));
  out.p0_trace_free = p0_trace_free(q);
  out.abs_kinetic = trace(free_dirac_abs(q.lattice()) * q2).real();
  out.kinetic_relative_error =
      std::abs(out.p0_trace_free - out.abs_kinetic) / std::max(std::abs(out.abs_kinetic), 1e-300);
  const double n = hs_norm(q);
  out.hs_norm_sq = n * n;
  return out;
}

GradientCheck gradient_check(const KernelOperator& q, const KernelOperator& direction,
                             const ExternalSource& src, double step) {
  GradientCheck g;
  const double up = bdf_energy(q + step * direction, src);
  const double down = bdf_energy(q - step * direction, src);
  g.finite_difference = (up - down) / (2.0 * step);
  g.analytic = p0_trace(assemble(q, src).D * direction);
  g.relative_error = std::abs(g.finite_difference - g.analytic) / std::max(std::abs(g.analytic), 1e-300);
  return g;
}

double exchange_paths_relative_difference(const KernelOperator& q, double alpha) {
  const KernelOperator fast = exchange_operator(q, alpha);
  const KernelOperator naive = exchange_operator_naive(q, alpha);
  return (naive.matrix() - fast.matrix()).norm() / fast.matrix().norm();
}

PotentialConstants potential_constants(const LatticePtr& lattice, Rng& rng, int samples) {
  const double e_cut = dispersion(lattice->cutoff());
  PotentialConstants out;
  for (int n = 0; n < samples; ++n) {
    const ChargeDensity rho = random_density(lattice, rng);
    const Eigen::VectorXd ev = eigh(direct_potential(rho, 1.0).matrix()).values;
    const double op_norm = std::max(std::abs(ev[0]), std::abs(ev[ev.size() - 1]));
    out.direct_kappa = std::max(out.direct_kappa, op_norm / (e_cut * coulomb_norm(rho)));
    const KernelOperator q = random_hermitian(lattice, rng);
    out.exchange_hs = std::max(out.exchange_hs, hs_norm(exchange_operator(q, 1.0)) / hs_norm(q));
  }
  return out;
}

}  // namespace bdf::checks
