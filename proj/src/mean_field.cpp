#include "bdf/mean_field.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "bdf/constants.hpp"

namespace bdf {

ExternalSource build_gaussian_source(double total_charge, double width, double alpha,
                                     const LatticePtr& lattice) {
  if (!(width > 0.0)) {
    throw std::invalid_argument("source width must be positive, got " + std::to_string(width));
  }
  if (!(alpha >= 0.0)) {
    throw std::invalid_argument("coupling alpha must be non-negative, got " + std::to_string(alpha));
  }
  ChargeDensity n(lattice);
  for (std::size_t d = 0; d < lattice->diff_size(); ++d) {
    const double k2 = lattice->diff_point(d).squaredNorm();
    n.values()[static_cast<Eigen::Index>(d)] =
        total_charge * constants::inv_two_pi_three_halves * std::exp(-0.5 * width * width * k2);
  }
  return {std::move(n), alpha, total_charge};
}

ExternalSource empty_source(const LatticePtr& lattice, double alpha) {
  return {ChargeDensity(lattice), alpha, 0.0};
}

MeanFieldOperator assemble(const KernelOperator& q, const ExternalSource& src) {
  require_same_lattice(*q.lattice(), *src.n.lattice());
  const ChargeDensity net = density(q) - src.n;
  KernelOperator v = direct_potential(net, src.alpha);
  v -= exchange_operator(q, src.alpha);
  KernelOperator d = free_dirac_operator(q.lattice()) + v;
  return {std::move(d), std::move(v)};
}

EnergyTerms energy_terms(const KernelOperator& q, const ExternalSource& src) {
  require_same_lattice(*q.lattice(), *src.n.lattice());
  const ChargeDensity rho = density(q);
  const std::complex<double> ext = coulomb_pairing(rho, src.n);
  const std::complex<double> dir = coulomb_pairing(rho, rho);
  const std::complex<double> exc = hs_inner(q, exchange_operator(q, 1.0));

  EnergyTerms t;
  t.kinetic = p0_trace_free(q);
  t.external = -src.alpha * ext.real();
  t.direct = 0.5 * src.alpha * dir.real();
  t.exchange = -0.5 * src.alpha * exc.real();
  t.max_imaginary = std::max({std::abs(ext.imag()), std::abs(dir.imag()), std::abs(exc.imag())});
  return t;
}

double bdf_energy(const KernelOperator& q, const ExternalSource& src) {
  return energy_terms(q, src).total();
}

CoercivityReport coercivity_report(const KernelOperator& q, const ExternalSource& src) {
  const EnergyTerms e = energy_terms(q, src);
  const ChargeDensity net = density(q) - src.n;
  const double alpha = src.alpha;

  CoercivityReport r;
  r.kinetic = e.kinetic;
  r.lhs = e.total() + 0.5 * alpha * coulomb_pairing(src.n, src.n).real();
  r.rhs = (1.0 - alpha * constants::pi / 4.0) * e.kinetic +
          0.5 * alpha * coulomb_pairing(net, net).real();
  r.slack = r.lhs - r.rhs;

  const KernelOperator q2 = q * q;
  r.hs_norm_sq = q.matrix().squaredNorm();
  for (std::size_t i = 0; i < q.lattice()->size(); ++i) {
    r.abs_kinetic += dispersion(q.lattice()->point(i)) * q2.block(i, i).trace().real();
  }
  const P0Blocks b = p0_blocks(q);
  r.projector_residual = hs_norm(q2 - (b.pp - b.mm));
  return r;
}

double coercivity_norm_bound(double initial_energy, const ExternalSource& src) {
  const double alpha = src.alpha;
  return (initial_energy + 0.5 * alpha * coulomb_pairing(src.n, src.n).real()) /
         (1.0 - alpha * constants::pi / 4.0);
}

}  // namespace bdf
