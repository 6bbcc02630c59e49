#include <numbers>

#include "bdf/dynamics.hpp"
#include "bdf/kernel_ops.hpp"
#include "bdf/mean_field.hpp"
#include "support.hpp"

using namespace bdf;
using bdf::testing::small_lattice;

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST(Source, GaussianFourierAmplitudes) {
  const auto lat = MomentumLattice::build(0.5, 1.5);
  const ExternalSource src = build_gaussian_source(2.0, 0.8, 0.1, lat);
  EXPECT_EQ(src.alpha, 0.1);
  EXPECT_EQ(src.total_charge, 2.0);
  for (std::size_t d = 0; d < lat->diff_size(); ++d) {
    const double k2 = lat->diff_point(d).squaredNorm();
    const double expected = 2.0 * std::pow(2.0 * kPi, -1.5) * std::exp(-0.5 * 0.64 * k2);
    EXPECT_NEAR(src.n[d].real(), expected, 1e-15);
    EXPECT_EQ(src.n[d].imag(), 0.0);
  }
  // n^(0) (2 pi)^{3/2} = Z.
  EXPECT_NEAR(src.n[lat->diff_zero()].real() * std::pow(2.0 * kPi, 1.5), 2.0, 1e-14);
}

TEST(Source, RejectsBadParameters) {
  const auto lat = small_lattice();
  EXPECT_THROW(build_gaussian_source(1.0, 0.0, 0.1, lat), std::invalid_argument);
  EXPECT_THROW(build_gaussian_source(1.0, 1.0, -0.1, lat), std::invalid_argument);
}

TEST(Energy, VanishesAtVacuum) {
  const auto lat = small_lattice();
  const ExternalSource src = build_gaussian_source(1.0, 1.0, 0.3, lat);
  const EnergyTerms e = energy_terms(KernelOperator(lat), src);
  EXPECT_EQ(e.total(), 0.0);
}

TEST(Energy, SingleFreeOrbitalAtRestHasUnitEnergy) {
  // One electron at p = 0: density only at k = 0 and no exchange partner, so
  // the energy is the rest mass alone.
  const auto lat = small_lattice();
  const ExternalSource src = build_gaussian_source(1.0, 1.0, 0.3, lat);
  const EvolutionState s = build_initial_state(1, src, InitialOrbitals::free_orbitals);
  const EnergyTerms e = energy_terms(s.Q, src);
  EXPECT_NEAR(e.kinetic, 1.0, 1e-14);
  EXPECT_NEAR(e.external, 0.0, 1e-15);
  EXPECT_NEAR(e.direct, 0.0, 1e-15);
  EXPECT_NEAR(e.exchange, 0.0, 1e-15);
  EXPECT_NEAR(p0_trace(s.Q), 1.0, 1e-14);
}

TEST(Energy, TermsAgainstDirectFormulas) {
  const auto lat = small_lattice();
  const double alpha = 0.4;
  const ExternalSource src = build_gaussian_source(1.0, 1.0, alpha, lat);
  checks::Rng rng(21);
  const KernelOperator q = checks::random_projector_near_vacuum(lat, rng, 0.3) - vacuum_projector(lat);
  const EnergyTerms e = energy_terms(q, src);
  const ChargeDensity rho = density(q);
  EXPECT_NEAR(e.kinetic, p0_trace_free(q), 1e-12);
  EXPECT_NEAR(e.external, -alpha * coulomb_pairing(rho, src.n).real(), 1e-12);
  EXPECT_NEAR(e.direct, 0.5 * alpha * coulomb_pairing(rho, rho).real(), 1e-12);
  EXPECT_NEAR(e.exchange, -0.5 * trace(q * exchange_operator(q, alpha)).real(), 1e-12);
  EXPECT_LE(e.exchange, 0.0);
  EXPECT_LT(e.max_imaginary, 1e-12);
}

TEST(Energy, GradientMatchesFiniteDifference) {
  const auto lat = small_lattice();
  const ExternalSource src = build_gaussian_source(1.0, 1.0, 0.5, lat);
  checks::Rng rng(22);
  const KernelOperator q = 0.3 * checks::random_hermitian(lat, rng);
  for (int dir = 0; dir < 5; ++dir) {
    const checks::GradientCheck g = checks::gradient_check(q, checks::random_hermitian(lat, rng), src);
    EXPECT_LT(g.relative_error, 1e-9) << g.finite_difference << " vs " << g.analytic;
  }
}

TEST(MeanField, AssemblyPieces) {
  const auto lat = small_lattice();
  const ExternalSource src = build_gaussian_source(1.0, 1.0, 0.2, lat);
  checks::Rng rng(23);
  const KernelOperator q = checks::random_hermitian(lat, rng);
  const MeanFieldOperator mf = assemble(q, src);
  const KernelOperator expected_v = direct_potential(density(q) - src.n, 0.2) - exchange_operator(q, 0.2);
  EXPECT_LT(hs_norm(mf.V - expected_v), 1e-14);
  EXPECT_LT(hs_norm(mf.D - free_dirac_operator(lat) - mf.V), 1e-14);
  EXPECT_LT(mf.D.hermiticity_defect(), 1e-13);
}

TEST(MeanField, FreeVacuumGivesFreeOperatorExactly) {
  const auto lat = small_lattice();
  const MeanFieldOperator mf = assemble(KernelOperator(lat), empty_source(lat, 0.3));
  EXPECT_EQ(mf.D.matrix(), free_dirac_operator(lat).matrix());
  EXPECT_TRUE(mf.D.is_block_diagonal());
}

TEST(Coercivity, InequalityHoldsOnRandomProjectors) {
  const auto lat = small_lattice();
  checks::Rng rng(24);
  for (double alpha : {0.0, 0.3, 1.0, 1.2}) {
    const ExternalSource src = build_gaussian_source(1.0, 1.0, alpha, lat);
    for (int trial = 0; trial < 4; ++trial) {
      const KernelOperator q = checks::random_projector_near_vacuum(lat, rng, 0.5) - vacuum_projector(lat);
      const CoercivityReport r = coercivity_report(q, src);
      EXPECT_GE(r.slack, -1e-10 * (1.0 + std::abs(r.lhs))) << "alpha=" << alpha;
      EXPECT_GE(r.abs_kinetic, r.hs_norm_sq * (1.0 - 1e-12));
      EXPECT_NEAR(r.kinetic, r.abs_kinetic, 1e-9 * r.abs_kinetic);
      EXPECT_LT(r.projector_residual, 1e-10);
      if (alpha == 0.0) {
        EXPECT_NEAR(r.slack, 0.0, 1e-10);
      }
    }
  }
}

TEST(Coercivity, NormBoundFormula) {
  const auto lat = small_lattice();
  const ExternalSource src = build_gaussian_source(1.0, 1.0, 0.5, lat);
  const double dnn = coulomb_pairing(src.n, src.n).real();
  EXPECT_NEAR(coercivity_norm_bound(2.0, src), (2.0 + 0.25 * dnn) / (1.0 - 0.5 * kPi / 4.0), 1e-13);
  EXPECT_NEAR(kCoercivityCouplingLimit, 4.0 / kPi, 0.0);
}
