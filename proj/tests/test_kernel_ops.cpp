#include <array>
#include <numbers>

#include "bdf/constants.hpp"
#include "bdf/kernel_ops.hpp"
#include "bdf/kernels.hpp"
#include "bdf/spinor.hpp"
#include "support.hpp"

using namespace bdf;
using bdf::testing::minus;
using bdf::testing::small_lattice;

namespace {

constexpr double kPi = std::numbers::pi;

// rho(k) = (2 pi)^{-3/2} sum_{p - q = k} Tr M(p, q), searched by brute force.
std::complex<double> density_oracle(const KernelOperator& q, const IntVec3& k) {
  const auto& lat = *q.lattice();
  std::complex<double> s = 0.0;
  for (std::size_t i = 0; i < lat.size(); ++i)
    for (std::size_t j = 0; j < lat.size(); ++j)
      if (minus(lat.coords(i), lat.coords(j)) == k) s += q.block(i, j).trace();
  return s * std::pow(2.0 * kPi, -1.5);
}

KernelOperator block_diagonal(const LatticePtr& lat, checks::Rng& rng) {
  const KernelOperator a = checks::random_hermitian(lat, rng);
  KernelOperator b(lat);
  for (std::size_t i = 0; i < lat->size(); ++i) b.block(i, i) = a.block(i, i);
  return b;
}

}  // namespace

TEST(KernelOperator, LatticeBasisScaling) {
  const auto lat = MomentumLattice::build(0.5, 1.0);
  KernelOperator a(lat);
  SpinorMatrix k = SpinorMatrix::Identity();
  a.set_kernel_block(1, 2, k);
  EXPECT_EQ(a.block(1, 2), k * 0.125);
  EXPECT_EQ(a.kernel_block(1, 2), k);
}

TEST(KernelOperator, ProductIsKernelConvolution) {
  // (AB)(p, q) = sum_s A(p, s) B(s, q) h^3 in kernel terms.
  const auto lat = MomentumLattice::build(0.5, 1.0);
  checks::Rng rng(1);
  const KernelOperator a = checks::random_hermitian(lat, rng);
  const KernelOperator b = checks::random_hermitian(lat, rng);
  const KernelOperator ab = a * b;
  SpinorMatrix s = SpinorMatrix::Zero();
  for (std::size_t m = 0; m < lat->size(); ++m) s += a.kernel_block(3, m) * b.kernel_block(m, 5) * lat->weight();
  EXPECT_LT((ab.kernel_block(3, 5) - s).norm(), 1e-12 * s.norm());
}

TEST(KernelOperator, MismatchedLatticesRejected) {
  const KernelOperator a(MomentumLattice::build(1.0, 1.5));
  const KernelOperator b(MomentumLattice::build(0.5, 1.0));
  EXPECT_THROW(a + b, std::invalid_argument);
  EXPECT_THROW(hs_inner(a, b), std::invalid_argument);
}

TEST(KernelOps, HsInnerProperties) {
  const auto lat = small_lattice();
  checks::Rng rng(2);
  const KernelOperator a = checks::random_hermitian(lat, rng);
  const KernelOperator b = checks::random_hermitian(lat, rng);
  const std::complex<double> ab = hs_inner(a, b);
  EXPECT_NEAR(std::abs(ab - std::conj(hs_inner(b, a))), 0.0, 1e-12);
  EXPECT_NEAR(hs_norm(a) * hs_norm(a), hs_inner(a, a).real(), 1e-10);
  // Oracle: sum conj(a_ij) b_ij.
  std::complex<double> s = 0.0;
  for (Eigen::Index j = 0; j < a.matrix().cols(); ++j)
    for (Eigen::Index i = 0; i < a.matrix().rows(); ++i) s += std::conj(a.matrix()(i, j)) * b.matrix()(i, j);
  EXPECT_NEAR(std::abs(ab - s), 0.0, 1e-10);
  EXPECT_LE(std::abs(ab), hs_norm(a) * hs_norm(b));
}

TEST(KernelOps, CommutatorOfHermitiansIsAntiHermitian) {
  const auto lat = small_lattice();
  checks::Rng rng(3);
  const KernelOperator a = checks::random_hermitian(lat, rng);
  const KernelOperator b = checks::random_hermitian(lat, rng);
  const KernelOperator c = commutator(a, b);
  EXPECT_LT(hs_norm(c + c.adjoint()), 1e-12 * hs_norm(c));
  EXPECT_LT(std::abs(trace(c)), 1e-11);
}

TEST(KernelOps, P0TraceEqualsTraceAndBlocksSplit) {
  const auto lat = small_lattice();
  checks::Rng rng(4);
  const KernelOperator a = checks::random_hermitian(lat, rng);
  EXPECT_NEAR(p0_trace(a), trace(a).real(), 1e-11);
  const P0Blocks b = p0_blocks(a);
  EXPECT_LT(hs_norm(b.pp + b.mm + b.pm + b.mp - a), 1e-12);
  EXPECT_NEAR(p0_trace_free(a), p0_trace(free_dirac_operator(lat) * a), 1e-10);
}

TEST(KernelOps, P0TraceIsIntegerOnProjectorDifferences) {
  const auto lat = small_lattice();
  checks::Rng rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const KernelOperator q = checks::random_projector_near_vacuum(lat, rng, 0.4) - vacuum_projector(lat);
    const double c = p0_trace(q);
    EXPECT_NEAR(c, std::round(c), 1e-10);
    EXPECT_NEAR(trace(q * q * q).real(), c, 1e-10);
  }
}

TEST(KernelOps, DensityMatchesBruteForce) {
  const auto lat = small_lattice();
  checks::Rng rng(6);
  const KernelOperator q = checks::random_hermitian(lat, rng);
  const ChargeDensity rho = density(q);
  for (std::size_t d = 0; d < lat->diff_size(); ++d) {
    EXPECT_NEAR(std::abs(rho[d] - density_oracle(q, lat->diff_coords(d))), 0.0, 1e-12);
  }
  EXPECT_LT(rho.conjugate_symmetry_defect(), 1e-13);
}

TEST(KernelOps, DensityOfDiagonalIsConstant) {
  // Translation-invariant Q only carries k = 0.
  const auto lat = small_lattice();
  checks::Rng rng(7);
  const KernelOperator q = block_diagonal(lat, rng);
  const ChargeDensity rho = density(q);
  for (std::size_t d = 0; d < lat->diff_size(); ++d) {
    if (d != lat->diff_zero()) {
      EXPECT_EQ(rho[d], std::complex<double>(0.0));
    }
  }
  EXPECT_NEAR(std::abs(rho[lat->diff_zero()] - trace(q) * std::pow(2.0 * kPi, -1.5)), 0.0, 1e-13);
}

TEST(KernelOps, CoulombNormAndPairing) {
  const auto lat = MomentumLattice::build(0.5, 1.0);
  checks::Rng rng(8);
  const ChargeDensity f = checks::random_density(lat, rng);
  const ChargeDensity g = checks::random_density(lat, rng);
  double oracle = 0.0;
  for (std::size_t d = 0; d < lat->diff_size(); ++d) {
    if (d == lat->diff_zero()) continue;
    oracle += std::norm(f[d]) / lat->diff_point(d).squaredNorm() * lat->weight();
  }
  EXPECT_NEAR(coulomb_norm(f), std::sqrt(oracle), 1e-13 * std::sqrt(oracle));
  EXPECT_NEAR(coulomb_pairing(f, f).real(), 4.0 * kPi * oracle, 1e-12 * oracle);
  EXPECT_NEAR(std::abs(coulomb_pairing(f, g) - std::conj(coulomb_pairing(g, f))), 0.0, 1e-12);
  EXPECT_NEAR(coulomb_pairing(f, g).imag(), 0.0, 1e-12);
  // k = 0 never contributes.
  ChargeDensity c(lat);
  c.values()[static_cast<Eigen::Index>(lat->diff_zero())] = 5.0;
  EXPECT_EQ(coulomb_norm(c), 0.0);
}

TEST(KernelOps, DirectPotentialMatchesFormula) {
  const auto lat = MomentumLattice::build(0.5, 1.0);
  checks::Rng rng(9);
  const ChargeDensity rho = checks::random_density(lat, rng);
  const double alpha = 0.3;
  const KernelOperator v = direct_potential(rho, alpha);
  EXPECT_LT(v.hermiticity_defect(), 1e-14);
  for (std::size_t i = 0; i < lat->size(); ++i) {
    for (std::size_t j = 0; j < lat->size(); ++j) {
      const IntVec3 k = minus(lat->coords(i), lat->coords(j));
      std::complex<double> expected = 0.0;
      if (i != j) {
        const auto d = *lat->diff_index_of(k);
        const double k2 = bdf::testing::to_point(k, 0.5).squaredNorm();
        expected = alpha * std::pow(2.0 * kPi, -1.5) * 4.0 * kPi * rho[d] / k2;
      }
      const SpinorMatrix blk = v.kernel_block(i, j);
      EXPECT_NEAR(std::abs(blk(0, 0) - expected), 0.0, 1e-12);
      EXPECT_LT((blk - blk(0, 0) * SpinorMatrix::Identity()).norm(), 1e-15);
    }
  }
}

TEST(KernelOps, ExchangeOfSingleDiagonalBlock) {
  // Q = B at (s, s) only: R(p, p) = alpha h^3 (2 pi)^{-3} 4 pi/|p - s|^2 B for p != s.
  const auto lat = small_lattice();
  const std::size_t s = lat->origin();
  SpinorMatrix b = SpinorMatrix::Zero();
  b(0, 0) = 1.0;
  b(0, 2) = b(2, 0) = 0.5;
  KernelOperator q(lat);
  q.block(s, s) = b;
  const double alpha = 0.7;
  const KernelOperator r = exchange_operator(q, alpha);
  for (std::size_t i = 0; i < lat->size(); ++i) {
    for (std::size_t j = 0; j < lat->size(); ++j) {
      SpinorMatrix expected = SpinorMatrix::Zero();
      if (i == j && i != s) {
        expected = alpha * std::pow(2.0 * kPi, -3.0) * 4.0 * kPi / (lat->point(i) - lat->point(s)).squaredNorm() *
                   lat->weight() * b;
      }
      EXPECT_LT((r.block(i, j) - expected).norm(), 1e-15) << i << "," << j;
    }
  }
}

TEST(KernelOps, ExchangePathsAgree) {
  const auto lat = small_lattice();
  checks::Rng rng(10);
  for (int trial = 0; trial < 3; ++trial) {
    const KernelOperator q = checks::random_hermitian(lat, rng);
    EXPECT_LT(checks::exchange_paths_relative_difference(q, 0.37), 1e-13);
    const KernelOperator r = exchange_operator(q, 0.37);
    EXPECT_LT(r.hermiticity_defect(), 1e-13 * hs_norm(r));
  }
}

TEST(KernelOps, ExchangeIsLinearAndPositive) {
  // R is linear in Q, and tr(Q R_Q) >= 0 (the exchange energy has a sign).
  const auto lat = small_lattice();
  checks::Rng rng(11);
  const KernelOperator a = checks::random_hermitian(lat, rng);
  const KernelOperator b = checks::random_hermitian(lat, rng);
  EXPECT_LT(hs_norm(exchange_operator(a + 2.0 * b, 1.0) - exchange_operator(a, 1.0) -
                    2.0 * exchange_operator(b, 1.0)),
            1e-12);
  EXPECT_GT(trace(a * exchange_operator(a, 1.0)).real(), 0.0);
}

TEST(Kernels, SerialAndParallelAgree) {
  const auto lat = MomentumLattice::build(0.5, 1.5);
  checks::Rng rng(12);
  const KernelOperator q = checks::random_hermitian(lat, rng);
  const Eigen::VectorXcd rs = kernels::serial::density(*lat, q.matrix());
  const Eigen::VectorXcd rp = kernels::omp::density(*lat, q.matrix());
  EXPECT_EQ(rs, rp);  // identical summation order
  const Eigen::MatrixXcd vs = kernels::serial::direct_potential(*lat, rs, 0.2);
  const Eigen::MatrixXcd vp = kernels::omp::direct_potential(*lat, rs, 0.2);
  EXPECT_EQ(vs, vp);
}

TEST(Kernels, CoulombWeights) {
  const auto lat = small_lattice();
  const auto w = kernels::coulomb_weights(*lat);
  ASSERT_EQ(w.size(), lat->diff_size());
  EXPECT_EQ(w[lat->diff_zero()], 0.0);
  const auto d = *lat->diff_index_of({1, 1, 0});
  EXPECT_DOUBLE_EQ(w[d], 4.0 * kPi / 2.0);
}

TEST(VanishingDensity, PotentialCommutatorWithVacuum) {
  const auto lat = MomentumLattice::build(0.5, 1.0);
  checks::Rng rng(13);
  for (int trial = 0; trial < 5; ++trial) {
    const KernelOperator q = checks::random_hermitian(lat, rng);
    const ChargeDensity rho = checks::random_density(lat, rng);
    EXPECT_LT(checks::vanishing_densities(q, rho).phi_p0, 1e-12);
  }
}

TEST(VanishingDensity, TranslationInvariantQ) {
  // Block-diagonal Q commutes with multiplication structure exactly: the
  // densities of [phi, Q] and [R_Q, Q] vanish with no boundary term.
  const auto lat = small_lattice();
  checks::Rng rng(14);
  const KernelOperator q = block_diagonal(lat, rng);
  const ChargeDensity rho = checks::random_density(lat, rng);
  const auto v = checks::vanishing_densities(q, rho);
  EXPECT_LT(v.exchange_q, 1e-12);
}

TEST(Pineq, SweepBoundHolds) {
  for (const auto& [h, cutoff] : {std::pair{1.0, 1.5}, {0.5, 1.5}}) {
    const auto lat = MomentumLattice::build(h, cutoff);
    const checks::PineqSweep s = checks::pineq_sweep(*lat);
    EXPECT_LE(s.max_ratio, 1.0 + 1e-12);
    EXPECT_GT(s.max_ratio, 0.5);
    EXPECT_EQ(s.pairs, lat->size() * (lat->size() - 1));
  }
}

TEST(Pineq, OverlapClosedForm) {
  // Tr(P0(p) P0perp(q)) = 1 - (1 + p.q) / (E(p) E(q)).
  const std::array<Eigen::Vector3d, 4> pts{Eigen::Vector3d(0.0, 0.0, 1.0), Eigen::Vector3d(0.0, 0.0, -1.0),
                                           Eigen::Vector3d(0.5, -0.5, 0.0), Eigen::Vector3d(1.0, 0.5, 0.5)};
  for (const auto& p : pts) {
    for (const auto& q : pts) {
      const SpinorMatrix perp = SpinorMatrix::Identity() - free_projector(q);
      const double overlap = (free_projector(p) * perp).trace().real();
      EXPECT_NEAR(overlap, 1.0 - (1.0 + p.dot(q)) / (dispersion(p) * dispersion(q)), 1e-14);
    }
  }
}

TEST(PotentialConstants, BoundHoldsForMeasuredConstants) {
  const auto lat = bdf::testing::small_lattice();
  checks::Rng rng(11);
  const checks::PotentialConstants pc = checks::potential_constants(lat, rng, 4);
  EXPECT_GT(pc.direct_kappa, 0.0);
  EXPECT_GT(pc.exchange_hs, 0.0);
  // Scaling the inputs leaves both ratios unchanged.
  const ChargeDensity rho = checks::random_density(lat, rng);
  const KernelOperator q = checks::random_hermitian(lat, rng);
  const double r1 = hs_norm(exchange_operator(q, 1.0)) / hs_norm(q);
  const double r2 = hs_norm(exchange_operator(3.0 * q, 1.0)) / hs_norm(3.0 * q);
  EXPECT_NEAR(r1, r2, 1e-14 * r1);
  const double d1 = hs_norm(direct_potential(rho, 1.0));
  EXPECT_NEAR(hs_norm(direct_potential(rho, 2.0)), 2.0 * d1, 1e-13 * d1);
}
