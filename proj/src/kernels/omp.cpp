#include <complex>

#include <Eigen/Dense>

#include "bdf/constants.hpp"
#include "bdf/kernels.hpp"

namespace bdf::kernels::omp {

namespace {

inline Eigen::Index row(std::size_t i) { return 4 * static_cast<Eigen::Index>(i); }

}  // namespace

Eigen::VectorXcd density(const MomentumLattice& lattice, const Eigen::MatrixXcd& q) {
  const auto nd = static_cast<std::ptrdiff_t>(lattice.diff_size());
  const auto& pairs = lattice.pairs();
  Eigen::VectorXcd rho(nd);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t d = 0; d < nd; ++d) {
    std::complex<double> acc = 0.0;
    const auto ud = static_cast<std::size_t>(d);
    for (std::size_t a = lattice.pairs_begin(ud); a < lattice.pairs_end(ud); ++a) {
      acc += q.block<4, 4>(row(pairs[a].i), row(pairs[a].j)).trace();
    }
    rho[d] = acc * constants::inv_two_pi_three_halves;
  }
  return rho;
}

Eigen::MatrixXcd direct_potential(const MomentumLattice& lattice, const Eigen::VectorXcd& rho,
                                  double alpha) {
  const auto m = static_cast<std::ptrdiff_t>(lattice.size());
  const auto w = coulomb_weights(lattice);
  const double pref = alpha * constants::inv_two_pi_three_halves * lattice.weight();
  const auto n = static_cast<Eigen::Index>(lattice.spinor_dim());
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(n, n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < m; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    for (std::size_t i = 0; i < static_cast<std::size_t>(m); ++i) {
      const std::size_t d = lattice.diff_index(i, uj);
      const std::complex<double> c = pref * w[d] * rho[static_cast<Eigen::Index>(d)];
      for (Eigen::Index a = 0; a < 4; ++a) v(row(i) + a, row(uj) + a) = c;
    }
  }
  return v;
}

Eigen::MatrixXcd exchange(const MomentumLattice& lattice, const Eigen::MatrixXcd& q, double alpha) {
  const auto nd = static_cast<std::ptrdiff_t>(lattice.diff_size());
  const auto w = coulomb_weights(lattice);
  const double pref = alpha * lattice.weight() / constants::two_pi_cubed;
  const auto n = static_cast<Eigen::Index>(lattice.spinor_dim());
  const auto& pairs = lattice.pairs();
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(n, n);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t d = 0; d < nd; ++d) {
    const auto ud = static_cast<std::size_t>(d);
    const std::size_t begin = lattice.pairs_begin(ud);
    const std::size_t end = lattice.pairs_end(ud);
    for (std::size_t a = begin; a < end; ++a) {
      const auto ia = pairs[a].i;
      Eigen::Matrix4cd acc = Eigen::Matrix4cd::Zero();
      for (std::size_t b = begin; b < end; ++b) {
        // Pairs on one diagonal are shifted copies of each other: (p, q) and
        // (p - k, q - k) with k = p_a - p_b.
        const double wk = w[lattice.diff_index(ia, pairs[b].i)];
        if (wk == 0.0) continue;
        acc += wk * q.block<4, 4>(row(pairs[b].i), row(pairs[b].j));
      }
      r.block<4, 4>(row(ia), row(pairs[a].j)) = pref * acc;
    }
  }
  return r;
}

}  // namespace bdf::kernels::omp
