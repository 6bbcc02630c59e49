#include <complex>

#include <Eigen/Dense>

#include "bdf/constants.hpp"
#include "bdf/kernels.hpp"

namespace bdf::kernels {

std::vector<double> coulomb_weights(const MomentumLattice& lattice) {
  std::vector<double> w(lattice.diff_size(), 0.0);
  for (std::size_t d = 0; d < lattice.diff_size(); ++d) {
    if (d == lattice.diff_zero()) continue;
    w[d] = constants::four_pi / lattice.diff_point(d).squaredNorm();
  }
  return w;
}

namespace serial {

Eigen::VectorXcd density(const MomentumLattice& lattice, const Eigen::MatrixXcd& q) {
  const std::size_t m = lattice.size();
  Eigen::VectorXcd rho = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(lattice.diff_size()));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const auto blk = q.block<4, 4>(4 * static_cast<Eigen::Index>(i), 4 * static_cast<Eigen::Index>(j));
      rho[static_cast<Eigen::Index>(lattice.diff_index(i, j))] += blk.trace();
    }
  }
  return rho * constants::inv_two_pi_three_halves;
}

Eigen::MatrixXcd direct_potential(const MomentumLattice& lattice, const Eigen::VectorXcd& rho,
                                  double alpha) {
  const std::size_t m = lattice.size();
  const auto w = coulomb_weights(lattice);
  const double pref = alpha * constants::inv_two_pi_three_halves * lattice.weight();
  const auto n = static_cast<Eigen::Index>(lattice.spinor_dim());
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t d = lattice.diff_index(i, j);
      const std::complex<double> c = pref * w[d] * rho[static_cast<Eigen::Index>(d)];
      for (Eigen::Index a = 0; a < 4; ++a) {
        v(4 * static_cast<Eigen::Index>(i) + a, 4 * static_cast<Eigen::Index>(j) + a) = c;
      }
    }
  }
  return v;
}

Eigen::MatrixXcd exchange(const MomentumLattice& lattice, const Eigen::MatrixXcd& q, double alpha) {
  const std::size_t m = lattice.size();
  const auto w = coulomb_weights(lattice);
  const double pref = alpha * lattice.weight() / constants::two_pi_cubed;
  const auto n = static_cast<Eigen::Index>(lattice.spinor_dim());
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t i = 0; i < m; ++i) {
    const IntVec3& p = lattice.coords(i);
    for (std::size_t j = 0; j < m; ++j) {
      const IntVec3& pq = lattice.coords(j);
      Eigen::Matrix4cd acc = Eigen::Matrix4cd::Zero();
      for (std::size_t d = 0; d < lattice.diff_size(); ++d) {
        if (d == lattice.diff_zero()) continue;
        const IntVec3& k = lattice.diff_coords(d);
        const auto ii = lattice.index_of({p[0] - k[0], p[1] - k[1], p[2] - k[2]});
        if (!ii) continue;
        const auto jj = lattice.index_of({pq[0] - k[0], pq[1] - k[1], pq[2] - k[2]});
        if (!jj) continue;
        acc += w[d] * q.block<4, 4>(4 * static_cast<Eigen::Index>(*ii), 4 * static_cast<Eigen::Index>(*jj));
      }
      r.block<4, 4>(4 * static_cast<Eigen::Index>(i), 4 * static_cast<Eigen::Index>(j)) = pref * acc;
    }
  }
  return r;
}

}  // namespace serial

}  // namespace bdf::kernels
