#include "bdf/spinor.hpp"

namespace bdf {

namespace {

std::array<SpinorMatrix, 3> make_alpha() {
  const cplx I(0.0, 1.0);
  Eigen::Matrix2cd sx, sy, sz;
  sx << 0, 1, 1, 0;
  sy << 0, -I, I, 0;
  sz << 1, 0, 0, -1;
  std::array<SpinorMatrix, 3> a;
  const Eigen::Matrix2cd* sigma[3] = {&sx, &sy, &sz};
  for (int k = 0; k < 3; ++k) {
    a[k].setZero();
    a[k].topRightCorner<2, 2>() = *sigma[k];
    a[k].bottomLeftCorner<2, 2>() = *sigma[k];
  }
  return a;
}

}  // namespace

const std::array<SpinorMatrix, 3>& dirac_alpha() {
  static const std::array<SpinorMatrix, 3> alpha = make_alpha();
  return alpha;
}

const SpinorMatrix& dirac_beta() {
  static const SpinorMatrix beta = Eigen::Vector4cd(1, 1, -1, -1).asDiagonal();
  return beta;
}

SpinorMatrix dirac_symbol(const Eigen::Vector3d& p) {
  const auto& a = dirac_alpha();
  return p[0] * a[0] + p[1] * a[1] + p[2] * a[2] + dirac_beta();
}

SpinorMatrix free_projector(const Eigen::Vector3d& p) {
  const SpinorMatrix d = dirac_symbol(p);
  return 0.5 * (SpinorMatrix::Identity() - d / dispersion(p));
}

}  // namespace bdf
