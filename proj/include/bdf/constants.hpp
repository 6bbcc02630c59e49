#pragma once

#include <cmath>
#include <numbers>

// Fourier and Coulomb normalization shared by every module.
//
//   f^(k)          = (2 pi)^{-3/2} \int f(x) e^{-ikx} dx
//   (1/|x|)^       <->  4 pi / |k|^2  (non-unitary transform of the kernel)
//   rho_Q^(k)      = (2 pi)^{-3/2} sum_{p-q=k} Tr Q(p, q) h^3
//   D(f, g)        = 4 pi sum_{k != 0} conj(f^(k)) g^(k) / |k|^2 h^3
//   ||f||_C^2      = sum_{k != 0} |f^(k)|^2 / |k|^2 h^3
//   phi_rho(p, q)  = alpha (2 pi)^{-3/2} 4 pi rho^(p - q) / |p - q|^2
//   R_Q(p, q)      = (2 pi)^{-3} sum_{k != 0} 4 pi / |k|^2 Q(p - k, q - k) h^3
//
// The k = 0 Coulomb mode is dropped everywhere (uniform neutralizing
// background).
namespace bdf::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double four_pi = 4.0 * pi;
inline constexpr double two_pi_cubed = 8.0 * pi * pi * pi;
/// (2 pi)^{-3/2}
inline const double inv_two_pi_three_halves = std::pow(2.0 * pi, -1.5);

}  // namespace bdf::constants
