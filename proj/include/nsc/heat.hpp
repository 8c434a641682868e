#pragma once

#include "nsc/vec.hpp"

namespace nsc {

/// Transition density of 3-d Brownian motion: (2 pi t)^(-3/2) exp(-|y|^2/(2t)).
double heat_kernel(const Vec3& y, double t);
double heat_kernel_r(double r, double t);

/// Gaussian measure of the ball of radius r under K(., 2 nu s), nu_s = nu*s:
/// erf(r/(2 sqrt(nu_s))) - (pi nu_s)^(-1/2) r exp(-r^2/(4 nu_s)).
double ball_mass(double r, double nu_s);

/// Oseen-type tensor:
/// Gamma(x,s) = K(x,2 nu s) P_x - (4 pi)^(-1) |x|^(-3) (I - 3 e_x e_x^t) * ball_mass(|x|, nu s)
Mat3 gamma_kernel(const Vec3& x, double s, double nu);

}  // namespace nsc
