#pragma once

#include <functional>

#include "nsc/kernels.hpp"
#include "nsc/vec.hpp"

namespace nsc {

/// Initial-velocity fixture with its exact heat convolution and sampled
/// sup ratios against a radial kernel (used for admissibility setup).
struct VelocityFixture {
    std::function<Vec3(const Vec3&)> u0;
    std::function<Vec3(const Vec3&, double)> heat_conv;  // int u0(x-y) K(y, 2 nu t) dy
    double sup_u0_ratio = 0.0;    // sup |u0| / h
    double sup_conv_ratio = 0.0;  // sup over (x, t) of |u0 * K| / h
};

/// Divergence-free Gaussian vortex u0(x) = delta (w x x) exp(-|x|^2 / 2 sigma^2),
/// whose heat convolution stays in the same family:
///   (u0 * K(., 2 nu t))(x) = delta (s2/(s2+2 nu t))^(5/2) (w x x) exp(-|x|^2/(2(s2+2 nu t))).
/// sup ratios are scanned numerically against the pair's radial profile.
VelocityFixture make_vortex_u0(double delta, double sigma, const Vec3& axis, double nu,
                               const KernelPair& pair);
VelocityFixture make_zero_u0();

/// Forcing fixture with its exact ratio phi = g / h_tilde.
struct ForcingFixture {
    std::function<Vec3(const Vec3&, double)> g;
    std::function<Vec3(const Vec3&, double)> phi;
    double sup_g_ratio = 0.0;  // sup |g| / h_tilde
};

/// Azimuthal forcing g(x,t) = amp * h_tilde(x) (w x x/|x|) e^(-lambda t); the
/// ratio phi is amp * (w x x/|x|) e^(-lambda t), bounded by amp for unit axis.
ForcingFixture make_azimuthal_forcing(double amp, const Vec3& axis, double lambda,
                                      const KernelPair& pair);
ForcingFixture make_zero_forcing();

/// max over a log radial grid of num(r) / den(r); den may be +inf (ratio 0).
double radial_sup_ratio(const std::function<double(double)>& num,
                        const std::function<double(double)>& den,
                        double r_lo = 1e-4, double r_hi = 1e4, int n = 4000);

}  // namespace nsc
