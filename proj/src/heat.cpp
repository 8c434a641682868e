#include "nsc/heat.hpp"

#include <cmath>
#include <stdexcept>

#include "nsc/special.hpp"

namespace nsc {

double heat_kernel_r(double r, double t) {
    if (!(t > 0.0)) throw std::domain_error("heat_kernel: t must be positive");
    return std::pow(2.0 * M_PI * t, -1.5) * std::exp(-r * r / (2.0 * t));
}

double heat_kernel(const Vec3& y, double t) { return heat_kernel_r(norm(y), t); }

double ball_mass(double r, double nu_s) {
    if (r < 0.0) throw std::domain_error("ball_mass: negative radius");
    if (!(nu_s > 0.0)) throw std::domain_error("ball_mass: nu*s must be positive");
    // Equals the chi(3) CDF at r/sqrt(2 nu s); the small-argument series in
    // chi3_cdf avoids the erf-minus-exponential cancellation.
    return chi3_cdf(r / std::sqrt(2.0 * nu_s));
}

Mat3 gamma_kernel(const Vec3& x, double s, double nu) {
    const double r = norm(x);
    if (!(r >= kZeroNormGuard)) throw std::domain_error("gamma_kernel: singular at x = 0");
    if (!(s > 0.0)) throw std::domain_error("gamma_kernel: s must be positive");
    const Vec3 e = x / r;
    const Mat3 I = Mat3::identity();
    const Mat3 ee = outer(e, e);
    const Mat3 P = I - ee;                 // projection perpendicular to x
    const Mat3 R = I - ee * 3.0;           // I - 3 e e^t
    const double K = heat_kernel_r(r, 2.0 * nu * s);
    const double mass = ball_mass(r, nu * s);
    return P * K - R * (mass / (4.0 * M_PI * r * r * r));
}

}  // namespace nsc
