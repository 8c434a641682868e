#include "nsc/fixtures.hpp"

#include <cmath>
#include <stdexcept>

namespace nsc {

double radial_sup_ratio(const std::function<double(double)>& num,
                        const std::function<double(double)>& den,
                        double r_lo, double r_hi, int n) {
    double best = 0.0;
    const double step = std::log(r_hi / r_lo) / (n - 1);
    for (int i = 0; i < n; ++i) {
        const double r = r_lo * std::exp(i * step);
        const double d = den(r);
        if (!std::isfinite(d) || d <= 0.0) continue;
        best = std::max(best, num(r) / d);
    }
    return best;
}

VelocityFixture make_vortex_u0(double delta, double sigma, const Vec3& axis, double nu,
                               const KernelPair& pair) {
    if (!(sigma > 0.0) || !(nu > 0.0))
        throw std::domain_error("make_vortex_u0: need sigma > 0, nu > 0");
    const Vec3 w = axis;
    const double s2 = sigma * sigma;

    VelocityFixture fx;
    fx.u0 = [delta, s2, w](const Vec3& x) {
        return delta * std::exp(-dot(x, x) / (2.0 * s2)) * cross(w, x);
    };
    fx.heat_conv = [delta, s2, w, nu](const Vec3& x, double t) {
        const double v = s2 + 2.0 * nu * t;
        const double amp = delta * std::pow(s2 / v, 2.5);
        return amp * std::exp(-dot(x, x) / (2.0 * v)) * cross(w, x);
    };

    if (pair.h_radial) {
        const double wn = norm(w);
        fx.sup_u0_ratio = radial_sup_ratio(
            [delta, s2, wn](double r) { return delta * wn * r * std::exp(-r * r / (2.0 * s2)); },
            pair.h_radial, 1e-4 * sigma, 1e4 * sigma);
        // widen the variance: v = s2 + 2 nu t over a log grid of times
        double best = fx.sup_u0_ratio;
        for (int j = 1; j <= 60; ++j) {
            const double v = s2 * std::exp(0.2 * j);
            const double amp = delta * std::pow(s2 / v, 2.5);
            best = std::max(best, radial_sup_ratio(
                [amp, v, wn](double r) { return amp * wn * r * std::exp(-r * r / (2.0 * v)); },
                pair.h_radial, 1e-4 * sigma, 1e4 * sigma, 1200));
        }
        fx.sup_conv_ratio = best;
    }
    return fx;
}

VelocityFixture make_zero_u0() {
    VelocityFixture fx;
    fx.u0 = [](const Vec3&) { return Vec3{}; };
    fx.heat_conv = [](const Vec3&, double) { return Vec3{}; };
    return fx;
}

ForcingFixture make_azimuthal_forcing(double amp, const Vec3& axis, double lambda,
                                      const KernelPair& pair) {
    if (!pair.h_tilde)
        throw std::domain_error("make_azimuthal_forcing: pair has no forcing majorant");
    const Vec3 w = axis;
    const double wn = norm(w);
    const auto ht = pair.h_tilde;

    ForcingFixture fx;
    fx.phi = [amp, w, lambda](const Vec3& x, double t) {
        const double r = norm(x);
        if (r < kZeroNormGuard) return Vec3{};
        return (amp * std::exp(-lambda * t) / r) * cross(w, x);
    };
    const auto phi = fx.phi;
    fx.g = [phi, ht](const Vec3& x, double t) {
        const double h = ht(x);
        if (!std::isfinite(h)) return Vec3{};  // phi vanishes at the pole anyway
        return h * phi(x, t);
    };
    fx.sup_g_ratio = amp * wn;
    return fx;
}

ForcingFixture make_zero_forcing() { return {}; }

}  // namespace nsc
