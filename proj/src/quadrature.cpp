#include "nsc/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace nsc {
namespace {

// Gauss-Kronrod 15(7) abscissae and weights on [-1, 1].
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct GkResult {
    double value;
    double error;
};

GkResult gk15(const Fn1& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * kXgk[i]);
        fv[14 - i] = f(c + h * kXgk[i]);
    }
    fv[7] = f(c);
    double resk = kWgk[7] * fv[7];
    double resg = kWg[3] * fv[7];
    for (int i = 0; i < 7; ++i) {
        resk += kWgk[i] * (fv[i] + fv[14 - i]);
        if (i % 2 == 1) resg += kWg[i / 2] * (fv[i] + fv[14 - i]);
    }
    return {resk * h, std::fabs(resk - resg) * h};
}

double adapt(const Fn1& f, double a, double b, double rel_tol, double abs_tol,
             double scale, int depth) {
    const GkResult r = gk15(f, a, b);
    const double tol = std::max(abs_tol, rel_tol * std::max(scale, std::fabs(r.value)));
    if (r.error <= tol || depth >= 48 || (b - a) < 1e-15 * std::fabs(a))
        return r.value;
    const double c = 0.5 * (a + b);
    return adapt(f, a, c, rel_tol, abs_tol * 0.5, scale * 0.5, depth + 1) +
           adapt(f, c, b, rel_tol, abs_tol * 0.5, scale * 0.5, depth + 1);
}

}  // namespace

double integrate(const Fn1& f, double a, double b, double rel_tol, double abs_tol) {
    if (a == b) return 0.0;
    const GkResult first = gk15(f, a, b);
    return adapt(f, a, b, rel_tol, abs_tol, std::fabs(first.value), 0);
}

double integrate_log(const Fn1& f, double a, double b, double rel_tol) {
    if (!(a > 0.0 && b > a)) throw std::domain_error("integrate_log: need 0 < a < b");
    return integrate([&f](double u) {
        const double r = std::exp(u);
        return f(r) * r;
    }, std::log(a), std::log(b), rel_tol);
}

double integrate_to_inf(const Fn1& f, double a, double rel_tol) {
    if (!(a > 0.0)) throw std::domain_error("integrate_to_inf: need a > 0");
    return integrate([&f, a](double u) {
        const double r = a / u;
        return f(r) * a / (u * u);
    }, 1e-12, 1.0, rel_tol);
}

double moment1_integral(const Fn1& psi, double lo, double hi, double rel_tol) {
    if (!(hi > 0.0) || hi <= lo) return 0.0;
    double lo_eff = lo;
    if (lo_eff < hi * 1e-14) lo_eff = hi * 1e-14;
    const auto g = [&psi](double rho) { return rho * psi(rho); };
    if (hi / lo_eff > 8.0)
        return integrate_log(g, lo_eff, hi, rel_tol);
    return integrate(g, lo_eff, hi, rel_tol);
}

double radial_pair_integral(const Fn1& w, const Fn1& psi, double a, double rel_tol) {
    if (!(a > 0.0)) throw std::domain_error("radial_pair_integral: need |x| > 0");
    const double inner_tol = rel_tol * 0.1;
    const auto outer = [&](double r) {
        return r * w(r) * moment1_integral(psi, std::fabs(r - a), r + a, inner_tol);
    };
    const double mid_lo = 0.5 * a, mid_hi = 2.0 * a;
    const double head = integrate_log(outer, a * 1e-10, mid_lo, rel_tol);
    const double mid = integrate(outer, mid_lo, mid_hi, rel_tol);
    const double tail = integrate_to_inf(outer, mid_hi, rel_tol);
    return (head + mid + tail) * 2.0 * M_PI / a;
}

double radial_pair_bin_mass(const Fn1& w, const Fn1& psi, double a,
                            double r0, double r1, double mu0, double mu1,
                            double rel_tol) {
    if (r1 <= r0 || mu1 <= mu0) return 0.0;
    if (a < 1e-12) {
        // degenerate center: the integrand is radial
        return 2.0 * M_PI * (mu1 - mu0) *
               integrate([&](double r) { return r * r * w(r) * psi(r); },
                         std::max(r0, 1e-14 * r1), r1, rel_tol);
    }
    const double inner_tol = rel_tol * 0.1;
    const auto rho_of = [a](double r, double mu) {
        // (r - a)^2 + 2ar(1 - mu): both terms nonnegative, no cancellation
        return std::sqrt((r - a) * (r - a) + 2.0 * a * r * (1.0 - mu));
    };
    const auto outer = [&](double r) {
        const double lo = rho_of(r, mu1), hi = rho_of(r, mu0);
        return r * w(r) * moment1_integral(psi, lo, hi, inner_tol);
    };
    const double lo_eff = std::max(r0, 1e-14 * r1);
    // psi may be singular where the shell radius hits the center distance;
    // there the outer integrand grows like log(1/|r - a|), so integrate in
    // log distance from that radius instead of refining across it
    if (lo_eff < a && a < r1) {
        const double wl = a - lo_eff, wr = r1 - a;
        const double left =
            integrate_log([&](double u) { return outer(a - u); }, wl * 1e-12, wl, rel_tol);
        const double right =
            integrate_log([&](double u) { return outer(a + u); }, wr * 1e-12, wr, rel_tol);
        return 2.0 * M_PI / a * (left + right);
    }
    return 2.0 * M_PI / a * integrate(outer, lo_eff, r1, rel_tol);
}

}  // namespace nsc
