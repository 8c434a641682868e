#pragma once

#include <functional>

namespace nsc {

using Fn1 = std::function<double(double)>;

/// Adaptive Gauss-Kronrod 15(7) on a finite interval.
double integrate(const Fn1& f, double a, double b, double rel_tol = 1e-10,
                 double abs_tol = 1e-300);

/// Integral over (a, b) after the substitution r = e^u; use when the
/// integrand has a power-law feature at the left endpoint.  Requires a > 0.
double integrate_log(const Fn1& f, double a, double b, double rel_tol = 1e-10);

/// Integral over (a, infinity) via r = a/u, u in (0,1].  Requires a > 0 and
/// integrand decay strictly faster than r^-2 is not required but r^-2-ish
/// tails must be integrable overall.
double integrate_to_inf(const Fn1& f, double a, double rel_tol = 1e-10);

/// Antiderivative-style helper: integral of rho*psi(rho) over (lo, hi) with
/// possible power singularity of psi at rho = 0.
double moment1_integral(const Fn1& psi, double lo, double hi, double rel_tol = 1e-8);

/// Convolution-type integral of two radial profiles at separation a = |x|:
///   integral over R^3 of  w(|y|) * psi(|x - y|) dy
///     = (2 pi / a) * int_0^inf r w(r) [ int_{|r-a|}^{r+a} rho psi(rho) drho ] dr.
/// Singular weights (w ~ r^-2, psi ~ rho^-2 near 0) are supported.
double radial_pair_integral(const Fn1& w, const Fn1& psi, double a,
                            double rel_tol = 1e-6);

/// Same integral restricted to the spherical-cap bin
///   { y : r0 < |y| < r1,  mu0 < cos(angle(y, x)) < mu1 }.
double radial_pair_bin_mass(const Fn1& w, const Fn1& psi, double a,
                            double r0, double r1, double mu0, double mu1,
                            double rel_tol = 1e-7);

}  // namespace nsc
