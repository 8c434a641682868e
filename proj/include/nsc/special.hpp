#pragma once

namespace nsc {

// Error function and regularized incomplete gamma, implemented in-repo.
// Accuracy target 1e-12 or better over the ranges exercised here.

double erf_(double x);
double erfc_(double x);

/// Regularized lower incomplete gamma P(a,x) = gamma(a,x)/Gamma(a).
double gamma_p(double a, double x);
/// Regularized upper incomplete gamma Q(a,x) = 1 - P(a,x).
double gamma_q(double a, double x);

/// CDF of the chi distribution with 3 dof: P(|Z_3| < x) for a standard
/// normal vector Z_3.  Series branch for small x avoids cancellation.
double chi3_cdf(double x);

/// Survival function of the chi-square distribution with k dof
/// (p-value helper for goodness-of-fit tests).
double chi2_sf(double x, int dof);

}  // namespace nsc
