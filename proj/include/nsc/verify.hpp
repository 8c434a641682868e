#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nsc/cascade.hpp"

namespace nsc::verify {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;  // observed vs required, one line
};

struct SuiteResult {
    std::string suite;
    bool pass = true;
    std::vector<CheckResult> checks;
};

/// Kolmogorov-Smirnov D for sorted-on-entry or unsorted samples against a CDF.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Pearson statistic for observed counts vs expected masses (rescaled to the
/// observed total); returns the p-value via the chi-square survival function.
double chi2_bin_pvalue(const std::vector<std::int64_t>& observed,
                       const std::vector<double>& expected_mass);

/// Standard small fixture: standardized pair from the |x|^-1 family,
/// nu = 11/(4 pi), p = alpha = 1/2, epsilon = beta = 0.2, a divergence-free
/// Gaussian vortex scaled to sup |u0*K|/h <= alpha*epsilon (times delta_scale)
/// and, optionally, azimuthal forcing at sup |g|/h~ <= beta*epsilon.
struct ContractionFixture {
    ProblemSpec spec;
    double eps = 0.2;
    double alpha = 0.5;
    double beta = 0.2;
};
ContractionFixture make_contraction_fixture(CascadeMode mode, bool with_forcing,
                                            bool smooth_profile = false,
                                            double delta_scale = 1.0);

// Individual checks.  Scale knobs default to acceptance scale.
CheckResult check_bilinear_bounds(std::int64_t n = 1000000, std::uint64_t seed = 11);
CheckResult check_kernel_constants(int n_probes = 20);
CheckResult check_excessivity();
CheckResult check_gamma_trace(int n = 64, std::uint64_t seed = 12);
CheckResult check_gamma_fourier(int n_points = 5);
CheckResult check_tau_laws(std::int64_t n = 100000, std::uint64_t seed = 13);
CheckResult check_z_bins(std::int64_t n = 100000, std::uint64_t seed = 14);
CheckResult check_hbm_endpoint(std::int64_t n = 100000, std::uint64_t seed = 15);
CheckResult check_contraction(std::int64_t n = 100000, std::uint64_t seed = 16);
CheckResult check_tree_law(std::int64_t n = 100000, std::uint64_t seed = 17);
CheckResult check_linear_regime(std::int64_t n = 100000, std::uint64_t seed = 18);
CheckResult check_oracle_agreement(std::int64_t n = 20000, std::uint64_t seed = 19,
                                   bool full = false);
CheckResult check_xi_upsilon(std::int64_t n = 200000, std::uint64_t seed = 20);
CheckResult check_determinism(std::uint64_t seed = 21);

std::vector<std::string> suite_names();  // geometry heat kernels samplers cascade oracle all

/// quick = reduced sample sizes for interactive runs.
SuiteResult run_suite(const std::string& name, bool quick = true);

}  // namespace nsc::verify
