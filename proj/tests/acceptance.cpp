// Acceptance gate: one line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <vector>

#include "nsc/verify.hpp"

using nsc::verify::CheckResult;

namespace {

struct Gate {
    int failures = 0;
    int index = 0;

    void report(const char* what, const std::vector<CheckResult>& checks) {
        ++index;
        bool pass = true;
        for (const auto& c : checks) pass = pass && c.pass;
        std::printf("%s criterion-%02d %s\n", pass ? "PASS" : "FAIL", index, what);
        for (const auto& c : checks)
            std::printf("       %s %s: %s\n", c.pass ? "ok  " : "FAIL", c.name.c_str(),
                        c.detail.c_str());
        std::fflush(stdout);
        if (!pass) ++failures;
    }
    void report(const char* what, const CheckResult& c) {
        report(what, std::vector<CheckResult>{c});
    }
};

}  // namespace

int main() {
    using namespace nsc::verify;
    const auto t0 = std::chrono::steady_clock::now();
    Gate gate;

    gate.report("bilinear operator bounds, 1e6 random triples",
                check_bilinear_bounds(1000000));
    gate.report("kernel normalization constants at 20 probes within 0.5%",
                check_kernel_constants(20));
    gate.report("heat-ratio closed form vs quadrature within 1e-6, ratio <= 1",
                check_excessivity());
    gate.report("sampler exactness: KS for waiting times, bin tests for spatial "
                "draws and endpoints, trap frequency",
                {check_tau_laws(100000), check_z_bins(100000),
                 check_hbm_endpoint(100000)});
    gate.report("almost-sure contraction: zero outcomes above eps over 1e5 "
                "cascades per mode",
                check_contraction(100000));
    gate.report("tree law: branch frequency, mean subcritical size, truncation",
                check_tree_law(100000));
    gate.report("linear regime: quadratic-defect constant stable across delta",
                check_linear_regime(100000));
    gate.report("estimator vs fixed-point comparator at 5 probes within budget",
                check_oracle_agreement(20000, 19, true));
    gate.report("Xi and Upsilon estimators agree within combined 3 sigma",
                check_xi_upsilon(200000));
    gate.report("tensor kernel: trace identity to 1e-12, Fourier quadrature "
                "within 2%",
                {check_gamma_trace(), check_gamma_fourier()});
    gate.report("byte-identical field CSV across worker counts",
                check_determinism());

    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%d of 11 criteria passed in %.1f s\n", 11 - gate.failures, secs);
    return gate.failures == 0 ? 0 : 1;
}
