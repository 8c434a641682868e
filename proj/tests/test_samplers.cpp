#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "nsc/samplers.hpp"
#include "nsc/special.hpp"
#include "nsc/verify.hpp"

using namespace nsc;

TEST_CASE("branch type frequencies") {
    const double p = 0.4;
    RngStream rng = RngStream::from_seed(3);
    const int n = 100000;
    int counts[6] = {0, 0, 0, 0, 0, 0};
    for (int i = 0; i < n; ++i) ++counts[sample_kappa(p, rng)];
    const double probs[6] = {0.0,          p / 11.0,       4.0 * p / 11.0,
                             6.0 * p / 11.0, (1.0 - p) / 2.0, (1.0 - p) / 2.0};
    for (int k = 1; k <= 5; ++k) {
        const double f = static_cast<double>(counts[k]) / n;
        const double band = 4.0 * std::sqrt(probs[k] * (1.0 - probs[k]) / n);
        CHECK(std::abs(f - probs[k]) <= band);
    }
    CHECK_THROWS_AS(sample_kappa(0.7, rng), std::domain_error);
}

TEST_CASE("waiting time laws against their closed-form CDFs") {
    const double a = 0.9, nu = 1.2;
    RngStream rng = RngStream::from_seed(4);
    const int n = 30000;
    std::vector<double> s1(n), s0(n);
    for (int i = 0; i < n; ++i) {
        s1[i] = sample_tau1(a, nu, rng);
        s0[i] = sample_tau0(a, nu, rng);
    }
    // P(tau1 <= s) = Q(1/2, a^2/(4 nu s));  P(tau0 <= s) = Q(3/2, a^2/(4 nu s))
    const double d1 = verify::ks_statistic(
        s1, [&](double s) { return gamma_q(0.5, a * a / (4.0 * nu * s)); });
    const double d0 = verify::ks_statistic(
        s0, [&](double s) { return gamma_q(1.5, a * a / (4.0 * nu * s)); });
    const double thresh = 1.95 / std::sqrt(static_cast<double>(n));  // 0.1% level
    CHECK(d1 < thresh);
    CHECK(d0 < thresh);
    CHECK_THROWS_AS(sample_tau1(0.0, nu, rng), std::domain_error);
}

TEST_CASE("inner jump law Y given Z") {
    RngStream rng = RngStream::from_seed(6);
    const Vec3 z{0.4, -1.0, 0.3};
    const double a = norm(z);
    const int n = 50000;
    std::vector<double> u(n);
    Vec3 mean_dir{};
    for (int i = 0; i < n; ++i) {
        const Vec3 y = sample_Y_given_Z(z, rng);
        REQUIRE(norm(y) <= a * (1.0 + 1e-12));
        u[i] = (norm(y) / a) * (norm(y) / a);
        mean_dir += unit(y);
    }
    // |Y|^2 / |z|^2 is uniform on (0,1)
    const double d = verify::ks_statistic(u, [](double x) { return x; });
    CHECK(d < 1.95 / std::sqrt(static_cast<double>(n)));
    CHECK(norm(mean_dir / n) < 0.02);  // isotropic direction
}

TEST_CASE("spatial draws match quadrature bin masses") {
    const verify::CheckResult r = verify::check_z_bins(30000, 77);
    INFO(r.detail);
    CHECK(r.pass);
}

TEST_CASE("endpoint draws and trap mass") {
    const verify::CheckResult r = verify::check_hbm_endpoint(30000, 78);
    INFO(r.detail);
    CHECK(r.pass);
}

TEST_CASE("sampler preconditions") {
    const KernelPair H = make_H_pair();
    RngStream rng = RngStream::from_seed(8);
    CHECK_THROWS_AS(sample_hbm_endpoint(Vec3{1.0, 0.0, 0.0}, 1.0, H, 1.0, rng),
                    std::domain_error);
    CHECK_THROWS_AS(sample_Z(Vec3{1.0, 0.0, 0.0}, H, ZBranch::Forcing, rng),
                    std::domain_error);
}

TEST_CASE("diagnostics counters move") {
    sampler_stats().reset();
    const KernelPair pair = make_h0_pair(1.0, 1.0);
    RngStream rng = RngStream::from_seed(10);
    for (int i = 0; i < 100; ++i)
        (void)sample_Z(Vec3{1.0, 0.0, 0.0}, pair, ZBranch::Bilinear, rng);
    CHECK(sampler_stats().accepts.load() >= 100);
    CHECK(sampler_stats().proposals.load() >= sampler_stats().accepts.load());
}
