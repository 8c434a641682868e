#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nsc/heat.hpp"
#include "nsc/kernels.hpp"
#include "nsc/quadrature.hpp"
#include "nsc/special.hpp"

using namespace nsc;

namespace {
const double kPi = M_PI;
}

TEST_CASE("inverse-distance pair constants and closed forms") {
    const KernelPair pair = make_h0_pair(2.0, 3.0);
    CHECK(pair.gamma == doctest::Approx(2.0 * kPi * kPi * kPi).epsilon(1e-12));
    // second moment of the default forcing profile is 1
    CHECK(pair.gamma_tilde == doctest::Approx(4.0 * kPi * 3.0 / 2.0).epsilon(1e-10));
    CHECK(pair.excessive);

    const Vec3 x{0.7, 0.0, 0.0};
    CHECK(pair.h(x) == doctest::Approx(2.0 / 0.7).epsilon(1e-13));
    CHECK(pair.conv_sq_invsq(x) ==
          doctest::Approx(4.0 * kPi * kPi * kPi / 0.7).epsilon(1e-12));
    CHECK(pair.conv_tilde_inv(x) ==
          doctest::Approx(3.0 * 4.0 * kPi * std::log1p(1.0 / 0.7)).epsilon(1e-10));
}

TEST_CASE("closed forms match quadrature") {
    const KernelPair pair = make_h0_pair(1.0, 1.0);
    for (double a : {0.3, 1.1, 3.0}) {
        const Vec3 x{a, 0.0, 0.0};
        const double q_sq = radial_pair_integral(
            [](double r) { return 1.0 / (r * r); },
            [&](double r) { return pair.h_radial(r) * pair.h_radial(r); }, a, 1e-8);
        CHECK(pair.conv_sq_invsq(x) == doctest::Approx(q_sq).epsilon(1e-5));
        const double q_t = radial_pair_integral([](double r) { return 1.0 / r; },
                                                pair.ht_radial, a, 1e-8);
        CHECK(pair.conv_tilde_inv(x) == doctest::Approx(q_t).epsilon(1e-5));
        const double nu_t = 0.35;
        const double q_h = radial_pair_integral(
            pair.h_radial, [&](double r) { return heat_kernel_r(r, 2.0 * nu_t); }, a,
            1e-9);
        CHECK(pair.heat_conv(x, nu_t) == doctest::Approx(q_h).epsilon(1e-6));
        CHECK(pair.heat_conv(x, nu_t) ==
              doctest::Approx(erf_(a / (2.0 * std::sqrt(nu_t))) / a).epsilon(1e-10));
    }
}

TEST_CASE("smooth forcing profile closed form") {
    const ForcingProfile prof = smooth_forcing_profile();
    CHECK(prof.r2_integral == doctest::Approx(kPi / 16.0).epsilon(1e-10));
    for (double a : {0.2, 1.0, 2.7}) {
        const double q = radial_pair_integral([](double r) { return 1.0 / r; }, prof.f,
                                              a, 1e-9);
        CHECK(prof.conv_inv(a) == doctest::Approx(q).epsilon(1e-6));
        CHECK(prof.conv_inv(a) ==
              doctest::Approx((kPi / 2.0) * (1.0 / (1.0 + a * a) + std::atan(a) / a))
                  .epsilon(1e-10));
    }
}

TEST_CASE("bounded families") {
    const KernelPair H = make_H_pair();
    CHECK(H.gamma == doctest::Approx(kPi * kPi).epsilon(1e-12));
    CHECK_FALSE(H.excessive);
    CHECK_FALSE(H.has_forcing());
    REQUIRE(H.heat_ratio_M.has_value());
    CHECK(*H.heat_ratio_M == doctest::Approx(1.0 + 3.0 * std::exp(-2.0 / 3.0)).epsilon(1e-12));
    const Vec3 x{1.2, 0.0, 0.0};
    const double q = radial_pair_integral(
        [](double r) { return 1.0 / (r * r); },
        [&](double r) { return H.h_radial(r) * H.h_radial(r); }, 1.2, 1e-8);
    CHECK(q / H.h(x) == doctest::Approx(kPi * kPi).epsilon(1e-5));

    const KernelPair Hp = make_Hp_pair(1.5);
    const double g_ref = std::pow(kPi, 2.5) * std::pow(1.0 + 1.0 / std::sqrt(2.0), 0.5);
    CHECK(Hp.gamma == doctest::Approx(g_ref).epsilon(1e-12));
    REQUIRE(Hp.heat_ratio_M.has_value());
    const double m_ref =
        std::pow((1.0 + 3.0 * std::exp(-2.0 / 3.0)) * (1.0 + 1.0 / std::sqrt(2.0)), 0.75);
    CHECK(*Hp.heat_ratio_M == doctest::Approx(m_ref).epsilon(1e-12));
    CHECK_THROWS_AS(make_Hp_pair(2.5), std::domain_error);
    CHECK_THROWS_AS(make_Hp_pair(1.0), std::domain_error);
}

TEST_CASE("rescaling and standardization") {
    const KernelPair base = make_h0_pair(1.0, 1.0);
    const KernelPair s = standardized(base);
    CHECK(s.gamma == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.gamma_tilde == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(s.excessive);
    const Vec3 x{0.5, 0.2, -0.1};
    CHECK(s.h(x) == doctest::Approx(base.h(x) / base.gamma).epsilon(1e-12));
    const KernelPair r = rescale_pair(base, 2.0, 5.0);
    CHECK(r.gamma == doctest::Approx(2.0 * base.gamma).epsilon(1e-12));
    CHECK(r.gamma_tilde == doctest::Approx(2.5 * base.gamma_tilde).epsilon(1e-10));
}

TEST_CASE("closure operations propagate constants") {
    const KernelPair A = make_H_pair();
    const KernelPair B = make_Hp_pair(2.0);

    const KernelPair t = translate_pair(A, Vec3{1.0, 0.0, 0.0});
    CHECK(t.gamma == doctest::Approx(A.gamma));
    CHECK(t.h(Vec3{1.0, 0.0, 0.0}) == doctest::Approx(A.h(Vec3{})).epsilon(1e-13));

    const KernelPair sc = scale_pair(A, 2.0);
    CHECK(sc.gamma == doctest::Approx(A.gamma));
    CHECK(sc.h(Vec3{0.5, 0.0, 0.0}) ==
          doctest::Approx(2.0 * A.h(Vec3{1.0, 0.0, 0.0})).epsilon(1e-13));

    Mat3 rot{};  // rotation by 90 degrees about x3
    rot(0, 1) = -1.0;
    rot(1, 0) = 1.0;
    rot(2, 2) = 1.0;
    const KernelPair ro = rotate_pair(A, rot);
    CHECK(ro.gamma == doctest::Approx(A.gamma));
    CHECK(ro.h(Vec3{0.3, 0.4, 0.1}) == doctest::Approx(A.h(Vec3{0.3, 0.4, 0.1})).epsilon(1e-12));

    const KernelPair mn = min_pair(A, B);
    CHECK(mn.gamma == doctest::Approx(std::min(A.gamma, B.gamma)));
    const Vec3 x{0.9, 0.1, 0.0};
    CHECK(mn.h(x) == doctest::Approx(std::min(A.h(x), B.h(x))).epsilon(1e-13));

    const KernelPair gm = geo_mean_pair(A, B, 0.3);
    CHECK(gm.gamma ==
          doctest::Approx(std::pow(A.gamma, 0.3) * std::pow(B.gamma, 0.7)).epsilon(1e-12));
    CHECK(gm.h(x) ==
          doctest::Approx(std::pow(A.h(x), 0.3) * std::pow(B.h(x), 0.7)).epsilon(1e-12));

    const KernelPair mx = mixture_pair({A, B}, {0.25, 0.75});
    CHECK(mx.gamma == doctest::Approx(0.25 * A.gamma + 0.75 * B.gamma).epsilon(1e-12));
    CHECK_THROWS_AS(mixture_pair({A, B}, {0.5, 0.6}), std::domain_error);

    // composites carry no exact samplers
    CHECK_FALSE(static_cast<bool>(mn.z_bilinear));
}

TEST_CASE("convolution with a probability density keeps the constant") {
    const KernelPair A = make_H_pair();
    // normalized Gaussian bump as the convolving density
    const double t0 = 0.04;
    auto f0 = [t0](double r) {
        return std::exp(-r * r / (2.0 * t0)) / std::pow(2.0 * M_PI * t0, 1.5);
    };
    const KernelPair c = convolve_pair(A, f0);
    CHECK(c.gamma == doctest::Approx(A.gamma));
    // narrow bump: h barely moves
    const Vec3 x{0.8, 0.0, 0.0};
    CHECK(c.h(x) == doctest::Approx(A.h(x)).epsilon(0.05));
}

TEST_CASE("cascade multipliers and their bound") {
    const double nu = 0.9;
    const KernelPair pair = make_h0_pair(1.0, 1.0);
    for (double a : {0.4, 1.0, 2.5}) {
        const Multipliers m = cascade_multipliers(pair, nu, Vec3{a, 0.0, 0.0});
        CHECK(m.m == doctest::Approx(pair.gamma / (8.0 * kPi * nu)).epsilon(1e-10));
        CHECK(m.m_tilde <= pair.gamma_tilde / (8.0 * kPi * nu) + 1e-12);
    }
}

TEST_CASE("sampled admissibility report") {
    const KernelPair pair = make_h0_pair(1.0, 1.0);
    auto u0 = [](const Vec3& x) { return Vec3{0.05 / std::max(norm(x), 1e-9), 0.0, 0.0}; };
    const std::vector<Vec3> probes = {{0.5, 0.0, 0.0}, {1.0, 0.5, 0.0}, {2.0, 0.0, 1.0}};
    const std::vector<double> times = {0.1, 1.0};
    const AdmissibilityReport ok = check_admissibility(
        u0, nullptr, nullptr, pair, AdmissibilityMode::Sec4, probes, times, 0.1, 0.1);
    CHECK(ok.pass);
    CHECK(ok.max_u0_ratio == doctest::Approx(0.05).epsilon(1e-10));
    const AdmissibilityReport bad = check_admissibility(
        u0, nullptr, nullptr, pair, AdmissibilityMode::Sec4, probes, times, 0.01, 0.1);
    CHECK_FALSE(bad.pass);
}
