#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>

#include "nsc/cascade.hpp"
#include "nsc/samplers.hpp"
#include "nsc/verify.hpp"

using namespace nsc;

TEST_CASE("branch operators") {
    const Vec3 e3{0.0, 0.0, 1.0};
    CHECK(norm(apply_B(1, e3, e3, e3)) == doctest::Approx(0.0));
    const Vec3 a{0.3, -0.2, 0.9}, b{1.0, 0.4, -0.5}, z{0.2, 0.7, -0.3};
    const Vec3 p2 = apply_B(2, z, a, b), p3 = apply_B(3, z, a, b);
    CHECK(norm(p2 + p3) == doctest::Approx(0.0).epsilon(1e-300));
    CHECK_THROWS_AS(apply_B(4, z, a, b), std::domain_error);

    CHECK(norm(apply_C(4, e3, Vec3{0.0, 0.0, 2.0})) == doctest::Approx(0.0));
    const Vec3 c5 = apply_C(5, e3, e3);
    CHECK(c5.x3 == doctest::Approx(1.0));
    CHECK_THROWS_AS(apply_C(1, z, a), std::domain_error);
    // norm bounds
    CHECK(norm(apply_B(1, z, a, b)) <= norm(a) * norm(b) * (1.0 + 1e-12));
    CHECK(norm(apply_C(4, z, a)) <= norm(a) * (1.0 + 1e-12));
    CHECK(norm(apply_C(5, z, a)) <= norm(a) * (1.0 + 1e-12));
}

TEST_CASE("zero data gives the zero functional surely") {
    ProblemSpec spec;
    spec.nu = 1.0;
    spec.p = 0.5;
    spec.pair = make_h0_pair(1.0, 1.0);
    const RngStream root = RngStream::from_seed(21);
    for (int i = 0; i < 200; ++i) {
        const CascadeOutcome xi = eval_Xi(Vec3{1.0, 0.0, 0.0}, 0.7, spec, root.child(i));
        CHECK(norm(xi.value) == 0.0);
        const CascadeOutcome up =
            eval_Upsilon(Vec3{1.0, 0.0, 0.0}, 0.7, spec, root.child(i));
        CHECK(norm(up.value) == 0.0);
    }
}

TEST_CASE("data term scaling") {
    const verify::ContractionFixture fx =
        verify::make_contraction_fixture(CascadeMode::Xi, false);
    const Vec3 x{0.8, 0.3, 0.0};
    const double t = 0.4;
    const Vec3 d = m0(x, t, fx.spec);
    const Vec3 ref = fx.spec.u0_heat_conv(x, t) / fx.spec.pair.h(x);
    CHECK(norm(d - ref) <= 1e-12 * (1.0 + norm(ref)));
    // small-time limit recovers u0 / h on the smooth fixture
    const Vec3 lim = m0(x, 1e-8, fx.spec);
    const Vec3 u0h = fx.spec.u0(x) / fx.spec.pair.h(x);
    CHECK(norm(lim - u0h) <= 1e-4 * (1.0 + norm(u0h)));
}

TEST_CASE("endpoint data term is conditionally unbiased") {
    const verify::ContractionFixture fx =
        verify::make_contraction_fixture(CascadeMode::Upsilon, false);
    const Vec3 x{0.9, 0.0, 0.0};
    const double t = 0.5;
    const Vec3 target = m0(x, t, fx.spec);
    RngStream rng = RngStream::from_seed(33);
    const int n = 100000;
    Vec3 sum{};
    double sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const HbmEndpoint ep = sample_hbm_endpoint(x, t, fx.spec.pair, fx.spec.nu, rng);
        Vec3 chi{};
        if (!ep.trapped) chi = fx.spec.u0(ep.y) / fx.spec.pair.h(ep.y);
        sum += chi;
        sum_sq += dot(chi, chi);
    }
    const Vec3 mean = sum / n;
    const double sd = std::sqrt(std::max(sum_sq / n - dot(mean, mean), 0.0) / n);
    CHECK(norm(mean - target) <= 3.5 * sd + 1e-12);
}

TEST_CASE("deterministic in the stream") {
    const verify::ContractionFixture fx =
        verify::make_contraction_fixture(CascadeMode::Xi, true);
    const RngStream root = RngStream::from_seed(55);
    for (int i = 0; i < 50; ++i) {
        const CascadeOutcome a = eval_cascade(Vec3{1.0, 0.0, 0.0}, 0.5, fx.spec, root.child(i));
        const CascadeOutcome b = eval_cascade(Vec3{1.0, 0.0, 0.0}, 0.5, fx.spec, root.child(i));
        CHECK(a.value.x1 == b.value.x1);
        CHECK(a.value.x2 == b.value.x2);
        CHECK(a.value.x3 == b.value.x3);
        CHECK(a.nodes == b.nodes);
        CHECK(a.max_depth == b.max_depth);
    }
}

TEST_CASE("depth cap truncates and flags") {
    verify::ContractionFixture fx = verify::make_contraction_fixture(CascadeMode::Xi, false);
    fx.spec.depth_cap = 1;
    const RngStream root = RngStream::from_seed(77);
    int truncated = 0;
    for (int i = 0; i < 3000; ++i) {
        const CascadeOutcome oc =
            eval_cascade(Vec3{1.0, 0.0, 0.0}, 50.0, fx.spec, root.child(i));
        if (oc.truncated) ++truncated;
        CHECK(oc.max_depth <= 1);
        CHECK(norm(oc.value) <= fx.eps * (1.0 + 1e-12));
    }
    CHECK(truncated > 0);
}

TEST_CASE("mode preconditions") {
    ProblemSpec spec;
    spec.pair = make_H_pair();  // not excessive
    spec.mode = CascadeMode::Upsilon;
    CHECK_THROWS_AS(eval_cascade(Vec3{1.0, 0.0, 0.0}, 1.0, spec, RngStream::from_seed(1)),
                    std::domain_error);
    spec.mode = CascadeMode::Xi;
    CHECK_THROWS_AS(eval_cascade(Vec3{1.0, 0.0, 0.0}, 0.0, spec, RngStream::from_seed(1)),
                    std::domain_error);
}

TEST_CASE("non-finite forcing ratio names the node") {
    verify::ContractionFixture fx = verify::make_contraction_fixture(CascadeMode::Xi, false);
    fx.spec.phi = [](const Vec3&, double) {
        return Vec3{std::numeric_limits<double>::quiet_NaN(), 0.0, 0.0};
    };
    const RngStream root = RngStream::from_seed(91);
    bool threw = false;
    for (int i = 0; i < 500 && !threw; ++i) {
        try {
            (void)eval_cascade(Vec3{1.0, 0.0, 0.0}, 100.0, fx.spec, root.child(i));
        } catch (const std::runtime_error& e) {
            threw = true;
            CHECK(std::string(e.what()).find("forcing") != std::string::npos);
        }
    }
    CHECK(threw);
}
