#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "nsc/rng.hpp"

using namespace nsc;

TEST_CASE("streams are reproducible and counter based") {
    RngStream a = RngStream::from_seed(42);
    RngStream b = RngStream::from_seed(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    // replay from a copy taken mid-stream
    RngStream c = a;
    const double x = a.next_double();
    CHECK(c.next_double() == x);
}

TEST_CASE("child streams differ from the parent and each other") {
    const RngStream root = RngStream::from_seed(1);
    RngStream c0 = root.child(0), c1 = root.child(1), c0b = root.child(0);
    CHECK(c0.key != c1.key);
    CHECK(c0.key == c0b.key);
    CHECK(c0.next_u64() != c1.next_u64());
    // child derivation does not consume parent state
    RngStream r2 = RngStream::from_seed(1);
    (void)r2.child(7);
    RngStream r3 = RngStream::from_seed(1);
    CHECK(r2.next_u64() == r3.next_u64());
}

TEST_CASE("uniform moments") {
    RngStream rng = RngStream::from_seed(5);
    const int n = 200000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = rng.next_double();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        s += u;
        s2 += u * u;
    }
    const double mean = s / n, var = s2 / n - mean * mean;
    CHECK(std::abs(mean - 0.5) < 5.0 / std::sqrt(12.0 * n));
    CHECK(std::abs(var - 1.0 / 12.0) < 0.002);
}

TEST_CASE("normal and gamma moments") {
    RngStream rng = RngStream::from_seed(9);
    const int n = 200000;
    double sn = 0.0, sn2 = 0.0, sg = 0.0, sg3 = 0.0, se = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.next_normal();
        sn += z;
        sn2 += z * z;
        sg += rng.next_gamma_half();
        sg3 += rng.next_gamma_three_half();
        se += rng.next_exponential();
    }
    CHECK(std::abs(sn / n) < 5.0 / std::sqrt(static_cast<double>(n)));
    CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.02));
    CHECK(sg / n == doctest::Approx(0.5).epsilon(0.02));
    CHECK(sg3 / n == doctest::Approx(1.5).epsilon(0.02));
    CHECK(se / n == doctest::Approx(1.0).epsilon(0.02));
}
