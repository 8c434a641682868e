#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nsc/special.hpp"

using namespace nsc;

TEST_CASE("erf reference values") {
    CHECK(erf_(0.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(erf_(0.5) == doctest::Approx(0.5204998778130465).epsilon(1e-12));
    CHECK(erf_(1.0) == doctest::Approx(0.8427007929497149).epsilon(1e-12));
    CHECK(erf_(2.0) == doctest::Approx(0.9953222650189527).epsilon(1e-12));
    CHECK(erf_(-1.0) == doctest::Approx(-0.8427007929497149).epsilon(1e-12));
    CHECK(erf_(1.0) + erfc_(1.0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(erfc_(6.0) == doctest::Approx(2.1519736712498913e-17).epsilon(1e-9));
}

TEST_CASE("incomplete gamma against erf identity") {
    for (double x : {0.01, 0.2, 1.0, 3.5, 9.0}) {
        CHECK(gamma_p(0.5, x) == doctest::Approx(erf_(std::sqrt(x))).epsilon(1e-12));
        CHECK(gamma_p(0.5, x) + gamma_q(0.5, x) == doctest::Approx(1.0).epsilon(1e-13));
    }
    // P(1, x) = 1 - e^-x
    CHECK(gamma_p(1.0, 0.7) == doctest::Approx(1.0 - std::exp(-0.7)).epsilon(1e-12));
    CHECK_THROWS_AS(gamma_p(-1.0, 1.0), std::domain_error);
}

TEST_CASE("chi distribution with 3 dof") {
    // P(chi_3 < x) = erf(x/sqrt(2)) - sqrt(2/pi) x exp(-x^2/2)
    for (double x : {0.1, 0.5, 1.0, 2.0, 4.0}) {
        const double ref = erf_(x / std::sqrt(2.0)) -
                           std::sqrt(2.0 / M_PI) * x * std::exp(-0.5 * x * x);
        CHECK(chi3_cdf(x) == doctest::Approx(ref).epsilon(1e-11));
    }
    CHECK(chi3_cdf(1.0) == doctest::Approx(0.19874804309879915).epsilon(1e-11));
    // small-x branch: leading order sqrt(2/pi) x^3 / 3
    CHECK(chi3_cdf(1e-4) ==
          doctest::Approx(std::sqrt(2.0 / M_PI) * 1e-12 / 3.0).epsilon(1e-6));
}

TEST_CASE("chi-square survival function") {
    CHECK(chi2_sf(0.0, 5) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(chi2_sf(3.841458820694124, 1) == doctest::Approx(0.05).epsilon(1e-9));
    CHECK(chi2_sf(18.307038053275146, 10) == doctest::Approx(0.05).epsilon(1e-9));
    CHECK(chi2_sf(4.0, 4) > chi2_sf(5.0, 4));
    CHECK_THROWS_AS(chi2_sf(1.0, 0), std::domain_error);
}
