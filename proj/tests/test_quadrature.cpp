#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nsc/quadrature.hpp"

using namespace nsc;

TEST_CASE("adaptive rule on closed forms") {
    CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(integrate([](double x) { return std::sin(x); }, 0.0, M_PI) ==
          doctest::Approx(2.0).epsilon(1e-12));
    // mild endpoint singularity
    CHECK(integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-10) ==
          doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("log substitution handles power features") {
    CHECK(integrate_log([](double r) { return 1.0 / r; }, 1e-8, 1.0) ==
          doctest::Approx(std::log(1e8)).epsilon(1e-10));
    CHECK_THROWS_AS(integrate_log([](double) { return 1.0; }, 0.0, 1.0),
                    std::domain_error);
}

TEST_CASE("half-line integrals") {
    CHECK(integrate_to_inf([](double r) { return std::exp(-r); }, 0.5) ==
          doctest::Approx(std::exp(-0.5)).epsilon(1e-10));
    CHECK(integrate_to_inf([](double r) { return 1.0 / (r * r * r); }, 2.0) ==
          doctest::Approx(0.125).epsilon(1e-9));
}

TEST_CASE("radial pair integral closed forms") {
    // int |y|^-2 |x-y|^-2 dy = pi^3 / |x|
    for (double a : {0.3, 1.0, 4.0}) {
        const double q = radial_pair_integral([](double r) { return 1.0 / (r * r); },
                                              [](double r) { return 1.0 / (r * r); }, a,
                                              1e-8);
        CHECK(q == doctest::Approx(M_PI * M_PI * M_PI / a).epsilon(1e-6));
    }
    // convolution of two unit Gaussians is a variance-2 Gaussian at x
    const double t1 = 1.0;
    const double q = radial_pair_integral(
        [&](double r) { return std::exp(-r * r / (2.0 * t1)) / std::pow(2.0 * M_PI * t1, 1.5); },
        [&](double r) { return std::exp(-r * r / (2.0 * t1)) / std::pow(2.0 * M_PI * t1, 1.5); },
        1.3, 1e-9);
    const double ref = std::exp(-1.3 * 1.3 / 4.0) / std::pow(4.0 * M_PI, 1.5);
    CHECK(q == doctest::Approx(ref).epsilon(1e-7));
}

TEST_CASE("bin masses partition the pair integral") {
    const double a = 0.8;
    auto w = [](double r) { return 1.0 / (r * r); };
    auto psi = [](double r) { return std::exp(-r * r); };
    const double total = radial_pair_integral(w, psi, a, 1e-9);
    const double r_edges[] = {0.0, 0.5, 1.0, 2.0, 12.0};
    const double mu_edges[] = {-1.0, 0.0, 0.7, 1.0};
    double sum = 0.0;
    for (int i = 0; i + 1 < 5; ++i)
        for (int j = 0; j + 1 < 4; ++j)
            sum += radial_pair_bin_mass(w, psi, a, r_edges[i], r_edges[i + 1],
                                        mu_edges[j], mu_edges[j + 1]);
    CHECK(sum == doctest::Approx(total).epsilon(1e-5));
}

TEST_CASE("degenerate center reduces to a radial integral") {
    auto w = [](double r) { return 1.0 / r; };
    auto psi = [](double r) { return std::exp(-r); };
    const double direct =
        integrate([&](double r) { return 4.0 * M_PI * r * r * w(r) * psi(r); }, 0.0, 60.0,
                  1e-11);
    const double m = radial_pair_bin_mass(w, psi, 0.0, 0.0, 60.0, -1.0, 1.0);
    CHECK(m == doctest::Approx(direct).epsilon(1e-6));
}
