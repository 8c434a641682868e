#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "nsc/estimator.hpp"
#include "nsc/verify.hpp"

using namespace nsc;

TEST_CASE("pairwise sum equals naive sum") {
    std::vector<Vec3> v;
    std::mt19937 gen(12);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    Vec3 naive{};
    for (int i = 0; i < 1001; ++i) {
        const Vec3 x{d(gen), d(gen), d(gen)};
        v.push_back(x);
        naive += x;
    }
    const Vec3 p = pairwise_sum(v);
    CHECK(norm(p - naive) <= 1e-10);
}

TEST_CASE("zero data estimates to exactly zero") {
    ProblemSpec spec;
    spec.nu = 1.0;
    spec.p = 0.5;
    spec.pair = make_h0_pair(1.0, 1.0);
    const EstimateReport rep = mc_estimate(Vec3{1.0, 0.0, 0.0}, 0.5, spec, 1000, 3, 2);
    CHECK(norm(rep.u) == 0.0);
    CHECK(norm(rep.se) == 0.0);
    CHECK(rep.n == 1000);
    CHECK_THROWS_AS(mc_estimate(Vec3{1.0, 0.0, 0.0}, 0.5, spec, 1, 3, 2),
                    std::domain_error);
}

TEST_CASE("report is bitwise independent of the worker count") {
    const verify::ContractionFixture fx =
        verify::make_contraction_fixture(CascadeMode::Xi, true);
    const EstimateReport a = mc_estimate(Vec3{0.8, 0.2, 0.0}, 0.4, fx.spec, 4000, 9, 1);
    const EstimateReport b = mc_estimate(Vec3{0.8, 0.2, 0.0}, 0.4, fx.spec, 4000, 9, 5);
    CHECK(a.u.x1 == b.u.x1);
    CHECK(a.u.x2 == b.u.x2);
    CHECK(a.u.x3 == b.u.x3);
    CHECK(a.se.x1 == b.se.x1);
    CHECK(a.truncated_fraction == b.truncated_fraction);
    CHECK(a.nodes_mean == b.nodes_mean);
}

TEST_CASE("grid reports survive permutation bit for bit") {
    const verify::ContractionFixture fx =
        verify::make_contraction_fixture(CascadeMode::Xi, false);
    std::vector<GridPoint> grid = {{{0.5, 0.0, 0.0}, 0.2},
                                   {{0.0, 0.9, 0.0}, 0.5},
                                   {{-0.4, 0.4, 0.4}, 0.3},
                                   {{1.1, 0.0, 0.2}, 0.4}};
    const auto a = grid_evaluate(grid, fx.spec, 2000, 5, 2);
    std::reverse(grid.begin(), grid.end());
    const auto b = grid_evaluate(grid, fx.spec, 2000, 5, 2);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& r = a[i];
        const auto& s = b[a.size() - 1 - i];
        CHECK(r.u.x1 == s.u.x1);
        CHECK(r.u.x2 == s.u.x2);
        CHECK(r.u.x3 == s.u.x3);
        CHECK(r.se.x3 == s.se.x3);
    }
    CHECK_THROWS_AS(grid_evaluate({}, fx.spec, 100, 1, 1), std::domain_error);
}

TEST_CASE("standard errors shrink like n^-1/2") {
    const verify::ContractionFixture fx =
        verify::make_contraction_fixture(CascadeMode::Xi, true);
    const Vec3 x{0.9, 0.0, 0.0};
    const EstimateReport small = mc_estimate(x, 0.5, fx.spec, 20000, 31, 1);
    const EstimateReport big = mc_estimate(x, 0.5, fx.spec, 80000, 32, 1);
    for (double ratio : {small.se.x1 / big.se.x1, small.se.x2 / big.se.x2}) {
        CHECK(ratio > 2.0 * 0.8);
        CHECK(ratio < 2.0 * 1.2);
    }
}

TEST_CASE("grid run completes with negligible truncation") {
    verify::ContractionFixture fx = verify::make_contraction_fixture(CascadeMode::Xi, true);
    fx.spec.p = 0.4;
    std::vector<GridPoint> grid;
    for (double x1 : {-0.8, 0.8})
        for (double x2 : {-0.6, 0.6})
            for (double t : {0.25, 0.5}) grid.push_back({{x1, x2, 0.3}, t});
    const auto reports = grid_evaluate(grid, fx.spec, 2000, 8, 2);
    for (const auto& r : reports) CHECK(r.truncated_fraction < 1e-3);
}

TEST_CASE("csv export shape and stability") {
    const verify::ContractionFixture fx =
        verify::make_contraction_fixture(CascadeMode::Xi, false);
    const std::vector<GridPoint> grid = {{{0.5, 0.0, 0.0}, 0.2}, {{0.0, 0.9, 0.0}, 0.5}};
    const auto reports = grid_evaluate(grid, fx.spec, 500, 2, 1);
    const std::string csv = field_csv(reports, "probe run");
    CHECK(csv.rfind("# probe run\n", 0) == 0);
    CHECK(csv.find("x1,x2,x3,t,u1,u2,u3,se1,se2,se3,n,trunc_frac\n") != std::string::npos);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);  // comment + header + 2 rows
    CHECK(csv == field_csv(grid_evaluate(grid, fx.spec, 500, 2, 3), "probe run"));
}
