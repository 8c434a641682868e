#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nsc/oracle.hpp"
#include "nsc/verify.hpp"

using namespace nsc;

namespace {

OracleParams small_params() {
    OracleParams par;
    par.box_L = 1.5;
    par.n_axis = 7;
    par.n_times = 3;
    par.t_max = 0.3;
    par.sweeps = 3;
    par.n_w = 5;
    par.n_r = 14;
    par.n_mu = 6;
    par.n_phi = 6;
    par.workers = 2;
    return par;
}

}  // namespace

TEST_CASE("zero data fixed point is zero") {
    ProblemSpec spec;
    spec.nu = 1.0;
    spec.p = 0.5;
    spec.pair = make_h0_pair(1.0, 1.0);
    const FieldGrid f = picard_solve(spec, small_params());
    for (const Vec3& u : f.u) CHECK(norm(u) == 0.0);
}

TEST_CASE("field grid interpolation is exact on stored nodes") {
    const verify::ContractionFixture fx =
        verify::make_contraction_fixture(CascadeMode::Xi, false, true, 0.2);
    const OracleParams par = small_params();
    const FieldGrid f = picard_solve(fx.spec, par);
    const int it = 1, ix = 2, iy = 3, iz = 4;
    const Vec3 x{f.coord(ix), f.coord(iy), f.coord(iz)};
    const Vec3 u = f.eval(x, f.time_level(it));
    CHECK(norm(u - f.at(it, ix, iy, iz)) <= 1e-12);
    // outside the box the field vanishes
    CHECK(norm(f.eval(Vec3{10.0, 0.0, 0.0}, 0.1)) == 0.0);
}

TEST_CASE("linear regime: corrections beyond the heat term are second order") {
    const double delta = 1e-3;
    const verify::ContractionFixture fx =
        verify::make_contraction_fixture(CascadeMode::Xi, false, true, delta);
    std::vector<double> deltas;
    const FieldGrid f = picard_solve(fx.spec, small_params(), &deltas);
    REQUIRE(!deltas.empty());
    // first sweep installs the data term; later sweeps move it very little
    CHECK(deltas.back() <= 0.05 * deltas.front() + 1e-14);
    // the fixed point tracks the closed-form heat convolution
    const Vec3 x{0.5, 0.0, 0.0};
    const double t = 0.15;
    const Vec3 ref = fx.spec.u0_heat_conv(x, t);
    const Vec3 got = f.eval(x, t);
    CHECK(norm(got - ref) <= 0.05 * norm(ref) + 1e-12);
}

TEST_CASE("mc agrees with the comparator on zero data") {
    ProblemSpec spec;
    spec.nu = 1.0;
    spec.p = 0.5;
    spec.pair = make_h0_pair(1.0, 1.0);
    const FieldGrid f = picard_solve(spec, small_params());
    const OracleCompareReport rep = compare_mc_oracle(
        {{{0.5, 0.0, 0.0}, 0.2}, {{0.0, 0.6, 0.3}, 0.3}}, spec, f, 1e-12, 200, 1, 2);
    CHECK(rep.all_pass);
    for (const auto& row : rep.rows) CHECK(norm(row.u_mc - row.u_oracle) == 0.0);
}

TEST_CASE("fourier transform of the tensor kernel") {
    const verify::CheckResult r = verify::check_gamma_fourier(2);
    INFO(r.detail);
    CHECK(r.pass);
}
