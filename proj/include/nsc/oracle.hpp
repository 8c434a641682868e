#pragma once

#include <cstdint>
#include <vector>

#include "nsc/cascade.hpp"
#include "nsc/estimator.hpp"

namespace nsc {

/// Grid and quadrature resolution for the fixed-point solver.  Desk scale:
/// a comparator for catching representation bugs, not a production solver.
struct OracleParams {
    double box_L = 2.0;   // Cartesian box [-L, L]^3
    int n_axis = 13;      // nodes per axis (odd keeps the origin on-grid)
    int n_times = 4;      // time levels including t = 0
    double t_max = 0.5;
    int sweeps = 5;
    int n_w = 8;          // nodes in w = sqrt(s) for the time integral
    int n_r = 32;         // log-radial nodes for the z integral
    int n_mu = 8;         // polar nodes
    int n_phi = 8;        // azimuthal nodes
    double r_min = 1e-3;
    double r_max = 12.0;
    int workers = 4;
};

/// Space-time velocity field on a Cartesian box; trilinear in space and
/// linear in time between stored levels, zero outside the box.
struct FieldGrid {
    double box_L = 0.0;
    int n_axis = 0;
    int n_times = 0;
    double t_max = 0.0;
    std::vector<Vec3> u;  // [time][iz][iy][ix]

    Vec3& at(int it, int ix, int iy, int iz) {
        return u[((static_cast<std::size_t>(it) * n_axis + iz) * n_axis + iy) * n_axis + ix];
    }
    const Vec3& at(int it, int ix, int iy, int iz) const {
        return u[((static_cast<std::size_t>(it) * n_axis + iz) * n_axis + iy) * n_axis + ix];
    }
    double coord(int i) const { return -box_L + 2.0 * box_L * i / (n_axis - 1); }
    double time_level(int j) const { return t_max * j / (n_times - 1); }
    Vec3 eval(const Vec3& x, double t) const;
};

/// Picard iteration of the integral equation
///   u = u0 * K(., 2 nu t) + int_0^t int (b1, b2, forcing-tensor) terms,
/// Jacobi sweeps on the grid.  sweep_deltas (optional) receives the sup-norm
/// change per sweep; three consecutive growth ratios > 1 abort with a
/// contraction-violation error.
FieldGrid picard_solve(const ProblemSpec& spec, const OracleParams& par,
                       std::vector<double>* sweep_deltas = nullptr);

struct ProbeComparison {
    GridPoint pt;
    Vec3 u_mc, se_mc, u_oracle;
    bool pass = false;
};

struct OracleCompareReport {
    std::vector<ProbeComparison> rows;
    bool all_pass = true;
};

/// Per component: |u_mc - u_oracle| <= 3 se_mc + oracle_tol.
OracleCompareReport compare_mc_oracle(const std::vector<GridPoint>& points,
                                      const ProblemSpec& spec, const FieldGrid& field,
                                      double oracle_tol, std::int64_t n,
                                      std::uint64_t seed, int workers);

/// Fourier-side check value: (2 pi)^-3 int cos(xi . x) e^(-nu s |xi|^2) (I - e e^t) dxi.
Mat3 gamma_kernel_fourier(const Vec3& x, double s, double nu, int n_r = 64, int n_ang = 24);

}  // namespace nsc
