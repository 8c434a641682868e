#include "nsc/oracle.hpp"

#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

#include "nsc/heat.hpp"

namespace nsc {
namespace {

struct Quad1 {
    std::vector<double> x, w;
};

/// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
Quad1 gauss_legendre(int n) {
    Quad1 q;
    q.x.resize(n);
    q.w.resize(n);
    for (int i = 0; i < n; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::fabs(dz) < 1e-15) break;
        }
        q.x[i] = z;
        q.w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
    return q;
}

Quad1 gl_on(int n, double a, double b) {
    Quad1 q = gauss_legendre(n);
    for (int i = 0; i < n; ++i) {
        q.x[i] = 0.5 * (a + b) + 0.5 * (b - a) * q.x[i];
        q.w[i] *= 0.5 * (b - a);
    }
    return q;
}

/// b2 weight K(r,2vs)/r - 3 ball(r,vs)/(4 pi r^4); the two terms cancel to
/// O(x^2) at x = r/sqrt(2vs) -> 0, so a series branch avoids the blow-up.
double f2_weight(double r, double nu_s) {
    const double tt = 2.0 * nu_s;
    const double x = r / std::sqrt(tt);
    const double pref = 1.0 / (r * std::pow(2.0 * M_PI * tt, 1.5));
    if (x < 0.1) {
        const double x2 = x * x;
        return pref * x2 * (-0.2 + x2 * (1.0 / 14.0 - x2 / 72.0));
    }
    return heat_kernel_r(r, tt) / r - 3.0 * ball_mass(r, nu_s) / (4.0 * M_PI * r * r * r * r);
}

void parallel_for(int n, int workers, const std::function<void(int)>& body) {
    if (workers < 2 || n < 2) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    const int nw = std::min(workers, n);
    std::vector<std::exception_ptr> errors(nw);
    std::vector<std::thread> pool;
    for (int w = 0; w < nw; ++w)
        pool.emplace_back([&, w]() {
            try {
                for (int i = w; i < n; i += nw) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace

Vec3 FieldGrid::eval(const Vec3& x, double t) const {
    if (t <= 0.0) t = 0.0;
    const double dt = t_max / (n_times - 1);
    int jt = static_cast<int>(t / dt);
    if (jt >= n_times - 1) jt = n_times - 2;
    const double ft = std::min(1.0, std::max(0.0, t / dt - jt));

    const double step = 2.0 * box_L / (n_axis - 1);
    const double gx = (x.x1 + box_L) / step;
    const double gy = (x.x2 + box_L) / step;
    const double gz = (x.x3 + box_L) / step;
    if (gx < 0.0 || gy < 0.0 || gz < 0.0 || gx > n_axis - 1 || gy > n_axis - 1 ||
        gz > n_axis - 1)
        return {};
    const int ix = std::min(static_cast<int>(gx), n_axis - 2);
    const int iy = std::min(static_cast<int>(gy), n_axis - 2);
    const int iz = std::min(static_cast<int>(gz), n_axis - 2);
    const double fx = gx - ix, fy = gy - iy, fz = gz - iz;

    Vec3 lvl[2];
    for (int k = 0; k < 2; ++k) {
        const int it = jt + k;
        Vec3 acc{};
        for (int dz = 0; dz < 2; ++dz)
            for (int dy = 0; dy < 2; ++dy)
                for (int dx = 0; dx < 2; ++dx) {
                    const double wgt = (dx ? fx : 1.0 - fx) * (dy ? fy : 1.0 - fy) *
                                       (dz ? fz : 1.0 - fz);
                    acc += wgt * at(it, ix + dx, iy + dy, iz + dz);
                }
        lvl[k] = acc;
    }
    return (1.0 - ft) * lvl[0] + ft * lvl[1];
}

FieldGrid picard_solve(const ProblemSpec& spec, const OracleParams& par,
                       std::vector<double>* sweep_deltas) {
    if (par.n_axis < 3 || par.n_times < 2 || !(par.t_max > 0.0) || !(par.box_L > 0.0))
        throw std::domain_error("picard_solve: bad grid parameters");
    const double nu = spec.nu;

    FieldGrid grid;
    grid.box_L = par.box_L;
    grid.n_axis = par.n_axis;
    grid.n_times = par.n_times;
    grid.t_max = par.t_max;
    const int na = par.n_axis, nt = par.n_times;
    grid.u.assign(static_cast<std::size_t>(nt) * na * na * na, Vec3{});

    const auto u0_at = [&](const Vec3& x) -> Vec3 {
        return spec.u0 ? spec.u0(x) : Vec3{};
    };
    const auto conv_at = [&](const Vec3& x, double t) -> Vec3 {
        return spec.u0_heat_conv ? spec.u0_heat_conv(x, t) : Vec3{};
    };
    const bool has_g = static_cast<bool>(spec.phi) && spec.pair.has_forcing();
    const auto g_at = [&](const Vec3& x, double t) -> Vec3 {
        const double ht = spec.pair.h_tilde_at(x);
        if (!std::isfinite(ht)) return {};  // admissible g vanishes at poles of h~
        return ht * spec.phi(x, t);
    };

    // quadrature skeletons
    const Quad1 qmu = gauss_legendre(par.n_mu);
    const Quad1 qr = gl_on(par.n_r, std::log(par.r_min), std::log(par.r_max));
    const double wphi = 2.0 * M_PI / par.n_phi;

    struct Angle {
        Vec3 dir;
        double w;
    };
    std::vector<Angle> angles;
    for (int im = 0; im < par.n_mu; ++im)
        for (int ip = 0; ip < par.n_phi; ++ip) {
            const double mu = qmu.x[im];
            const double s = std::sqrt(std::max(0.0, 1.0 - mu * mu));
            const double ph = wphi * (ip + 0.5);
            angles.push_back({{s * std::cos(ph), s * std::sin(ph), mu}, qmu.w[im] * wphi});
        }

    const int n_nodes = na * na * na;
    const auto node_xyz = [&](int idx) -> Vec3 {
        const int ix = idx % na, iy = (idx / na) % na, iz = idx / (na * na);
        return {grid.coord(ix), grid.coord(iy), grid.coord(iz)};
    };

    // level 0: initial data
    for (int idx = 0; idx < n_nodes; ++idx) {
        const int ix = idx % na, iy = (idx / na) % na, iz = idx / (na * na);
        grid.at(0, ix, iy, iz) = u0_at(node_xyz(idx));
    }

    // fixed part: heat term + forcing integral (independent of the iterate)
    std::vector<Vec3> base(static_cast<std::size_t>(nt) * n_nodes, Vec3{});
    parallel_for((nt - 1) * n_nodes, par.workers, [&](int flat) {
        const int jt = 1 + flat / n_nodes;
        const int idx = flat % n_nodes;
        const Vec3 x = node_xyz(idx);
        const double t = grid.time_level(jt);
        Vec3 acc = conv_at(x, t);
        if (has_g) {
            const Quad1 qw = gl_on(par.n_w, 0.0, std::sqrt(t));
            for (int iw = 0; iw < par.n_w; ++iw) {
                const double w = qw.x[iw];
                const double s = w * w;
                const double ws = qw.w[iw] * 2.0 * w;
                if (!(s > 0.0)) continue;
                for (int ir = 0; ir < par.n_r; ++ir) {
                    const double r = std::exp(qr.x[ir]);
                    const double wr = qr.w[ir] * r * r * r;  // log substitution + r^2
                    const double cK = heat_kernel_r(r, 2.0 * nu * s);
                    const double cB = ball_mass(r, nu * s) / (4.0 * M_PI * r * r * r);
                    if (cK < 1e-300 && cB < 1e-300) continue;
                    Vec3 inner{};
                    for (const Angle& an : angles) {
                        const Vec3 z = r * an.dir;
                        const Vec3 g = g_at(x - z, t - s);
                        const double ge = dot(g, an.dir);
                        // cK P_z g - cB (I - 3 e e^t) g
                        inner += an.w * ((cK - cB) * g + (3.0 * cB - cK) * ge * an.dir);
                    }
                    acc += (ws * wr) * inner;
                }
            }
        }
        base[static_cast<std::size_t>(jt) * n_nodes + idx] = acc;
    });

    for (int jt = 1; jt < nt; ++jt)
        for (int idx = 0; idx < n_nodes; ++idx) {
            const int ix = idx % na, iy = (idx / na) % na, iz = idx / (na * na);
            grid.at(jt, ix, iy, iz) = base[static_cast<std::size_t>(jt) * n_nodes + idx];
        }

    // Picard sweeps (Jacobi: read prev, write next)
    FieldGrid next = grid;
    int growth_streak = 0;
    double prev_delta = -1.0;
    for (int sweep = 0; sweep < par.sweeps; ++sweep) {
        parallel_for((nt - 1) * n_nodes, par.workers, [&](int flat) {
            const int jt = 1 + flat / n_nodes;
            const int idx = flat % n_nodes;
            const Vec3 x = node_xyz(idx);
            const double t = grid.time_level(jt);
            Vec3 acc = base[static_cast<std::size_t>(jt) * n_nodes + idx];
            const Quad1 qw = gl_on(par.n_w, 0.0, std::sqrt(t));
            for (int iw = 0; iw < par.n_w; ++iw) {
                const double w = qw.x[iw];
                const double s = w * w;
                const double ws = qw.w[iw] * 2.0 * w;
                if (!(s > 0.0)) continue;
                const double tt = 2.0 * nu * s;
                for (int ir = 0; ir < par.n_r; ++ir) {
                    const double r = std::exp(qr.x[ir]);
                    const double wr = qr.w[ir] * r * r * r;
                    const double c1 = r * heat_kernel_r(r, tt) / (4.0 * nu * s);
                    const double c2 = f2_weight(r, nu * s);
                    if (std::fabs(c1) < 1e-300 && std::fabs(c2) < 1e-300) continue;
                    Vec3 inner{};
                    for (const Angle& an : angles) {
                        const Vec3 z = r * an.dir;
                        const Vec3 uv = grid.eval(x - z, t - s);
                        if (uv.x1 == 0.0 && uv.x2 == 0.0 && uv.x3 == 0.0) continue;
                        const double ue = dot(uv, an.dir);
                        const Vec3 pu = uv - ue * an.dir;
                        // b1(z;u,u) = 2 ue P u; b2 adds (|u|^2 - 3 ue^2) e
                        inner += an.w * (((c1 + c2) * 2.0 * ue) * pu +
                                         (c2 * (dot(uv, uv) - 3.0 * ue * ue)) * an.dir);
                    }
                    acc += (ws * wr) * inner;
                }
            }
            const int ix = idx % na, iy = (idx / na) % na, iz = idx / (na * na);
            next.at(jt, ix, iy, iz) = acc;
        });

        double delta = 0.0;
        for (std::size_t i = static_cast<std::size_t>(n_nodes); i < grid.u.size(); ++i)
            delta = std::max(delta, norm(next.u[i] - grid.u[i]));
        grid.u = next.u;
        if (sweep_deltas) sweep_deltas->push_back(delta);
        if (prev_delta >= 0.0) {
            growth_streak = (delta > prev_delta) ? growth_streak + 1 : 0;
            if (growth_streak >= 3)
                throw std::runtime_error("picard_solve: iteration diverging (3 growing sweeps)");
        }
        prev_delta = delta;
    }
    return grid;
}

OracleCompareReport compare_mc_oracle(const std::vector<GridPoint>& points,
                                      const ProblemSpec& spec, const FieldGrid& field,
                                      double oracle_tol, std::int64_t n,
                                      std::uint64_t seed, int workers) {
    OracleCompareReport rep;
    const std::vector<EstimateReport> est = grid_evaluate(points, spec, n, seed, workers);
    for (std::size_t i = 0; i < points.size(); ++i) {
        ProbeComparison row;
        row.pt = points[i];
        row.u_mc = est[i].u;
        row.se_mc = est[i].se;
        row.u_oracle = field.eval(points[i].x, points[i].t);
        const Vec3 d = row.u_mc - row.u_oracle;
        row.pass = std::fabs(d.x1) <= 3.0 * est[i].se.x1 + oracle_tol &&
                   std::fabs(d.x2) <= 3.0 * est[i].se.x2 + oracle_tol &&
                   std::fabs(d.x3) <= 3.0 * est[i].se.x3 + oracle_tol;
        rep.all_pass = rep.all_pass && row.pass;
        rep.rows.push_back(row);
    }
    return rep;
}

Mat3 gamma_kernel_fourier(const Vec3& x, double s, double nu, int n_r, int n_ang) {
    if (!(s > 0.0 && nu > 0.0)) throw std::domain_error("gamma_kernel_fourier: need s, nu > 0");
    const double R = 8.0 / std::sqrt(nu * s);
    const Quad1 qr = gl_on(n_r, 0.0, R);
    const Quad1 qmu = gauss_legendre(n_ang);
    const double wphi = 2.0 * M_PI / n_ang;
    Mat3 acc;
    for (int ir = 0; ir < n_r; ++ir) {
        const double rho = qr.x[ir];
        const double wr = qr.w[ir] * rho * rho * std::exp(-nu * s * rho * rho);
        for (int im = 0; im < n_ang; ++im) {
            const double mu = qmu.x[im];
            const double sm = std::sqrt(std::max(0.0, 1.0 - mu * mu));
            for (int ip = 0; ip < n_ang; ++ip) {
                const double ph = wphi * (ip + 0.5);
                const Vec3 e{sm * std::cos(ph), sm * std::sin(ph), mu};
                const double wgt = wr * qmu.w[im] * wphi * std::cos(rho * dot(e, x));
                const Mat3 proj = Mat3::identity() - outer(e, e);
                acc = acc + proj * wgt;
            }
        }
    }
    const double c = 1.0 / std::pow(2.0 * M_PI, 3.0);
    return acc * c;
}

}  // namespace nsc
