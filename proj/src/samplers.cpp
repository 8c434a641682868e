#include "nsc/samplers.hpp"

#include <cmath>

#include "nsc/heat.hpp"
#include <limits>
#include <stdexcept>
#include <string>

namespace nsc {

SamplerStats& sampler_stats() {
    static SamplerStats stats;
    return stats;
}

int sample_kappa(double p, RngStream& rng) {
    if (!(p > 0.0 && p <= 0.5)) throw std::domain_error("sample_kappa: p must lie in (0, 1/2]");
    const double u = rng.next_double();
    if (u < p / 11.0) return 1;
    if (u < 5.0 * p / 11.0) return 2;
    if (u < p) return 3;
    if (u < p + 0.5 * (1.0 - p)) return 4;
    return 5;
}

double sample_tau1(double a, double nu, RngStream& rng) {
    if (!(a > 0.0 && nu > 0.0)) throw std::domain_error("sample_tau1: need a > 0, nu > 0");
    return a * a / (4.0 * nu * rng.next_gamma_half());
}

double sample_tau0(double a, double nu, RngStream& rng) {
    if (!(a > 0.0 && nu > 0.0)) throw std::domain_error("sample_tau0: need a > 0, nu > 0");
    return a * a / (4.0 * nu * rng.next_gamma_three_half());
}

Vec3 sample_uniform_dir(RngStream& rng) {
    const double mu = 2.0 * rng.next_double() - 1.0;
    const double phi = 2.0 * M_PI * rng.next_double();
    const double s = std::sqrt(std::max(0.0, 1.0 - mu * mu));
    return {s * std::cos(phi), s * std::sin(phi), mu};
}

Vec3 sample_Y_given_Z(const Vec3& z, RngStream& rng) {
    const double a = norm(z);
    if (!(a > 0.0)) throw std::domain_error("sample_Y_given_Z: zero z");
    // radial density proportional to r on (0, |z|)
    const double r = a * std::sqrt(rng.next_double_oc());
    return r * sample_uniform_dir(rng);
}

namespace {

constexpr std::uint64_t kProposalWindow = 10000;

/// Power-law radial segment: un-normalized radial density coeff * r^g on
/// (lo, hi), where g is the exponent after the r^2 volume factor is included.
struct PowSeg {
    double lo = 0.0, hi = 0.0, g = 0.0, coeff = 0.0;

    double mass() const {
        if (!(hi > lo) || coeff <= 0.0) return 0.0;
        if (g == -1.0) {
            if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
            return coeff * std::log(hi / lo);
        }
        const double gp = g + 1.0;
        const double top = std::pow(hi, gp);
        const double bot = lo > 0.0 ? std::pow(lo, gp) : (gp > 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
        return coeff * (top - bot) / gp;
    }

    double sample(double u) const {
        if (g == -1.0) return lo * std::pow(hi / lo, u);
        const double gp = g + 1.0;
        const double bot = lo > 0.0 ? std::pow(lo, gp) : 0.0;
        return std::pow(bot + u * (std::pow(hi, gp) - bot), 1.0 / gp);
    }
};

double bound_min(const RadialMajorant& M, double r) {
    double v = M.cap;
    if (r > 0.0) v = std::min(v, M.coeff * std::pow(r, -M.expo));
    return v;
}

// best bound on psi at distance >= r (the tail bound also applies there)
double bound_at_dist(const RadialMajorant& M, double r) {
    double v = bound_min(M, r);
    if (r > 0.0 && r >= M.tail_radius)
        v = std::min(v, M.tail_coeff * std::pow(r, -M.tail_expo));
    return v;
}

/// Split min(cap, coeff r^-expo) * r^(2-sigma) over (0, hi) into <= 2 power
/// segments.  Throws when the head is non-integrable.
void cap_power_segments(const RadialMajorant& M, double sigma, double hi,
                        PowSeg out[2], const char* who) {
    const bool capped = std::isfinite(M.cap) && M.cap > 0.0;
    double split = capped ? std::pow(M.coeff / M.cap, 1.0 / M.expo) : 0.0;
    split = std::min(split, hi);
    out[0] = PowSeg{0.0, split, 2.0 - sigma, M.cap};
    out[1] = PowSeg{split, hi, 2.0 - sigma - M.expo, M.coeff};
    if (!capped && 2.0 - sigma - M.expo <= -1.0)
        throw std::domain_error(std::string(who) +
                                ": target density is not normalizable at the origin");
}

}  // namespace

Vec3 sample_radial_pair_target(double sigma, const Vec3& x,
                               const std::function<double(const Vec3&)>& psi,
                               const RadialMajorant& M, RngStream& rng) {
    const double a = norm(x);
    SamplerStats& stats = sampler_stats();

    if (a < kZeroNormGuard) {
        // degenerate center: |z|^-sigma psi(-z) is radial
        PowSeg segs[3];
        const double R0 = std::max({1.0, M.tail_radius, std::isfinite(M.cap) && M.cap > 0.0
                                        ? std::pow(M.coeff / M.cap, 1.0 / M.expo) : 0.0});
        cap_power_segments(M, sigma, R0, segs, "sample_radial_pair_target");
        const double q = M.tail_expo;
        if (!(sigma + q > 3.0))
            throw std::domain_error("sample_radial_pair_target: tail not integrable");
        segs[2] = PowSeg{R0, std::numeric_limits<double>::infinity(), 2.0 - sigma - q, M.tail_coeff};
        // explicit tail mass: coeff * R0^(g+1)/(-(g+1))
        double mass[3] = {segs[0].mass(), segs[1].mass(),
                          M.tail_coeff * std::pow(R0, 3.0 - sigma - q) / (sigma + q - 3.0)};
        const double total = mass[0] + mass[1] + mass[2];
        if (!(total > 0.0 && std::isfinite(total)))
            throw std::domain_error("sample_radial_pair_target: bad envelope mass");
        for (std::uint64_t it = 0; it < kProposalWindow; ++it) {
            stats.proposals.fetch_add(1, std::memory_order_relaxed);
            const double pick = rng.next_double() * total;
            double r;
            if (pick < mass[0]) {
                r = segs[0].sample(rng.next_double_oc());
            } else if (pick < mass[0] + mass[1]) {
                r = segs[1].sample(rng.next_double_oc());
            } else {
                r = R0 * std::pow(rng.next_double_oc(), -1.0 / (sigma + q - 3.0));
            }
            if (!(r > 0.0) || !std::isfinite(r)) continue;
            double env = std::pow(r, -sigma) *
                         (r <= R0 ? bound_min(M, r) : M.tail_coeff * std::pow(r, -q));
            const Vec3 z = r * sample_uniform_dir(rng);
            const double target = std::pow(r, -sigma) * psi(x - z);
            if (rng.next_double() * env <= target) {
                stats.accepts.fetch_add(1, std::memory_order_relaxed);
                return z;
            }
        }
        throw std::runtime_error("sampler-health: rejection acceptance collapsed (radial branch)");
    }

    const double d = 0.5 * a;
    const double q = M.tail_expo;
    if (!(sigma + q > 3.0))
        throw std::domain_error("sample_radial_pair_target: tail not integrable");
    if (!(sigma < 3.0))
        throw std::domain_error("sample_radial_pair_target: sigma must be < 3");

    // Three regions, each with an envelope whose mass tracks the target mass
    // whether |x| is tiny or huge:
    //   A: |z| < 3d          envelope bound_at_dist(M, d) * |z|^-sigma
    //                        (any z there has |x-z| >= d or falls under B)
    //   B: |x-z| < d         weight d^-sigma, radial law min(cap, head, tail)
    //                        in the distance from x
    //   C: |z| >= 3d         |x-z| >= |z|/3, so |z|^-sigma times the majorant
    //                        evaluated at |z|/3
    const double bmax1 = bound_at_dist(M, d);
    if (!std::isfinite(bmax1))
        throw std::domain_error("sample_radial_pair_target: majorant cap and coeff both infinite");

    const bool capped = std::isfinite(M.cap) && M.cap > 0.0;
    const double s_cap = capped ? std::pow(M.coeff / M.cap, 1.0 / M.expo) : 0.0;
    // beyond s_tail the tail bound is valid and at least as sharp as the head
    const double s_tail = q > M.expo
        ? std::max({M.tail_radius, s_cap,
                    std::pow(M.tail_coeff / M.coeff, 1.0 / (q - M.expo))})
        : std::numeric_limits<double>::infinity();

    struct Piece {
        PowSeg seg;
        bool at_x;
    };
    Piece pieces[7];
    int np = 0;
    const double w2 = std::pow(d, -sigma);

    // region A
    pieces[np++] = {PowSeg{0.0, 3.0 * d, 2.0 - sigma, bmax1}, false};

    // region B
    const double s2 = std::min(d, s_tail);
    const double cap_hi2 = capped ? std::min(s_cap, s2) : 0.0;
    if (capped && cap_hi2 > 0.0)
        pieces[np++] = {PowSeg{0.0, cap_hi2, 2.0, M.cap * w2}, true};
    if (s2 > cap_hi2)
        pieces[np++] = {PowSeg{cap_hi2, s2, 2.0 - M.expo, M.coeff * w2}, true};
    if (s2 < d)
        pieces[np++] = {PowSeg{s2, d, 2.0 - q, M.tail_coeff * w2}, true};

    // region C
    const double inf = std::numeric_limits<double>::infinity();
    const double R4 = std::isfinite(s_tail) ? std::max(3.0 * d, 3.0 * s_tail) : inf;
    const double cap_hi3 =
        capped ? std::min(std::max(3.0 * s_cap, 3.0 * d), R4) : 3.0 * d;
    if (capped && cap_hi3 > 3.0 * d)
        pieces[np++] = {PowSeg{3.0 * d, cap_hi3, 2.0 - sigma, M.cap}, false};
    if (R4 > cap_hi3) {
        // with an unbounded head range, sigma + q > 3 and q <= expo force
        // sigma + expo > 3, so the mass is finite
        pieces[np++] = {PowSeg{cap_hi3, R4, 2.0 - sigma - M.expo,
                               M.coeff * std::pow(3.0, M.expo)}, false};
    }
    if (std::isfinite(R4))
        pieces[np++] = {PowSeg{R4, inf, 2.0 - sigma - q,
                               M.tail_coeff * std::pow(3.0, q)}, false};

    double mass[7];
    double total = 0.0;
    for (int i = 0; i < np; ++i) {
        mass[i] = 4.0 * M_PI * pieces[i].seg.mass();
        total += mass[i];
    }
    if (!(total > 0.0 && std::isfinite(total)))
        throw std::domain_error("sample_radial_pair_target: bad envelope mass");

    const auto env_total = [&](double r, double rw) {
        double e = 0.0;
        if (r < 3.0 * d) {
            e += bmax1 * std::pow(r, -sigma);
        } else if (capped && r < cap_hi3) {
            e += M.cap * std::pow(r, -sigma);
        } else if (r <= R4) {
            e += M.coeff * std::pow(3.0, M.expo) * std::pow(r, -sigma - M.expo);
        } else {
            e += M.tail_coeff * std::pow(3.0, q) * std::pow(r, -sigma - q);
        }
        if (rw < d) {
            if (capped && rw < cap_hi2)
                e += w2 * M.cap;
            else if (rw <= s2)
                e += w2 * M.coeff * std::pow(rw, -M.expo);
            else
                e += w2 * M.tail_coeff * std::pow(rw, -q);
        }
        return e;
    };

    for (std::uint64_t it = 0; it < kProposalWindow; ++it) {
        stats.proposals.fetch_add(1, std::memory_order_relaxed);
        double pick = rng.next_double() * total;
        int i = 0;
        while (i + 1 < np && pick >= mass[i]) pick -= mass[i], ++i;
        const double rho = pieces[i].seg.sample(rng.next_double_oc());
        if (!(rho > 0.0) || !std::isfinite(rho)) continue;
        const Vec3 dir = sample_uniform_dir(rng);
        const Vec3 z = pieces[i].at_x ? x - rho * dir : rho * dir;
        const double r = norm(z), rw = norm(x - z);
        if (!(r > 0.0) || !std::isfinite(r) || rw < kZeroNormGuard) continue;
        const double target = std::pow(r, -sigma) * psi(x - z);
        if (rng.next_double() * env_total(r, rw) <= target) {
            stats.accepts.fetch_add(1, std::memory_order_relaxed);
            return z;
        }
    }
    throw std::runtime_error(
        "sampler-health: rejection acceptance collapsed (sigma=" +
        std::to_string(sigma) + ", |x|=" + std::to_string(a) + ")");
}

Vec3 sample_weighted_heat_endpoint(const Vec3& x, double two_nu_t,
                                   const std::function<double(const Vec3&)>& psi,
                                   const RadialMajorant& M, RngStream& rng) {
    if (!(two_nu_t > 0.0)) throw std::domain_error("sample_weighted_heat_endpoint: need t > 0");
    const double a = norm(x);
    const double sd = std::sqrt(two_nu_t);
    SamplerStats& stats = sampler_stats();

    // piece 1: |y| < d1, envelope Kmax * min(cap, coeff |y|^-expo).
    // d1 never shrinks below sd/2, else the Gaussian piece's weight
    // bound_min(M, d1) blows up near the origin while the target mass does not
    const double d1 = std::max(0.5 * a, 0.5 * sd);
    const double gap = std::max(0.0, a - d1);
    const double kmax = heat_kernel_r(gap, two_nu_t);
    PowSeg seg1[2];
    cap_power_segments(M, 0.0, d1, seg1, "sample_weighted_heat_endpoint");
    const double m1a = seg1[0].mass(), m1b = seg1[1].mass();
    const double mass1 = 4.0 * M_PI * kmax * (m1a + m1b);

    // piece 2: envelope bound_min(d1) * K(x-y, 2 nu t), a Gaussian about x
    const double b2v = bound_min(M, d1);
    if (!std::isfinite(b2v))
        throw std::domain_error("sample_weighted_heat_endpoint: majorant unbounded away from 0");
    const double mass2 = b2v;  // heat kernel has unit mass

    const double total = mass1 + mass2;
    if (!(total > 0.0 && std::isfinite(total)))
        throw std::domain_error("sample_weighted_heat_endpoint: bad envelope mass");

    for (std::uint64_t it = 0; it < kProposalWindow; ++it) {
        stats.proposals.fetch_add(1, std::memory_order_relaxed);
        Vec3 y;
        if (rng.next_double() * total < mass1) {
            const double u = rng.next_double() * (m1a + m1b);
            const double r = (u < m1a) ? seg1[0].sample(rng.next_double_oc())
                                       : seg1[1].sample(rng.next_double_oc());
            y = r * sample_uniform_dir(rng);
        } else {
            y = x + sd * Vec3{rng.next_normal(), rng.next_normal(), rng.next_normal()};
        }
        const double r = norm(y);
        if (!(r > 0.0) || !std::isfinite(r)) continue;
        double env = b2v * heat_kernel(y - x, two_nu_t);
        if (r < d1) env += kmax * bound_min(M, r);
        const double target = psi(y) * heat_kernel(y - x, two_nu_t);
        if (rng.next_double() * env <= target) {
            stats.accepts.fetch_add(1, std::memory_order_relaxed);
            return y;
        }
    }
    throw std::runtime_error("sampler-health: heat-endpoint rejection collapsed");
}

Vec3 sample_Z(const Vec3& x, const KernelPair& pair, ZBranch branch, RngStream& rng) {
    const ZSampler& hook = branch == ZBranch::Bilinear ? pair.z_bilinear : pair.z_forcing;
    if (!hook)
        throw std::domain_error("sample_Z: kernel pair '" + pair.name +
                                "' has no sampler for this branch");
    return hook(x, rng);
}

HbmEndpoint sample_hbm_endpoint(const Vec3& x, double t, const KernelPair& pair,
                                double nu, RngStream& rng) {
    if (!pair.excessive)
        throw std::domain_error("sample_hbm_endpoint: pair '" + pair.name + "' is not excessive");
    if (!pair.hbm)
        throw std::domain_error("sample_hbm_endpoint: pair '" + pair.name + "' has no endpoint sampler");
    if (!(t > 0.0 && nu > 0.0)) throw std::domain_error("sample_hbm_endpoint: need t > 0, nu > 0");
    return pair.hbm(x, nu * t, rng);
}

}  // namespace nsc
