#include "nsc/kernels.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "nsc/heat.hpp"
#include "nsc/quadrature.hpp"
#include "nsc/samplers.hpp"
#include "nsc/special.hpp"

namespace nsc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// int w(|y|) psi(|x-y|) dy with the degenerate |x| = 0 branch.
double radial_conv_at(const Fn1& w, const Fn1& psi, double a, double rel_tol = 1e-6) {
    if (a < 1e-12) {
        const auto g = [&](double r) { return r * r * w(r) * psi(r); };
        return 4.0 * M_PI * (integrate_log(g, 1e-12, 1.0, rel_tol) +
                             integrate_to_inf(g, 1.0, rel_tol));
    }
    return radial_pair_integral(w, psi, a, rel_tol);
}

double conv_sq_quad(const KernelPair& pair, double a) {
    if (!pair.h_radial)
        throw std::domain_error("cascade_multipliers: pair '" + pair.name +
                                "' has neither closed form nor radial profile");
    const Fn1 hr = pair.h_radial;
    return radial_conv_at([](double r) { return 1.0 / (r * r); },
                          [hr](double r) { const double v = hr(r); return v * v; }, a);
}

double conv_tilde_quad(const KernelPair& pair, double a) {
    if (!pair.ht_radial)
        throw std::domain_error("cascade_multipliers: pair '" + pair.name +
                                "' has neither closed form nor radial forcing profile");
    const Fn1 htr = pair.ht_radial;
    return radial_conv_at([](double r) { return 1.0 / r; }, htr, a);
}

RadialMajorant scale_majorant(const RadialMajorant& M, double c) {
    return {M.cap * c, M.coeff * c, M.expo, M.tail_coeff * c, M.tail_expo, M.tail_radius};
}

}  // namespace

ForcingProfile default_forcing_profile() {
    ForcingProfile prof;
    prof.f = [](double r) { const double s = 1.0 + r; return 1.0 / (r * r * s * s); };
    // r^-2 (1+r)^-2 <= r^-2 everywhere and <= r^-4 everywhere
    prof.major = {kInf, 1.0, 2.0, 1.0, 4.0, 0.0};
    // |x| int h~0(|x-y|) |y|^-1 dy = 4 pi int min(r,|x|) r h~0 dr = 4 pi |x| ln((1+|x|)/|x|)
    prof.conv_inv = [](double a) { return 4.0 * M_PI * std::log1p(1.0 / a); };
    prof.r2_integral = 1.0;  // int (1+r)^-2 dr
    return prof;
}

ForcingProfile smooth_forcing_profile() {
    ForcingProfile prof;
    prof.f = [](double r) { const double s = 1.0 + r * r; return 1.0 / (s * s * s); };
    // (1+r^2)^-3 <= min(1, (4/27) r^-2) and <= r^-6
    prof.major = {1.0, 4.0 / 27.0, 2.0, 1.0, 6.0, 0.0};
    // 4 pi/a [ int_0^a r^2 f + a int_a^inf r f ] collapses via
    // int r^2 (1+r^2)^-3 dr = r/(8(1+r^2)) + arctan(r)/8 - r/(4(1+r^2)^2)
    prof.conv_inv = [](double a) {
        if (a < 1e-8) return M_PI * (1.0 - 2.0 * a * a / 3.0);
        return 0.5 * M_PI * (1.0 / (1.0 + a * a) + std::atan(a) / a);
    };
    prof.r2_integral = M_PI / 16.0;
    return prof;
}

KernelPair make_h0_pair(double c_h, double c_ht) {
    return make_h0_pair(default_forcing_profile(), c_h, c_ht);
}

KernelPair make_h0_pair(const ForcingProfile& profile, double c_h, double c_ht) {
    if (!(c_h > 0.0) || !(c_ht >= 0.0))
        throw std::domain_error("make_h0_pair: need c_h > 0, c_ht >= 0");
    if (!profile.f) throw std::domain_error("make_h0_pair: missing forcing profile");

    double i2 = profile.r2_integral;
    if (i2 < 0.0) {
        const Fn1 f = profile.f;
        const auto g = [f](double r) { return r * r * f(r); };
        i2 = integrate_log(g, 1e-12, 1.0, 1e-8) + integrate_to_inf(g, 1.0, 1e-8);
    }
    if (!std::isfinite(i2) || i2 > 1e8)
        throw std::domain_error("make_h0_pair: divergent second moment of h_tilde_0");

    KernelPair pair;
    pair.name = "h0";
    pair.h = [c_h](const Vec3& x) { const double a = norm(x); return a > 0.0 ? c_h / a : kInf; };
    const Fn1 f = profile.f;
    pair.h_tilde = [c_ht, f](const Vec3& x) { return c_ht * f(norm(x)); };
    pair.gamma = c_h * M_PI * M_PI * M_PI;
    pair.gamma_tilde = (c_ht / c_h) * 4.0 * M_PI * i2;
    pair.excessive = true;
    pair.heat_ratio_M = 1.0;

    pair.conv_sq_invsq = [c_h](const Vec3& x) {
        return c_h * c_h * M_PI * M_PI * M_PI / norm(x);
    };
    if (profile.conv_inv) {
        const Fn1 ci = profile.conv_inv;
        pair.conv_tilde_inv = [c_ht, ci](const Vec3& x) { return c_ht * ci(norm(x)); };
    }
    // int |y|^-1 K(x-y, 2 nu t) dy = |x|^-1 erf(|x| / (2 sqrt(nu t)))
    pair.heat_conv = [c_h](const Vec3& x, double nu_t) {
        const double a = norm(x);
        if (a < 1e-300) return c_h * std::sqrt(2.0 / M_PI) / std::sqrt(2.0 * nu_t);
        return (c_h / a) * erf_(a / (2.0 * std::sqrt(nu_t)));
    };

    pair.h_radial = [c_h](double r) { return r > 0.0 ? c_h / r : kInf; };
    pair.ht_radial = [c_ht, f](double r) { return c_ht * f(r); };

    const RadialMajorant bil{kInf, c_h * c_h, 2.0, c_h * c_h, 2.0, 0.0};
    pair.z_bilinear = [c_h, bil](const Vec3& x, RngStream& rng) {
        return sample_radial_pair_target(
            2.0, x,
            [c_h](const Vec3& w) { return c_h * c_h / dot(w, w); }, bil, rng);
    };
    if (c_ht > 0.0) {
        const RadialMajorant forc = scale_majorant(profile.major, c_ht);
        pair.z_forcing = [c_ht, f, forc](const Vec3& x, RngStream& rng) {
            return sample_radial_pair_target(
                1.0, x,
                [c_ht, f](const Vec3& w) { return c_ht * f(norm(w)); }, forc, rng);
        };
    }
    const RadialMajorant hmaj{kInf, c_h, 1.0, c_h, 1.0, 0.0};
    pair.hbm = [c_h, hmaj](const Vec3& x, double nu_t, RngStream& rng) -> HbmEndpoint {
        const double a = norm(x);
        const double q = a > 0.0 ? erf_(a / (2.0 * std::sqrt(nu_t))) : 0.0;
        if (rng.next_double() >= q) return {x, true};
        const Vec3 y = sample_weighted_heat_endpoint(
            x, 2.0 * nu_t,
            [c_h](const Vec3& w) { const double r = norm(w); return r > 0.0 ? c_h / r : kInf; },
            hmaj, rng);
        return {y, false};
    };
    return pair;
}

KernelPair make_H_pair() {
    KernelPair pair;
    pair.name = "H";
    pair.h = [](const Vec3& x) { return 1.0 / (1.0 + dot(x, x)); };
    pair.gamma = M_PI * M_PI;
    pair.gamma_tilde = 0.0;
    pair.excessive = false;
    pair.heat_ratio_M = 1.0 + 3.0 * std::exp(-2.0 / 3.0);
    pair.conv_sq_invsq = [](const Vec3& x) {
        return M_PI * M_PI / (1.0 + dot(x, x));
    };
    pair.h_radial = [](double r) { return 1.0 / (1.0 + r * r); };
    // H^2 <= min(1, (1/4) r^-2) and H^2 <= r^-4
    const RadialMajorant bil{1.0, 0.25, 2.0, 1.0, 4.0, 0.0};
    pair.z_bilinear = [bil](const Vec3& x, RngStream& rng) {
        return sample_radial_pair_target(
            2.0, x,
            [](const Vec3& w) { const double v = 1.0 + dot(w, w); return 1.0 / (v * v); },
            bil, rng);
    };
    return pair;
}

KernelPair make_Hp_pair(double p) {
    if (!(p > 1.0 && p <= 2.0)) throw std::domain_error("make_Hp_pair: p must lie in (1, 2]");
    KernelPair pair;
    std::ostringstream name;
    name << "Hp(" << p << ")";
    pair.name = name.str();
    pair.h = [p](const Vec3& x) { return std::pow(1.0 + norm(x), -p); };
    pair.gamma = std::pow(M_PI, 4.0 - p) * std::pow(1.0 + 1.0 / std::sqrt(2.0), p - 1.0);
    pair.gamma_tilde = 0.0;
    pair.excessive = false;
    pair.heat_ratio_M =
        std::pow((1.0 + 3.0 * std::exp(-2.0 / 3.0)) * (1.0 + 1.0 / std::sqrt(2.0)), 0.5 * p);
    pair.h_radial = [p](double r) { return std::pow(1.0 + r, -p); };
    // sup r^2 (1+r)^-2p is attained at r = 1/(p-1)
    const double rhat = 1.0 / (p - 1.0);
    const double coeff = rhat * rhat * std::pow(1.0 + rhat, -2.0 * p);
    const RadialMajorant bil{1.0, coeff, 2.0, 1.0, 2.0 * p, 0.0};
    pair.z_bilinear = [p, bil](const Vec3& x, RngStream& rng) {
        return sample_radial_pair_target(
            2.0, x,
            [p](const Vec3& w) { return std::pow(1.0 + norm(w), -2.0 * p); }, bil, rng);
    };
    return pair;
}

KernelPair rescale_pair(const KernelPair& pair, double c1, double c2) {
    if (!(c1 > 0.0) || !(c2 >= 0.0))
        throw std::domain_error("rescale_pair: need c1 > 0, c2 >= 0");
    KernelPair out = pair;
    out.name = pair.name + "*c";
    const auto base_h = pair.h;
    out.h = [base_h, c1](const Vec3& x) { return c1 * base_h(x); };
    if (pair.h_tilde && c2 > 0.0) {
        const auto base_ht = pair.h_tilde;
        out.h_tilde = [base_ht, c2](const Vec3& x) { return c2 * base_ht(x); };
    } else {
        out.h_tilde = nullptr;
        out.z_forcing = nullptr;
    }
    out.gamma = c1 * pair.gamma;
    out.gamma_tilde = out.h_tilde ? (c2 / c1) * pair.gamma_tilde : 0.0;
    if (pair.conv_sq_invsq) {
        const auto base = pair.conv_sq_invsq;
        out.conv_sq_invsq = [base, c1](const Vec3& x) { return c1 * c1 * base(x); };
    }
    if (pair.conv_tilde_inv && out.h_tilde) {
        const auto base = pair.conv_tilde_inv;
        out.conv_tilde_inv = [base, c2](const Vec3& x) { return c2 * base(x); };
    } else {
        out.conv_tilde_inv = nullptr;
    }
    if (pair.heat_conv) {
        const auto base = pair.heat_conv;
        out.heat_conv = [base, c1](const Vec3& x, double nu_t) { return c1 * base(x, nu_t); };
    }
    if (pair.h_radial) {
        const auto base = pair.h_radial;
        out.h_radial = [base, c1](double r) { return c1 * base(r); };
    }
    if (pair.ht_radial && out.h_tilde) {
        const auto base = pair.ht_radial;
        out.ht_radial = [base, c2](double r) { return c2 * base(r); };
    } else {
        out.ht_radial = nullptr;
    }
    // constant rescaling leaves every sampler law unchanged
    return out;
}

KernelPair standardized(const KernelPair& pair) {
    const double c1 = 1.0 / pair.gamma;
    const double c2 = pair.gamma_tilde > 0.0 ? 1.0 / (pair.gamma * pair.gamma_tilde) : 0.0;
    KernelPair out = rescale_pair(pair, c1, c2);
    out.name = pair.name + "*std";
    return out;
}

KernelPair translate_pair(const KernelPair& pair, const Vec3& mu) {
    KernelPair out = pair;
    out.name = pair.name + "+mu";
    const auto sh = [mu](const Vec3& x) { return x - mu; };
    if (pair.h) { const auto b = pair.h; out.h = [b, sh](const Vec3& x) { return b(sh(x)); }; }
    if (pair.h_tilde) { const auto b = pair.h_tilde; out.h_tilde = [b, sh](const Vec3& x) { return b(sh(x)); }; }
    if (pair.conv_sq_invsq) { const auto b = pair.conv_sq_invsq; out.conv_sq_invsq = [b, sh](const Vec3& x) { return b(sh(x)); }; }
    if (pair.conv_tilde_inv) { const auto b = pair.conv_tilde_inv; out.conv_tilde_inv = [b, sh](const Vec3& x) { return b(sh(x)); }; }
    if (pair.heat_conv) {
        const auto b = pair.heat_conv;
        out.heat_conv = [b, sh](const Vec3& x, double nu_t) { return b(sh(x), nu_t); };
    }
    out.h_radial = nullptr;
    out.ht_radial = nullptr;
    if (pair.z_bilinear) {
        const auto b = pair.z_bilinear;
        out.z_bilinear = [b, sh](const Vec3& x, RngStream& rng) { return b(sh(x), rng); };
    }
    if (pair.z_forcing) {
        const auto b = pair.z_forcing;
        out.z_forcing = [b, sh](const Vec3& x, RngStream& rng) { return b(sh(x), rng); };
    }
    if (pair.hbm) {
        const auto b = pair.hbm;
        out.hbm = [b, sh, mu](const Vec3& x, double nu_t, RngStream& rng) {
            HbmEndpoint e = b(sh(x), nu_t, rng);
            if (!e.trapped) e.y += mu;
            return e;
        };
    }
    return out;
}

KernelPair scale_pair(const KernelPair& pair, double sigma) {
    if (!(sigma > 0.0)) throw std::domain_error("scale_pair: need sigma > 0");
    KernelPair out = pair;
    out.name = pair.name + "@s";
    const double s = sigma, s3 = sigma * sigma * sigma;
    if (pair.h) { const auto b = pair.h; out.h = [b, s](const Vec3& x) { return s * b(s * x); }; }
    if (pair.h_tilde) { const auto b = pair.h_tilde; out.h_tilde = [b, s, s3](const Vec3& x) { return s3 * b(s * x); }; }
    if (pair.conv_sq_invsq) { const auto b = pair.conv_sq_invsq; out.conv_sq_invsq = [b, s](const Vec3& x) { return s * b(s * x); }; }
    if (pair.conv_tilde_inv) { const auto b = pair.conv_tilde_inv; out.conv_tilde_inv = [b, s](const Vec3& x) { return s * b(s * x); }; }
    if (pair.heat_conv) {
        const auto b = pair.heat_conv;
        out.heat_conv = [b, s](const Vec3& x, double nu_t) { return s * b(s * x, s * s * nu_t); };
    }
    if (pair.h_radial) { const auto b = pair.h_radial; out.h_radial = [b, s](double r) { return s * b(s * r); }; }
    if (pair.ht_radial) { const auto b = pair.ht_radial; out.ht_radial = [b, s, s3](double r) { return s3 * b(s * r); }; }
    if (pair.z_bilinear) {
        const auto b = pair.z_bilinear;
        out.z_bilinear = [b, s](const Vec3& x, RngStream& rng) { return b(s * x, rng) / s; };
    }
    if (pair.z_forcing) {
        const auto b = pair.z_forcing;
        out.z_forcing = [b, s](const Vec3& x, RngStream& rng) { return b(s * x, rng) / s; };
    }
    if (pair.hbm) {
        const auto b = pair.hbm;
        out.hbm = [b, s](const Vec3& x, double nu_t, RngStream& rng) {
            HbmEndpoint e = b(s * x, s * s * nu_t, rng);
            if (!e.trapped) e.y = e.y / s;
            return e;
        };
    }
    return out;
}

KernelPair rotate_pair(const KernelPair& pair, const Mat3& A) {
    KernelPair out = pair;
    out.name = pair.name + "@A";
    const Mat3 At = A.transpose();
    if (pair.h) { const auto b = pair.h; out.h = [b, A](const Vec3& x) { return b(A * x); }; }
    if (pair.h_tilde) { const auto b = pair.h_tilde; out.h_tilde = [b, A](const Vec3& x) { return b(A * x); }; }
    if (pair.conv_sq_invsq) { const auto b = pair.conv_sq_invsq; out.conv_sq_invsq = [b, A](const Vec3& x) { return b(A * x); }; }
    if (pair.conv_tilde_inv) { const auto b = pair.conv_tilde_inv; out.conv_tilde_inv = [b, A](const Vec3& x) { return b(A * x); }; }
    if (pair.heat_conv) {
        const auto b = pair.heat_conv;
        out.heat_conv = [b, A](const Vec3& x, double nu_t) { return b(A * x, nu_t); };
    }
    if (pair.z_bilinear) {
        const auto b = pair.z_bilinear;
        out.z_bilinear = [b, A, At](const Vec3& x, RngStream& rng) { return At * b(A * x, rng); };
    }
    if (pair.z_forcing) {
        const auto b = pair.z_forcing;
        out.z_forcing = [b, A, At](const Vec3& x, RngStream& rng) { return At * b(A * x, rng); };
    }
    if (pair.hbm) {
        const auto b = pair.hbm;
        out.hbm = [b, A, At](const Vec3& x, double nu_t, RngStream& rng) {
            HbmEndpoint e = b(A * x, nu_t, rng);
            if (!e.trapped) e.y = At * e.y;
            return e;
        };
    }
    return out;
}

KernelPair min_pair(const KernelPair& a, const KernelPair& b) {
    KernelPair out;
    out.name = "min(" + a.name + "," + b.name + ")";
    const auto ha = a.h, hb = b.h;
    out.h = [ha, hb](const Vec3& x) { return std::min(ha(x), hb(x)); };
    if (a.h_tilde && b.h_tilde) {
        const auto ta = a.h_tilde, tb = b.h_tilde;
        out.h_tilde = [ta, tb](const Vec3& x) { return std::min(ta(x), tb(x)); };
        out.gamma_tilde = std::min(a.gamma_tilde, b.gamma_tilde);
    }
    out.gamma = std::min(a.gamma, b.gamma);
    out.excessive = a.excessive && b.excessive;
    if (a.heat_ratio_M && b.heat_ratio_M)
        out.heat_ratio_M = std::max(*a.heat_ratio_M, *b.heat_ratio_M);
    if (a.h_radial && b.h_radial) {
        const auto ra = a.h_radial, rb = b.h_radial;
        out.h_radial = [ra, rb](double r) { return std::min(ra(r), rb(r)); };
    }
    if (a.ht_radial && b.ht_radial) {
        const auto ra = a.ht_radial, rb = b.ht_radial;
        out.ht_radial = [ra, rb](double r) { return std::min(ra(r), rb(r)); };
    }
    // composites carry no exact samplers; install hooks before cascading
    return out;
}

KernelPair geo_mean_pair(const KernelPair& a, const KernelPair& b, double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("geo_mean_pair: p must lie in (0,1)");
    KernelPair out;
    out.name = "gm(" + a.name + "," + b.name + ")";
    const auto ha = a.h, hb = b.h;
    out.h = [ha, hb, p](const Vec3& x) {
        return std::pow(ha(x), p) * std::pow(hb(x), 1.0 - p);
    };
    if (a.h_tilde && b.h_tilde) {
        const auto ta = a.h_tilde, tb = b.h_tilde;
        out.h_tilde = [ta, tb, p](const Vec3& x) {
            return std::pow(ta(x), p) * std::pow(tb(x), 1.0 - p);
        };
        out.gamma_tilde = std::pow(a.gamma_tilde, p) * std::pow(b.gamma_tilde, 1.0 - p);
    }
    out.gamma = std::pow(a.gamma, p) * std::pow(b.gamma, 1.0 - p);
    out.excessive = a.excessive && b.excessive;
    if (a.heat_ratio_M && b.heat_ratio_M)
        out.heat_ratio_M = std::pow(*a.heat_ratio_M, p) * std::pow(*b.heat_ratio_M, 1.0 - p);
    if (a.h_radial && b.h_radial) {
        const auto ra = a.h_radial, rb = b.h_radial;
        out.h_radial = [ra, rb, p](double r) {
            return std::pow(ra(r), p) * std::pow(rb(r), 1.0 - p);
        };
    }
    return out;
}

KernelPair mixture_pair(const std::vector<KernelPair>& pairs,
                        const std::vector<double>& weights) {
    if (pairs.empty() || pairs.size() != weights.size())
        throw std::domain_error("mixture_pair: empty mixture or size mismatch");
    double wsum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw std::domain_error("mixture_pair: negative weight");
        wsum += w;
    }
    if (std::fabs(wsum - 1.0) > 1e-12)
        throw std::domain_error("mixture_pair: weights must sum to 1");

    KernelPair out;
    out.name = "mix[" + std::to_string(pairs.size()) + "]";
    std::vector<std::function<double(const Vec3&)>> hs, hts;
    bool any_forcing = false, all_radial = true, all_excessive = true;
    for (const auto& p : pairs) {
        hs.push_back(p.h);
        hts.push_back(p.h_tilde);
        if (p.h_tilde) any_forcing = true;
        if (!p.h_radial) all_radial = false;
        all_excessive = all_excessive && p.excessive;
    }
    const std::vector<double> w = weights;
    out.h = [hs, w](const Vec3& x) {
        double v = 0.0;
        for (std::size_t i = 0; i < hs.size(); ++i) v += w[i] * hs[i](x);
        return v;
    };
    if (any_forcing) {
        out.h_tilde = [hts, w](const Vec3& x) {
            double v = 0.0;
            for (std::size_t i = 0; i < hts.size(); ++i)
                if (hts[i]) v += w[i] * hts[i](x);
            return v;
        };
    }
    double g = 0.0, gt = 0.0, mmax = 0.0;
    bool all_m = true;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        g += weights[i] * pairs[i].gamma;
        gt += weights[i] * pairs[i].gamma_tilde;
        if (pairs[i].heat_ratio_M)
            mmax = std::max(mmax, *pairs[i].heat_ratio_M);
        else
            all_m = false;
    }
    out.gamma = g;
    out.gamma_tilde = any_forcing ? gt : 0.0;
    out.excessive = all_excessive;
    if (all_m) out.heat_ratio_M = mmax;
    if (all_radial) {
        std::vector<Fn1> hr;
        for (const auto& p : pairs) hr.push_back(p.h_radial);
        out.h_radial = [hr, w](double r) {
            double v = 0.0;
            for (std::size_t i = 0; i < hr.size(); ++i) v += w[i] * hr[i](r);
            return v;
        };
    }
    return out;
}

KernelPair convolve_pair(const KernelPair& pair, std::function<double(double)> f0_radial,
                         std::string name_suffix) {
    if (!pair.h_radial)
        throw std::domain_error("convolve_pair: base pair must have a radial profile");
    const Fn1 f0 = std::move(f0_radial);
    const double mass = 4.0 * M_PI *
        (integrate_log([f0](double r) { return r * r * f0(r); }, 1e-12, 1.0, 1e-8) +
         integrate_to_inf([f0](double r) { return r * r * f0(r); }, 1.0, 1e-8));
    if (std::fabs(mass - 1.0) > 1e-5)
        throw std::domain_error("convolve_pair: f0 is not a probability density");

    KernelPair out;
    out.name = pair.name + std::move(name_suffix);
    const Fn1 hr = pair.h_radial;
    out.h_radial = [f0, hr](double r) { return radial_conv_at(f0, hr, r); };
    const auto hrad = out.h_radial;
    out.h = [hrad](const Vec3& x) { return hrad(norm(x)); };
    if (pair.ht_radial) {
        const Fn1 htr = pair.ht_radial;
        out.ht_radial = [f0, htr](double r) { return radial_conv_at(f0, htr, r); };
        const auto htrad = out.ht_radial;
        out.h_tilde = [htrad](const Vec3& x) { return htrad(norm(x)); };
    }
    out.gamma = pair.gamma;
    out.gamma_tilde = out.h_tilde ? pair.gamma_tilde : 0.0;
    out.excessive = pair.excessive;
    out.heat_ratio_M = pair.heat_ratio_M;
    return out;
}

Multipliers cascade_multipliers(const KernelPair& pair, double nu, const Vec3& x) {
    if (!(nu > 0.0)) throw std::domain_error("cascade_multipliers: need nu > 0");
    const double hx = pair.h(x);
    const double a = norm(x);
    const double denom = 8.0 * M_PI * nu * hx;
    Multipliers out{0.0, 0.0};
    const double conv = pair.conv_sq_invsq ? pair.conv_sq_invsq(x) : conv_sq_quad(pair, a);
    out.m = conv / denom;
    if (pair.has_forcing()) {
        const double convt =
            pair.conv_tilde_inv ? pair.conv_tilde_inv(x) : conv_tilde_quad(pair, a);
        out.m_tilde = convt / denom;
    }
    if (!std::isfinite(out.m) || (pair.has_forcing() && !std::isfinite(out.m_tilde)))
        throw std::runtime_error("cascade_multipliers: non-finite multiplier at probe");
    return out;
}

AdmissibilityReport check_admissibility(
    const std::function<Vec3(const Vec3&)>& u0,
    const std::function<Vec3(const Vec3&, double)>& g,
    const std::function<Vec3(const Vec3&, double)>& u0_heat_conv,
    const KernelPair& pair, AdmissibilityMode mode,
    const std::vector<Vec3>& probes, const std::vector<double>& times,
    double alpha_eps, double beta_eps) {
    if (probes.empty()) throw std::domain_error("check_admissibility: empty probe set");
    AdmissibilityReport rep;
    rep.alpha_eps = alpha_eps;
    rep.beta_eps = beta_eps;
    std::ostringstream detail;
    detail << "sampled check over " << probes.size() << " probes";
    if (mode == AdmissibilityMode::Sec5) detail << " x " << times.size() << " times";
    detail << "; necessary, not a proof of the sup bound";

    const auto ratio = [](double num, double den) {
        if (!std::isfinite(den)) return 0.0;  // u/h at a pole of h
        if (den <= 0.0) return num > 0.0 ? kInf : 0.0;
        return num / den;
    };

    for (const Vec3& x : probes) {
        const double hx = pair.h(x);
        if (mode == AdmissibilityMode::Sec4) {
            if (u0) rep.max_u0_ratio = std::max(rep.max_u0_ratio, ratio(norm(u0(x)), hx));
        } else {
            if (!u0_heat_conv)
                throw std::domain_error("check_admissibility: heat-convolution evaluator required");
            for (double t : times)
                rep.max_u0_ratio =
                    std::max(rep.max_u0_ratio, ratio(norm(u0_heat_conv(x, t)), hx));
        }
        if (g) {
            const double htx = pair.h_tilde_at(x);
            for (double t : times) {
                const double gn = norm(g(x, t));
                if (gn > 0.0 && htx <= 0.0) {
                    rep.max_g_ratio = kInf;
                    detail << "; forcing nonzero where h_tilde vanishes";
                } else {
                    rep.max_g_ratio = std::max(rep.max_g_ratio, ratio(gn, htx));
                }
            }
        }
    }
    rep.pass = rep.max_u0_ratio <= alpha_eps && rep.max_g_ratio <= beta_eps;
    rep.detail = detail.str();
    return rep;
}

}  // namespace nsc
