#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nsc/rng.hpp"
#include "nsc/vec.hpp"

namespace nsc {

/// Radial dominator of a kernel profile psi:
///   psi(w) <= min(cap, coeff * |w|^-expo)           for all w   (expo < 3)
///   psi(w) <= tail_coeff * |w|^-tail_expo           for |w| >= tail_radius
/// These are the data a rejection envelope is built from.
struct RadialMajorant {
    double cap;          // may be +inf
    double coeff;
    double expo;
    double tail_coeff;
    double tail_expo;
    double tail_radius;
};

/// Result of an h-Brownian endpoint draw: either a point or the trap state.
struct HbmEndpoint {
    Vec3 y;
    bool trapped;
};

using ZSampler = std::function<Vec3(const Vec3& x, RngStream&)>;
using HbmSampler = std::function<HbmEndpoint(const Vec3& x, double nu_t, RngStream&)>;

/// A majorizing kernel pair (h, h~) with constants (gamma, gamma~), the
/// excessivity flag, optional heat-ratio bound M, closed forms for the three
/// defining integrals, and sampler hooks for the cascade's spatial draws.
struct KernelPair {
    std::string name;

    std::function<double(const Vec3&)> h;
    std::function<double(const Vec3&)> h_tilde;  // null means identically 0

    double gamma = 0.0;
    double gamma_tilde = 0.0;
    bool excessive = false;
    std::optional<double> heat_ratio_M;

    // Closed forms; null falls back to quadrature (radial profiles required).
    std::function<double(const Vec3&)> conv_sq_invsq;   // int h^2(x-y)|y|^-2 dy
    std::function<double(const Vec3&)> conv_tilde_inv;  // int h~(x-y)|y|^-1 dy
    std::function<double(const Vec3&, double)> heat_conv;  // int h(y)K(x-y,2*nu_t) dy, nu_t = nu*t

    // Radial profiles (set when h / h~ are radial; enables quadrature fallback).
    std::function<double(double)> h_radial;
    std::function<double(double)> ht_radial;

    // Sampler hooks.  Null hooks mean the composite has no exact sampler;
    // the cascade refuses to run with such a pair.
    ZSampler z_bilinear;   // Z ~ |z|^-2 h^2(x-z) / normalizer
    ZSampler z_forcing;    // Z ~ |z|^-1 h~(x-z) / normalizer
    HbmSampler hbm;        // endpoint of h-Brownian motion (excessive pairs)

    double h_tilde_at(const Vec3& x) const { return h_tilde ? h_tilde(x) : 0.0; }
    bool has_forcing() const { return static_cast<bool>(h_tilde); }
};

/// Radial forcing profile h~0 with its rejection-envelope dominator, an
/// optional closed form a -> int h~0(|x-y|)|y|^-1 dy at a = |x|, and the
/// second moment int r^2 h~0 dr (computed by quadrature when negative).
struct ForcingProfile {
    std::function<double(double)> f;
    RadialMajorant major;
    std::function<double(double)> conv_inv;
    double r2_integral = -1.0;
};

/// h_tilde0(r) = r^-2 (1+r)^-2, singular at 0; second moment 1.
ForcingProfile default_forcing_profile();
/// h_tilde0(r) = (1+r^2)^-3, bounded; second moment pi/16.  Closed form:
/// int h~0(|x-y|) |y|^-1 dy = (pi/2) (1/(1+a^2) + arctan(a)/a) at a = |x|.
ForcingProfile smooth_forcing_profile();

/// Example 1 kernel: h(x) = c_h |x|^-1 with radial forcing majorant
/// h~(x) = c_ht * h_tilde0(|x|).  Default profile h_tilde0(r) = r^-2 (1+r)^-2.
/// Constants: gamma = c_h pi^3, gamma~ = (c_ht/c_h) * 4 pi * int r^2 h_tilde0.
KernelPair make_h0_pair(double c_h = 1.0, double c_ht = 1.0);
KernelPair make_h0_pair(const ForcingProfile& profile, double c_h = 1.0,
                        double c_ht = 1.0);

/// Example 4 kernel: H(x) = (1+|x|^2)^-1, (gamma, gamma~) = (pi^2, 0),
/// not excessive, heat-ratio bound M = 1 + 3 e^(-2/3).
KernelPair make_H_pair();

/// Example 5 kernel: H_p(x) = (1+|x|)^-p for p in (1,2], gamma bound
/// pi^(4-p) (1+1/sqrt(2))^(p-1), M = ((1+3e^(-2/3))(1+1/sqrt(2)))^(p/2).
KernelPair make_Hp_pair(double p);

/// Constant rescaling (c1 h, c2 h~); maps constants to (c1 gamma, (c2/c1) gamma~).
KernelPair rescale_pair(const KernelPair& pair, double c1, double c2);

/// (gamma^-1 h, (gamma gamma~)^-1 h~): the standard pair with constants (1, 1)
/// (or (1, 0) when gamma~ = 0).
KernelPair standardized(const KernelPair& pair);

// Closure operations; constants propagate per the covering propositions.
KernelPair translate_pair(const KernelPair& pair, const Vec3& mu);
KernelPair scale_pair(const KernelPair& pair, double sigma);
KernelPair rotate_pair(const KernelPair& pair, const Mat3& A);  // A^t A = I
KernelPair min_pair(const KernelPair& a, const KernelPair& b);
KernelPair geo_mean_pair(const KernelPair& a, const KernelPair& b, double p);
KernelPair mixture_pair(const std::vector<KernelPair>& pairs,
                        const std::vector<double>& weights);
/// Convolution with a radial probability density f0 (as in Example 3).
/// Evaluators are numeric unless closed forms are supplied afterwards.
KernelPair convolve_pair(const KernelPair& pair,
                         std::function<double(double)> f0_radial,
                         std::string name_suffix = "*F");

/// Cascade multipliers m(x), m~(x); closed forms when installed, else radial
/// quadrature.
struct Multipliers {
    double m;
    double m_tilde;
};
Multipliers cascade_multipliers(const KernelPair& pair, double nu, const Vec3& x);

/// Sampled admissibility check (a necessary check on a finite probe set, not
/// a proof of the supremum bound).
struct AdmissibilityReport {
    double max_u0_ratio = 0.0;     // |u0|/h or |u0*K|/h depending on mode
    double max_g_ratio = 0.0;      // |g|/h~
    double alpha_eps = 0.0;
    double beta_eps = 0.0;
    bool pass = false;
    std::string detail;
};

enum class AdmissibilityMode { Sec4, Sec5 };

AdmissibilityReport check_admissibility(
    const std::function<Vec3(const Vec3&)>& u0,
    const std::function<Vec3(const Vec3&, double)>& g,
    const std::function<Vec3(const Vec3&, double)>& u0_heat_conv,  // null in Sec4 mode
    const KernelPair& pair, AdmissibilityMode mode,
    const std::vector<Vec3>& probes, const std::vector<double>& times,
    double alpha_eps, double beta_eps);

}  // namespace nsc
